from leafwise.fourier.fourier_series import (FourierSeries, FrequencyVector, GridSamples,
                                             decay_diagnostic, directional_derivative,
                                             evaluate, frequency, from_samples, multiply,
                                             random_series, sample, sup_norm_estimate)
from leafwise.fourier.fourier_io import series_from_json, series_to_json
