import json

from leafwise.config.config import get_setting
from leafwise.fourier.fourier_series import FourierSeries


def series_to_json(s: FourierSeries) -> dict:
    """{"dims": N, "real": bool, "coeffs": [{"m": [...], "re": x, "im": y}, ...]}"""
    zero_tol = get_setting('fourier.zero_tol')
    coeffs = [{"m": list(m), "re": a.real, "im": a.imag}
              for m, a in s.items() if abs(a) >= zero_tol]
    return {"dims": s.dims, "real": s.real, "coeffs": coeffs}


def series_from_json(data: dict) -> FourierSeries:
    dims = int(data["dims"])
    coeffs = {}
    for entry in data.get("coeffs", []):
        m = tuple(int(x) for x in entry["m"])
        coeffs[m] = coeffs.get(m, 0j) + complex(entry.get("re", 0.0), entry.get("im", 0.0))
    real = bool(data.get("real", False))
    return FourierSeries.from_dict(dims, coeffs, real=real)


def load_series(file_path: str) -> FourierSeries:
    with open(file_path, 'r', encoding='utf-8') as f:
        return series_from_json(json.load(f))


def save_series(file_path: str, s: FourierSeries):
    with open(file_path, 'w', encoding='utf-8') as f:
        json.dump(series_to_json(s), f, indent=2, sort_keys=True)
