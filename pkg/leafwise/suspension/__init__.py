from leafwise.suspension.mayer_vietoris import (DegreeReport, SuspensionData, linear_foliation_dims, mv_dimension,
                                                mv_report, suspension_dims)
from leafwise.suspension.ranks import NumericRank, exact_matrix, rank_exact, rank_numeric
from leafwise.suspension.toral import (HyperbolicMatrix, ToralReport, expanding_eigenvalue, higher_toral_data,
                                       stable_vector, toral_pipeline)
