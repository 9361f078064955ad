from leafwise.lie.algebra_forms import (AlgebraValuedForm, GaugeResult, canonical_form, gauge_transform,
                                        matrix_product, maurer_cartan_residual, maurer_cartan_terms, pushforward,
                                        wedge)
from leafwise.lie.chevalley_eilenberg import (CohomologyReport, ce_differential, cohomology_dims,
                                              first_cohomology_oracle, square_residual, wedge_basis)
from leafwise.lie.lie_algebra import (STANDARD_ALGEBRAS, LieAlgebra, ValidationReport, abelian, ga, heisenberg,
                                      n_upper, random_nilpotent, require_valid, sl2, validate)
