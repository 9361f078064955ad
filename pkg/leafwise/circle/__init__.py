from leafwise.circle.circle_map import (CircleMap, CommutingFamily, arnold_map, commuting_check, compose,
                                        conjugate_by, conjugate_forward, inverse_on_grid, iterate_lift, rigid_rotation)
from leafwise.circle.conjugacy import (ConjugacyReport, ConjugacyStatus, KamReport, KamStep, kam_iterate,
                                       linearized_conjugacy, rotation_residual)
from leafwise.circle.rotation import (MoserReport, RotationEstimate, check_moser_condition, chordal_distance,
                                      family_rotation_numbers, rotation_number)
