from leafwise.cohomology.cohomological_equation import (SolveReport, SolveStatus, ergodic_average, solve_action,
                                                        solve_flow)
from leafwise.cohomology.leafwise_forms import (LeafwiseOneForm, check_closed, exterior_derivative,
                                                leafwise_differential)
from leafwise.cohomology.obstructions import (NotEquivalent, ObstructionSpace, RigidityReport,
                                              infinitesimal_rigidity_report, obstruction_space,
                                              parameter_equivalence)
