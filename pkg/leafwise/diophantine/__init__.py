from leafwise.diophantine.action_matrix import ActionMatrix, as_exact_rational
from leafwise.diophantine.continued_fractions import (best_approximations, continued_fraction,
                                                      factorial_schedule, liouville_vector,
                                                      partial_quotient_bound, partial_quotients)
from leafwise.diophantine.small_divisors import (DiophantineReport, DivisorTable, divisor_values,
                                                 estimate_type, resonance_lattice, small_divisors)
