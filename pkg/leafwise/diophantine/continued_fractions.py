'''Continued fractions, best rational approximations and synthetic Liouville frequencies'''
import math
import sys
from fractions import Fraction
from typing import Iterator, Sequence

from leafwise.diophantine.action_matrix import as_exact_rational
from leafwise.errors import RepresentabilityError

Real = float | int | Fraction


def _exact(alpha: Real) -> Fraction:
    '''Exact value behind alpha: the small-denominator rational it rounds, else its binary value'''
    exact = as_exact_rational(alpha)
    return exact if exact is not None else Fraction(float(alpha))


def partial_quotients(alpha: Real, n: int) -> list[int]:
    '''Euclidean algorithm on alpha; stops early when the expansion terminates'''
    if n < 1:
        raise ValueError(f"Need at least one term, got {n}")
    x = _exact(alpha)
    coeffs = []
    while len(coeffs) < n:
        a = math.floor(x)
        coeffs.append(a)
        rem = x - a
        if rem == 0:
            break
        x = 1 / rem
    return coeffs


def continuants(coeffs: Sequence[int]) -> Iterator[tuple[int, int]]:
    '''Fold partial quotients into successive convergents (p_k, q_k)'''
    p_prev, p = 1, coeffs[0]
    q_prev, q = 0, 1
    yield p, q
    for a in coeffs[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def continued_fraction(alpha: Real, n: int) -> list[Fraction]:
    '''Convergents p_k/q_k of alpha from its first n partial quotients.

    A zero integer part contributes no convergent, so 1/3 yields [1/3] and phi - 1 yields
    the Fibonacci ratios 1/1, 1/2, 2/3, ...
    '''
    coeffs = partial_quotients(alpha, n + (1 if math.floor(_exact(alpha)) == 0 else 0))
    convergents = [Fraction(p, q) for p, q in continuants(coeffs)]
    if coeffs[0] == 0 and len(convergents) > 1:
        convergents = convergents[1:]
    return convergents[:n]


def best_approximations(alpha: Real, max_denominator: int) -> list[tuple[int, int]]:
    '''Convergents (p, q) with q <= max_denominator'''
    out = []
    for p, q in continuants(partial_quotients(alpha, 64)):
        if q > max_denominator:
            break
        out.append((p, q))
    return out


def partial_quotient_bound(alpha: Real, n: int) -> int:
    '''Largest partial quotient among a_1..a_n; bounded quotients certify badly approximable data'''
    coeffs = partial_quotients(alpha, n + 1)
    return max(coeffs[1:], default=0)


def factorial_schedule(n: int) -> list[int]:
    return [math.factorial(k) for k in range(1, n + 1)]


def liouville_vector(schedule: Sequence[int], base: int = 10, exact: bool = False) -> Real:
    '''l = sum of base^(-s) over the schedule.

    With exact=False the value is a double and every term must survive the addition; with
    exact=True the Fraction is returned and any schedule is accepted.
    '''
    schedule = [int(s) for s in schedule]
    if any(s <= 0 for s in schedule):
        raise ValueError("Schedule exponents must be positive")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"Schedule {schedule} is not increasing")
    value = sum((Fraction(1, base ** s) for s in schedule), Fraction(0))
    if exact:
        return value
    total = 0.0
    for s in schedule:
        if s * math.log10(base) > -sys.float_info.min_10_exp + sys.float_info.dig:
            raise RepresentabilityError(f"Term {base}^-{s} underflows double precision")
        term = float(Fraction(1, base ** s))
        if total and term < math.ulp(total) / 2:
            raise RepresentabilityError(f"Term {base}^-{s} is below the double resolution of the partial sum {total!r}")
        total += term
    return float(value)
