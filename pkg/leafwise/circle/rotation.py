"""Rotation numbers and Moser's simultaneous Diophantine condition for commuting families."""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import proglog

from leafwise.config.config import get_setting
from leafwise.circle.circle_map import CircleMap, CommutingFamily, iterate_lift
from leafwise.diophantine.action_matrix import as_exact_rational
from leafwise.diophantine.continued_fractions import continued_fraction


@dataclass
class RotationEstimate:
    """tau = f^n(0)/n mod 1; the true rotation number lies within error_bound of lift_average."""
    tau: float
    lift_average: float
    error_bound: float
    iterations: int
    refined: Fraction | None = None

    @property
    def enclosure(self) -> tuple[float, float]:
        return self.lift_average - self.error_bound, self.lift_average + self.error_bound

    def contains(self, value: float, slack: float = 0.0) -> bool:
        """Whether value (mod 1) lies in the enclosure."""
        lo, hi = self.enclosure
        shift = math.floor(lo)
        for candidate in (value % 1 + shift, value % 1 + shift + 1):
            if lo - slack <= candidate <= hi + slack:
                return True
        return False

    def to_json(self) -> dict:
        lo, hi = self.enclosure
        return {"tau": self.tau, "lift_average": self.lift_average, "error_bound": self.error_bound,
                "enclosure": [lo, hi], "iterations": self.iterations,
                "refined": str(self.refined) if self.refined is not None else None,
                "refined_is_heuristic": self.refined is not None}


def _refine(estimate: float, error_bound: float) -> Fraction | None:
    """Smallest-denominator convergent of the estimate inside the enclosure."""
    for convergent in continued_fraction(estimate, 40):
        if abs(float(convergent) - estimate) <= error_bound:
            return convergent
    return None


def rotation_number(f: CircleMap, n: int | None = None, refine: bool = False) -> RotationEstimate:
    """f^n(0)/n mod 1 with the enclosure |f^n(0)/n - tau| < 1/n of monotone lifts."""
    n = get_setting('circle.rotation_iters') if n is None else n
    if n < 1:
        raise ValueError(f"Need at least one iteration, got {n}")
    if f.is_rigid:
        average = f.drift
    else:
        average = iterate_lift(f, 0.0, n) / n
    bound = 1.0 / n
    refined = _refine(average, bound) if refine else None
    return RotationEstimate(tau=average % 1.0, lift_average=average, error_bound=bound,
                            iterations=n, refined=refined)


def family_rotation_numbers(F: CommutingFamily, n: int | None = None, logger=None) -> list[RotationEstimate]:
    logger = proglog.default_bar_logger(logger)
    return [rotation_number(f, n) for f in logger.iter_bar(map=F.maps)]


def chordal_distance(m: np.ndarray, tau) -> np.ndarray:
    """|exp(2 pi i m tau) - 1| = 2 |sin(pi {m tau})|, exact zeros for rational tau."""
    m = np.asarray(m, dtype=np.int64)
    exact = as_exact_rational(tau)
    if exact is not None:
        frac = (m.astype(object) * exact.numerator % exact.denominator).astype(float) / exact.denominator
    else:
        frac = np.mod(m * float(tau), 1.0)
    return 2.0 * np.abs(np.sin(np.pi * frac))


@dataclass
class MoserReport:
    M: int
    exponent: float
    minimum: float
    argmin: int
    passed: bool
    resonances: list[int] = field(default_factory=list)
    shells: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"M": self.M, "exponent": self.exponent, "minimum": self.minimum, "argmin": self.argmin,
                "passed": self.passed, "resonances": self.resonances,
                "shells": [{"shell": j, "m": m, "D": d, "D_times_m_exp": s} for j, m, d, s in self.shells]}


def check_moser_condition(taus: Sequence[float], M: int, exponent: float, tol: float | None = None) -> MoserReport:
    """min over 0 < m <= M of max_i |exp(2 pi i m tau_i) - 1| * m^exponent.

    D(-m) = D(m), so only positive m are scanned.
    """
    if M < 2:
        raise ValueError(f"Scan radius must be >= 2, got {M}")
    if not len(taus):
        raise ValueError("Need at least one rotation number")
    tol = get_setting('circle.moser_tol') if tol is None else tol
    m = np.arange(1, M + 1, dtype=np.int64)
    D = np.max(np.stack([chordal_distance(m, t) for t in taus], axis=0), axis=0)
    scores = D * m.astype(float) ** exponent
    k = int(np.argmin(scores))
    shells = []
    j = 0
    while 2 ** j <= M:
        sel = np.flatnonzero((m >= 2 ** j) & (m < 2 ** (j + 1)))
        best = sel[np.argmin(scores[sel])]
        shells.append((j, int(m[best]), float(D[best]), float(scores[best])))
        j += 1
    minimum = float(scores[k])
    return MoserReport(M=M, exponent=float(exponent), minimum=minimum, argmin=int(m[k]),
                       passed=minimum > tol, resonances=[int(x) for x in m[D == 0]], shells=shells)
