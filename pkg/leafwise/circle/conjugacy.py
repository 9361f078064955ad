"""Linearised conjugacy of commuting circle maps to rotations and a diagnostic Newton-KAM loop.

With f_i(x) = x + rho_i + u_i(x) and h = id + eta, f_i o h = h o r_{alpha_i} linearises to

    eta(x + alpha_i) - eta(x) = u_i(x) + rho_i - alpha_i,

which is diagonal in Fourier modes: eta_m (exp(2 pi i m alpha_i) - 1) = u_{i,m} for m != 0.
"""
import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import proglog

from leafwise.circle.circle_map import CircleMap, CommutingFamily, _grid_for, conjugate_by
from leafwise.circle.rotation import chordal_distance, rotation_number
from leafwise.config.config import get_setting
from leafwise.errors import OrientationError
from leafwise.fourier.fourier_series import FourierSeries


CONVERGED_RESIDUAL = 1e-13


class ConjugacyStatus(enum.Enum):
    SOLVED = "solved"
    OBSTRUCTED = "obstructed"


@dataclass
class ConjugacyReport:
    """h has mean zero: h o r_c conjugates as well, the mean fixes c = 0."""
    h: FourierSeries
    alphas: list[float]
    consistency_residual: float
    divisors: list = field(default_factory=list)
    obstruction_modes: list[int] = field(default_factory=list)
    status: ConjugacyStatus = ConjugacyStatus.SOLVED

    def to_json(self) -> dict:
        from leafwise.fourier.fourier_io import series_to_json
        return {"h": series_to_json(self.h), "alphas": self.alphas,
                "consistency_residual": self.consistency_residual,
                "divisors": [{"m": m, "index": i, "divisor": d} for m, i, d in self.divisors],
                "obstruction_modes": self.obstruction_modes, "status": self.status.value,
                "normalisation": "mean zero"}


def _divisor(m: int, alpha: float) -> complex:
    """exp(2 pi i m alpha) - 1, exactly zero when m alpha is an integer."""
    chord = float(chordal_distance(np.array([m]), alpha)[0])
    if chord == 0.0:
        return 0j
    return complex(np.exp(2j * np.pi * m * alpha) - 1)


def check_targets(F: CommutingFamily, alphas: Sequence[float], n: int | None = None, slack: float = 1e-12):
    for i, (f, alpha) in enumerate(zip(F.maps, alphas)):
        estimate = rotation_number(f, n)
        if not estimate.contains(alpha, slack):
            lo, hi = estimate.enclosure
            raise ValueError(f"Target {alpha!r} for map {i} lies outside its rotation-number enclosure [{lo!r}, {hi!r}]")


def linearized_conjugacy(F: CommutingFamily, alphas: Sequence[float], tol: float | None = None,
                         check_alpha: bool = True) -> ConjugacyReport:
    """Solve the linearised equation mode by mode, dividing by the index with the largest divisor."""
    if len(alphas) != F.p:
        raise ValueError(f"{len(alphas)} targets for a family of {F.p} maps")
    tol = get_setting('cohomeq.tol') if tol is None else tol
    alphas = [float(a) for a in alphas]
    if check_alpha:
        check_targets(F, alphas)
    rel_tol = get_setting('diophantine.resonance_rel_tol')
    modes = sorted({m[0] for f in F.maps for m, _ in f.u.items() if m[0] != 0})
    coeffs, table, obstructions = {}, [], []
    residual = 0.0
    for m in modes:
        divisors = [_divisor(m, a) for a in alphas]
        i = int(np.argmax([abs(d) for d in divisors]))
        numerators = [f.u.coeff((m,)) for f in F.maps]
        table.append((m, i, abs(divisors[i])))
        if abs(divisors[i]) <= rel_tol * abs(m):
            if any(abs(a) > tol for a in numerators):
                obstructions.append(m)
            continue
        eta = numerators[i] / divisors[i]
        coeffs[(m,)] = eta
        residual = max(residual, max(abs(a - eta * d) for a, d in zip(numerators, divisors)))
    radius = max((f.u.radius for f in F.maps), default=0)
    h = FourierSeries.from_dict(1, coeffs, real=True, radius=radius) if coeffs else FourierSeries.zero(1)
    status = ConjugacyStatus.OBSTRUCTED if obstructions else ConjugacyStatus.SOLVED
    return ConjugacyReport(h=h, alphas=alphas, consistency_residual=float(residual), divisors=table,
                           obstruction_modes=obstructions, status=status)


def rotation_residual(f: CircleMap, alpha: float, truncation: int | None = None) -> float:
    """sup |f(x) - x - alpha| on the resampling grid."""
    if f.is_rigid:
        return abs(f.drift - alpha)
    truncation = get_setting('circle.kam_truncation') if truncation is None else truncation
    xs = _grid_for(truncation)
    return float(np.max(np.abs(f.lift(xs) - xs - alpha), initial=0.0))


@dataclass
class KamStep:
    step: int
    residuals: list[float]
    truncation_loss: float = 0.0
    correction_norm: float = 0.0

    @property
    def residual(self) -> float:
        return max(self.residuals, default=0.0)


@dataclass
class KamReport:
    steps: list[KamStep]
    family: CommutingFamily
    status: str
    diagnostic: str = ""

    def residual_table(self) -> list[dict]:
        return [{"step": s.step, "residual": s.residual, "truncation_loss": s.truncation_loss,
                 "correction_norm": s.correction_norm} for s in self.steps]

    def to_json(self) -> dict:
        return {"status": self.status, "diagnostic": self.diagnostic, "steps": self.residual_table(),
                "family": self.family.to_json()}


def kam_iterate(F: CommutingFamily, steps: int, alphas: Sequence[float] | None = None,
                truncation: int | None = None, tol: float | None = None, logger=None) -> KamReport:
    """Repeatedly solve the linearised equation and conjugate the family by h = id + eta.

    Diagnostic only: there is no smoothing step and no convergence claim. Stops early on an
    obstruction, on loss of orientation, or when the residual grows.
    """
    if steps < 1:
        raise ValueError(f"Need at least one step, got {steps}")
    logger = proglog.default_bar_logger(logger)
    truncation = get_setting('circle.kam_truncation') if truncation is None else truncation
    if alphas is None:
        alphas = [rotation_number(f).lift_average for f in F.maps]
    else:
        check_targets(F, alphas)
    alphas = [float(a) for a in alphas]

    family = F
    history = [KamStep(0, [rotation_residual(f, a, truncation) for f, a in zip(family.maps, alphas)])]
    if history[0].residual == 0.0:
        return KamReport(history, family, "converged", "family is already rigid")
    status, diagnostic = "completed", ""
    for step in logger.iter_bar(step=range(1, steps + 1)):
        linear = linearized_conjugacy(family, alphas, tol, check_alpha=False)
        if linear.status is ConjugacyStatus.OBSTRUCTED:
            status, diagnostic = "obstructed", f"resonant modes {linear.obstruction_modes} at step {step}"
            break
        try:
            h = CircleMap(0.0, linear.h)
            maps = [conjugate_by(f, h, truncation) for f in family.maps]
        except OrientationError as exc:
            status, diagnostic = "orientation_lost", f"step {step}: {exc}"
            break
        residuals = [rotation_residual(f, a, truncation) for f, a in zip(maps, alphas)]
        loss = float(np.sqrt(sum(f.u.truncation_loss ** 2 for f in maps)))
        record = KamStep(step, residuals, truncation_loss=loss, correction_norm=linear.h.max_abs())
        if record.residual > history[-1].residual:
            history.append(record)
            status, diagnostic = "stalled", f"residual increased at step {step}"
            break
        history.append(record)
        family = CommutingFamily(maps, commutation_tol=max(F.commutation_tol, 10 * record.residual))
        logger(message=f"kam step {step}: residual {record.residual:.3e}")
        if record.residual <= CONVERGED_RESIDUAL:
            status = "converged"
            break
    return KamReport(history, family, status, diagnostic)
