"""Solve f = X_v g + c over linear flows and actions on T^N mode by mode.

For a nonzero mode m the primitive has coefficient a_m / (2 pi i <m,v>). Modes where the
divisor vanishes carry the obstructions; tiny divisors amplify the primitive and are caught
by the decay heuristic.
"""
import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from leafwise.cohomology.leafwise_forms import LeafwiseOneForm, check_closed
from leafwise.config.config import get_setting
from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.diophantine.small_divisors import divisor_values
from leafwise.errors import DimensionMismatchError, InconsistentFormError, NotClosedError
from leafwise.fourier.fourier_series import TWO_PI_I, FourierSeries, decay_diagnostic


class SolveStatus(enum.Enum):
    SOLVED = "solved"
    OBSTRUCTED = "obstructed"
    DIVERGENT = "divergent"


@dataclass
class SolveReport:
    g: FourierSeries
    c: list[float]
    residual_sup: float
    obstruction_modes: list[tuple[int, ...]]
    status: SolveStatus
    amplification: float = 0.0
    consistency_residual: float = 0.0
    residual_table: list = field(default_factory=list)

    def to_json(self) -> dict:
        from leafwise.fourier.fourier_io import series_to_json
        return {
            "g": series_to_json(self.g),
            "c": list(self.c),
            "residual_sup": self.residual_sup,
            "obstruction_modes": [list(m) for m in self.obstruction_modes],
            "status": self.status.value,
            "amplification": self.amplification,
            "consistency_residual": self.consistency_residual,
            "residual_table": [{"m": list(m), "abs_f": af, "divisor": d, "abs_g": ag}
                               for m, af, d, ag in self.residual_table],
        }


def ergodic_average(f: FourierSeries) -> float:
    """Time average (1/T) int_0^T f(rho^t x) dt of a uniquely ergodic linear flow: the mean a_0."""
    return f.mean().real


def _status(obstructions, amplification, residual, tol, blowup_factor) -> SolveStatus:
    if obstructions:
        return SolveStatus.OBSTRUCTED
    if amplification > blowup_factor or residual > tol:
        return SolveStatus.DIVERGENT
    return SolveStatus.SOLVED


def _amplification(g: FourierSeries, sources: Sequence[FourierSeries], k: int) -> float:
    source = max((decay_diagnostic(s, k) for s in sources), default=0.0)
    target = decay_diagnostic(g, k)
    if target == 0:
        return 0.0
    if source == 0:
        return float('inf')
    return target / source


def solve_flow(f: FourierSeries, v: Sequence[float], tol: float | None = None,
               blowup_factor: float | None = None, decay_order: int | None = None) -> SolveReport:
    """Solve f = X_v g + c with c = a_0 and b_m = a_m / (2 pi i <m,v>)."""
    if not f.real:
        raise ValueError("The cohomological equation is solved for real-valued f")
    V = ActionMatrix.flow(v)
    if V.N != f.dims:
        raise DimensionMismatchError(f"Vector field on T^{V.N}, function on T^{f.dims}")
    tol = get_setting('cohomeq.tol') if tol is None else tol
    blowup_factor = get_setting('cohomeq.blowup_factor') if blowup_factor is None else blowup_factor
    decay_order = get_setting('cohomeq.decay_order') if decay_order is None else decay_order

    c = ergodic_average(f)
    nonzero = np.any(f.modes != 0, axis=1)
    modes, values = f.modes[nonzero], f.values[nonzero]
    pairing = modes.astype(float) @ V.rows[0]
    _, resonant = divisor_values(V, modes)

    obstructed = resonant & (np.abs(values) > tol)
    solvable = ~resonant
    g_values = np.zeros(len(values), dtype=np.complex128)
    g_values[solvable] = values[solvable] / (TWO_PI_I * pairing[solvable])
    g = FourierSeries(f.dims, modes, g_values, real=True, radius=f.radius)

    residual_coeffs = np.where(solvable, values - TWO_PI_I * pairing * g_values, values)
    residual_sup = float(np.abs(residual_coeffs).sum())
    obstructions = [tuple(int(x) for x in m) for m in modes[obstructed]]
    amplification = _amplification(g, [f], decay_order)
    table = [(tuple(int(x) for x in m), float(abs(a)), float(d), float(abs(b)))
             for m, a, d, b in zip(modes, values, pairing, g_values)]
    return SolveReport(g=g, c=[c], residual_sup=residual_sup, obstruction_modes=obstructions,
                       status=_status(obstructions, amplification, residual_sup, tol, blowup_factor),
                       amplification=amplification, residual_table=table)


def solve_action(omega: LeafwiseOneForm, tol: float | None = None,
                 blowup_factor: float | None = None, decay_order: int | None = None) -> SolveReport:
    """Primitivise a closed leafwise one-form: omega = d_F g + sum c_i eta_i.

    Each mode is divided by the component with the largest divisor |<m,v_i>|; the other
    components are then checked against the primitive.
    """
    tol = get_setting('cohomeq.tol') if tol is None else tol
    blowup_factor = get_setting('cohomeq.blowup_factor') if blowup_factor is None else blowup_factor
    decay_order = get_setting('cohomeq.decay_order') if decay_order is None else decay_order
    closed, closure_residual = check_closed(omega, tol)
    if not closed:
        raise NotClosedError(f"Form is not closed: residual {closure_residual:.3e} exceeds {tol:.1e}")

    V = omega.V
    N = V.N
    c = [z.real for z in omega.means()]
    all_modes = np.vstack([comp.modes for comp in omega.components])
    if len(all_modes):
        all_modes = np.unique(all_modes, axis=0)
    all_modes = all_modes[np.any(all_modes != 0, axis=1)] if len(all_modes) else np.zeros((0, N), np.int64)
    table = np.array([[comp.coeff(m) for comp in omega.components] for m in all_modes],
                     dtype=np.complex128).reshape(len(all_modes), V.p)
    pairings = all_modes.astype(float) @ V.rows.T
    _, resonant = divisor_values(V, all_modes)

    choice = np.argmax(np.abs(pairings), axis=1) if len(all_modes) else np.zeros(0, int)
    rows = np.arange(len(all_modes))
    chosen_divisor = pairings[rows, choice]
    chosen_value = table[rows, choice]
    g_values = np.zeros(len(all_modes), dtype=np.complex128)
    solvable = ~resonant
    g_values[solvable] = chosen_value[solvable] / (TWO_PI_I * chosen_divisor[solvable])

    reconstructed = TWO_PI_I * pairings * g_values[:, None]
    mismatch = np.abs(table - reconstructed)
    mismatch[resonant] = 0.0
    consistency = float(mismatch.max(initial=0.0))
    scale = max(1.0, float(np.abs(table).max(initial=0.0)))
    if consistency > tol * scale:
        worst = tuple(int(x) for x in all_modes[np.unravel_index(np.argmax(mismatch), mismatch.shape)[0]])
        raise InconsistentFormError(f"Components disagree by {consistency:.3e} at mode {worst}")

    obstructed = resonant & np.any(np.abs(table) > tol, axis=1)
    obstructions = [tuple(int(x) for x in m) for m in all_modes[obstructed]]
    residual_sup = float(np.where(resonant[:, None], np.abs(table), mismatch).sum(axis=0).max(initial=0.0))
    g = FourierSeries(N, all_modes, g_values, real=omega.real,
                      radius=max(comp.radius for comp in omega.components))
    amplification = _amplification(g, omega.components, decay_order)
    report_table = [(tuple(int(x) for x in m), float(np.abs(row).max()), float(d), float(abs(b)))
                    for m, row, d, b in zip(all_modes, table, chosen_divisor, g_values)]
    return SolveReport(g=g, c=c, residual_sup=residual_sup, obstruction_modes=obstructions,
                       status=_status(obstructions, amplification, residual_sup, tol, blowup_factor),
                       amplification=amplification, consistency_residual=consistency,
                       residual_table=report_table)
