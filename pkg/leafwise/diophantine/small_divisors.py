"""Small divisors delta(m) = ||(<m,v_1>, ..., <m,v_p>)|| of a linear action on T^N."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import proglog

from leafwise.config.config import LEAFWISE_THREADS, get_setting
from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.errors import BudgetExceededError

INT64_SAFE = 2 ** 62


@dataclass
class DivisorTable:
    """Enumerated modes with their small divisors; iterates as (m, delta) pairs."""
    modes: np.ndarray
    deltas: np.ndarray
    exact_zero: np.ndarray

    def __iter__(self):
        for m, d in zip(self.modes, self.deltas):
            yield tuple(int(x) for x in m), float(d)

    def __len__(self):
        return len(self.deltas)

    def resonant_modes(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in m) for m in self.modes[self.exact_zero]]


@dataclass
class DiophantineReport:
    M: int
    tau_estimate: float
    c_estimate: float
    offenders: list
    resonances: list
    numerical_resonances: list = field(default_factory=list)
    shell_minimizers: list = field(default_factory=list)
    tau_by_radius: list = field(default_factory=list)
    dirichlet_exponent: float = 0.0
    liouville_like: bool = False
    certified_rational: bool = False

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "tau_estimate": self.tau_estimate,
            "c_estimate": self.c_estimate,
            "offenders": [{"m": list(m), "delta": d, "delta_times_norm_tau": s} for m, d, s in self.offenders],
            "resonances": [list(m) for m in self.resonances],
            "numerical_resonances": [list(m) for m in self.numerical_resonances],
            "shell_minimizers": [{"shell": j, "m": list(m), "delta": d} for j, m, d in self.shell_minimizers],
            "tau_by_radius": [{"radius": r, "tau": t} for r, t in self.tau_by_radius],
            "dirichlet_exponent": self.dirichlet_exponent,
            "liouville_like": self.liouville_like,
            "certified_rational": self.certified_rational,
        }


def box_modes(N: int, M: int) -> np.ndarray:
    """All m in Z^N with 0 < ||m||_inf <= M, lexicographic."""
    axis = np.arange(-M, M + 1)
    mesh = np.meshgrid(*([axis] * N), indexing='ij')
    modes = np.stack([a.reshape(-1) for a in mesh], axis=1)
    return modes[np.any(modes != 0, axis=1)]


def _check_budget(count: int, budget: int | None):
    if budget is None:
        budget = get_setting('diophantine.mode_budget')
    if count > budget:
        raise BudgetExceededError(f"Enumeration of {count} modes exceeds the mode budget of {int(budget)}")


def divisor_values(V: ActionMatrix, modes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(delta, exact_zero) for integer modes of shape (K, N).

    exact_zero is certified with integer arithmetic when V is rational and is the
    numerical-resonance flag (delta < rel_tol ||m|| ||V||) otherwise.
    """
    modes = np.asarray(modes, dtype=np.int64).reshape(-1, V.N)
    integer_form = V.integer_form()
    if integer_form is not None:
        Q, L = integer_form
        bound = int(np.abs(modes).max(initial=0)) * V.N * max((abs(int(x)) for x in Q.flat), default=0)
        if bound < INT64_SAFE:
            pairings = modes @ Q.astype(np.int64).T
        else:
            pairings = modes.astype(object) @ Q.T
        exact_zero = np.all(pairings == 0, axis=1)
        deltas = np.sqrt(np.sum((pairings.astype(float) / L) ** 2, axis=1))
        return deltas, exact_zero
    deltas = np.linalg.norm(modes.astype(float) @ V.rows.T, axis=1)
    return deltas, numerically_resonant(V, modes, deltas)


def numerically_resonant(V: ActionMatrix, modes: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    rel_tol = get_setting('diophantine.resonance_rel_tol')
    norms = np.linalg.norm(np.asarray(modes, dtype=float), axis=1)
    return deltas < rel_tol * norms * V.norm()


def small_divisors(V: ActionMatrix, M: int, budget: int | None = None) -> DivisorTable:
    """Every m with 0 < ||m||_inf <= M together with delta(m); no sampling."""
    if M < 1:
        raise ValueError(f"Scan radius must be >= 1, got {M}")
    _check_budget((2 * M + 1) ** V.N - 1, budget)
    modes = box_modes(V.N, M)
    deltas, exact_zero = divisor_values(V, modes)
    return DivisorTable(modes, deltas, exact_zero)


def resonance_lattice(V: ActionMatrix, M: int, budget: int | None = None) -> list[tuple[int, ...]]:
    """The m with 0 < ||m||_inf <= M and delta(m) = 0 (certified when V is rational)."""
    return small_divisors(V, M, budget).resonant_modes()


def _int_sqrt_ceil(x: np.ndarray) -> np.ndarray:
    """Smallest t >= 0 with t*t >= x, elementwise for int64 x."""
    x = np.maximum(x, 0)
    t = np.ceil(np.sqrt(x.astype(float))).astype(np.int64)
    t = np.where((t - 1) >= 0, np.where((t - 1) * (t - 1) >= x, t - 1, t), t)
    t = np.where(t * t < x, t + 1, t)
    return t


def _int_sqrt_floor(x: np.ndarray) -> np.ndarray:
    """Largest t >= 0 with t*t <= x, elementwise (x >= 0)."""
    x = np.maximum(x, 0)
    t = np.floor(np.sqrt(x.astype(float))).astype(np.int64)
    t = np.where(t * t > x, t - 1, t)
    t = np.where((t + 1) * (t + 1) <= x, t + 1, t)
    return t


def _shell_candidates(V: ActionMatrix, M: int, prefixes: np.ndarray, free: int, n_shells: int):
    """Divisor-minimising last coordinates per (prefix, dyadic shell, sign branch).

    delta^2 restricted to a line of fixed prefix is a convex quadratic in the free coordinate,
    so its integer minimiser on an interval is the floor or ceiling of the clipped real minimiser.
    Returns (modes, shell index) of every candidate.
    """
    others = [k for k in range(V.N) if k != free]
    a = V.rows[:, free]
    A = float(a @ a)
    w = prefixes.astype(float) @ V.rows[:, others].T if others else np.zeros((len(prefixes), V.p))
    t_star = -(w @ a) / A
    r2 = np.sum(prefixes.astype(np.int64) ** 2, axis=1)
    all_modes, all_shells = [], []
    for j in range(n_shells):
        lo = 4 ** j - r2
        hi = 4 ** (j + 1) - 1 - r2
        valid = hi >= 0
        tmin = _int_sqrt_ceil(lo)
        tmax = np.minimum(_int_sqrt_floor(np.maximum(hi, 0)), M)
        valid &= tmin <= tmax
        if not valid.any():
            continue
        for sign in (1, -1):
            left = np.where(sign > 0, tmin, -tmax)
            right = np.where(sign > 0, tmax, -tmin)
            clipped = np.clip(t_star, left, right)
            for t in (np.floor(clipped), np.ceil(clipped)):
                t = np.clip(t.astype(np.int64), left, right)
                modes = np.zeros((int(valid.sum()), V.N), dtype=np.int64)
                if others:
                    modes[:, others] = prefixes[valid]
                modes[:, free] = t[valid]
                all_modes.append(modes)
                all_shells.append(np.full(len(modes), j, dtype=np.int64))
    if not all_modes:
        return np.zeros((0, V.N), dtype=np.int64), np.zeros(0, dtype=np.int64)
    modes = np.vstack(all_modes)
    shells = np.concatenate(all_shells)
    modes, first = np.unique(modes, axis=0, return_index=True)
    return modes, shells[first]


def _fit_slope(norms: np.ndarray, deltas: np.ndarray) -> float:
    x = np.log(norms)
    y = -np.log(deltas)
    if len(x) < 2 or np.ptp(x) == 0:
        return float('nan')
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def estimate_type(V: ActionMatrix, M: int, budget: int | None = None, logger=None) -> DiophantineReport:
    """Estimate the Diophantine type (tau, c) of V from dyadic-shell minimisers of delta.

    tau is the least-squares slope of -log delta(m*) against log ||m*|| over the shell
    minimisers m*; c = min delta(m) ||m||^tau over the scanned candidates. Exact resonances
    are reported separately and excluded from the fit.
    """
    if M < 8:
        raise ValueError(f"Type estimation needs a scan radius >= 8, got {M}")
    logger = proglog.default_bar_logger(logger)
    free = int(np.argmax(np.sum(V.rows ** 2, axis=0)))
    n_prefix_axes = V.N - 1
    _check_budget((2 * M + 1) ** n_prefix_axes, budget)
    n_shells = int(np.floor(np.log2(M * np.sqrt(V.N)))) + 1

    chunk = get_setting('diophantine.prefix_chunk')
    total = (2 * M + 1) ** n_prefix_axes
    blocks = []
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        if n_prefix_axes:
            coords = np.unravel_index(flat, (2 * M + 1,) * n_prefix_axes)
            blocks.append(np.stack(coords, axis=1).astype(np.int64) - M)
        else:
            blocks.append(np.zeros((1, 0), dtype=np.int64))

    def scan(prefixes):
        modes, shells = _shell_candidates(V, M, prefixes, free, n_shells)
        deltas, zero = divisor_values(V, modes)
        return modes, shells, deltas, zero

    results = []
    if LEAFWISE_THREADS > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=LEAFWISE_THREADS) as pool:
            for res in logger.iter_bar(prefix_block=pool.map(scan, blocks)):
                results.append(res)
    else:
        for block in logger.iter_bar(prefix_block=blocks):
            results.append(scan(block))

    modes = np.vstack([r[0] for r in results])
    shells = np.concatenate([r[1] for r in results])
    deltas = np.concatenate([r[2] for r in results])
    zero = np.concatenate([r[3] for r in results])
    modes, first = np.unique(modes, axis=0, return_index=True)
    shells, deltas, zero = shells[first], deltas[first], zero[first]

    certified = V.is_rational
    if certified:
        resonances = [tuple(int(x) for x in m) for m in modes[zero]]
        numerical = []
        live = ~zero
    else:
        resonances = []
        numerical = [tuple(int(x) for x in m) for m in modes[zero]]
        live = ~zero & (deltas > 0)
    if not live.any():
        raise ValueError("Every scanned mode is resonant; the type fit is impossible")

    norms = np.linalg.norm(modes.astype(float), axis=1)
    minimizers = []
    for j in range(n_shells):
        in_shell = np.flatnonzero(live & (shells == j))
        if len(in_shell):
            k = in_shell[np.argmin(deltas[in_shell])]
            minimizers.append((j, k))
    if len(minimizers) < 2:
        raise ValueError("Fewer than two non-resonant dyadic shells; the type fit is impossible")
    idx = np.array([k for _, k in minimizers])
    tau = _fit_slope(norms[idx], deltas[idx])

    tau_by_radius = []
    radius = 8
    while radius <= M:
        top = int(np.log2(radius))
        sel = np.array([k for j, k in minimizers if j < top])
        if len(sel) >= 2:
            tau_by_radius.append((radius, _fit_slope(norms[sel], deltas[sel])))
        radius *= 2

    scores = deltas * norms ** tau
    live_idx = np.flatnonzero(live)
    order = live_idx[np.lexsort((np.arange(len(live_idx)), scores[live_idx]))]
    c_estimate = float(scores[order[0]])
    n_offenders = get_setting('diophantine.offenders')
    offenders = [(tuple(int(x) for x in modes[k]), float(deltas[k]), float(scores[k])) for k in order[:n_offenders]]

    dirichlet = V.N / V.p - 1
    row_scale = float(np.linalg.norm(V.rows, axis=1).max())
    normalized = deltas[idx] * norms[idx] ** dirichlet / row_scale
    margin = get_setting('diophantine.liouville_margin')
    liouville_like = bool(normalized.min() < get_setting('diophantine.liouville_floor')
                          or any(t > dirichlet + margin for _, t in tau_by_radius))

    logger(message=f"tau={tau:.4f} c={c_estimate:.4g} over {len(modes)} candidate modes")
    return DiophantineReport(
        M=M, tau_estimate=tau, c_estimate=c_estimate, offenders=offenders,
        resonances=resonances, numerical_resonances=numerical,
        shell_minimizers=[(j, tuple(int(x) for x in modes[k]), float(deltas[k])) for j, k in minimizers],
        tau_by_radius=tau_by_radius, dirichlet_exponent=dirichlet,
        liouville_like=liouville_like, certified_rational=certified)
