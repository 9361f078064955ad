"""Orientation-preserving circle diffeomorphisms as lifts x + drift + u(x) with u a trigonometric polynomial."""
import math
from typing import Sequence

import numpy as np

from leafwise.config.config import get_setting
from leafwise.errors import OrientationError
from leafwise.fourier.fourier_io import series_from_json, series_to_json
from leafwise.fourier.fourier_series import FourierSeries, GridSamples, directional_derivative, evaluate, from_samples


class CircleMap:
    """Lift f(x) = x + drift + u(x), u periodic and real. Orientation is checked on a grid."""

    def __init__(self, drift: float, periodic_part: FourierSeries | None = None, grid: int | None = None):
        if periodic_part is None:
            periodic_part = FourierSeries.zero(1)
        if periodic_part.dims != 1:
            raise ValueError(f"Periodic part must live on T^1, got T^{periodic_part.dims}")
        if not periodic_part.real:
            raise ValueError("Periodic part of a circle map must be real")
        self.drift = float(drift)
        self.u = periodic_part
        self._du = directional_derivative(periodic_part, [1.0])
        positive = [(m, a) for m, a in periodic_part.items() if m[0] > 0]
        self._freqs = [m[0] for m, _ in positive]
        self._cos = [2 * a.real for _, a in positive]
        self._sin = [-2 * a.imag for _, a in positive]
        self._mean = periodic_part.mean().real
        if grid is None:
            grid = max(get_setting('circle.grid'), 2 * periodic_part.radius + 1)
        self.grid = grid
        xs = np.arange(grid) / grid
        self.orientation_margin = float(np.min(self.derivative(xs)))
        if self.orientation_margin <= 0:
            worst = xs[int(np.argmin(self.derivative(xs)))]
            raise OrientationError(f"Lift derivative {self.orientation_margin:.3e} <= 0 near x = {worst:.6f}")

    @property
    def is_rigid(self) -> bool:
        return len(self.u) == 0

    def displacement(self, x) -> np.ndarray:
        """u(x) on an array of points."""
        x = np.asarray(x, dtype=float)
        if self.is_rigid:
            return np.zeros_like(x)
        return np.asarray(evaluate(self.u, x.reshape(-1, 1))).reshape(x.shape)

    def lift(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x + self.drift + self.displacement(x)

    __call__ = lift

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.is_rigid:
            return np.ones_like(x)
        return 1.0 + np.asarray(evaluate(self._du, x.reshape(-1, 1))).reshape(x.shape)

    def lift_scalar(self, x: float) -> float:
        total = x + self.drift + self._mean
        for m, a, b in zip(self._freqs, self._cos, self._sin):
            t = 2 * math.pi * m * x
            total += a * math.cos(t) + b * math.sin(t)
        return total

    def derivative_scalar(self, x: float) -> float:
        total = 1.0
        for m, a, b in zip(self._freqs, self._cos, self._sin):
            t = 2 * math.pi * m * x
            total += 2 * math.pi * m * (b * math.cos(t) - a * math.sin(t))
        return total

    def displacement_bounds(self) -> tuple[float, float]:
        """Rigorous bounds on f(x) - x from the l1 norm of the nonconstant coefficients."""
        spread = float(np.abs(self.u.values).sum()) - abs(self.u.mean())
        centre = self.drift + self._mean
        return centre - spread, centre + spread

    def to_json(self) -> dict:
        return {"drift": self.drift, "periodic": series_to_json(self.u)}

    @classmethod
    def from_json(cls, data: dict) -> "CircleMap":
        periodic = series_from_json(data["periodic"]) if data.get("periodic") else None
        return cls(float(data["drift"]), periodic)

    def __repr__(self):
        return f"CircleMap(drift={self.drift!r}, modes={len(self.u)}, margin={self.orientation_margin:.3g})"


def rigid_rotation(theta: float) -> CircleMap:
    return CircleMap(theta)


def arnold_map(omega: float, epsilon: float) -> CircleMap:
    """x + omega + epsilon sin(2 pi x) / (2 pi); a diffeomorphism for |epsilon| < 1."""
    a = -1j * epsilon / (4 * np.pi)
    periodic = FourierSeries.from_dict(1, {(1,): a, (-1,): np.conj(a)}, real=True)
    return CircleMap(omega, periodic)


def resample(values_on_grid: np.ndarray, truncation: int) -> FourierSeries:
    """Periodic function sampled on a uniform grid, re-expanded and truncated; the dropped
    l2 norm is kept as truncation_loss."""
    resolution = len(values_on_grid)
    full = from_samples(GridSamples(1, (resolution,), np.asarray(values_on_grid, dtype=float)),
                        (resolution - 1) // 2)
    return full.truncate(truncation)


def _grid_for(truncation: int) -> np.ndarray:
    resolution = max(get_setting('circle.grid'), 4 * truncation + 1)
    return np.arange(resolution) / resolution


def inverse_on_grid(f: CircleMap, y, iterations: int = 100) -> np.ndarray:
    """Solve f(x) = y pointwise by Newton steps safeguarded with bisection."""
    y = np.asarray(y, dtype=float)
    lo_disp, hi_disp = f.displacement_bounds()
    lo, hi = y - hi_disp, y - lo_disp
    x = y - f.drift - f._mean
    x = np.clip(x, lo, hi)
    for _ in range(iterations):
        F = f.lift(x) - y
        if np.max(np.abs(F), initial=0.0) <= 4 * np.finfo(float).eps * max(1.0, np.max(np.abs(y), initial=0.0)):
            break
        hi = np.where(F > 0, x, hi)
        lo = np.where(F <= 0, x, lo)
        newton = x - F / f.derivative(x)
        inside = (newton > lo) & (newton < hi)
        x = np.where(inside, newton, (lo + hi) / 2)
    return x


def compose(f: CircleMap, g: CircleMap, truncation: int | None = None) -> CircleMap:
    """f o g, periodic part re-expanded at the given truncation."""
    truncation = get_setting('circle.kam_truncation') if truncation is None else truncation
    if g.is_rigid and f.is_rigid:
        return CircleMap(f.drift + g.drift)
    xs = _grid_for(truncation)
    periodic = g.displacement(xs) + f.displacement(g.lift(xs))
    return CircleMap(f.drift + g.drift, resample(periodic, truncation))


def conjugate_by(f: CircleMap, h: CircleMap, truncation: int | None = None) -> CircleMap:
    """h^{-1} o f o h."""
    truncation = get_setting('circle.kam_truncation') if truncation is None else truncation
    xs = _grid_for(truncation)
    z = inverse_on_grid(h, f.lift(h.lift(xs)))
    return CircleMap(f.drift, resample(z - xs - f.drift, truncation))


def conjugate_forward(f: CircleMap, h: CircleMap, truncation: int | None = None) -> CircleMap:
    """h o f o h^{-1}."""
    truncation = get_setting('circle.kam_truncation') if truncation is None else truncation
    xs = _grid_for(truncation)
    z = h.lift(f.lift(inverse_on_grid(h, xs)))
    return CircleMap(f.drift, resample(z - xs - f.drift, truncation))


def iterate_lift(f: CircleMap, x0: float, n: int, check_every: int = 1024) -> float:
    """f^n(x0) on the lift; the derivative is re-checked along the orbit."""
    x = float(x0)
    for k in range(n):
        if check_every and k % check_every == 0 and f.derivative_scalar(x) <= 0:
            raise OrientationError(f"Lift derivative is non-positive at iterate {k} (x = {x!r})")
        x = f.lift_scalar(x)
    return x


def commuting_check(f: CircleMap, g: CircleMap, grid: int | None = None, tol: float | None = None) -> tuple[bool, float]:
    """max |f(g(x)) - g(f(x))| over a uniform grid."""
    grid = get_setting('circle.grid') if grid is None else grid
    tol = get_setting('circle.commutation_tol') if tol is None else tol
    xs = np.arange(grid) / grid
    defect = float(np.max(np.abs(f.lift(g.lift(xs)) - g.lift(f.lift(xs))), initial=0.0))
    return defect <= tol, defect


class CommutingFamily:
    """Pairwise commuting circle maps f_1, ..., f_p."""

    def __init__(self, maps: Sequence[CircleMap], commutation_tol: float | None = None, grid: int | None = None):
        maps = list(maps)
        if not maps:
            raise ValueError("A commuting family needs at least one map")
        self.maps = maps
        self.commutation_tol = get_setting('circle.commutation_tol') if commutation_tol is None else commutation_tol
        self.defects = {}
        for i in range(len(maps)):
            for j in range(i + 1, len(maps)):
                ok, defect = commuting_check(maps[i], maps[j], grid, self.commutation_tol)
                self.defects[(i, j)] = defect
                if not ok:
                    raise ValueError(f"Maps {i} and {j} do not commute: defect {defect:.3e} > {self.commutation_tol:.1e}")

    @property
    def p(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, i: int) -> CircleMap:
        return self.maps[i]

    def to_json(self) -> dict:
        return {"maps": [f.to_json() for f in self.maps], "commutation_tol": self.commutation_tol}

    @classmethod
    def from_json(cls, data: dict) -> "CommutingFamily":
        return cls([CircleMap.from_json(m) for m in data["maps"]], data.get("commutation_tol"))
