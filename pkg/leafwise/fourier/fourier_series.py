"""Truncated Fourier series on the torus T^N.

Coefficients are stored sparsely against exact integer frequency vectors; dense grids
only appear transiently when sampling, inverting samples or multiplying large series.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.fft

from leafwise.config.config import get_setting
from leafwise.errors import AliasingError, DimensionMismatchError

FrequencyVector = tuple[int, ...]

TWO_PI_I = 2j * np.pi
HERMITIAN_TOL = 1e-12


def frequency(*entries: int) -> FrequencyVector:
    if len(entries) == 0:
        raise ValueError("A frequency vector needs at least one entry")
    return tuple(int(e) for e in entries)


class FourierSeries:
    """Finitely supported coefficients a_m, m in Z^N, of f(x) = sum a_m exp(2 pi i <m,x>).

    Instances are immutable. `truncation_loss` is the l2 norm of the modes dropped when the
    series was produced by a capped operation.
    """

    def __init__(self, dims: int, modes, values, real: bool = False,
                 radius: int | None = None, truncation_loss: float = 0.0):
        if dims < 1:
            raise ValueError(f"Torus dimension must be >= 1, got {dims}")
        modes = np.asarray(modes, dtype=np.int64).reshape(-1, dims)
        values = np.asarray(values, dtype=np.complex128).reshape(-1)
        if len(modes) != len(values):
            raise ValueError(f"{len(modes)} modes but {len(values)} coefficients")
        modes, values = _canonical(modes, values)
        if real:
            modes, values = _hermitian_part(modes, values)
        actual_radius = int(np.abs(modes).max()) if len(modes) else 0
        if radius is None:
            radius = actual_radius
        elif radius < actual_radius:
            raise ValueError(f"Truncation radius {radius} is below the stored radius {actual_radius}")
        modes.setflags(write=False)
        values.setflags(write=False)
        self.dims = int(dims)
        self.modes = modes
        self.values = values
        self.real = bool(real)
        self.radius = int(radius)
        self.truncation_loss = float(truncation_loss)

    @classmethod
    def from_dict(cls, dims: int, coeffs: Mapping[Sequence[int], complex], real: bool | None = None,
                  radius: int | None = None) -> "FourierSeries":
        """Build from {m: a_m}. With real=None the flag is detected from hermitian symmetry."""
        modes = [tuple(m) for m in coeffs.keys()]
        for m in modes:
            if len(m) != dims:
                raise DimensionMismatchError(f"Frequency {m} does not live in Z^{dims}")
        values = list(coeffs.values())
        if real is None:
            real = is_hermitian(dims, modes, values)
        elif real and not is_hermitian(dims, modes, values):
            raise ValueError("Coefficients are not hermitian-symmetric but real=True was requested")
        return cls(dims, modes if modes else np.zeros((0, dims)), values, real=real, radius=radius)

    @classmethod
    def constant(cls, dims: int, value: float | complex) -> "FourierSeries":
        real = complex(value).imag == 0
        return cls(dims, [[0] * dims], [value], real=real)

    @classmethod
    def zero(cls, dims: int, real: bool = True) -> "FourierSeries":
        return cls(dims, np.zeros((0, dims)), [], real=real)

    @cached_property
    def _index(self) -> dict:
        return {tuple(int(x) for x in m): i for i, m in enumerate(self.modes)}

    def coeff(self, m: Sequence[int]) -> complex:
        i = self._index.get(tuple(int(x) for x in m))
        return complex(self.values[i]) if i is not None else 0j

    def __getitem__(self, m: Sequence[int]) -> complex:
        return self.coeff(m)

    def __len__(self):
        return len(self.values)

    def __contains__(self, m):
        return tuple(int(x) for x in m) in self._index

    def items(self):
        for m, a in zip(self.modes, self.values):
            yield tuple(int(x) for x in m), complex(a)

    def to_dict(self) -> dict:
        return dict(self.items())

    def mean(self) -> complex:
        return self.coeff((0,) * self.dims)

    def _check_dims(self, other: "FourierSeries"):
        if self.dims != other.dims:
            raise DimensionMismatchError(f"Series live on T^{self.dims} and T^{other.dims}")

    def __add__(self, other):
        if not isinstance(other, FourierSeries):
            return self + FourierSeries.constant(self.dims, other)
        self._check_dims(other)
        return FourierSeries(self.dims, np.vstack([self.modes, other.modes]),
                             np.concatenate([self.values, other.values]),
                             real=self.real and other.real, radius=max(self.radius, other.radius))

    __radd__ = __add__

    def __neg__(self):
        return FourierSeries(self.dims, self.modes, -self.values, real=self.real, radius=self.radius)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: complex) -> "FourierSeries":
        real = self.real and complex(factor).imag == 0
        return FourierSeries(self.dims, self.modes, self.values * factor, real=real, radius=self.radius)

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def conjugate(self) -> "FourierSeries":
        """Complex conjugate function: coefficient at m becomes conj(a_{-m})."""
        return FourierSeries(self.dims, -self.modes, np.conj(self.values), real=self.real, radius=self.radius)

    def truncate(self, radius: int) -> "FourierSeries":
        keep = np.abs(self.modes).max(axis=1, initial=0) <= radius if len(self.modes) else np.zeros(0, bool)
        dropped = float(np.linalg.norm(self.values[~keep]))
        return FourierSeries(self.dims, self.modes[keep], self.values[keep], real=self.real,
                             radius=min(radius, self.radius), truncation_loss=self.truncation_loss + dropped)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    def __repr__(self):
        return f"FourierSeries(dims={self.dims}, modes={len(self)}, radius={self.radius}, real={self.real})"


@dataclass(frozen=True)
class GridSamples:
    """Samples at the uniform lattice (j_1/R_1, ..., j_N/R_N)."""
    dims: int
    resolution: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        if len(self.resolution) != self.dims:
            raise DimensionMismatchError(f"{len(self.resolution)} resolutions given for T^{self.dims}")
        if tuple(np.shape(self.values)) != tuple(self.resolution):
            raise ValueError(f"Sample array has shape {np.shape(self.values)}, expected {self.resolution}")

    def points(self) -> np.ndarray:
        axes = [np.arange(r) / r for r in self.resolution]
        mesh = np.meshgrid(*axes, indexing='ij')
        return np.stack([a.reshape(-1) for a in mesh], axis=1)


def _canonical(modes: np.ndarray, values: np.ndarray):
    """Merge duplicate modes, drop exact zeros, sort lexicographically."""
    if len(modes) == 0:
        return modes.copy(), values.copy()
    unique, inverse = np.unique(modes, axis=0, return_inverse=True)
    summed = np.zeros(len(unique), dtype=np.complex128)
    np.add.at(summed, inverse.reshape(-1), values)
    keep = summed != 0
    return unique[keep], summed[keep]


def _hermitian_part(modes: np.ndarray, values: np.ndarray):
    """Enforce a_{-m} = conj(a_m) by averaging each coefficient with its mirror."""
    if len(modes) == 0:
        return modes, values
    merged_modes = np.vstack([modes, -modes])
    merged_values = np.concatenate([values, np.conj(values)]) / 2
    return _canonical(merged_modes, merged_values)


def is_hermitian(dims: int, modes: Iterable[Sequence[int]], values: Iterable[complex]) -> bool:
    table = {tuple(int(x) for x in m): complex(a) for m, a in zip(modes, values)}
    scale = max((abs(a) for a in table.values()), default=0.0)
    for m, a in table.items():
        mirror = table.get(tuple(-x for x in m), 0j)
        if abs(a - mirror.conjugate()) > HERMITIAN_TOL * max(scale, 1.0):
            return False
    return True


def _as_points(s: FourierSeries, x) -> tuple[np.ndarray, bool]:
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, pts.shape[-1]) if pts.ndim else pts.reshape(1, 1)
    if pts.shape[1] != s.dims:
        raise DimensionMismatchError(f"Point of dimension {pts.shape[1]} for a series on T^{s.dims}")
    return pts, single


def evaluate(s: FourierSeries, x, chunk: int = 4096):
    """Sum of a_m exp(2 pi i <m,x>) at one point (shape (N,)) or many points (shape (P, N))."""
    pts, single = _as_points(s, x)
    out = np.zeros(len(pts), dtype=np.complex128)
    if len(s):
        for start in range(0, len(pts), chunk):
            block = pts[start:start + chunk]
            phase = np.exp(TWO_PI_I * (block @ s.modes.T.astype(float)))
            out[start:start + chunk] = phase @ s.values
    if s.real:
        out = out.real
    return out[0] if single else out


def sample(s: FourierSeries, resolution: int | Sequence[int]) -> GridSamples:
    """Values on the uniform lattice, computed with an inverse FFT (aliases fold exactly)."""
    res = _resolution(s.dims, resolution)
    grid = np.zeros(res, dtype=np.complex128)
    if len(s):
        idx = tuple((s.modes[:, k] % res[k]) for k in range(s.dims))
        np.add.at(grid, idx, s.values)
    values = scipy.fft.ifftn(grid) * float(np.prod(res))
    if s.real:
        values = values.real
    return GridSamples(s.dims, res, values)


def from_samples(g: GridSamples, M: int, drop_tol: float | None = None) -> FourierSeries:
    """Discrete Fourier transform of grid samples restricted to ||m||_inf <= M."""
    if M < 0:
        raise ValueError(f"Truncation must be non-negative, got {M}")
    for r in g.resolution:
        if r < 2 * M + 1:
            raise AliasingError(f"Resolution {r} cannot resolve truncation {M}; need at least {2 * M + 1} samples per axis")
    if drop_tol is None:
        drop_tol = get_setting('fourier.sample_drop_tol')
    values = np.asarray(g.values)
    real = not np.iscomplexobj(values)
    spectrum = scipy.fft.fftn(values) / float(np.prod(g.resolution))
    box = np.arange(-M, M + 1)
    block = spectrum[np.ix_(*[box % r for r in g.resolution])]
    mesh = np.meshgrid(*([box] * g.dims), indexing='ij')
    modes = np.stack([a.reshape(-1) for a in mesh], axis=1)
    coeffs = block.reshape(-1)
    scale = float(np.abs(coeffs).max(initial=0.0))
    keep = np.abs(coeffs) > drop_tol * max(scale, 1.0)
    return FourierSeries(g.dims, modes[keep], coeffs[keep], real=real, radius=M)


def _resolution(dims: int, resolution) -> tuple[int, ...]:
    if np.isscalar(resolution):
        return (int(resolution),) * dims
    res = tuple(int(r) for r in resolution)
    if len(res) != dims:
        raise DimensionMismatchError(f"{len(res)} resolutions given for T^{dims}")
    return res


def directional_derivative(s: FourierSeries, v: Sequence[float]) -> FourierSeries:
    """X_v s: the coefficient at m becomes 2 pi i <m,v> a_m."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if len(v) != s.dims:
        raise DimensionMismatchError(f"Direction of length {len(v)} for a series on T^{s.dims}")
    divisors = s.modes.astype(float) @ v if len(s) else np.zeros(0)
    return FourierSeries(s.dims, s.modes, TWO_PI_I * divisors * s.values,
                         real=s.real, radius=s.radius)


def decay_diagnostic(s: FourierSeries, k: int) -> float:
    """max over stored m != 0 of ||m||^k |a_m| (Euclidean norm)."""
    if k < 0:
        raise ValueError(f"Decay order must be non-negative, got {k}")
    if not len(s):
        return 0.0
    norms = np.linalg.norm(s.modes.astype(float), axis=1)
    nonzero = norms > 0
    if not nonzero.any():
        return 0.0
    return float((norms[nonzero] ** k * np.abs(s.values[nonzero])).max())


def multiply(a: FourierSeries, b: FourierSeries, cap: int | None = None) -> FourierSeries:
    """Product of two series: convolution of coefficients.

    The output radius is the sum of the input radii; with `cap` below that sum, modes beyond
    the cap are dropped and their l2 norm is recorded in `truncation_loss`.
    """
    a._check_dims(b)
    if cap is None:
        cap = get_setting('fourier.multiply_cap')
    radius = a.radius + b.radius
    real = a.real and b.real
    if not len(a) or not len(b):
        product = FourierSeries(a.dims, np.zeros((0, a.dims)), [], real=real, radius=radius)
    elif len(a) * len(b) <= get_setting('fourier.direct_product_limit'):
        modes = (a.modes[:, None, :] + b.modes[None, :, :]).reshape(-1, a.dims)
        values = (a.values[:, None] * b.values[None, :]).reshape(-1)
        product = FourierSeries(a.dims, modes, values, real=real, radius=radius)
    else:
        res = 2 * radius + 1
        prod_grid = sample(a, res).values * sample(b, res).values
        product = from_samples(GridSamples(a.dims, (res,) * a.dims, prod_grid), radius, drop_tol=0.0)
        if real and not product.real:
            product = FourierSeries(a.dims, product.modes, product.values, real=True, radius=radius)
    if cap is not None and cap < radius:
        return product.truncate(cap)
    return product


def add_all(series: Iterable[FourierSeries], dims: int) -> FourierSeries:
    total = FourierSeries.zero(dims)
    for s in series:
        total = total + s
    return total


def sup_norm_estimate(s: FourierSeries, oversample: int = 4) -> float:
    """Grid estimate of sup |s| on a lattice oversampling the truncation."""
    res = max(oversample * (2 * s.radius + 1), 8)
    if s.dims > 2:
        res = max(2 * s.radius + 3, 8)
    return float(np.abs(sample(s, res).values).max(initial=0.0))


def random_series(dims: int, M: int, n_modes: int, rng: np.random.Generator,
                  real: bool = True, decay: float = 0.0) -> FourierSeries:
    """Random band-limited series with n_modes distinct nonzero frequencies (plus mirrors when real)."""
    chosen = {}
    attempts = 0
    box = (2 * M + 1) ** dims - 1
    n_modes = min(n_modes, box // 2 if real else box)
    while len(chosen) < n_modes:
        attempts += 1
        if attempts > 100 * (n_modes + 10):
            break
        m = tuple(int(x) for x in rng.integers(-M, M + 1, size=dims))
        if not any(m):
            continue
        if real and tuple(-x for x in m) in chosen:
            continue
        if m in chosen:
            continue
        amplitude = (1.0 + np.linalg.norm(m)) ** (-decay)
        chosen[m] = amplitude * complex(rng.normal(), rng.normal())
    coeffs = dict(chosen)
    if real:
        for m, a in chosen.items():
            coeffs[tuple(-x for x in m)] = a.conjugate()
    return FourierSeries.from_dict(dims, coeffs, real=real, radius=M)
