"""g-valued leafwise forms over a linear torus frame: Maurer-Cartan residuals and gauge transforms."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from leafwise.cohomology.leafwise_forms import LeafwiseOneForm
from leafwise.config.config import get_setting
from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.errors import DimensionMismatchError, InvertibilityError, TruncationLossError
from leafwise.fourier.fourier_series import (FourierSeries, GridSamples, add_all, directional_derivative,
                                             from_samples, multiply, sample)
from leafwise.lie.lie_algebra import LieAlgebra, abelian


class AlgebraValuedForm:
    """sum_k omega^k (x) xi_k with omega^k a function (degree 0) or a leafwise one-form (degree 1)."""

    def __init__(self, base: ActionMatrix, degree: int, components: Sequence):
        if degree not in (0, 1):
            raise ValueError(f"Only degrees 0 and 1 are supported, got {degree}")
        components = list(components)
        for comp in components:
            if degree == 0:
                if not isinstance(comp, FourierSeries) or comp.dims != base.N:
                    raise DimensionMismatchError("Degree-0 components must be series on the frame's torus")
            else:
                if not isinstance(comp, LeafwiseOneForm) or comp.V != base:
                    raise DimensionMismatchError("Degree-1 components must be one-forms on the same frame")
        if len({c.real for c in components}) > 1:
            raise ValueError("Components must share the real flag")
        self.base = base
        self.degree = degree
        self.components = components

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def real(self) -> bool:
        return all(c.real for c in self.components)

    def value_on(self, a: int) -> list[FourierSeries]:
        """Coefficients of omega(X_{v_a}) in the Lie basis."""
        if self.degree != 1:
            raise ValueError("Only one-forms can be evaluated on frame vectors")
        return [comp[a] for comp in self.components]

    @classmethod
    def from_frame_values(cls, base: ActionMatrix, values: Sequence[Sequence[FourierSeries]]) -> "AlgebraValuedForm":
        """values[a][k] is the xi_k coefficient of omega(X_{v_a})."""
        if len(values) != base.p:
            raise DimensionMismatchError(f"{len(values)} frame values for {base.p} frame vectors")
        n = len(values[0])
        return cls(base, 1, [LeafwiseOneForm(base, [values[a][k] for a in range(base.p)]) for k in range(n)])

    def max_distance(self, other: "AlgebraValuedForm") -> float:
        """Largest coefficient difference across components and frame vectors."""
        if self.degree != other.degree or self.n != other.n:
            raise DimensionMismatchError("Forms differ in degree or algebra dimension")
        if self.degree == 0:
            return max(((a - b).max_abs() for a, b in zip(self.components, other.components)), default=0.0)
        return max(((x - y).max_abs() for a, b in zip(self.components, other.components)
                    for x, y in zip(a.components, b.components)), default=0.0)

    @property
    def truncation_loss(self) -> float:
        if self.degree == 0:
            return float(np.sqrt(sum(c.truncation_loss ** 2 for c in self.components)))
        return float(np.sqrt(sum(s.truncation_loss ** 2 for c in self.components for s in c.components)))


def canonical_form(V: ActionMatrix) -> tuple[AlgebraValuedForm, LieAlgebra]:
    """omega_rho = sum_i eta_i (x) e_i of the linear R^p-action: omega(X_{v_a}) = e_a."""
    values = [[FourierSeries.constant(V.N, 1.0 if k == a else 0.0) for k in range(V.p)] for a in range(V.p)]
    return AlgebraValuedForm.from_frame_values(V, values), abelian(V.p)


def wedge(alpha: LeafwiseOneForm, beta: LeafwiseOneForm) -> dict[tuple[int, int], FourierSeries]:
    """(alpha ^ beta)(X_a, X_b) = alpha_a beta_b - alpha_b beta_a for frame pairs a < b."""
    if alpha.V != beta.V:
        raise DimensionMismatchError("Wedge of forms over different frames")
    p = alpha.V.p
    return {(a, b): multiply(alpha[a], beta[b]) - multiply(alpha[b], beta[a])
            for a in range(p) for b in range(a + 1, p)}


def maurer_cartan_terms(omega: AlgebraValuedForm, L: LieAlgebra) -> dict[tuple[int, int], list[FourierSeries]]:
    """X_a(omega(X_b)) - X_b(omega(X_a)) + [omega(X_a), omega(X_b)] per frame pair a < b, in g-coefficients."""
    if omega.degree != 1:
        raise ValueError("The Maurer-Cartan expression needs a one-form")
    if omega.n != L.n:
        raise DimensionMismatchError(f"Form has {omega.n} components, algebra has dimension {L.n}")
    V = omega.base
    N = V.N
    pairs = [(i, j) for i in range(L.n) for j in range(L.n) if np.any(L.c[i, j] != 0)]
    out = {}
    for a in range(V.p):
        for b in range(a + 1, V.p):
            wa, wb = omega.value_on(a), omega.value_on(b)
            products = {(i, j): multiply(wa[i], wb[j]) for i, j in pairs}
            terms = []
            for k in range(L.n):
                bracket = add_all((products[i, j].scale(L.c[i, j, k]) for i, j in pairs if L.c[i, j, k] != 0), N)
                terms.append(directional_derivative(wb[k], V.rows[a]) - directional_derivative(wa[k], V.rows[b]) + bracket)
            out[(a, b)] = terms
    return out


def maurer_cartan_residual(omega: AlgebraValuedForm, L: LieAlgebra) -> float:
    """Max coefficient of d_F omega + [omega, omega] over frame pairs and Lie-basis components."""
    terms = maurer_cartan_terms(omega, L)
    return max((s.max_abs() for comps in terms.values() for s in comps), default=0.0)


@dataclass
class GaugeResult:
    form: AlgebraValuedForm
    truncation: int
    truncation_loss: float
    algebra_defect: float
    theta_invertible: bool

    def to_json(self) -> dict:
        return {"truncation": self.truncation, "truncation_loss": self.truncation_loss,
                "algebra_defect": self.algebra_defect, "theta_invertible": self.theta_invertible}


def _as_matrix_series(b, N: int, d: int) -> list[list[FourierSeries]]:
    rows = [[e if isinstance(e, FourierSeries) else FourierSeries.constant(N, e) for e in row] for row in b]
    if len(rows) != d or any(len(r) != d for r in rows):
        raise DimensionMismatchError(f"Gauge map must be a {d}x{d} matrix of series")
    for row in rows:
        for e in row:
            if e.dims != N:
                raise DimensionMismatchError(f"Gauge entry lives on T^{e.dims}, frame on T^{N}")
    return rows


def _is_identity(entries: list[list[FourierSeries]]) -> bool:
    for i, row in enumerate(entries):
        for j, e in enumerate(row):
            target = 1.0 if i == j else 0.0
            if len(e) > 1 or e.coeff((0,) * e.dims) != target or (len(e) == 1 and target == 0.0):
                return False
    return True


def pushforward(omega: AlgebraValuedForm, theta: np.ndarray) -> AlgebraValuedForm:
    """Theta_* omega: (Theta omega)^k = sum_i Theta[k, i] omega^i."""
    V = omega.base
    values = [[add_all((s.scale(theta[k, i]) for i, s in enumerate(omega.value_on(a)) if theta[k, i] != 0), V.N)
               for k in range(omega.n)] for a in range(V.p)]
    return AlgebraValuedForm.from_frame_values(V, values)


def gauge_transform(omega: AlgebraValuedForm, b, theta, L: LieAlgebra, truncation: int | None = None,
                    loss_tol: float | None = None) -> GaugeResult:
    """omega -> b^{-1} (Theta_* omega) b + b^{-1} d_F b for a matrix-valued gauge map b.

    Products and the pointwise inverse of b are formed on a grid that resolves twice the
    output truncation; modes beyond the truncation are dropped and their norm is the loss.
    """
    if L.matrices is None:
        raise ValueError(f"Gauge transforms need a matrix realisation of {L.name or 'the algebra'}")
    if omega.degree != 1 or omega.n != L.n:
        raise DimensionMismatchError(f"Need a one-form with {L.n} Lie components")
    loss_tol = get_setting('liealg.gauge_loss_tol') if loss_tol is None else loss_tol
    V = omega.base
    N, d, n = V.N, L.matrix_size, L.n
    theta = np.eye(n) if theta is None else np.asarray(theta, dtype=float)
    if theta.shape != (n, n):
        raise DimensionMismatchError(f"Theta must be {n}x{n}, got {theta.shape}")
    theta_invertible = bool(np.linalg.matrix_rank(theta) == n)
    entries = _as_matrix_series(b, N, d)

    if _is_identity(entries) and np.array_equal(theta, np.eye(n)):
        return GaugeResult(form=omega, truncation=max((s.radius for c in omega.components for s in c.components), default=0),
                           truncation_loss=0.0, algebra_defect=0.0, theta_invertible=True)

    pushed = pushforward(omega, theta)
    r_omega = max((s.radius for c in pushed.components for s in c.components), default=0)
    r_b = max((e.radius for row in entries for e in row), default=0)
    if truncation is None:
        truncation = r_omega + d * r_b
    resolution = 4 * truncation + 1

    def grid(s: FourierSeries) -> np.ndarray:
        return np.asarray(sample(s, resolution).values).reshape(-1)

    B = np.stack([np.stack([grid(e) for e in row], axis=-1) for row in entries], axis=-2)
    dets = np.linalg.det(B)
    scale = np.linalg.norm(B, axis=(-2, -1)) ** d
    bad = np.abs(dets) <= 1e-12 * np.maximum(scale, 1e-300)
    if bad.any():
        point = GridSamples(N, (resolution,) * N, np.zeros((resolution,) * N)).points()[int(np.argmax(bad))]
        raise InvertibilityError(f"Gauge map is singular near x = {point.tolist()}")
    B_inv = np.linalg.inv(B)

    basis = L.matrices.reshape(n, d * d).T
    new_values = []
    defect = 0.0
    loss_sq = 0.0
    for a in range(V.p):
        coeffs = np.stack([grid(s) for s in pushed.value_on(a)], axis=-1)
        Omega = np.einsum('pk,kxy->pxy', coeffs, L.matrices)
        dB = np.stack([np.stack([grid(directional_derivative(e, V.rows[a])) for e in row], axis=-1)
                       for row in entries], axis=-2)
        R = B_inv @ Omega @ B + B_inv @ dB
        flat = R.reshape(len(R), d * d).T
        lie_coeffs, *_ = scipy.linalg.lstsq(basis, flat)
        defect = max(defect, float(np.abs(basis @ lie_coeffs - flat).max(initial=0.0)))
        row = []
        for k in range(n):
            values = lie_coeffs[k].reshape((resolution,) * N)
            if omega.real and np.iscomplexobj(values):
                values = values.real
            full = from_samples(GridSamples(N, (resolution,) * N, values), 2 * truncation)
            kept = full.truncate(truncation)
            loss_sq += kept.truncation_loss ** 2
            row.append(kept)
        new_values.append(row)
    loss = float(np.sqrt(loss_sq))
    if loss > loss_tol:
        raise TruncationLossError(f"Gauge transform dropped modes of norm {loss:.3e} beyond truncation {truncation}")
    return GaugeResult(form=AlgebraValuedForm.from_frame_values(V, new_values), truncation=truncation,
                       truncation_loss=loss, algebra_defect=defect, theta_invertible=theta_invertible)


def matrix_product(b1, b2) -> list[list[FourierSeries]]:
    """Entrywise series product of two matrices of series."""
    d = len(b1)
    return [[add_all((multiply(b1[i][l], b2[l][j]) for l in range(d)), b1[0][0].dims) for j in range(d)]
            for i in range(d)]
