from typing import Sequence

import numpy as np

from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.errors import DimensionMismatchError
from leafwise.fourier.fourier_series import FourierSeries, directional_derivative, evaluate


class LeafwiseOneForm:
    """omega in Omega^1(F) for the orbit foliation of a linear action, given by its values
    omega(X_{v_i}) on the frame X_{v_1}, ..., X_{v_p}."""

    def __init__(self, V: ActionMatrix, components: Sequence[FourierSeries]):
        components = list(components)
        if len(components) != V.p:
            raise DimensionMismatchError(f"{len(components)} components for an action with {V.p} generators")
        for c in components:
            if c.dims != V.N:
                raise DimensionMismatchError(f"Component lives on T^{c.dims}, frame on T^{V.N}")
        if len({c.real for c in components}) > 1:
            raise ValueError("Components must share the real flag")
        self.V = V
        self.components = components

    @property
    def real(self) -> bool:
        return self.components[0].real

    def __getitem__(self, i: int) -> FourierSeries:
        return self.components[i]

    def __add__(self, other: "LeafwiseOneForm") -> "LeafwiseOneForm":
        return LeafwiseOneForm(self.V, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "LeafwiseOneForm") -> "LeafwiseOneForm":
        return LeafwiseOneForm(self.V, [a - b for a, b in zip(self.components, other.components)])

    def scale(self, factor: float) -> "LeafwiseOneForm":
        return LeafwiseOneForm(self.V, [c.scale(factor) for c in self.components])

    def means(self) -> list[complex]:
        return [c.mean() for c in self.components]

    def evaluate(self, x) -> np.ndarray:
        return np.stack([np.asarray(evaluate(c, x)) for c in self.components], axis=-1)

    @classmethod
    def constant(cls, V: ActionMatrix, values: Sequence[float]) -> "LeafwiseOneForm":
        return cls(V, [FourierSeries.constant(V.N, c) for c in values])


def leafwise_differential(g: FourierSeries, V: ActionMatrix) -> LeafwiseOneForm:
    """d_F g: the one-form whose value on X_{v_i} is X_{v_i} g."""
    return LeafwiseOneForm(V, [directional_derivative(g, v) for v in V.rows])


def exterior_derivative(omega: LeafwiseOneForm) -> dict[tuple[int, int], FourierSeries]:
    """d_F omega on frame pairs i < j: X_i(omega_j) - X_j(omega_i) (the frame commutes)."""
    V = omega.V
    return {(i, j): directional_derivative(omega[j], V.rows[i]) - directional_derivative(omega[i], V.rows[j])
            for i in range(V.p) for j in range(i + 1, V.p)}


def check_closed(omega: LeafwiseOneForm, tol: float) -> tuple[bool, float]:
    """Closedness X_{v_i}(omega_j) = X_{v_j}(omega_i), i < j, up to max coefficient deviation tol."""
    residual = max((d.max_abs() for d in exterior_derivative(omega).values()), default=0.0)
    return residual <= tol, residual
