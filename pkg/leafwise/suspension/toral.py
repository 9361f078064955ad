"""Hyperbolic toral automorphisms and the first leafwise cohomology of their suspensions."""
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from leafwise.errors import NonHyperbolicError
from leafwise.suspension.mayer_vietoris import SuspensionData, mv_report


def _integer_entries(A) -> list[list[int]]:
    rows = []
    for row in A:
        out = []
        for x in row:
            if isinstance(x, float) and not x.is_integer():
                raise NonHyperbolicError(f"Entry {x!r} is not an integer")
            out.append(int(x))
        rows.append(out)
    return rows


class HyperbolicMatrix:
    """2x2 integer matrix with det 1 and |trace| > 2."""

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = _integer_entries(entries)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise NonHyperbolicError(f"Expected a 2x2 matrix, got {rows}")
        (a, b), (c, d) = rows
        self.entries = rows
        self.determinant = a * d - b * c
        self.trace = a + d
        if self.determinant != 1:
            raise NonHyperbolicError(f"det A = {self.determinant}, expected 1")
        if abs(self.trace) <= 2:
            raise NonHyperbolicError(f"|trace A| = {abs(self.trace)} <= 2: A is not hyperbolic")

    @property
    def discriminant(self) -> int:
        return self.trace ** 2 - 4

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def __repr__(self):
        return f"HyperbolicMatrix({self.entries})"


@dataclass
class ToralReport:
    matrix: list[list[int]]
    trace: int
    discriminant: int
    lambda_: float
    lambda_inverse: float
    stable_vector: list[float]
    stable_slope: float
    slope_irrational: bool
    h1_dim: int
    suspension: SuspensionData

    def to_json(self) -> dict:
        return {"matrix": self.matrix, "trace": self.trace, "discriminant": self.discriminant,
                "lambda": self.lambda_, "lambda_inverse": self.lambda_inverse,
                "stable_vector": self.stable_vector, "stable_slope": self.stable_slope,
                "slope_irrational": self.slope_irrational, "diophantine_fibre": self.slope_irrational,
                "h1_dim": self.h1_dim, "suspension": self.suspension.to_json()}


def expanding_eigenvalue(A: HyperbolicMatrix) -> float:
    """The eigenvalue of modulus > 1: (trace + sign(trace) sqrt(trace^2 - 4)) / 2."""
    return (A.trace + math.copysign(math.sqrt(A.discriminant), A.trace)) / 2


def stable_vector(A: HyperbolicMatrix, lam: float) -> np.ndarray:
    """Unit eigenvector for 1/lambda, first nonzero component positive."""
    (a, b), (c, d) = A.entries
    mu = 1.0 / lam
    v = np.array([b, mu - a], dtype=float) if b != 0 else np.array([mu - d, c], dtype=float)
    v /= np.linalg.norm(v)
    if v[np.flatnonzero(v)[0]] < 0:
        v = -v
    return v


def toral_pipeline(A: HyperbolicMatrix) -> ToralReport:
    """lambda, the stable direction and dim H^1(F_A) from the suspension data (1, 1), (1), (1/lambda).

    trace^2 - 4 is never a perfect square once |trace| > 2, so the stable slope is a
    quadratic surd and the fibre foliation is a Diophantine linear foliation.
    """
    lam = expanding_eigenvalue(A)
    mu = 1.0 / lam
    v = stable_vector(A, lam)
    data = SuspensionData([1, 1], [[[1]], [[mu]]])
    report = mv_report(data, 1)
    slope = float(v[1] / v[0]) if v[0] != 0 else float('inf')
    square = math.isqrt(A.discriminant) ** 2 == A.discriminant
    return ToralReport(matrix=A.entries, trace=A.trace, discriminant=A.discriminant, lambda_=lam,
                       lambda_inverse=mu, stable_vector=v.tolist(), stable_slope=slope,
                       slope_irrational=not square, h1_dim=report.dimension, suspension=data)


def higher_toral_data(A, maps: Sequence, dims: Sequence[int] | None = None) -> SuspensionData:
    """SuspensionData for an N x N hyperbolic automorphism whose induced maps are supplied.

    A is only checked (integer, |det| = 1, no eigenvalue on the unit circle); no eigen-pipeline
    derives the maps.
    """
    rows = _integer_entries(A)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonHyperbolicError("Toral automorphism must be square")
    arr = np.array(rows, dtype=float)
    det = round(float(np.linalg.det(arr)))
    if abs(det) != 1:
        raise NonHyperbolicError(f"det A = {det}, expected +-1")
    moduli = np.abs(np.linalg.eigvals(arr))
    if np.any(np.abs(moduli - 1.0) < 1e-12):
        raise NonHyperbolicError("A has an eigenvalue on the unit circle")
    if dims is None:
        dims = [np.asarray(h).shape[0] if np.ndim(h) == 2 else 0 for h in maps]
    return SuspensionData(dims, maps)
