"""Mayer-Vietoris dimension counts for suspension foliations.

For a leaf-preserving diffeomorphism h of the fibre,

    H^k(F_h) = Ker(I - h*_k) + H^{k-1}(F) / Img(I - h*_{k-1}),

so only the dimensions and the induced maps h*_k on the fibre cohomology are needed.
"""
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from leafwise.config.config import get_setting
from leafwise.errors import DimensionMismatchError
from leafwise.suspension.ranks import exact_matrix, rank_exact, rank_numeric


class SuspensionData:
    """dim H^k(F), k = 0..K, and square matrices of h* in each degree."""

    def __init__(self, dims: Sequence[int], maps: Sequence):
        dims = [int(d) for d in dims]
        if len(dims) < 2:
            raise ValueError(f"Need cohomology data in at least degrees 0 and 1, got {len(dims)} degree(s)")
        if any(d < 0 for d in dims):
            raise ValueError(f"Dimensions must be non-negative, got {dims}")
        if len(maps) != len(dims):
            raise DimensionMismatchError(f"{len(maps)} maps for {len(dims)} degrees")
        self.dims = dims
        self.maps = []
        for k, (d, h) in enumerate(zip(dims, maps)):
            arr = np.asarray(h, dtype=object)
            if d == 0:
                arr = np.zeros((0, 0), dtype=object)
            if arr.shape != (d, d):
                raise DimensionMismatchError(f"h* in degree {k} has shape {arr.shape}, expected ({d}, {d})")
            self.maps.append(arr)

    @property
    def K(self) -> int:
        return len(self.dims) - 1

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "SuspensionData":
        return cls(dims, [np.eye(d, dtype=int).astype(object) for d in dims])

    @classmethod
    def from_json(cls, data: dict) -> "SuspensionData":
        return cls(data["dims"], data["maps"])

    def to_json(self) -> dict:
        return {"dims": self.dims, "maps": [[[_plain(x) for x in row] for row in h] for h in self.maps]}

    def conjugated(self, P: Sequence) -> "SuspensionData":
        """All h*_k replaced by P_k h*_k P_k^{-1}."""
        maps = []
        for h, Pk in zip(self.maps, P):
            if h.size:
                Pk = np.asarray(Pk, dtype=float)
                maps.append(Pk @ h.astype(float) @ np.linalg.inv(Pk))
            else:
                maps.append(h)
        return SuspensionData(self.dims, maps)


def _plain(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


@dataclass
class DegreeReport:
    degree: int
    kernel: int
    cokernel: int
    method: str
    gaps: list[float] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.kernel + self.cokernel

    def to_json(self) -> dict:
        return {"degree": self.degree, "kernel": self.kernel, "cokernel": self.cokernel,
                "dimension": self.dimension, "method": self.method, "gaps": self.gaps}


def _rank_of_defect(h: np.ndarray, tol: float) -> tuple[int, str, float]:
    """rank(I - h), exact when every entry of h is an exact rational."""
    d = h.shape[0]
    if d == 0:
        return 0, "exact", float('inf')
    exact = exact_matrix(h)
    if exact is not None:
        defect = [[(1 if i == j else 0) - exact[i][j] for j in range(d)] for i in range(d)]
        return rank_exact(defect), "exact", float('inf')
    numeric = rank_numeric(np.eye(d) - h.astype(float), tol, get_setting('suspension.gap_warn'))
    return numeric.rank, "numeric", numeric.gap


def mv_report(S: SuspensionData, k: int, tol: float | None = None) -> DegreeReport:
    """Kernel and cokernel contributions to dim H^k(F_h), 0 <= k <= K + 1.

    Out-of-range degrees contribute nothing: there is no H^{-1}(F) and no H^{K+1}(F).
    """
    tol = get_setting('suspension.rank_tol') if tol is None else tol
    if not 0 <= k <= S.K + 1:
        raise ValueError(f"Degree {k} outside 0..{S.K + 1}")
    methods, gaps = set(), []
    kernel = 0
    if k <= S.K:
        rank, method, gap = _rank_of_defect(S.maps[k], tol)
        kernel = S.dims[k] - rank
        methods.add(method)
        gaps.append(gap)
    cokernel = 0
    if k >= 1:
        rank, method, gap = _rank_of_defect(S.maps[k - 1], tol)
        cokernel = S.dims[k - 1] - rank
        methods.add(method)
        gaps.append(gap)
    method = "exact" if methods == {"exact"} else "numeric"
    return DegreeReport(k, kernel, cokernel, method, [g for g in gaps if np.isfinite(g)])


def mv_dimension(S: SuspensionData, k: int, tol: float | None = None) -> int:
    """dim H^k(F_h) = nullity(I - h*_k) + dims[k-1] - rank(I - h*_{k-1})."""
    return mv_report(S, k, tol).dimension


def suspension_dims(S: SuspensionData, tol: float | None = None) -> list[int]:
    """dim H^k(F_h) for k = 0..K+1."""
    return [mv_dimension(S, k, tol) for k in range(S.K + 2)]


def linear_foliation_dims(p: int) -> list[int]:
    """dim H^k of a Diophantine linear foliation with p-dimensional leaves.

    Starts from the flow case (1, 1) and suspends by a map inducing the identity, so each
    step is one application of the Mayer-Vietoris count.
    """
    if p < 1:
        raise ValueError(f"Leaf dimension must be >= 1, got {p}")
    dims = [1, 1]
    for _ in range(p - 1):
        dims = suspension_dims(SuspensionData.identity(dims))
    return dims
