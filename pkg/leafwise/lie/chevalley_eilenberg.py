"""Chevalley-Eilenberg complex (Lambda^* g^*, d_g) with trivial coefficients.

(d alpha)(xi_0, ..., xi_k) = sum_{i<j} (-1)^(i+j) alpha([xi_i, xi_j], xi_0, ..., ^i, ..., ^j, ..., xi_k)

Basis of Lambda^k g^*: wedges alpha_T = alpha_{t_1} ^ ... ^ alpha_{t_k} over increasing
index tuples T in lexicographic order.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
import scipy.linalg

from leafwise.config.config import get_setting
from leafwise.errors import RankInstabilityError
from leafwise.lie.lie_algebra import LieAlgebra, require_valid


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(n), k))


def ce_differential(L: LieAlgebra, k: int) -> np.ndarray:
    """Matrix of d^k: Lambda^k g^* -> Lambda^{k+1} g^*, shape (C(n, k+1), C(n, k))."""
    n = L.n
    if not 0 <= k <= n:
        raise ValueError(f"Degree must lie in [0, {n}], got {k}")
    rows = wedge_basis(n, k + 1)
    cols = wedge_basis(n, k)
    col_index = {T: c for c, T in enumerate(cols)}
    D = np.zeros((len(rows), len(cols)))
    for r, S in enumerate(rows):
        for i in range(len(S)):
            for j in range(i + 1, len(S)):
                rest = S[:i] + S[i + 1:j] + S[j + 1:]
                out = L.c[S[i], S[j]]
                for l in np.flatnonzero(out):
                    if l in rest:
                        continue
                    # alpha_T(xi_l, rest) with rest increasing: sign of moving l into place
                    position = sum(1 for x in rest if x < l)
                    T = tuple(sorted(rest + (int(l),)))
                    D[r, col_index[T]] += (-1) ** (i + j) * (-1) ** position * out[l]
    return D


def differentials(L: LieAlgebra) -> list[np.ndarray]:
    return [ce_differential(L, k) for k in range(L.n + 1)]


def square_residual(L: LieAlgebra) -> float:
    """max |d^{k+1} d^k| over all degrees."""
    ds = differentials(L)
    return max((float(np.abs(ds[k + 1] @ ds[k]).max(initial=0.0)) for k in range(L.n)), default=0.0)


@dataclass
class RankDiagnostic:
    """Numerical rank of one differential and the singular values on either side of the cut."""
    degree: int
    rank: int
    smallest_kept: float | None
    largest_dropped: float | None

    @property
    def gap(self) -> float:
        if self.smallest_kept is None or not self.largest_dropped:
            return float('inf')
        return self.smallest_kept / self.largest_dropped


@dataclass
class CohomologyReport:
    algebra: str
    n: int
    dims: list[int]
    ranks: list[RankDiagnostic] = field(default_factory=list)
    square_residual: float = 0.0
    warnings: list[str] = field(default_factory=list)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "n": self.n,
            "dims": self.dims,
            "ranks": [{"degree": r.degree, "rank": r.rank, "smallest_kept": r.smallest_kept,
                       "largest_dropped": r.largest_dropped} for r in self.ranks],
            "square_residual": self.square_residual,
            "euler_characteristic": self.euler_characteristic,
            "warnings": self.warnings,
        }


def numeric_rank(D: np.ndarray, degree: int, tol: float, gap_warn: float) -> RankDiagnostic:
    if not D.size:
        return RankDiagnostic(degree, 0, None, None)
    s = scipy.linalg.svdvals(D)
    threshold = tol * max(1.0, float(s.max(initial=0.0)))
    kept = s[s > threshold]
    dropped = s[s <= threshold]
    diag = RankDiagnostic(degree, int(len(kept)),
                          float(kept.min()) if len(kept) else None,
                          float(dropped.max()) if len(dropped) else None)
    near = s[(s > threshold / gap_warn) & (s < threshold * gap_warn)]
    if len(near):
        raise RankInstabilityError(f"d^{degree} has singular values {near.tolist()} within a factor "
                                   f"{gap_warn:g} of the rank tolerance {threshold:.1e}")
    return diag


def cohomology_dims(L: LieAlgebra, tol: float | None = None) -> CohomologyReport:
    """dim H^k = dim ker d^k - rank d^{k-1}, k = 0..n."""
    require_valid(L)
    tol = get_setting('liealg.rank_tol') if tol is None else tol
    gap_warn = get_setting('liealg.gap_warn')
    n = L.n
    ds = differentials(L)
    ranks = [numeric_rank(D, k, tol, gap_warn) for k, D in enumerate(ds)]
    dims = []
    for k in range(n + 1):
        kernel = math.comb(n, k) - ranks[k].rank
        image = ranks[k - 1].rank if k > 0 else 0
        dims.append(kernel - image)
    warnings = []
    finite_gaps = [r.gap for r in ranks if np.isfinite(r.gap)]
    if finite_gaps and min(finite_gaps) < gap_warn:
        warnings.append(f"Thin spectral gap {min(finite_gaps):.3g} in the rank decisions")
    residual = max((float(np.abs(ds[k + 1] @ ds[k]).max(initial=0.0)) for k in range(n)), default=0.0)
    return CohomologyReport(algebra=L.name, n=n, dims=dims, ranks=ranks,
                            square_residual=residual, warnings=warnings)


def first_cohomology_oracle(L: LieAlgebra) -> int:
    """dim H^1 = dim g - dim [g, g]."""
    return L.n - L.derived_algebra_rank()
