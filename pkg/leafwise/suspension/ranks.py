import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from leafwise.diophantine.action_matrix import as_exact_rational
from leafwise.errors import RankInstabilityError


def exact_matrix(matrix) -> list[list[Fraction]] | None:
    """Fractions for every entry, or None as soon as one entry is not an exact small rational."""
    rows = np.asarray(matrix, dtype=object)
    if rows.ndim != 2:
        rows = rows.reshape(len(rows), -1)
    out = []
    for row in rows:
        exact_row = []
        for x in row:
            q = as_exact_rational(x)
            if q is None:
                return None
            exact_row.append(q)
        out.append(exact_row)
    return out


def rank_exact(matrix: list[list[Fraction]]) -> int:
    """Rank by fraction-free (Bareiss) elimination on the integer matrix obtained by clearing
    row denominators."""
    rows = []
    for row in matrix:
        den = 1
        for x in row:
            den = math.lcm(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in row])
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    a = [r[:] for r in rows]
    rank = 0
    prev = 1
    for col in range(n):
        pivot = next((r for r in range(rank, m) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(rank + 1, m):
            for c in range(col + 1, n):
                a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = a[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


@dataclass
class NumericRank:
    rank: int
    singular_values: list[float]
    threshold: float

    @property
    def gap(self) -> float:
        kept = [s for s in self.singular_values if s > self.threshold]
        dropped = [s for s in self.singular_values if s <= self.threshold]
        if not kept or not dropped or max(dropped) == 0:
            return float('inf')
        return min(kept) / max(dropped)


def rank_numeric(matrix, tol: float, gap_warn: float | None = None) -> NumericRank:
    """Singular-value rank; raises when a singular value sits within gap_warn of the cut."""
    M = np.asarray(matrix, dtype=float)
    if not M.size:
        return NumericRank(0, [], tol)
    s = scipy.linalg.svdvals(M)
    threshold = tol * max(1.0, float(s.max(initial=0.0)))
    if gap_warn is not None:
        near = s[(s > threshold / gap_warn) & (s < threshold * gap_warn)]
        if len(near):
            raise RankInstabilityError(f"Singular values {near.tolist()} are too close to the rank tolerance {threshold:.1e}")
    return NumericRank(int((s > threshold).sum()), s.tolist(), threshold)
