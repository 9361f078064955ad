import math
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from leafwise.config.config import get_setting
from leafwise.errors import RankDeficientError

RANK_TOL = 1e-12


def as_exact_rational(x, max_denominator: int | None = None) -> Fraction | None:
    """The small-denominator rational whose double rounding is x, or None.

    Integers, Fractions and strings like "1/2" are exact by construction.
    """
    if max_denominator is None:
        max_denominator = get_setting('diophantine.max_denominator')
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return None
    value = float(x)
    if not np.isfinite(value):
        return None
    candidate = Fraction(value).limit_denominator(max_denominator)
    if float(candidate) == value:
        return candidate
    return None


class ActionMatrix:
    """p x N real matrix whose rows v_1..v_p generate a linear R^p-action on T^N."""

    def __init__(self, rows: Sequence[Sequence], check_rank: bool = True):
        raw = [list(r) for r in (rows if np.ndim(rows) != 1 else [rows])]
        if not raw or not raw[0]:
            raise ValueError("An action matrix needs at least one non-empty row")
        if len({len(r) for r in raw}) != 1:
            raise ValueError("All generating vectors must have the same length")
        exact = [[as_exact_rational(x) for x in r] for r in raw]
        self.rows = np.array([[float(x) for x in r] for r in raw], dtype=float)
        self.rows.setflags(write=False)
        self.p, self.N = self.rows.shape
        if self.p > self.N:
            raise RankDeficientError(f"{self.p} generators cannot be independent on T^{self.N}")
        self.exact = exact if all(x is not None for r in exact for x in r) else None
        if check_rank and self.rank() < self.p:
            raise RankDeficientError(f"Generating vectors are linearly dependent (rank {self.rank()} < {self.p})")

    @classmethod
    def flow(cls, v: Sequence) -> "ActionMatrix":
        return cls([list(v)])

    def singular_values(self) -> np.ndarray:
        return scipy.linalg.svdvals(self.rows)

    def rank(self) -> int:
        s = self.singular_values()
        return int((s > RANK_TOL * max(s.max(initial=0.0), 1e-300)).sum())

    @property
    def is_rational(self) -> bool:
        return self.exact is not None

    def integer_form(self) -> tuple[np.ndarray, int] | None:
        """(Q, L) with Q integer and V = Q / L exactly, when every entry is rational."""
        if self.exact is None:
            return None
        L = 1
        for r in self.exact:
            for x in r:
                L = math.lcm(L, x.denominator)
        Q = np.array([[int(x * L) for x in r] for r in self.exact], dtype=object)
        return Q, int(L)

    def norm(self) -> float:
        return float(np.linalg.norm(self.rows))

    def scaled(self, s: float) -> "ActionMatrix":
        return ActionMatrix((self.rows * s).tolist())

    def transformed(self, theta) -> "ActionMatrix":
        """Rows of Theta . V"""
        return ActionMatrix((np.asarray(theta, dtype=float) @ self.rows).tolist())

    def to_json(self) -> dict:
        return {"rows": self.rows.tolist()}

    def __eq__(self, other):
        return isinstance(other, ActionMatrix) and np.array_equal(self.rows, other.rows)

    def __repr__(self):
        return f"ActionMatrix(p={self.p}, N={self.N}, rows={self.rows.tolist()})"
