"""Finite-truncation obstruction spaces, deformation counts and parameter equivalence of actions."""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from leafwise.config.config import get_setting
from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.diophantine.small_divisors import resonance_lattice
from leafwise.errors import DimensionMismatchError, RankDeficientError


@dataclass
class ObstructionSpace:
    """Resonant modes up to the truncation radius.

    Every +-m pair carries one complex coefficient per generator that no primitive can
    absorb, so the real dimension is 2 p times the number of pairs.
    """
    V: ActionMatrix
    M: int
    modes: list[tuple[int, ...]]

    @property
    def pairs(self) -> int:
        return len(self.modes) // 2

    @property
    def dimension(self) -> int:
        return 2 * self.V.p * self.pairs

    def basis(self) -> list[tuple[int, tuple[int, ...]]]:
        """(generator index, mode) labels of the complex obstruction directions, one per pair."""
        half = [m for m in self.modes if m > tuple(-x for x in m)]
        return [(i, m) for m in half for i in range(self.V.p)]

    def to_json(self) -> dict:
        return {"M": self.M, "modes": [list(m) for m in self.modes],
                "pairs": self.pairs, "dimension": self.dimension}


def obstruction_space(V: ActionMatrix, M: int, budget: int | None = None) -> ObstructionSpace:
    return ObstructionSpace(V=V, M=M, modes=resonance_lattice(V, M, budget))


@dataclass
class RigidityReport:
    M: int
    normal_rank: int
    constant_dimension: int
    obstruction_dimension: int
    dimension: int

    @property
    def infinitesimally_rigid(self) -> bool:
        return self.dimension == 0

    def to_json(self) -> dict:
        return {"M": self.M, "normal_rank": self.normal_rank, "constant_dimension": self.constant_dimension,
                "obstruction_dimension": self.obstruction_dimension, "dimension": self.dimension,
                "infinitesimally_rigid": self.infinitesimally_rigid}


def infinitesimal_rigidity_report(V: ActionMatrix, M: int, budget: int | None = None) -> RigidityReport:
    """Truncated dimension of H^1(F; nu): (leafwise constants + obstructions) times normal rank.

    The normal bundle is trivial of rank N - p, so H^1(F; nu) is H^1(F) tensor R^(N - p) and every
    class of H^1(F) counts N - p times: the p leafwise-constant classes give p (N - p), each
    obstruction dimension gives another N - p. A linear action on a torus is therefore never
    infinitesimally rigid.
    """
    if V.p >= V.N:
        raise DimensionMismatchError(f"Orbit foliation of a {V.p}-action on T^{V.N} has no normal directions")
    normal = V.N - V.p
    obstructions = obstruction_space(V, M, budget)
    return RigidityReport(M=M, normal_rank=normal, constant_dimension=V.p * normal,
                          obstruction_dimension=obstructions.dimension,
                          dimension=(V.p + obstructions.dimension) * normal)


@dataclass
class NotEquivalent:
    """Row spaces differ; angle is the largest principal angle between them (radians)."""
    angle: float

    def to_json(self) -> dict:
        return {"equivalent": False, "angle": self.angle}


def parameter_equivalence(V1: ActionMatrix, V2: ActionMatrix, tol: float | None = None) -> np.ndarray | NotEquivalent:
    """Theta in GL(p, R) with V2 = Theta V1 when both actions have the same orbit foliation."""
    if (V1.p, V1.N) != (V2.p, V2.N):
        raise DimensionMismatchError(f"Cannot compare a {V1.p}x{V1.N} action with a {V2.p}x{V2.N} one")
    for V in (V1, V2):
        if V.rank() < V.p:
            raise RankDeficientError(f"Action matrix has rank {V.rank()} < {V.p}")
    tol = get_setting('liealg.rank_tol') if tol is None else tol
    angle = float(np.max(scipy.linalg.subspace_angles(V1.rows.T, V2.rows.T)))
    if angle > tol:
        return NotEquivalent(angle=angle)
    theta_t, *_ = scipy.linalg.lstsq(V1.rows.T, V2.rows.T)
    return theta_t.T
