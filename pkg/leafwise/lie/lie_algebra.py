"""Finite-dimensional real Lie algebras given by structure constants c_{ij}^k in a fixed basis."""
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from leafwise.config.config import get_setting
from leafwise.errors import DimensionMismatchError, StructureConstantError


class LieAlgebra:
    """[xi_i, xi_j] = sum_k c[i, j, k] xi_k, with an optional matrix realisation.

    Indices are 0-based in code and 1-based in the JSON format.
    """

    def __init__(self, c, matrices=None, name: str = ""):
        c = np.array(c, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise DimensionMismatchError(f"Structure constants must have shape (n, n, n), got {c.shape}")
        self.n = c.shape[0]
        self.c = c
        self.c.setflags(write=False)
        self.matrices = None
        if matrices is not None:
            mats = np.array(matrices, dtype=float)
            if mats.ndim != 3 or mats.shape[0] != self.n or mats.shape[1] != mats.shape[2]:
                raise DimensionMismatchError(f"Need {self.n} square matrices, got shape {mats.shape}")
            mats.setflags(write=False)
            self.matrices = mats
        self.name = name

    @property
    def matrix_size(self) -> int | None:
        return None if self.matrices is None else self.matrices.shape[1]

    def bracket(self, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
        return np.einsum('i,j,ijk->k', np.asarray(x, float), np.asarray(y, float), self.c)

    def bracket_span(self) -> np.ndarray:
        """All [xi_i, xi_j] as rows, i < j."""
        iu, ju = np.triu_indices(self.n, k=1)
        return self.c[iu, ju, :] if len(iu) else np.zeros((0, self.n))

    def derived_algebra_rank(self, tol: float | None = None) -> int:
        """dim [g, g]."""
        tol = get_setting('liealg.rank_tol') if tol is None else tol
        span = self.bracket_span()
        if not span.size:
            return 0
        s = scipy.linalg.svdvals(span)
        return int((s > tol * max(1.0, s.max(initial=0.0))).sum())

    def change_basis(self, P) -> "LieAlgebra":
        """Algebra in the basis eta_a = sum_i P[a, i] xi_i."""
        P = np.asarray(P, dtype=float)
        if P.shape != (self.n, self.n):
            raise DimensionMismatchError(f"Basis change must be {self.n}x{self.n}, got {P.shape}")
        P_inv = np.linalg.inv(P)
        c = np.einsum('ai,bj,ijk,ke->abe', P, P, self.c, P_inv)
        mats = None if self.matrices is None else np.einsum('ai,ixy->axy', P, self.matrices)
        return LieAlgebra(c, mats, name=self.name)

    def homomorphism_defect(self, theta) -> float:
        """max |Theta[x_i, x_j] - [Theta x_i, Theta x_j]| for Theta acting on coefficient columns."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n, self.n):
            raise DimensionMismatchError(f"Endomorphism must be {self.n}x{self.n}, got {theta.shape}")
        lhs = np.einsum('ijk,lk->ijl', self.c, theta)
        rhs = np.einsum('ai,bj,abk->ijk', theta, theta, self.c)
        return float(np.abs(lhs - rhs).max(initial=0.0))

    def matrix_of(self, coeffs: Sequence[float]) -> np.ndarray:
        if self.matrices is None:
            raise ValueError(f"Algebra {self.name or self.n} has no matrix realisation")
        return np.einsum('k,kxy->xy', np.asarray(coeffs, dtype=complex), self.matrices)

    @classmethod
    def from_matrices(cls, matrices, name: str = "", tol: float | None = None) -> "LieAlgebra":
        """Structure constants read off the commutators of a matrix basis."""
        tol = get_setting('liealg.structure_tol') if tol is None else tol
        mats = np.asarray(matrices, dtype=float)
        n = mats.shape[0]
        basis = mats.reshape(n, -1).T
        if np.linalg.matrix_rank(basis) < n:
            raise StructureConstantError("Matrix basis is linearly dependent")
        c = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                comm = (mats[i] @ mats[j] - mats[j] @ mats[i]).reshape(-1)
                coeffs, *_ = scipy.linalg.lstsq(basis, comm)
                defect = np.abs(basis @ coeffs - comm).max(initial=0.0)
                if defect > tol * max(1.0, np.abs(comm).max(initial=0.0)):
                    raise StructureConstantError(f"[m_{i + 1}, m_{j + 1}] leaves the span of the basis (defect {defect:.3e})")
                c[i, j] = coeffs
        return cls(c, mats, name=name)

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra":
        n = int(data["n"])
        c = np.zeros((n, n, n))
        for entry in data.get("c", []):
            i, j, k = int(entry["i"]) - 1, int(entry["j"]) - 1, int(entry["k"]) - 1
            c[i, j, k] = float(entry["val"])
        return cls(c, data.get("matrices"), name=data.get("name", ""))

    def to_json(self) -> dict:
        entries = [{"i": int(i) + 1, "j": int(j) + 1, "k": int(k) + 1, "val": float(self.c[i, j, k])}
                   for i, j, k in zip(*np.nonzero(self.c))]
        data = {"n": self.n, "c": entries}
        if self.matrices is not None:
            data["matrices"] = self.matrices.tolist()
        if self.name:
            data["name"] = self.name
        return data

    def __repr__(self):
        return f"LieAlgebra({self.name or 'unnamed'}, n={self.n})"


def _antisymmetric(n: int, brackets: dict) -> np.ndarray:
    c = np.zeros((n, n, n))
    for (i, j), out in brackets.items():
        for k, val in out.items():
            c[i, j, k] = val
            c[j, i, k] = -val
    return c


def abelian(p: int) -> LieAlgebra:
    if p < 1:
        raise ValueError(f"Dimension must be >= 1, got {p}")
    mats = np.zeros((p, p, p))
    for k in range(p):
        mats[k, k, k] = 1.0
    return LieAlgebra(np.zeros((p, p, p)), mats, name=f"abelian{p}")


def heisenberg() -> LieAlgebra:
    """[xi_1, xi_2] = xi_3, realised by strictly upper-triangular 3x3 matrices."""
    mats = np.zeros((3, 3, 3))
    mats[0, 0, 1] = 1.0
    mats[1, 1, 2] = 1.0
    mats[2, 0, 2] = 1.0
    return LieAlgebra(_antisymmetric(3, {(0, 1): {2: 1.0}}), mats, name="heisenberg")


def ga() -> LieAlgebra:
    """Affine group of the line: [xi_1, xi_2] = xi_2."""
    mats = np.array([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 1.0], [0.0, 0.0]]])
    return LieAlgebra(_antisymmetric(2, {(0, 1): {1: 1.0}}), mats, name="ga")


def sl2() -> LieAlgebra:
    """Basis (H, E, F): [H, E] = 2E, [H, F] = -2F, [E, F] = H."""
    H = np.array([[1.0, 0.0], [0.0, -1.0]])
    E = np.array([[0.0, 1.0], [0.0, 0.0]])
    F = np.array([[0.0, 0.0], [1.0, 0.0]])
    c = _antisymmetric(3, {(0, 1): {1: 2.0}, (0, 2): {2: -2.0}, (1, 2): {0: 1.0}})
    return LieAlgebra(c, np.array([H, E, F]), name="sl2")


def n_upper(d: int) -> LieAlgebra:
    """Strictly upper-triangular d x d matrices (nilpotent, dimension d(d-1)/2)."""
    if d < 2:
        raise ValueError(f"Need d >= 2, got {d}")
    mats = []
    for a in range(d):
        for b in range(a + 1, d):
            m = np.zeros((d, d))
            m[a, b] = 1.0
            mats.append(m)
    return LieAlgebra.from_matrices(np.array(mats), name=f"n{d}")


STANDARD_ALGEBRAS = {
    "heisenberg": heisenberg,
    "ga": ga,
    "sl2": sl2,
}


@dataclass
class ValidationReport:
    antisymmetry: float
    jacobi: float
    realisation: float | None
    passed: bool
    violation: tuple[int, ...] | None = None
    messages: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"antisymmetry": self.antisymmetry, "jacobi": self.jacobi, "realisation": self.realisation,
                "passed": self.passed, "violation": list(self.violation) if self.violation else None,
                "messages": self.messages}


def jacobi_tensor(c: np.ndarray) -> np.ndarray:
    """J[i,j,k,m] = sum_l c_ij^l c_lk^m + c_jk^l c_li^m + c_ki^l c_lj^m."""
    return (np.einsum('ijl,lkm->ijkm', c, c)
            + np.einsum('jkl,lim->ijkm', c, c)
            + np.einsum('kil,ljm->ijkm', c, c))


def validate(L: LieAlgebra, tol: float | None = None) -> ValidationReport:
    """Antisymmetry, Jacobi and (when present) matrix-realisation residuals."""
    tol = get_setting('liealg.structure_tol') if tol is None else tol
    anti = L.c + np.transpose(L.c, (1, 0, 2))
    jac = jacobi_tensor(L.c)
    anti_max = float(np.abs(anti).max(initial=0.0))
    jac_max = float(np.abs(jac).max(initial=0.0))
    messages = []
    violation = None
    if anti_max > tol:
        i, j, k = np.unravel_index(np.argmax(np.abs(anti)), anti.shape)
        violation = (int(i) + 1, int(j) + 1, int(k) + 1)
        messages.append(f"c_{{{i + 1}{j + 1}}}^{k + 1} + c_{{{j + 1}{i + 1}}}^{k + 1} = {anti[i, j, k]:.3e}")
    if jac_max > tol:
        idx = np.unravel_index(np.argmax(np.abs(jac)), jac.shape)
        if violation is None:
            violation = tuple(int(x) + 1 for x in idx)
        messages.append(f"Jacobi residual {jac[idx]:.3e} at (i, j, k, m) = {tuple(int(x) + 1 for x in idx)}")

    realisation = None
    if L.matrices is not None:
        mats = L.matrices
        comm = np.einsum('ixy,jyz->ijxz', mats, mats) - np.einsum('jxy,iyz->ijxz', mats, mats)
        target = np.einsum('ijk,kxz->ijxz', L.c, mats)
        realisation = float(np.abs(comm - target).max(initial=0.0))
        if realisation > tol:
            messages.append(f"Matrix commutators deviate from the structure constants by {realisation:.3e}")
    passed = anti_max <= tol and jac_max <= tol and (realisation is None or realisation <= tol)
    return ValidationReport(antisymmetry=anti_max, jacobi=jac_max, realisation=realisation,
                            passed=passed, violation=violation, messages=messages)


def require_valid(L: LieAlgebra, tol: float | None = None) -> ValidationReport:
    report = validate(L, tol)
    if not report.passed:
        raise StructureConstantError(f"Lie algebra {L.name or L.n} fails validation: {'; '.join(report.messages)}")
    return report


def random_nilpotent(d: int, rng: np.random.Generator, n_generators: int = 2, density: float = 0.5) -> LieAlgebra:
    """Subalgebra of n_upper(d) generated by random integer combinations; nilpotent by construction."""
    base = n_upper(d)
    gens = []
    while len(gens) < n_generators:
        weights = rng.integers(-2, 3, size=base.n) * (rng.random(base.n) < density)
        if np.any(weights):
            gens.append(np.einsum('k,kxy->xy', weights.astype(float), base.matrices))
    span = _bracket_closure(gens)
    return LieAlgebra.from_matrices(np.array(span), name=f"nilpotent{len(span)}")


def _bracket_closure(generators: list) -> list:
    basis: list = []

    def add(m) -> bool:
        flat = np.array([b.reshape(-1) for b in basis + [m]])
        if np.linalg.matrix_rank(flat, tol=1e-9) == len(basis) + 1:
            basis.append(m)
            return True
        return False

    for g in generators:
        add(g)
    grew = True
    while grew:
        grew = False
        for a in list(basis):
            for b in list(basis):
                grew |= add(a @ b - b @ a)
    return basis
