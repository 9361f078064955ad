import os
import re

import numpy as np

from leafwise.engine.abstract_analysis_engine import EXIT_OK, AbstractAnalysisEngine
from leafwise.lie.chevalley_eilenberg import cohomology_dims, first_cohomology_oracle
from leafwise.lie.lie_algebra import STANDARD_ALGEBRAS, LieAlgebra, abelian, n_upper, random_nilpotent, validate
from leafwise.utils.schemas import AlgebraModel, parse


def standard_algebra(name: str) -> LieAlgebra | None:
    """heisenberg, ga, sl2, abelian<p> or n<d>; None for any other name."""
    if name in STANDARD_ALGEBRAS:
        return STANDARD_ALGEBRAS[name]()
    match = re.fullmatch(r"abelian(\d+)", name)
    if match:
        return abelian(int(match.group(1)))
    match = re.fullmatch(r"n(\d+)", name)
    if match:
        return n_upper(int(match.group(1)))
    return None


class LieCohomologyEngine(AbstractAnalysisEngine):
    """lie-cohomology: Betti numbers of a Lie algebra from its Chevalley-Eilenberg complex."""

    def __init__(self, algebra: str | None = None, random_nilpotent_dim: int | None = None, seed: int = 0,
                 tol: float | None = None, **kwargs):
        super().__init__("lie-cohomology", **kwargs)
        self.algebra_arg = algebra
        self.random_nilpotent_dim = random_nilpotent_dim
        self.seed = seed
        self.tol = tol

    def _loadInputs(self):
        if self.random_nilpotent_dim is not None:
            self.recordLiteral("random_nilpotent", self.random_nilpotent_dim)
            self.recordLiteral("seed", self.seed)
            self.algebra = random_nilpotent(self.random_nilpotent_dim, np.random.default_rng(self.seed))
            return
        if self.algebra_arg is None:
            raise ValueError("Provide --algebra (a JSON file or a standard name) or --random-nilpotent D")
        named = None if os.path.isfile(self.algebra_arg) else standard_algebra(self.algebra_arg)
        if named is not None:
            self.recordLiteral("algebra", self.algebra_arg)
            self.algebra = named
            return
        self.algebra = parse(AlgebraModel, self.readInput("algebra", self.algebra_arg)).to_algebra()

    def _compute(self):
        validation = validate(self.algebra)
        self.logger(f"Computing H^*({self.algebra.name or 'g'}) for n = {self.algebra.n}")
        report = cohomology_dims(self.algebra, self.tol)
        self.result = {"algebra_data": self.algebra.to_json(), "validation": validation.to_json(),
                       "report": report.to_json(), "h1_oracle": first_cohomology_oracle(self.algebra)}
        self.tables["betti"] = [{"degree": k, "dim": d} for k, d in enumerate(report.dims)]
        for warning in report.warnings:
            self.logger(warning)
        self.setOutcome(EXIT_OK, "ok")
