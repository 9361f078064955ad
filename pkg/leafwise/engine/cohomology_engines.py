import numpy as np

from leafwise.cohomology.cohomological_equation import SolveStatus, solve_action, solve_flow
from leafwise.cohomology.obstructions import (NotEquivalent, infinitesimal_rigidity_report, obstruction_space,
                                              parameter_equivalence)
from leafwise.config.config import get_setting
from leafwise.engine.abstract_analysis_engine import (EXIT_INCONCLUSIVE, EXIT_OBSTRUCTED, EXIT_OK,
                                                      AbstractAnalysisEngine)
from leafwise.fourier.fourier_io import series_to_json
from leafwise.fourier.fourier_series import (FourierSeries, directional_derivative, random_series,
                                             sup_norm_estimate)
from leafwise.utils.schemas import MatrixModel, OneFormModel, SeriesModel, parse

SOLVE_EXIT_CODES = {
    SolveStatus.SOLVED: EXIT_OK,
    SolveStatus.OBSTRUCTED: EXIT_OBSTRUCTED,
    SolveStatus.DIVERGENT: EXIT_INCONCLUSIVE,
}


def residual_rows(report) -> list[dict]:
    rows = []
    for m, abs_f, divisor, abs_g in report.residual_table:
        row = {f"m{i + 1}": x for i, x in enumerate(m)}
        row.update({"abs_f": abs_f, "divisor": divisor, "abs_g": abs_g})
        rows.append(row)
    return rows


class SolveCohomEqEngine(AbstractAnalysisEngine):
    """solve-cohomeq: f = X_v g + c for a flow, or omega = d_F g + c for an action.

    Without --field a manufactured right-hand side X_v g* + c is built from a seeded random
    band-limited g* and the recovery error is reported.
    """

    def __init__(self, matrix: str, field: str | None = None, manufactured_radius: int | None = None,
                 seed: int = 0, tol: float | None = None, blowup_factor: float | None = None, **kwargs):
        super().__init__("solve-cohomeq", **kwargs)
        self.matrix_arg = matrix
        self.field_arg = field
        self.manufactured_radius = manufactured_radius
        self.seed = seed
        self.tol = tol
        self.blowup_factor = blowup_factor

    def _loadInputs(self):
        self.V = parse(MatrixModel, self.readInput("matrix", self.matrix_arg), wrap="rows").to_action()
        self.g_star = None
        if self.field_arg is None:
            if self.manufactured_radius is None:
                raise ValueError("Provide --field, or --manufactured RADIUS for a seeded manufactured solution")
            if self.V.p != 1:
                raise ValueError("Manufactured solutions are only generated for flows (p = 1)")
            self.recordLiteral("seed", self.seed)
            self.recordLiteral("manufactured", self.manufactured_radius)
            rng = np.random.default_rng(self.seed)
            self.g_star = random_series(self.V.N, self.manufactured_radius, 12, rng, real=True)
            c = float(rng.normal())
            self.f = directional_derivative(self.g_star, self.V.rows[0]) + FourierSeries.constant(self.V.N, c)
            self.omega = None
            return
        data = self.readInput("field", self.field_arg)
        if isinstance(data, dict) and "components" in data:
            self.omega = parse(OneFormModel, data).to_form(self.V)
            self.f = None
        else:
            self.f = parse(SeriesModel, data).to_series()
            self.omega = None
            if self.V.p != 1:
                raise ValueError(f"A scalar field needs a flow; the action has {self.V.p} generators")

    def _compute(self):
        if self.omega is None:
            self.logger(f"Solving the cohomological equation of a flow on T^{self.V.N} ({len(self.f)} modes)")
            report = solve_flow(self.f, self.V.rows[0], self.tol, self.blowup_factor)
        else:
            self.logger(f"Primitivising a leafwise 1-form of a {self.V.p}-action on T^{self.V.N}")
            report = solve_action(self.omega, self.tol, self.blowup_factor)
        self.result = {"matrix": self.V.to_json(), "report": report.to_json()}
        if self.g_star is not None:
            error = report.g - self.g_star
            error = error - FourierSeries.constant(error.dims, error.mean().real)
            self.result["manufactured"] = {"seed": self.seed, "g_star": series_to_json(self.g_star),
                                           "sup_error": sup_norm_estimate(error)}
        self.tables["residual_table"] = residual_rows(report)
        self.tables["obstruction_basis"] = [{f"m{i + 1}": x for i, x in enumerate(m)}
                                            for m in report.obstruction_modes]
        reason = ""
        if report.status is SolveStatus.OBSTRUCTED:
            reason = f"resonant modes {report.obstruction_modes} carry nonzero coefficients"
        elif report.status is SolveStatus.DIVERGENT:
            reason = f"amplification {report.amplification:.3e}, residual {report.residual_sup:.3e}"
        self.setOutcome(SOLVE_EXIT_CODES[report.status], report.status.value, reason)


class EquivalenceEngine(AbstractAnalysisEngine):
    """equivalence: Theta with V2 = Theta V1, or the principal angle separating the row spaces."""

    def __init__(self, v1: str, v2: str, tol: float | None = None, **kwargs):
        super().__init__("equivalence", **kwargs)
        self.v1_arg = v1
        self.v2_arg = v2
        self.tol = tol

    def _loadInputs(self):
        self.V1 = parse(MatrixModel, self.readInput("v1", self.v1_arg), wrap="rows").to_action()
        self.V2 = parse(MatrixModel, self.readInput("v2", self.v2_arg), wrap="rows").to_action()

    def _compute(self):
        outcome = parameter_equivalence(self.V1, self.V2, self.tol)
        if isinstance(outcome, NotEquivalent):
            self.result = outcome.to_json()
            self.setOutcome(EXIT_OBSTRUCTED, "not_equivalent",
                            f"row spaces differ by a principal angle of {outcome.angle:.3e} rad")
            return
        residual = float(np.abs(outcome @ self.V1.rows - self.V2.rows).max(initial=0.0))
        self.result = {"equivalent": True, "theta": outcome.tolist(), "residual": residual}
        self.tables["theta"] = [{f"col{j + 1}": x for j, x in enumerate(row)} for row in outcome.tolist()]
        self.setOutcome(EXIT_OK, "equivalent")


class ObstructionsEngine(AbstractAnalysisEngine):
    """obstructions: resonant modes up to the truncation radius and the obstruction dimension."""

    def __init__(self, matrix: str, radius: int, **kwargs):
        super().__init__("obstructions", **kwargs)
        self.matrix_arg = matrix
        self.radius = radius

    def _loadInputs(self):
        self.V = parse(MatrixModel, self.readInput("matrix", self.matrix_arg), wrap="rows").to_action()
        self.recordLiteral("radius", self.radius)

    def _compute(self):
        space = obstruction_space(self.V, self.radius, get_setting('diophantine.mode_budget'))
        self.result = space.to_json()
        self.tables["obstruction_basis"] = [dict({"generator": i + 1}, **{f"m{k + 1}": x for k, x in enumerate(m)})
                                            for i, m in space.basis()]
        self.setOutcome(EXIT_OK, "ok")


class RigidityReportEngine(AbstractAnalysisEngine):
    """rigidity-report: truncated dimension of the infinitesimal deformation space."""

    def __init__(self, matrix: str, radius: int, **kwargs):
        super().__init__("rigidity-report", **kwargs)
        self.matrix_arg = matrix
        self.radius = radius

    def _loadInputs(self):
        self.V = parse(MatrixModel, self.readInput("matrix", self.matrix_arg), wrap="rows").to_action()
        self.recordLiteral("radius", self.radius)

    def _compute(self):
        report = infinitesimal_rigidity_report(self.V, self.radius)
        self.result = report.to_json()
        self.setOutcome(EXIT_OK, "rigid" if report.infinitesimally_rigid else "deformable")

