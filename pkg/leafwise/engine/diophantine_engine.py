from leafwise.config.config import get_setting
from leafwise.diophantine.small_divisors import estimate_type
from leafwise.engine.abstract_analysis_engine import (EXIT_INCONCLUSIVE, EXIT_OBSTRUCTED, EXIT_OK,
                                                      AbstractAnalysisEngine)
from leafwise.utils.progress_logger import AnalysisProgressLogger
from leafwise.utils.schemas import MatrixModel, parse


class DiophantineScanEngine(AbstractAnalysisEngine):
    """diophantine-scan: Diophantine type estimate, offenders and exact resonances up to a radius.

    Exact resonances exit as obstructed; a Liouville-like divisor profile is inconclusive.
    """

    def __init__(self, matrix: str, radius: int, budget: int | None = None, **kwargs):
        super().__init__("diophantine-scan", **kwargs)
        self.matrix_arg = matrix
        self.radius = radius
        self.budget = budget

    def _loadInputs(self):
        self.V = parse(MatrixModel, self.readInput("matrix", self.matrix_arg), wrap="rows").to_action()
        self.recordLiteral("radius", self.radius)

    def _compute(self):
        budget = get_setting('diophantine.mode_budget') if self.budget is None else self.budget
        progress = AnalysisProgressLogger(self.logger, every=64)
        report = estimate_type(self.V, self.radius, budget, logger=progress)
        self.result = {"matrix": self.V.to_json(), "report": report.to_json()}
        self.tables["offenders"] = [dict({f"m{i + 1}": x for i, x in enumerate(m)},
                                         delta=d, delta_times_norm_tau=s) for m, d, s in report.offenders]
        self.tables["tau_by_radius"] = [{"radius": r, "tau": t} for r, t in report.tau_by_radius]
        if report.resonances:
            self.setOutcome(EXIT_OBSTRUCTED, "resonant", f"{len(report.resonances)} exact integer relations up to radius {self.radius}")
        elif report.liouville_like:
            self.setOutcome(EXIT_INCONCLUSIVE, "liouville_like",
                            f"tau estimate {report.tau_estimate:.3g} exceeds the Dirichlet exponent")
        else:
            self.setOutcome(EXIT_OK, "diophantine")
