from leafwise.circle.conjugacy import kam_iterate, linearized_conjugacy
from leafwise.circle.rotation import check_moser_condition, family_rotation_numbers, rotation_number
from leafwise.engine.abstract_analysis_engine import (EXIT_INCONCLUSIVE, EXIT_OBSTRUCTED, EXIT_OK,
                                                      AbstractAnalysisEngine)
from leafwise.utils.progress_logger import AnalysisProgressLogger
from leafwise.utils.schemas import CircleMapModel, FamilyModel, parse

KAM_EXIT_CODES = {
    "converged": EXIT_OK,
    "completed": EXIT_OK,
    "obstructed": EXIT_OBSTRUCTED,
    "orientation_lost": EXIT_INCONCLUSIVE,
    "stalled": EXIT_INCONCLUSIVE,
}


class RotationNumberEngine(AbstractAnalysisEngine):
    """rotation-number: f^n(0)/n with its 1/n enclosure, for one map or every map of a family."""

    def __init__(self, map: str, iters: int | None = None, refine: bool = False, **kwargs):
        super().__init__("rotation-number", **kwargs)
        self.map_arg = map
        self.iters = iters
        self.refine = refine

    def _loadInputs(self):
        data = self.readInput("map", self.map_arg)
        self.recordLiteral("iters", self.iters)
        if isinstance(data, dict) and "maps" in data:
            self.family = parse(FamilyModel, data).to_family()
            self.map = None
        else:
            self.map = parse(CircleMapModel, data).to_map()
            self.family = None

    def _compute(self):
        if self.map is not None:
            estimates = [rotation_number(self.map, self.iters, refine=self.refine)]
        else:
            progress = AnalysisProgressLogger(self.logger)
            estimates = family_rotation_numbers(self.family, self.iters, logger=progress)
            if self.refine:
                estimates = [rotation_number(f, self.iters, refine=True) for f in self.family]
        self.result = {"estimates": [e.to_json() for e in estimates]}
        if len(estimates) == 1:
            self.result.update(estimates[0].to_json())
        self.tables["rotation_numbers"] = [{"map": i + 1, "tau": e.tau, "lift_average": e.lift_average,
                                            "error_bound": e.error_bound} for i, e in enumerate(estimates)]
        self.setOutcome(EXIT_OK, "ok")


class MoserCheckEngine(AbstractAnalysisEngine):
    """moser-check: the simultaneous small-divisor condition for rotation numbers tau_1..tau_p."""

    def __init__(self, taus: str, radius: int, exponent: float, tol: float | None = None, **kwargs):
        super().__init__("moser-check", **kwargs)
        self.taus_arg = taus
        self.radius = radius
        self.exponent = exponent
        self.tol = tol

    def _loadInputs(self):
        taus = self.readInput("taus", self.taus_arg)
        if not isinstance(taus, list):
            taus = [taus]
        self.taus = [t if isinstance(t, str) else float(t) for t in taus]
        self.recordLiteral("radius", self.radius)
        self.recordLiteral("exponent", self.exponent)

    def _compute(self):
        report = check_moser_condition(self.taus, self.radius, self.exponent, self.tol)
        self.result = dict(report.to_json(), taus=self.taus)
        self.tables["shells"] = [{"shell": j, "m": m, "D": d, "D_times_m_exp": s} for j, m, d, s in report.shells]
        if report.passed:
            self.setOutcome(EXIT_OK, "pass")
        else:
            self.setOutcome(EXIT_OBSTRUCTED, "fail",
                            f"minimum {report.minimum:.3e} at m = {report.argmin}")


class KamEngine(AbstractAnalysisEngine):
    """kam: the linearised conjugacy of a commuting family plus a diagnostic Newton loop."""

    def __init__(self, family: str, steps: int, alphas: str | None = None, truncation: int | None = None,
                 tol: float | None = None, **kwargs):
        super().__init__("kam", **kwargs)
        self.family_arg = family
        self.steps = steps
        self.alphas_arg = alphas
        self.truncation = truncation
        self.tol = tol

    def _loadInputs(self):
        self.family = parse(FamilyModel, self.readInput("family", self.family_arg), wrap="maps").to_family()
        self.alphas = None
        if self.alphas_arg is not None:
            alphas = self.readInput("alphas", self.alphas_arg)
            self.alphas = [float(a) for a in (alphas if isinstance(alphas, list) else [alphas])]
        self.recordLiteral("steps", self.steps)

    def _compute(self):
        progress = AnalysisProgressLogger(self.logger)
        report = kam_iterate(self.family, self.steps, self.alphas, self.truncation, self.tol, logger=progress)
        targets = self.alphas or [rotation_number(f).lift_average for f in self.family]
        linear = linearized_conjugacy(self.family, targets, self.tol, check_alpha=False)
        self.result = {"kam": report.to_json(), "linearized": linear.to_json()}
        self.tables["kam_residuals"] = report.residual_table()
        self.setOutcome(KAM_EXIT_CODES[report.status], report.status, report.diagnostic)
