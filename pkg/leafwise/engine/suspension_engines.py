from leafwise.engine.abstract_analysis_engine import EXIT_OK, AbstractAnalysisEngine
from leafwise.suspension.mayer_vietoris import mv_report
from leafwise.suspension.toral import HyperbolicMatrix, toral_pipeline
from leafwise.utils.schemas import IntegerMatrixModel, SuspensionModel, parse


class SuspensionH1Engine(AbstractAnalysisEngine):
    """suspension-h1: dim H^k of a suspension foliation in every degree 0..K+1."""

    def __init__(self, data: str, tol: float | None = None, **kwargs):
        super().__init__("suspension-h1", **kwargs)
        self.data_arg = data
        self.tol = tol

    def _loadInputs(self):
        self.suspension = parse(SuspensionModel, self.readInput("data", self.data_arg)).to_suspension()

    def _compute(self):
        reports = [mv_report(self.suspension, k, self.tol) for k in range(self.suspension.K + 2)]
        dims = [r.dimension for r in reports]
        self.result = {"data": self.suspension.to_json(), "dims": dims, "h1_dim": dims[1],
                       "degrees": [r.to_json() for r in reports]}
        self.tables["degrees"] = [{"degree": r.degree, "kernel": r.kernel, "cokernel": r.cokernel,
                                   "dimension": r.dimension, "method": r.method} for r in reports]
        self.setOutcome(EXIT_OK, "ok")


class ToralEngine(AbstractAnalysisEngine):
    """toral: expanding eigenvalue, stable direction and dim H^1 of a hyperbolic 2x2 suspension."""

    def __init__(self, matrix: str, **kwargs):
        super().__init__("toral", **kwargs)
        self.matrix_arg = matrix

    def _loadInputs(self):
        model = parse(IntegerMatrixModel, self.readInput("matrix", self.matrix_arg), wrap="rows")
        self.A = HyperbolicMatrix(model.rows)

    def _compute(self):
        report = toral_pipeline(self.A)
        self.result = report.to_json()
        self.setOutcome(EXIT_OK, "ok")
