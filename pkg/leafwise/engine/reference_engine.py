from leafwise.config.reference_db import ReferenceRegistry
from leafwise.engine.abstract_analysis_engine import EXIT_OK, AbstractAnalysisEngine


class RefsEngine(AbstractAnalysisEngine):
    """refs: stored statements of known results; an exact id or a substring query."""

    def __init__(self, reference_id: str | None = None, query: str = "", **kwargs):
        super().__init__("refs", **kwargs)
        self.reference_id = reference_id
        self.query = query or ""

    def lookup(self) -> list[dict]:
        """Registry entries for the id or query; also available when a resumed run skips its steps."""
        if self.reference_id:
            return [ReferenceRegistry.get(self.reference_id)]
        return ReferenceRegistry.search(self.query)

    def _loadInputs(self):
        self.recordLiteral("query", self.reference_id or self.query)

    def _compute(self):
        entries = self.lookup()
        self.result = {"entries": entries}
        self.tables["references"] = ReferenceRegistry.as_dataframe()[lambda df: df["id"].isin([e["id"] for e in entries])]
        self.setOutcome(EXIT_OK, "ok")
