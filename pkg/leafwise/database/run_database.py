from uuid import uuid4

from leafwise.database.db_document import TinyDocument
from leafwise.database.run_data_manager import RunDataManager

RUN_DB_NAME = "run_db"
RUN_COLLECTION = "runs"


class RunDatabase:
    """Ledger of analysis runs, one TinyDB document per run."""

    def __init__(self, db_dir: str):
        self.db_dir = db_dir

    def getRunDataManager(self, run_id: str, command: str):
        try:
            db_doc = TinyDocument(self.db_dir, RUN_DB_NAME, RUN_COLLECTION, run_id)
        except KeyError:
            return None
        return RunDataManager(db_doc, command, False)

    def createRunDataManager(self, command: str) -> RunDataManager:
        new_run_id = uuid4().hex[:24]
        db_doc = TinyDocument(self.db_dir, RUN_DB_NAME, RUN_COLLECTION, new_run_id, create=True)
        return RunDataManager(db_doc, command, True)
