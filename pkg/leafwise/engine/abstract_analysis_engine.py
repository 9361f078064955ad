import os
import time
from abc import ABC, abstractmethod
from datetime import datetime, timezone

import pandas as pd

from leafwise import __version__
from leafwise.config.config import LEAFWISE_DB_PATH, default_settings
from leafwise.database.run_database import RunDatabase
from leafwise.utils.artifact_io import load_json_argument, sha256_digest, write_csv, write_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_OBSTRUCTED = 2
EXIT_INCONCLUSIVE = 3


class AbstractAnalysisEngine(ABC):
    """
    One analysis run of a CLI subcommand.
    Steps run in order from stepDict: load and validate inputs, compute, write artifacts.
    Attributes prefixed with _db_ are persisted in the run ledger as they are assigned.
    """

    def __init__(self, command: str, out_dir: str, output_format: str = "json", run_id: str | None = None,
                 db_dir: str | None = None):
        self.runDatabase = RunDatabase(db_dir or LEAFWISE_DB_PATH or os.path.join(out_dir, ".database"))
        self.dataManager = None
        if run_id:
            self.dataManager = self.runDatabase.getRunDataManager(run_id, command)
        if self.dataManager is None:
            self.dataManager = self.runDatabase.createRunDataManager(command)
        self.id = str(self.dataManager._getId())
        self.command = command
        self.out_dir = out_dir
        self.output_format = output_format
        self.inputs = {}
        self.result = {}
        self.tables = {}
        self.exit_code = EXIT_OK
        self.reason = ""
        self.started = time.perf_counter()
        self._db_started_at = datetime.now(timezone.utc).isoformat(timespec='seconds')
        self.stepDict = {
            1: self._loadInputs,
            2: self._compute,
            3: self._writeArtifacts,
        }
        self.default_logger = lambda _: None
        self.logger = self.default_logger
        if self._db_finished:
            self.exit_code = self._db_exit_code or EXIT_OK
        elif self._db_last_completed_step:
            # loaded inputs are not persisted, an interrupted run restarts from its first step
            self._db_last_completed_step = 0

    def __getattr__(self, name):
        if name.startswith('_db_'):
            db_path = name[4:]  # remove '_db_' prefix
            cache_attr = '_' + name
            if cache_attr not in self.__dict__:
                setattr(self, cache_attr, self.dataManager.get(db_path))
            return getattr(self, cache_attr)
        raise AttributeError(f"'{type(self).__name__}' object has no attribute '{name}'")

    def __setattr__(self, name, value):
        if name.startswith('_db_'):
            db_path = name[4:]  # remove '_db_' prefix
            cache_attr = '_' + name
            setattr(self, cache_attr, value)
            self.dataManager.save(db_path, value)
        else:
            super().__setattr__(name, value)

    def set_logger(self, logger):
        self.logger = logger

    def get_total_steps(self):
        return len(self.stepDict)

    def isAnalysisDone(self):
        return bool(self._db_finished)

    def makeAnalysis(self):
        while not self.isAnalysisDone():
            currentStep = (self._db_last_completed_step or 0) + 1
            if currentStep not in self.stepDict:
                raise Exception(f'Incorrect step {currentStep}')
            yield currentStep, f'Current step ({currentStep} / {self.get_total_steps()}) : ' + self.stepDict[currentStep].__name__
            self.stepDict[currentStep]()
            self._db_last_completed_step = currentStep
            if currentStep == self.get_total_steps():
                self._db_finished = True

    def run(self) -> int:
        for step, message in self.makeAnalysis():
            self.logger(message)
        return self.exit_code

    def readInput(self, name: str, argument: str):
        """JSON from a file path or an inline literal; the digest is recorded in the manifest."""
        data, digest = load_json_argument(argument)
        self.inputs[name] = digest
        return data

    def recordLiteral(self, name: str, value):
        self.inputs[name] = sha256_digest(repr(value).encode('utf-8'))

    def setOutcome(self, exit_code: int, status: str, reason: str = ""):
        self.exit_code = exit_code
        self.reason = reason
        self._db_status = status
        self._db_exit_code = exit_code

    @abstractmethod
    def _loadInputs(self):
        pass

    @abstractmethod
    def _compute(self):
        pass

    def _writeArtifacts(self):
        os.makedirs(self.out_dir, exist_ok=True)
        artifacts = {}
        payload = dict(self.result)
        payload["status"] = self._db_status or "ok"
        if self.reason:
            payload["reason"] = self.reason
        result_path = os.path.join(self.out_dir, "result.json")
        write_json(result_path, payload)
        artifacts["result"] = result_path
        if self.output_format == "csv":
            for name, table in self.tables.items():
                path = os.path.join(self.out_dir, f"{name}.csv")
                write_csv(path, pd.DataFrame(table))
                artifacts[name] = path
        manifest_path = os.path.join(self.out_dir, "manifest.json")
        manifest = self.buildManifest()
        write_json(manifest_path, manifest)
        artifacts["manifest"] = manifest_path
        self._db_artifacts = artifacts
        self._db_manifest = manifest
        self.logger(f"Wrote {', '.join(sorted(artifacts.values()))}")

    def buildManifest(self) -> dict:
        return {
            "command": self.command,
            "config": default_settings(),
            "inputs": dict(self.inputs),
            "version": __version__,
            "started_at": self._db_started_at,
            "duration_s": round(time.perf_counter() - self.started, 6),
            "run_id": self.id,
            "exit_code": self.exit_code,
        }
