import os
import shutil
import tempfile
import unittest
from fractions import Fraction

import numpy as np
import pandas as pd

from leafwise.config.config import apply_settings, get_setting, load_settings, write_yaml_config
from leafwise.config.reference_db import REFERENCE_ONLY_NOTE, ReferenceRegistry
from leafwise.database.db_document import TinyDocument
from leafwise.database.run_database import RunDatabase
from leafwise.errors import UnknownReferenceError
from leafwise.utils.artifact_io import dumps, load_json_argument, read_json, write_csv, write_json


class TestTinyDocument(unittest.TestCase):
    """Run ledger documents stored with TinyDB."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_save_get_delete(self):
        """Dotted keys create nested entries; delete removes a top-level key."""
        doc = TinyDocument(self.test_dir, "test_db", "runs", "abc", create=True)
        doc._save({"status": "ok", "artifacts.result": "out/result.json"})
        self.assertEqual(doc._get("status"), "ok")
        self.assertEqual(doc._get("artifacts"), {"result": "out/result.json"})
        self.assertEqual(doc._get("artifacts.result"), "out/result.json")
        self.assertIsNone(doc._get("missing.key"))
        doc._delete("status")
        self.assertIsNone(doc._get("status"))
        with self.assertRaises(KeyError):
            doc._delete("status")

    def test_missing_document(self):
        """Opening an unknown id without create fails."""
        with self.assertRaises(KeyError):
            TinyDocument(self.test_dir, "test_db", "runs", "nope")

    def test_run_database(self):
        """New runs start at step 0 and can be reopened by id."""
        db = RunDatabase(self.test_dir)
        manager = db.createRunDataManager("toral")
        run_id = manager._getId()
        self.assertEqual(len(run_id), 24)
        self.assertEqual(manager.get("command"), "toral")
        self.assertEqual(manager.get("last_completed_step"), 0)
        manager.save("finished", True)
        reopened = db.getRunDataManager(run_id, "toral")
        self.assertTrue(reopened.get("finished"))
        self.assertIsNone(db.getRunDataManager("0" * 24, "toral"))


class TestSettings(unittest.TestCase):
    """Packaged YAML defaults overlaid by user files."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        apply_settings()
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_defaults(self):
        """Numeric defaults come from defaults.yaml."""
        self.assertEqual(get_setting('cohomeq.blowup_factor'), 1e6)
        self.assertEqual(get_setting('circle.grid'), 256)
        self.assertEqual(get_setting('cli.csv_digits'), 17)

    def test_user_file_overrides(self):
        """A user YAML file replaces only the keys it names."""
        path = os.path.join(self.test_dir, "user.yaml")
        write_yaml_config(path, {"cohomeq": {"tol": 1e-6}})
        settings = load_settings(path)
        self.assertEqual(get_setting('cohomeq.tol', settings), 1e-6)
        self.assertEqual(get_setting('cohomeq.decay_order', settings), 2)
        resolved = apply_settings(path, {"circle": {"grid": 512}})
        self.assertEqual(resolved["circle"]["grid"], 512)
        self.assertEqual(get_setting('cohomeq.tol'), 1e-6)

    def test_missing_user_file(self):
        """A configuration path that does not exist is an error."""
        with self.assertRaises(FileNotFoundError):
            load_settings(os.path.join(self.test_dir, "absent.yaml"))

    def test_unknown_setting(self):
        """Undefined keys raise KeyError."""
        with self.assertRaises(KeyError):
            get_setting('cohomeq.nope')


class TestReferenceRegistry(unittest.TestCase):
    """Stored statements of known results."""

    def test_get_by_id(self):
        """weyl-chamber is stored as a statement only."""
        entry = ReferenceRegistry.get("weyl-chamber")
        self.assertEqual(entry["statement"], "H^1(A_p) ≅ R^p, p ≥ 2")
        self.assertEqual(entry["note"], REFERENCE_ONLY_NOTE)
        self.assertFalse(ReferenceRegistry.is_computed("weyl-chamber"))

    def test_entries_carry_their_published_source(self):
        """Every entry names where its statement was proved."""
        self.assertIn("Katok and Spatzier", ReferenceRegistry.get("weyl-chamber")["anchor"])
        self.assertIn("Mieczkowski", ReferenceRegistry.get("sl2c-parabolic")["anchor"])
        self.assertIn("Matsumoto and Mitsumatsu", ReferenceRegistry.get("ga-parameter-rigidity")["anchor"])
        self.assertIn("Asaoka", ReferenceRegistry.get("gac-local-parameter-rigidity")["anchor"])
        self.assertFalse(ReferenceRegistry.is_computed("ga-parameter-rigidity"))
        for entry in ReferenceRegistry.search():
            self.assertTrue(entry["anchor"], entry["id"])
        self.assertEqual([e["id"] for e in ReferenceRegistry.search("asaoka")], ["gac-local-parameter-rigidity"])

    def test_computed_entries_name_their_operation(self):
        """The toral suspension result is computed by leafwise."""
        self.assertTrue(ReferenceRegistry.is_computed("toral-suspension"))
        self.assertEqual(ReferenceRegistry.get("toral-suspension")["note"], "computed by toral")

    def test_search(self):
        """Empty queries list everything; substrings match case-insensitively."""
        self.assertEqual([e["id"] for e in ReferenceRegistry.search()], ReferenceRegistry.ids())
        self.assertEqual([e["id"] for e in ReferenceRegistry.search("weyl-chamber")], ["weyl-chamber"])
        ids = [e["id"] for e in ReferenceRegistry.search("WEYL")]
        self.assertIn("weyl-chamber", ids)
        self.assertIn("weyl-parabolic", ids)

    def test_unknown_reference(self):
        """Unknown ids and unmatched queries raise UnknownReferenceError."""
        with self.assertRaises(UnknownReferenceError):
            ReferenceRegistry.get("no-such-result")
        with self.assertRaises(KeyError):
            ReferenceRegistry.search("zzz-no-match")

    def test_dataframe(self):
        """One row per entry with the note column."""
        df = ReferenceRegistry.as_dataframe()
        self.assertIsInstance(df, pd.DataFrame)
        self.assertEqual(list(df.columns), ["id", "statement", "value", "anchor", "source", "note"])
        self.assertEqual(len(df), len(ReferenceRegistry.ids()))


class TestArtifactIO(unittest.TestCase):
    """Deterministic JSON and CSV artifacts."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_dumps_is_deterministic(self):
        """numpy, complex and Fraction values become plain JSON with sorted keys."""
        payload = {"b": np.array([1, 2]), "a": 1 + 2j, "c": Fraction(1, 3), "d": np.float64(0.1)}
        text = dumps(payload)
        self.assertEqual(text, dumps(dict(reversed(list(payload.items())))))
        path = os.path.join(self.test_dir, "out", "x.json")
        write_json(path, payload)
        self.assertEqual(read_json(path), {"a": {"re": 1.0, "im": 2.0}, "b": [1, 2], "c": "1/3", "d": 0.1})

    def test_json_argument_from_literal_or_file(self):
        """Arguments are files when they exist, JSON literals otherwise."""
        data, digest = load_json_argument("[[2,1],[1,1]]")
        self.assertEqual(data, [[2, 1], [1, 1]])
        self.assertTrue(digest.startswith("sha256:"))
        path = os.path.join(self.test_dir, "m.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write("[[2,1],[1,1]]")
        self.assertEqual(load_json_argument(path), (data, digest))
        with self.assertRaises(ValueError):
            load_json_argument("not json")

    def test_csv_keeps_seventeen_digits(self):
        """Floats are written with enough digits to round-trip."""
        path = os.path.join(self.test_dir, "t.csv")
        write_csv(path, pd.DataFrame({"x": [0.1 + 0.2]}))
        self.assertEqual(pd.read_csv(path)["x"][0], 0.1 + 0.2)


if __name__ == '__main__':
    unittest.main()
