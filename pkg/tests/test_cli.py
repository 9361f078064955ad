import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest

from leafwise.config.config import LEAFWISE_DB_PATH, apply_settings
from leafwise.config.reference_db import REFERENCE_ONLY_NOTE
from leafwise.utils.cli import dispatch

RESONANT_FIELD = json.dumps({"dims": 2, "real": True, "coeffs": [
    {"m": [1, -1], "re": 0.5, "im": 0.0}, {"m": [-1, 1], "re": 0.5, "im": 0.0}]})


class TestCLI(unittest.TestCase):
    """Subcommands end to end: exit codes, result.json and manifest.json."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()
        self.out = os.path.join(self.test_dir, "out")

    def tearDown(self):
        apply_settings()
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def run_cli(self, *argv, out=None, quiet=True):
        args = list(argv) + ["--out", out or self.out] + (["--quiet"] if quiet else [])
        stdout, stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            code = dispatch(args)
        return code, stdout.getvalue(), stderr.getvalue()

    def read(self, name, out=None):
        with open(os.path.join(out or self.out, name), encoding="utf-8") as f:
            return json.load(f)

    def test_toral_writes_result_and_manifest(self):
        """The cat map gives dim H^1 = 1 and a manifest with hashed inputs."""
        code, _, _ = self.run_cli("toral", "--matrix", "[[2,1],[1,1]]")
        self.assertEqual(code, 0)
        self.assertEqual(self.read("result.json")["h1_dim"], 1)
        manifest = self.read("manifest.json")
        self.assertEqual(manifest["command"], "toral")
        self.assertEqual(manifest["exit_code"], 0)
        self.assertTrue(manifest["inputs"]["matrix"].startswith("sha256:"))
        for key in ("config", "version", "started_at", "duration_s", "run_id"):
            self.assertIn(key, manifest)

    def test_results_are_deterministic(self):
        """Two runs on the same input write byte-identical result files."""
        second = os.path.join(self.test_dir, "second")
        self.run_cli("toral", "--matrix", "[[3,2],[1,1]]")
        self.run_cli("toral", "--matrix", "[[3,2],[1,1]]", out=second)
        with open(os.path.join(self.out, "result.json"), "rb") as a, \
                open(os.path.join(second, "result.json"), "rb") as b:
            self.assertEqual(a.read(), b.read())

    def test_lie_cohomology_of_a_named_algebra(self):
        """abelian3 is the exterior algebra on three generators."""
        code, _, _ = self.run_cli("lie-cohomology", "--algebra", "abelian3")
        self.assertEqual(code, 0)
        self.assertEqual(self.read("result.json")["report"]["dims"], [1, 3, 3, 1])

    def test_refs_prints_reference_only_entries(self):
        """Stored statements are printed with their note."""
        code, stdout, _ = self.run_cli("refs", "--id", "weyl-chamber", quiet=False)
        self.assertEqual(code, 0)
        self.assertIn("H^1(A_p) ≅ R^p, p ≥ 2", stdout)
        self.assertIn("anchor: Katok and Spatzier [KS94]", stdout)
        self.assertIn(REFERENCE_ONLY_NOTE, stdout)

    def test_resumed_refs_run(self):
        """Re-running a finished refs run by its id prints the entries again and exits 0."""
        code, _, _ = self.run_cli("refs", "--id", "sl2c-parabolic")
        self.assertEqual(code, 0)
        run_id = self.read("manifest.json")["run_id"]
        code, stdout, stderr = self.run_cli("refs", "--id", "sl2c-parabolic", "--run-id", run_id, quiet=False)
        self.assertEqual(code, 0, stderr)
        self.assertIn("H^1(F) ≅ R^2 ⊕ H^1(M)", stdout)
        self.assertIn("Mieczkowski", stdout)

    def test_resonant_field_exits_obstructed(self):
        """A coefficient on a resonant mode of v = (1, 1) gives exit code 2."""
        code, _, _ = self.run_cli("solve-cohomeq", "--matrix", "[[1,1]]", "--field", RESONANT_FIELD)
        self.assertEqual(code, 2)
        result = self.read("result.json")
        self.assertEqual(result["status"], "obstructed")
        self.assertIn("resonant", result["reason"])

    def test_schema_errors_name_the_field(self):
        """Unknown keys are reported with their location and exit code 1."""
        field = json.dumps({"dims": 2, "real": True, "coeffs": [{"m": [1, -1], "re": 0.5, "bogus": 1}]})
        code, _, stderr = self.run_cli("solve-cohomeq", "--matrix", "[[1,1]]", "--field", field)
        self.assertEqual(code, 1)
        self.assertIn("invalid input at coeffs.0.bogus", stderr)
        result = self.read("result.json")
        self.assertEqual(result["status"], "error")
        self.assertEqual(self.read("manifest.json")["exit_code"], 1)

    def test_csv_tables(self):
        """--format csv writes the shell table next to result.json."""
        code, _, _ = self.run_cli("moser-check", "--taus", "[0.25]", "--radius", "16", "--exp", "1",
                                  "--format", "csv")
        self.assertEqual(code, 2)
        self.assertTrue(os.path.exists(os.path.join(self.out, "shells.csv")))
        self.assertEqual(self.read("result.json")["status"], "fail")

    def test_usage_errors_exit_with_one(self):
        """A missing --radius or an unknown subcommand is a usage error."""
        for argv in (["moser-check", "--taus", "[0.25]", "--exp", "1"], ["no-such-command"]):
            with contextlib.redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit) as ctx:
                    dispatch(argv + ["--out", self.out])
            self.assertEqual(ctx.exception.code, 1)

    @unittest.skipIf(LEAFWISE_DB_PATH, "run ledger location overridden by LEAFWISE_DB_PATH")
    def test_run_ledger_lives_under_the_output_directory(self):
        """Without LEAFWISE_DB_PATH the ledger is kept in <out>/.database."""
        self.run_cli("toral", "--matrix", "[[2,1],[1,1]]")
        self.assertTrue(os.path.isdir(os.path.join(self.out, ".database")))


if __name__ == '__main__':
    unittest.main()
