"""
Command line surface: subcommands, output formats and exit codes.

Call:
    pytest -v tests/test_cli.py

Set CLEANUP_OK=0 to keep the generated CSV/JSON files in tests/tmp for inspection.
"""

import math
import unittest

from silversplit import version
from silversplit.melnikov import transition_ladder
from .conftest import TMP_DIR, run_command, silversplit_wrapper, tmp_path_for, write_phases
from . import expects


def _parse_vector(cell):
    return tuple(int(x) for x in cell.split(","))


class ExitCodeTest(unittest.TestCase):

    def test_invalid_rho(self):
        code, _ = run_command("resonances", ["--rho", "0"])
        self.assertEqual(code, 2)

    def test_small_p(self):
        code, _ = run_command("resonances", ["--p", "2.5"])
        self.assertEqual(code, 2)
        code, rows = run_command("resonances", ["--p", "2.5", "--allow-small-p", "--j-max", "1", "--n-max", "1"])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 2)

    def test_missing_range(self):
        code, content = run_command("sweep", ["--eps-max", "1e-4"])
        self.assertEqual(code, 2)
        self.assertIsNone(content)

    def test_usage_error(self):
        with self.assertRaises(SystemExit) as cm:
            silversplit_wrapper(["critical-points"])
        self.assertEqual(cm.exception.code, 2)


class ResonancesCommandTest(unittest.TestCase):

    def test_table(self):
        code, rows = run_command("resonances", ["--j-max", "3", "--n-max", "2"])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 9)
        self.assertEqual((rows[0]["k1"], rows[0]["k2"], rows[0]["primitive"]), ("0", "1", "true"))
        self.assertEqual(rows[3]["primitive"], "false")

    def test_primitive_only(self):
        code, rows = run_command("resonances", ["--j-max", "10", "--n-max", "0", "--primitive-only"])
        self.assertEqual(code, 0)
        self.assertEqual([int(r["j"]) for r in rows], expects.PRIMITIVE_J10)

    def test_asymptotics(self):
        code, rows = run_command("resonances", ["--j-max", "4", "--asymptotics"])
        self.assertEqual(code, 0)
        by_j = {int(r["j"]): r for r in rows}
        for j, (K, gt) in expects.SEQUENCE_LIMITS.items():
            self.assertAlmostEqual(float(by_j[j]["K"]), K, delta=expects.K_TOL)
            self.assertAlmostEqual(float(by_j[j]["gamma_tilde_star"]), gt, delta=expects.GAMMA_TILDE_TOL)

    def test_args_file(self):
        """Arguments may be read from a file with the @ prefix, one shell-quoted line each."""
        args_file = TMP_DIR/"resonances.args"
        args_file.write_text("--j-max 1\n--n-max 3\n", encoding="utf-8")
        out = tmp_path_for("resonances_args", "csv")
        code = silversplit_wrapper(["resonances", f"@{args_file}", "-o", out, "--quiet"])
        self.assertEqual(code, 0)
        self.assertEqual(len(out.read_text(encoding="utf-8").splitlines()), 1 + 4)


class DominanceCommandTest(unittest.TestCase):

    def test_explicit_eps(self):
        eps = transition_ladder(4).eps_hat_n*0.99
        code, rows = run_command("dominance", ["--eps", repr(eps), "--depth", "2"])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 1)
        self.assertEqual(_parse_vector(rows[0]["S1"]), (-12, 29))
        self.assertEqual(int(rows[0]["n"]), 4)

    def test_grid_json(self):
        code, report = run_command("dominance", ["--eps-min", "1e-6", "--eps-max", "1e-4", "--points", "5"], fmt="json")
        self.assertEqual(code, 0)
        self.assertEqual(report["kind"], "dominance")
        self.assertEqual(report["version"], version.VERSION_NUMBER)
        self.assertEqual(report["schema"], version.REPORT_SCHEMA)
        self.assertTrue(report["command"].startswith("silversplit dominance"))
        self.assertEqual(len(report["data"]), 5)
        for row in report["data"]:
            self.assertGreaterEqual(row["h1"], expects.H1_MIN - 1e-3)
            self.assertLessEqual(row["h1"], row["h2"])


SWEEP_HEADER = ["eps", "n"] + [f"h{i}" for i in range(1, 6)] + [f"S{i}" for i in range(1, 6)] + [f"ln_L_S{i}" for i in range(1, 6)]
POINT_HEADER = ["eps", "n", "Q", "Qt", "dtau", "dtau1", "Eplus", "Eminus", "Estar"] + [
    f"{name}_{j}" for j in range(1, 5) for name in ("theta1", "theta2", "det", "m_star", "flag")
]


class ModelCommandTest(unittest.TestCase):

    def _sweep_args(self):
        ladder = transition_ladder(5)
        return ["--eps-min", repr(ladder.eps_hat_n/2), "--eps-max", repr(ladder.eps_hat_n*2), "--points", "3"]

    def test_sweep(self):
        code, rows = run_command("sweep", self._sweep_args())
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 3)
        self.assertEqual(list(rows[0].keys()), SWEEP_HEADER)
        for row in rows:
            self.assertEqual(int(row["n"]), 5)
            self.assertEqual(_parse_vector(row["S1"]), (-29, 70))
            h = [float(row[f"h{i}"]) for i in range(1, 6)]
            self.assertEqual(h, sorted(h))

    def test_sweep_model_columns(self):
        code, rows = run_command("sweep", self._sweep_args() + ["--model-columns"])
        self.assertEqual(code, 0)
        self.assertEqual(list(rows[0].keys())[:len(SWEEP_HEADER)], SWEEP_HEADER)
        for row in rows:
            self.assertAlmostEqual(float(row["Estar"]), 1 - float(row["Qt"]), places=9)

    def test_critical_points_model_only(self):
        eps = transition_ladder(5).eps_hat_n
        code, rows = run_command("critical-points", ["--eps", repr(eps), "--model-only"])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 1)
        self.assertEqual(list(rows[0].keys()), POINT_HEADER)
        self.assertEqual([rows[0][f"flag_{j}"] for j in range(1, 5)], ["ok"]*4)
        self.assertAlmostEqual(float(rows[0]["Estar"]), 1 - float(rows[0]["Qt"]), places=9)

    def test_critical_points_json(self):
        eps = transition_ladder(5).eps_hat_n
        code, report = run_command("critical-points", ["--eps", repr(eps)], fmt="json")
        self.assertEqual(code, 0)
        data = report["data"]
        self.assertEqual(len(data["points"]), 4)
        self.assertEqual([p["branch"] for p in data["points"]], ["+", "+", "-", "-"])
        self.assertEqual(data["flags"], [])
        self.assertEqual(data["phases"], {"mode": "zero"})
        self.assertEqual(data["model"]["Klass"], "SplittingModel")

    def test_random_phases_file(self):
        path = write_phases({"mode": "random", "seed": 3})
        eps = transition_ladder(5).eps_hat_n
        code, rows = run_command("critical-points", ["--eps", repr(eps), "--model-only", "--phases", str(path)])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 1)
        self.assertNotIn("missing", [rows[0][f"flag_{j}"] for j in range(1, 5)])

    def test_missing_phases_file(self):
        with self.assertRaises(SystemExit) as cm:
            silversplit_wrapper(["critical-points", "--eps", "1e-8", "--phases", str(TMP_DIR/"missing.json")])
        self.assertEqual(cm.exception.code, 2)

    def test_repeatable_output(self):
        paths = [tmp_path_for("sweep_repeat", "csv") for _ in range(2)]
        for path in paths:
            code = silversplit_wrapper(["sweep", *self._sweep_args(), "--model-columns", "-o", path, "--quiet"])
            self.assertEqual(code, 0)
        self.assertEqual(paths[0].read_bytes(), paths[1].read_bytes())


class FigureDataTest(unittest.TestCase):

    def _assert_numeric(self, rows):
        for row in rows:
            for key, cell in row.items():
                self.assertTrue(math.isfinite(float(cell)), f"{key}={cell!r}")

    def test_h_curves(self):
        code, rows = run_command("figure-data", ["h-curves", "--samples", "20"])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 21)
        self._assert_numeric(rows)
        h1 = [float(r["h1"]) for r in rows]
        self.assertGreaterEqual(min(h1), expects.H1_MIN - 1e-12)
        self.assertLessEqual(max(h1), expects.H1_MAX + 1e-12)

    def test_gk_curves(self):
        code, rows = run_command("figure-data", ["gk-curves", "--n", "3", "--samples", "4", "--j", "1"])
        self.assertEqual(code, 0)
        self.assertIn("g_1_3", rows[0])
        self._assert_numeric(rows)


class VerifyCommandTest(unittest.TestCase):

    def test_fast_checks(self):
        code, report = run_command("verify", ["--only", "lattice", "table", "pell"], fmt="json")
        self.assertEqual(code, 0)
        self.assertEqual(report["kind"], "verify")
        data = report["data"]
        self.assertTrue(data["passed"])
        self.assertEqual([c["name"] for c in data["checks"]], ["lattice", "table", "pell"])
        self.assertTrue(all(c["status"] == "pass" for c in data["checks"]))

    def test_unknown_check(self):
        with self.assertRaises(SystemExit):
            silversplit_wrapper(["verify", "--only", "nonsense"])


class OracleCommandTest(unittest.TestCase):

    def test_oracle(self):
        code, rows = run_command("oracle", ["--eps", "0.2", "--samples", "2", "--seed", "1"])
        self.assertEqual(code, 0)
        self.assertEqual(len(rows), 2)
        for row in rows:
            self.assertLess(float(row["l1_error"]), 1e-6)


class ContinueCommandTest(unittest.TestCase):

    def test_continue(self):
        eps = transition_ladder(6).eps_hat_n
        args = ["--eps-min", repr(eps/1.5), "--eps-max", repr(eps*1.5), "--points", "3"]
        code, report = run_command("continue", args, fmt="json")
        self.assertEqual(code, 0)
        data = report["data"]
        self.assertEqual(len(data["rows"]), 3)
        self.assertEqual(data["phase_violations"], [])
        self.assertEqual(data["flag_count"], 0)
        self.assertEqual(data["phases"], {"mode": "zero"})
        self.assertEqual(set(data["rows"][0]), set(POINT_HEADER) | {"flags"})
        self.assertEqual(data["rows"][0]["flags"], [])
