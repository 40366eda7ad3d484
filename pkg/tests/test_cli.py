"""Tests for src.cli."""
import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from src import cli
from src.core import config as config_module


class CliTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        patcher = mock.patch.object(config_module, "CONFIG_PATHS", [os.path.join(self.tmp.name, "missing.json")])
        patcher.start()
        self.addCleanup(patcher.stop)
        self.addCleanup(self.tmp.cleanup)

    def main(self, *argv: str):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = cli.main(list(argv))
        return code, out.getvalue()


class TestExec(CliTestCase):
    def test_double_count(self) -> None:
        code, out = self.main("exec", "ring F3[x]; hilb verify --theorem 5.5 --n 2 --invert x;", "--no-cache", "--format", "kv")
        self.assertEqual(code, 0)
        self.assertIn("count_ideal=6 count_norm=6 match=yes", out)

    def test_parse_error_exit_code(self) -> None:
        code, out = self.main("exec", "ring Q[x]; poly f = x^-1;", "--no-cache")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")

    def test_bound_exit_code_and_partial_report(self) -> None:
        code, out = self.main("exec", "ring F3[x]; colength (x^2); hilb enumerate --n 5;", "--no-cache", "--format", "kv")
        self.assertEqual(code, 3)
        self.assertIn(":: cmd=1 colength=2", out)
        self.assertIn("status=failed failed_cmd=2 exit=3", out)

    def test_run_file_with_cache(self) -> None:
        path = os.path.join(self.tmp.name, "session.hl")
        with open(path, "w", encoding="utf-8") as f:
            f.write("ring Q[x,y];\nideal I = (x^2 - y, x*y - 1);\ngb I;\n")
        cache_dir = os.path.join(self.tmp.name, "cache")
        code, first = self.main("run", path, "--cache-dir", cache_dir, "--format", "kv")
        self.assertEqual(code, 0)
        self.assertIn("cache=miss", first)
        code, second = self.main("run", path, "--cache-dir", cache_dir, "--format", "kv")
        self.assertIn("cache=hit", second)

    def test_bad_bound(self) -> None:
        code, _ = self.main("exec", "ring Q[x]; colength (x);", "--bound", "0")
        self.assertEqual(code, 2)


class TestOtherCommands(CliTestCase):
    def test_counterexample_demo(self) -> None:
        code, out = self.main("counterexample", "demo", "--format", "kv")
        self.assertEqual(code, 0)
        self.assertIn("intersection=1/x;(x+y)/x^2", out)
        self.assertIn("consistent=yes", out)

    def test_counterexample_random(self) -> None:
        code, out = self.main("counterexample", "demo", "--random", "10", "--seed", "4", "--format", "kv")
        self.assertEqual(code, 0)
        self.assertIn("random=10 violations=0", out)

    def test_check_subset(self) -> None:
        code, out = self.main("check", "--only", "norm_resultant", "--format", "kv")
        self.assertEqual(code, 0)
        self.assertIn("check=norm_resultant", out)
        self.assertIn("failures=0 ok=yes", out)

    def test_cache_clear_with_yes(self) -> None:
        cache_dir = os.path.join(self.tmp.name, "cache")
        self.main("exec", "ring Q[x]; gb (x^2 - 1);", "--cache-dir", cache_dir)
        code, out = self.main("cache", "--clear", "--yes", "--cache-dir", cache_dir)
        self.assertEqual(code, 0)
        self.assertIn("Removed 1 cached bases", out)

    def test_no_command_prints_help(self) -> None:
        code, out = self.main()
        self.assertEqual(code, 0)
        self.assertIn("hilbloc", out)


if __name__ == "__main__":
    unittest.main()
