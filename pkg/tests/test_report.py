"""Tests for src.utils.report."""
import unittest

from src.core.errors import UsageError
from src.utils.report import Report, format_value, kv_line


class TestFormatting(unittest.TestCase):
    def test_values(self) -> None:
        self.assertEqual(format_value(True), "yes")
        self.assertEqual(format_value(False), "no")
        self.assertEqual(format_value(None), "none")
        self.assertEqual(format_value("x + 1"), "x+1")

    def test_kv_line(self) -> None:
        self.assertEqual(kv_line([("a", 1), ("b", True)]), ":: a=1 b=yes")


class TestReport(unittest.TestCase):
    def _report(self) -> Report:
        report = Report(title="demo")
        section = report.section(1, "colength I")
        section.text("staircase: 1, x")
        section.table("basis", ["#", "element"], [(1, "x")])
        section.kv(("colength", 2))
        report.provenance = {"version": "0.3.0", "cache": False}
        return report

    def test_kv_format(self) -> None:
        text = self._report().render("kv")
        self.assertEqual(
            text.splitlines(),
            [":: cmd=1 colength=2", ":: version=0.3.0 cache=no", ":: status=ok"],
        )

    def test_human_contains_kv_lines(self) -> None:
        report = self._report()
        human = report.render("human")
        for line in report.kv_lines():
            self.assertIn(line, human)
        self.assertIn("staircase: 1, x", human)

    def test_rendering_is_deterministic(self) -> None:
        self.assertEqual(self._report().render(), self._report().render())

    def test_failure_trailer(self) -> None:
        report = self._report()
        report.fail(1, "colength", "bound hit", 3)
        self.assertEqual(report.kv_lines()[-1], ":: status=failed failed_cmd=1 exit=3")
        self.assertIn("FAILED at command 1 (colength): bound hit", report.render())

    def test_unknown_format(self) -> None:
        with self.assertRaises(UsageError):
            self._report().render("json")


if __name__ == "__main__":
    unittest.main()
