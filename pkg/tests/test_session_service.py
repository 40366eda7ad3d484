"""Tests for src.services.session_service."""
import unittest

from src.core.errors import BoundExceeded, CommandError, ParseError, UndefinedNameError
from src.services.session_service import parse_session, run_session, words


def run(text: str) -> str:
    return run_session(parse_session(text)).render("kv")


class TestParsing(unittest.TestCase):
    def test_words_respect_brackets(self) -> None:
        self.assertEqual([w for w, _ in words("nf (x^2 - 1) I", 0)], ["nf", "(x^2 - 1)", "I"])

    def test_header_required(self) -> None:
        with self.assertRaises(ParseError):
            parse_session("poly f = x;")

    def test_undefined_name(self) -> None:
        with self.assertRaises(UndefinedNameError):
            parse_session("ring Q[x];\nmember x J;")

    def test_redeclaration(self) -> None:
        with self.assertRaises(UndefinedNameError):
            parse_session("ring Q[x]; poly f = x; poly f = x^2;")

    def test_negative_exponent_position(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            parse_session("ring Q[x];\npoly f = x^-1;")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("exponent must be a non-negative integer", ctx.exception.reason)

    def test_comments_and_unknown_command(self) -> None:
        with self.assertRaises(ParseError):
            parse_session("ring Q[x]; # header\nfrobnicate x;")

    def test_hilb_flags_checked(self) -> None:
        with self.assertRaises(ParseError):
            parse_session("ring Q[x]; hilb verify --n 2 --invert x;")


class TestRunning(unittest.TestCase):
    def test_double_count_session(self) -> None:
        out = run("ring F3[x];\nhilb verify --theorem 5.5 --n 2 --invert x;")
        self.assertIn("count_ideal=6 count_norm=6 match=yes", out)
        self.assertTrue(out.endswith(":: status=ok\n"))

    def test_ideal_commands(self) -> None:
        out = run("ring Q[x,y]; ideal I = (x^2, y); colength I; member x I; gb I lex; nf (x^3 + y) I;")
        self.assertIn(":: cmd=2 colength=2", out)
        self.assertIn(":: cmd=3 member=no", out)
        self.assertIn(":: cmd=4 gb=I order=lex size=2 cache=off", out)
        self.assertIn(":: cmd=5 nf=0", out)

    def test_ideal_operations(self) -> None:
        out = run("ring Q[x,y]; ideal A = (x); ideal B = (y); intersect A B; saturate (x^2*y) x;")
        self.assertIn("op=intersect result=(x*y)", out)
        self.assertIn("op=saturate result=(y)", out)

    def test_fraction_commands(self) -> None:
        out = run("ring Q[x,y]; invert x s; frac eq [x*y | s^2] [y | s]; frac add [1 | s] 1; frac kernel;")
        self.assertIn(":: cmd=2 eq=yes", out)
        self.assertIn("add=[x+1|s]", out)
        self.assertIn("kernel=(0) zero_ring=no", out)

    def test_factorization(self) -> None:
        out = run("ring Q[x]; ring A = Q[x,t] / (x*t - 1); invert x s; frac factor A map (x);")
        self.assertIn("factors=yes failing=none", out)

    def test_norm_commands(self) -> None:
        out = run("ring Q[e1,e2]; algebra E = monic x^2 - e1*x + e2 in x; norm det E x; norm det E (x - 1);")
        self.assertIn("algebra=E rank=2", out)
        self.assertIn(":: cmd=2 norm=e2 unit=no", out)
        self.assertIn(":: cmd=3 norm=-e1+e2+1 unit=no", out)

    def test_plane_enumeration(self) -> None:
        out = run("ring F2[x,y]; hilb enumerate --n 2 --plane;")
        self.assertIn("q=2 plane=yes count=24", out)

    def test_failure_keeps_partial_report(self) -> None:
        session = parse_session("ring F3[x]; colength (x^2); hilb enumerate --n 5;")
        with self.assertRaises(CommandError) as ctx:
            run_session(session)
        exc = ctx.exception
        self.assertEqual(exc.index, 2)
        self.assertIsInstance(exc.cause, BoundExceeded)
        self.assertEqual(exc.exit_code, 3)
        kv = exc.report.render("kv")
        self.assertIn(":: cmd=1 colength=2", kv)
        self.assertIn(":: status=failed failed_cmd=2 exit=3", kv)

    def test_identical_runs_render_identically(self) -> None:
        text = "ring F2[x]; hilb enumerate --n 2 --invert x;"
        self.assertEqual(run_session(parse_session(text)).render(), run_session(parse_session(text)).render())


if __name__ == "__main__":
    unittest.main()
