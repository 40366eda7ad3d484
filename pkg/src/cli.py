#!/usr/bin/env python3
"""Command-line interface for hilbloc (src package)."""
import argparse
import json
import random
import sys
from typing import List, Optional

from rich.console import Console
from rich.markup import escape
from rich.rule import Rule

from .core import config as config_module
from .core.constants import NONSCHEME_SAMPLES, OUTPUT_FORMATS, VERSION
from .core.errors import CommandError, HilblocError, UsageError, exit_code_for
from .core.polynomial import MonomialOrder, PolynomialRing
from .core.scalars import field_from_name
from .services import check_service as checks
from .services import nonscheme_service as nonscheme
from .services import session_service as sessions
from .services.ideal_service import EngineBounds
from .utils.cache import GroebnerCache
from .utils.log import setup_logging
from .utils.report import Report

console = Console()
err_console = Console(stderr=True)


def _global_flags() -> argparse.ArgumentParser:
    """Flags accepted by every subcommand; None means 'take it from the config file'."""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cache-dir", help="Gröbner cache directory")
    p.add_argument("--no-cache", action="store_true", help="Neither read nor write the Gröbner cache")
    p.add_argument("--bound", type=int, metavar="DEGREE", help="Largest degree a Gröbner basis element may reach")
    p.add_argument("--seed", type=int, help="Seed for randomized property runs")
    p.add_argument("--format", choices=OUTPUT_FORMATS, help="human report or only the ':: ' lines")
    p.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    return p


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    parser = argparse.ArgumentParser(
        prog="hilbloc",
        description="Exact fraction rings, norm sections and localized Hilbert schemes of points.",
        epilog="Global flags (--cache-dir, --no-cache, --bound, --seed, --format, --verbose) follow the subcommand.",
    )
    parser.add_argument("--version", action="version", version=f"hilbloc {VERSION}")
    sub = parser.add_subparsers(dest="command")
    run = sub.add_parser("run", parents=[flags], help="Run a session file")
    run.add_argument("file", help="Session file (UTF-8)")
    ex = sub.add_parser("exec", parents=[flags], help="Run session statements given on the command line")
    ex.add_argument("statements", help="Statements, e.g. 'ring F3[x]; hilb verify --theorem 5.5 --n 2 --invert x;'")
    demo = sub.add_parser("counterexample", parents=[flags], help="Partial localizations of k[x,y] that do not glue to a scheme")
    demo.add_argument("action", choices=["demo"])
    demo.add_argument("--f", default="x", help="The polynomial f (default: x)")
    demo.add_argument("--field", default="Q", help="Coefficient field, Q or Fp (default: Q)")
    demo.add_argument("--samples", help="File with one factored fraction per line")
    demo.add_argument("--random", type=int, default=0, metavar="N", help="Also test N random fractions")
    chk = sub.add_parser("check", parents=[flags], help="Run oracle comparisons and seeded property sweeps")
    chk.add_argument("--only", nargs="*", choices=sorted(checks.CHECKS), help="Run only these checks")
    cfg = sub.add_parser("config", parents=[flags], help="Manage configuration")
    cfg.add_argument("--init", action="store_true", help="Create default config file")
    cfg.add_argument("--show", action="store_true", help="Show current config")
    cache = sub.add_parser("cache", parents=[flags], help="Inspect or clear the Gröbner cache")
    cache.add_argument("--clear", action="store_true", help="Delete every cached basis")
    cache.add_argument("--yes", action="store_true", help="Do not ask for confirmation")
    return parser


def _settings(args: argparse.Namespace) -> dict:
    """Config file values overridden by command-line flags."""
    cfg = config_module.load()
    if args.cache_dir:
        cfg["cache_dir"] = args.cache_dir
    if args.no_cache:
        cfg["use_cache"] = False
    if args.bound is not None:
        if args.bound < 1:
            raise UsageError("--bound must be positive")
        cfg["max_degree"] = args.bound
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.format:
        cfg["output_format"] = args.format
    return cfg


def _emit(report: Report, fmt: str) -> None:
    sys.stdout.write(report.render(fmt))
    sys.stdout.flush()


def _fail(message: str) -> None:
    err_console.print(f"[red]error:[/] {escape(message)}")


def _run_session_text(text: str, cfg: dict) -> int:
    session = sessions.parse_session(text)
    bounds = EngineBounds(max_pairs=cfg["max_pairs"], max_degree=cfg["max_degree"])
    try:
        report = sessions.run_session(
            session,
            cfg["cache_dir"],
            use_cache=cfg["use_cache"],
            bounds=bounds,
            order=MonomialOrder.from_name(cfg["default_order"]),
            seed=cfg["seed"],
        )
    except CommandError as exc:
        if isinstance(exc.report, Report):
            _emit(exc.report, cfg["output_format"])
        _fail(str(exc))
        return exc.exit_code
    _emit(report, cfg["output_format"])
    return 0


def _read_samples(path: str) -> List[str]:
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.split("#", 1)[0].strip() for line in f]
    return [line for line in lines if line]


def _run_demo(args: argparse.Namespace, cfg: dict) -> int:
    ring = PolynomialRing(field_from_name(args.field), ("x", "y"))
    f = ring.parse(args.f)
    if not f:
        raise UsageError("--f must be a nonzero polynomial")
    texts = _read_samples(args.samples) if args.samples else list(NONSCHEME_SAMPLES)
    samples = nonscheme.default_samples(ring, texts)
    report = Report(title=f"partial localizations of {ring!r} with f = {f}")
    section = report.section(1, f"counterexample demo --f {f}")
    section.text(nonscheme.TOPOLOGY_NOTE)
    outcome = nonscheme.intersection_is_fraction_ring(f, samples)
    yes = {True: "yes", False: "no"}
    rows = [
        (str(v.sample), yes[v.side_s], yes[v.side_t], yes[v.side_s and v.side_t], yes[v.side_f])
        for v in outcome.verdicts
    ]
    section.table("membership", ["fraction", "S", "T", "S ∩ T", "f only"], rows)
    section.kv(
        ("f", str(f)),
        ("samples", len(samples)),
        ("intersection", ";".join(outcome.intersection()) or "none"),
        ("f_only", ";".join(outcome.members("f")) or "none"),
        ("consistent", outcome.consistent),
    )
    failed = not outcome.consistent
    if args.random:
        rng = random.Random(cfg["seed"])
        drawn = [nonscheme.random_factored_fraction(rng, f) for _ in range(args.random)]
        sweep = nonscheme.intersection_is_fraction_ring(f, drawn)
        extra = report.section(2, f"random fractions --seed {cfg['seed']}")
        for v in sweep.violations:
            extra.text(f"violation: {v.sample}")
        extra.kv(("random", args.random), ("violations", len(sweep.violations)), ("consistent", sweep.consistent))
        failed = failed or not sweep.consistent
    report.provenance = {"version": VERSION, "seed": cfg["seed"]}
    if failed:
        report.fail(len(report.sections), "counterexample", "membership biconditional violated", 1)
    _emit(report, cfg["output_format"])
    return 1 if failed else 0


def _run_check(args: argparse.Namespace, cfg: dict) -> int:
    results = checks.run_checks(cfg["seed"], args.only)
    report = Report(title=f"hilbloc checks, seed {cfg['seed']}")
    section = report.section(1, "check")
    section.table(
        "oracle comparisons",
        ["check", "trials", "failures"],
        [(r.name, r.trials, r.failures) for r in results],
    )
    for r in results:
        for detail in r.details:
            section.text(f"{r.name}: {detail}")
        section.kv(("check", r.name), ("trials", r.trials), ("failures", r.failures), ("ok", r.ok))
    report.provenance = {"version": VERSION, "seed": cfg["seed"]}
    failed = [r.name for r in results if not r.ok]
    if failed:
        report.fail(1, "check", "failing checks: " + ", ".join(failed), 1)
    _emit(report, cfg["output_format"])
    return 1 if failed else 0


def _run_config(args: argparse.Namespace) -> int:
    if args.init:
        path = config_module.init_config()
        console.print(Rule("[bold cyan]Config[/]", style="cyan"))
        console.print()
        console.print(f"  [green]✓[/] Created config at [cyan]{escape(path)}[/]")
        console.print()
        return 0
    if args.show:
        if not config_module.config_exists():
            console.print("[yellow]No config found. Run: hilbloc config --init[/]")
            return 0
        cfg = config_module.load()
        console.print(Rule("[bold cyan]Config[/]", style="cyan"))
        console.print()
        console.print(json.dumps(cfg, indent=2))
        console.print()
        return 0
    console.print("[yellow]Nothing to do. Use --init or --show.[/]")
    return 0


def _confirm_clear(count: int, directory: str) -> bool:
    """Ask before deleting; a questionary prompt on a TTY, plain input otherwise."""
    prompt = f"Delete {count} cached Gröbner bases in {directory}?"
    if sys.stdin.isatty():
        try:
            import questionary
        except ImportError:
            questionary = None
        if questionary is not None:
            answer = questionary.confirm(prompt, default=False).ask()
            return bool(answer)
    ans = console.input(f"[cyan]{escape(prompt)} {escape('[y/N]')}: [/]").strip().lower()
    return ans == "y"


def _run_cache(args: argparse.Namespace, cfg: dict) -> int:
    cache = GroebnerCache(cfg["cache_dir"], persist=True)
    entries = cache.entries()
    if not args.clear:
        console.print(f"  {len(entries)} cached bases in [cyan]{escape(cfg['cache_dir'])}[/]")
        return 0
    if not entries:
        console.print("[yellow]Cache is already empty.[/]")
        return 0
    if not args.yes and not _confirm_clear(len(entries), cfg["cache_dir"]):
        console.print("[yellow]Nothing deleted.[/]")
        return 0
    removed = cache.clear()
    console.print(f"  [green]✓[/] Removed {removed} cached bases")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main function."""
    argv = argv if argv is not None else sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(getattr(args, "verbose", False))
    if not args.command:
        parser.print_help()
        return 0
    try:
        if args.command == "config":
            return _run_config(args)
        cfg = _settings(args)
        if args.command == "run":
            with open(args.file, "r", encoding="utf-8") as f:
                text = f.read()
            return _run_session_text(text, cfg)
        if args.command == "exec":
            return _run_session_text(args.statements, cfg)
        if args.command == "counterexample":
            return _run_demo(args, cfg)
        if args.command == "check":
            return _run_check(args, cfg)
        if args.command == "cache":
            return _run_cache(args, cfg)
    except HilblocError as exc:
        _fail(str(exc))
        return exit_code_for(exc)
    except OSError as exc:
        _fail(str(exc))
        return UsageError.exit_code
    parser.print_help()
    return 0


if __name__ == "__main__":
    sys.exit(main())
