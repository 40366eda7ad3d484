"""Session reports: per-command sections rendered with rich into plain text.

Every machine-readable line starts with ``:: `` and is printed verbatim in the
human rendering too, so ``--format kv`` output is a subset of the human one.
Rendering goes through a fixed-width, colorless Console so that identical
sessions give byte-identical reports.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from rich.console import Console
from rich.panel import Panel
from rich.rule import Rule
from rich.table import Table
from rich.text import Text

from ..core.constants import KV_PREFIX, OUTPUT_FORMATS, REPORT_WIDTH
from ..core.errors import UsageError

Value = Union[str, int, bool, None]


def format_value(value: Value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value).replace(" ", "")


def kv_line(pairs: Sequence[Tuple[str, Value]]) -> str:
    return KV_PREFIX + " ".join(f"{k}={format_value(v)}" for k, v in pairs)


@dataclass
class ReportTable:
    title: str
    columns: Tuple[str, ...]
    rows: List[Tuple[str, ...]] = field(default_factory=list)


@dataclass
class Section:
    """Output of one session command, in the order it was produced."""

    index: int
    command: str
    items: List[Union[str, ReportTable]] = field(default_factory=list)

    def text(self, line: str) -> "Section":
        self.items.append(str(line))
        return self

    def kv(self, *pairs: Tuple[str, Value]) -> "Section":
        self.items.append(kv_line((("cmd", self.index),) + tuple(pairs)))
        return self

    def table(self, title: str, columns: Sequence[str], rows: Sequence[Sequence[object]]) -> "Section":
        self.items.append(ReportTable(title, tuple(columns), [tuple(str(c) for c in row) for row in rows]))
        return self

    def kv_lines(self) -> List[str]:
        return [i for i in self.items if isinstance(i, str) and i.startswith(KV_PREFIX)]


@dataclass
class Report:
    title: str = "hilbloc"
    sections: List[Section] = field(default_factory=list)
    provenance: Dict[str, Value] = field(default_factory=dict)
    failure: Optional[str] = None
    failed_index: Optional[int] = None
    exit_code: int = 0

    def section(self, index: int, command: str) -> Section:
        s = Section(index, command)
        self.sections.append(s)
        return s

    def fail(self, index: int, command: str, message: str, exit_code: int) -> None:
        self.failure = f"command {index} ({command}): {message}"
        self.failed_index = index
        self.exit_code = exit_code

    def trailer_lines(self) -> List[str]:
        lines = []
        if self.provenance:
            lines.append(kv_line(list(self.provenance.items())))
        if self.failure is not None:
            lines.append(kv_line([("status", "failed"), ("failed_cmd", self.failed_index), ("exit", self.exit_code)]))
        else:
            lines.append(kv_line([("status", "ok")]))
        return lines

    def kv_lines(self) -> List[str]:
        return [line for s in self.sections for line in s.kv_lines()] + self.trailer_lines()

    def render(self, fmt: str = "human") -> str:
        if fmt not in OUTPUT_FORMATS:
            raise UsageError(f"unknown output format {fmt!r}; choose from {OUTPUT_FORMATS}")
        if fmt == "kv":
            return "\n".join(self.kv_lines()) + "\n"
        return render_human(self)

    def __str__(self) -> str:
        return self.render("human")


def _console(buffer: io.StringIO) -> Console:
    return Console(
        file=buffer,
        width=REPORT_WIDTH,
        color_system=None,
        force_terminal=False,
        highlight=False,
        emoji=False,
        soft_wrap=True,
    )


def render_human(report: Report) -> str:
    buffer = io.StringIO()
    console = _console(buffer)
    console.print(Rule(Text(report.title), characters="="))
    for s in report.sections:
        console.print()
        console.print(Rule(Text(f"[{s.index}] {s.command}"), align="left"))
        for item in s.items:
            if isinstance(item, ReportTable):
                table = Table(title=Text(item.title), show_header=True, box=None, padding=(0, 2))
                for col in item.columns:
                    table.add_column(Text(col))
                for row in item.rows:
                    table.add_row(*(Text(c) for c in row))
                console.print(table)
            else:
                console.print(Text(item))
    console.print()
    if report.provenance:
        lines = [f"{k}: {format_value(v)}" for k, v in report.provenance.items()]
        console.print(Panel(Text("\n".join(lines)), title=Text("provenance"), expand=False))
    if report.failure is not None:
        console.print(Text(f"FAILED at {report.failure}"))
    for line in report.trailer_lines():
        console.print(Text(line))
    return buffer.getvalue()
