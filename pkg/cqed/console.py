"""
Console output helpers.

Progress lines go to stderr through one shared rich Console so that data
written to stdout or CSV stays clean.
"""

from rich.console import Console
from rich.table import Table

console = Console(stderr=True, highlight=False)

_quiet = False


def set_quiet(flag: bool) -> None:
    """Silence info-level lines (warnings and errors still print)."""
    global _quiet
    _quiet = flag


def info(message: str) -> None:
    if not _quiet:
        console.print(f"📋 {message}")


def step(message: str) -> None:
    if not _quiet:
        console.print(f"🔌 {message}")


def success(message: str) -> None:
    if not _quiet:
        console.print(f"✅ {message}", style="green")


def warn(message: str) -> None:
    console.print(f"⚠️  {message}", style="yellow")


def error(message: str) -> None:
    console.print(f"❌ {message}", style="bold red")


def banner(title: str) -> None:
    if not _quiet:
        console.rule(f"🚀 {title}")


def summary_table(title: str, rows: dict) -> None:
    """Print a two-column key/value table."""
    table = Table(title=title, show_header=True, header_style="bold")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for key, value in rows.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        table.add_row(str(key), str(value))
    console.print(table)
