"""UI abstraction layer - Rich wrapper for run output and logging."""

from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Iterator, Sequence

from rich.console import Console as RichConsole
from rich.logging import RichHandler
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)
from rich.rule import Rule
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

from dinilab.checks import EstimateCheck

LAB_THEME = Theme(
    {
        "info": "cyan",
        "success": "green",
        "warning": "yellow",
        "error": "red bold",
        "stage": "bold magenta",
        "highlight": "bold cyan",
        "dim": "dim white",
    }
)


class ProgressTask:
    """Wrapper for Rich progress task."""

    def __init__(self, progress: Progress | None, task_id: TaskID | None):
        self._progress = progress
        self._task_id = task_id

    def advance(self, amount: float = 1) -> None:
        """Advance the progress bar."""
        if self._progress is not None and self._task_id is not None:
            self._progress.advance(self._task_id, advance=amount)

    def update(self, completed: float) -> None:
        """Update the progress to a specific value."""
        if self._progress is not None and self._task_id is not None:
            self._progress.update(self._task_id, completed=completed)


class Console:
    """Console wrapper for Rich; ``quiet`` keeps errors only."""

    def __init__(self, quiet: bool = False, rich_console: RichConsole | None = None):
        self._console = rich_console or RichConsole(theme=LAB_THEME)
        self._quiet = quiet
        self._current_stage = 0
        self._total_stages = 0

    @property
    def quiet(self) -> bool:
        """Check if running in quiet mode (errors only)."""
        return self._quiet

    @property
    def rich(self) -> RichConsole:
        return self._console

    def set_total_stages(self, total: int) -> None:
        """Set total number of pipeline stages."""
        self._total_stages = total
        self._current_stage = 0

    def stage(self, name: str) -> None:
        """Print a stage indicator with progress."""
        self._current_stage += 1
        if self._quiet:
            return
        stage_text = Text()
        stage_text.append(f"[{self._current_stage}/{self._total_stages}] ", style="bold magenta")
        stage_text.append(name, style="bold white")
        self._console.print()
        self._console.print(Rule(stage_text, style="magenta"))

    def status(self, message: str) -> None:
        """Print a status message in cyan with arrow."""
        if self._quiet:
            return
        self._console.print(f"  [cyan]→[/cyan] {message}")

    def success(self, message: str) -> None:
        """Print a success message in green with checkmark."""
        if self._quiet:
            return
        self._console.print(f"  [green]✓[/green] [green]{message}[/green]")

    def warning(self, message: str) -> None:
        """Print a warning message in yellow with warning symbol."""
        if self._quiet:
            return
        self._console.print(f"  [yellow]⚠[/yellow] [yellow]{message}[/yellow]")

    def error(self, message: str) -> None:
        """Print an error message in red with X symbol."""
        self._console.print(f"  [red bold]✗[/red bold] [red]{message}[/red]")

    def info(self, message: str) -> None:
        """Print an info message with info icon."""
        if self._quiet:
            return
        self._console.print(f"  [dim]ℹ[/dim] [dim]{message}[/dim]")

    def checks_table(self, checks: Sequence[EstimateCheck], title: str = "Checks") -> None:
        """Print one row per check, failures in red."""
        if self._quiet or not checks:
            return
        table = Table(title=title, title_style="bold cyan", header_style="bold")
        for column in ("check", "grid", "time", "lhs", "rhs", "constant", "result"):
            table.add_column(column, justify="left" if column == "check" else "right")
        for check in checks:
            mark = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
            if not check.gating:
                mark += " [dim](info)[/dim]"
            table.add_row(
                check.name,
                "" if check.grid is None else str(check.grid),
                "" if check.time is None else f"{check.time:.4g}",
                f"{check.lhs:.6g}",
                f"{check.rhs:.6g}",
                f"{check.constant:.4g}",
                mark,
            )
        self._console.print(table)

    @contextmanager
    def progress(self, total: float, description: str = "Processing") -> Iterator[ProgressTask]:
        """Context manager for progress bar display with time tracking."""
        if self._quiet:
            yield ProgressTask(None, None)
            return
        with Progress(
            SpinnerColumn("dots"),
            TextColumn("[bold blue]{task.description}"),
            BarColumn(bar_width=40, style="cyan", complete_style="green"),
            TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
            TextColumn("•"),
            TimeElapsedColumn(),
            TextColumn("•"),
            TimeRemainingColumn(),
            console=self._console,
            transient=True,
        ) as progress:
            task_id = progress.add_task(description, total=total)
            yield ProgressTask(progress, task_id)

    def print(self, message: str = "") -> None:
        """Print a plain message."""
        self._console.print(message)

    def rule(self, title: str = "", style: str = "dim") -> None:
        """Print a horizontal rule."""
        self._console.print(Rule(title, style=style))


def configure_logging(console: Console, verbose: bool = False) -> logging.Logger:
    """Route the ``dinilab`` logger through one RichHandler on ``console``."""
    logger = logging.getLogger("dinilab")
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    handler = RichHandler(console=console.rich, show_path=False, rich_tracebacks=True, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    if verbose:
        logger.setLevel(logging.DEBUG)
    else:
        logger.setLevel(logging.WARNING if console.quiet else logging.INFO)
    logger.propagate = False
    return logger
