from __future__ import annotations

from collections.abc import Mapping, Sequence
from typing import Any

from rich.console import Console
from rich.theme import Theme

from utils.logging_interfaces import ConsoleRendererProtocol

DEFAULT_THEME = Theme(
    {
        "log.time": "dim cyan",
        "log.message": "white",
        "log.path": "dim blue",
        "logging.level.debug": "dim blue",
        "logging.level.info": "green",
        "logging.level.warning": "yellow",
        "logging.level.error": "bold red",
        "logging.level.critical": "bold white on red",
        "log.level": "bold",
    }
)


class RichConsoleRenderer(ConsoleRendererProtocol):
    """
    Rich-backed console view.

    Logs reach it through :meth:`write`, which the loguru configuration
    receives as its console sink. The CLI uses the remaining methods to print
    selection reports, run summaries and manifests.

    :ivar console: Rich Console instance; logs go to stderr so that stdout stays clean
    """

    def __init__(self, console: Console | None = None):
        self.console = console or Console(theme=DEFAULT_THEME, stderr=True)

    def write(self, message: str) -> None:
        """Print a line that already carries Rich markup from the log formatter."""
        message = message.rstrip()
        if message:
            self.console.print(message, markup=True, highlight=False)

    def section(self, title: str, style: str = "bold cyan") -> None:
        self.console.rule(f"[{style}]{title}[/{style}]")

    def table(self, title: str, data: Mapping[str, Any], style: str = "cyan") -> None:
        """
        Two-column key/value table.

        :param title: Table title
        :param data: Rows as ``{field: value}``
        :param style: Style of the table frame
        """
        from rich.table import Table

        table = Table(title=title, style=style)
        table.add_column("Field", style="cyan", no_wrap=True)
        table.add_column("Value", style="white")
        for key, value in data.items():
            table.add_row(str(key), str(value))
        self.console.print(table)

    def grid(self, title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        """
        Multi-column table, e.g. the explained-variance shares by number of factors.

        :param title: Table title
        :param columns: Column headers
        :param rows: Row values, converted with ``str``
        """
        from rich.table import Table

        table = Table(title=title)
        for i, column in enumerate(columns):
            table.add_column(str(column), style="cyan" if i == 0 else "white", justify="right")
        for row in rows:
            table.add_row(*(str(v) for v in row))
        self.console.print(table)

    def panel(self, message: str, title: str | None = None, style: str = "cyan") -> None:
        from rich.panel import Panel

        self.console.print(Panel(message, title=title, style=style))

    def status(self, message: str, spinner: str = "dots") -> Any:
        """Spinner context shown while a long stage (EM, Monte Carlo) runs."""
        return self.console.status(message, spinner=spinner)


__all__ = ["RichConsoleRenderer", "DEFAULT_THEME"]
