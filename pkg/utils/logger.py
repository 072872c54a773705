from __future__ import annotations

from time import perf_counter

from rich.traceback import install as install_rich_traceback

from utils.logging_config import configure_logger
from utils.logging_interfaces import ConsoleRendererProtocol, LoggerProtocol
from utils.rich_renderers import RichConsoleRenderer


def setup_logger(level: str | None = None) -> LoggerProtocol:
    """
    Configure and return the process logger.

    Configuration lives in :mod:`utils.logging_config`; the Rich console is
    injected as a plain ``write`` function so the two never import each other.
    """
    return configure_logger(renderer.write, level=level)


def get_view() -> ConsoleRendererProtocol:
    """Return the console renderer used for tables and sections."""
    return renderer


class LogContext:
    """
    Context manager marking the beginning and end of a pipeline stage.

    The elapsed wall time is logged on exit; exceptions propagate unchanged.

    :ivar title: Stage title shown in the section rules
    :ivar style: Rich style of the opening rule
    :ivar elapsed: Seconds spent inside the block, set on exit
    """

    def __init__(self, title: str, style: str = "cyan"):
        self.title = title
        self.style = style
        self.elapsed: float | None = None
        self._start = 0.0

    def __enter__(self):
        renderer.section(f"BEGIN: {self.title}", self.style)
        self._start = perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = perf_counter() - self._start
        if exc_type is None:
            log.debug(f"{self.title} finished in {self.elapsed:.3f}s")
            renderer.section(f"END: {self.title} ✓", "green")
        else:
            log.error(f"{self.title} failed after {self.elapsed:.3f}s: {exc_val}")
            renderer.section(f"END: {self.title} ✗", "red")
        return False


# Los locals de los tracebacks serían matrices enteras
install_rich_traceback(show_locals=False)

renderer: ConsoleRendererProtocol = RichConsoleRenderer()
log: LoggerProtocol = configure_logger(renderer.write)
console = renderer.console

__all__ = ["log", "console", "get_view", "renderer", "setup_logger", "LogContext"]
