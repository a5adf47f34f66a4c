"""
Error types and error-to-exit-code handling for simulation runs.
"""
import functools
import logging
from typing import Awaitable, Callable

logger = logging.getLogger('photon_tunneling.error_handler')

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
EXIT_IO_ERROR = 4


class SimulationError(Exception):
    """Base class for all simulation failures."""


class ConfigError(SimulationError, ValueError):
    """Invalid or unresolvable experiment configuration."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalInvariantError(SimulationError, ArithmeticError):
    """A physical or numerical invariant was violated during a computation."""


class FlatScanError(NumericalInvariantError):
    """The coincidence scan has no interior minimum below the fringe threshold."""


class PlateauError(NumericalInvariantError):
    """The coincidence scan does not reach its large-|s| plateau."""


class TotalExtinctionError(NumericalInvariantError):
    """The barrier transmits nothing across the whole pulse band."""


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the process exit code.

    Args:
        exc: Exception raised by a subcommand

    Returns:
        Exit code (2 config, 3 numerical, 4 I/O)

    Raises:
        The original exception when it has no exit code mapping
    """
    if isinstance(exc, NumericalInvariantError):
        return EXIT_NUMERICAL_ERROR
    if isinstance(exc, ValueError):
        return EXIT_CONFIG_ERROR
    if isinstance(exc, OSError):
        return EXIT_IO_ERROR
    raise exc


def handle_simulation_errors(func: Callable[..., Awaitable[int]]) -> Callable[..., Awaitable[int]]:
    """Decorator to turn simulation errors into exit codes consistently.

    Args:
        func: Coroutine function returning an exit code

    Returns:
        Wrapped coroutine function with error handling
    """
    @functools.wraps(func)
    async def wrapper(*args, **kwargs) -> int:
        try:
            return await func(*args, **kwargs)
        except NumericalInvariantError as e:
            logger.error(f"Numerical invariant violated in {func.__name__}: {str(e)}")
            return exit_code_for(e)
        except ValueError as e:
            logger.error(f"Configuration error in {func.__name__}: {str(e)}")
            return exit_code_for(e)
        except OSError as e:
            logger.error(f"I/O error in {func.__name__}: {str(e)}")
            return exit_code_for(e)
    return wrapper
