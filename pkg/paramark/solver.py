# paramark/solver.py
"""Run an external SMT-LIB solver on a script file and collect its output."""
import logging
import os
import subprocess
import tempfile
from typing import Optional

from .core.config import settings
from .errors import SolverInconclusive, SolverUnavailable

logger = logging.getLogger(__name__)


def resolve_solver(cli_value: Optional[str] = None) -> Optional[str]:
    """The --solver flag wins over PARAMARK_SOLVER; None means no solver is configured."""
    return cli_value or settings.SOLVER


def run_solver(script: str, solver: str, timeout: Optional[int] = None) -> str:
    """Write ``script`` to a temporary .smt2 file, run ``solver <file>`` and return its stdout."""
    timeout = timeout or settings.SOLVER_TIMEOUT
    with tempfile.NamedTemporaryFile(mode="w", suffix=".smt2", delete=False) as f:
        f.write(script)
        path = f.name
    logger.info("running %s on %s (timeout %ss)", solver, path, timeout)
    try:
        result = subprocess.run(
            [solver, path],
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        logger.warning("solver timed out after %ss", timeout)
        raise SolverInconclusive(f"solver timed out after {timeout}s")
    except (FileNotFoundError, PermissionError) as exc:
        raise SolverUnavailable(f"cannot run solver {solver!r}: {exc}")
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass
    if result.stderr.strip():
        logger.debug("solver stderr: %s", result.stderr.strip())
    if not result.stdout.strip():
        raise SolverInconclusive(f"solver exited with code {result.returncode} and no output")
    return result.stdout
