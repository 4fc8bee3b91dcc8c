import json
import logging
import sys
import traceback
from typing import Optional, TextIO

from app.core.constants import EXIT_RUNTIME_ERROR
from app.utils.exceptions import SpearError

logger = logging.getLogger(__name__)


def _emit(payload: dict, stream: Optional[TextIO]) -> None:
    stream = stream or sys.stderr
    stream.write(json.dumps(payload, sort_keys=True) + "\n")
    stream.flush()


def spear_error_handler(exc: SpearError, run_id: Optional[str] = None, stream: Optional[TextIO] = None) -> int:
    _emit(
        {
            "success": False,
            "error": exc.detail,
            "error_type": type(exc).__name__,
            "exit_code": exc.exit_code,
            "run_id": run_id,
        },
        stream,
    )
    logger.warning(f"{type(exc).__name__}: {exc.exit_code} - {exc.detail}")
    return exc.exit_code


def generic_exception_handler(exc: Exception, run_id: Optional[str] = None, stream: Optional[TextIO] = None) -> int:
    error_detail = f"{type(exc).__name__}: {str(exc)}"
    traceback_str = "".join(traceback.format_tb(exc.__traceback__))
    logger.error(f"Unhandled exception: {error_detail}\n{traceback_str}", exc_info=True)
    _emit(
        {
            "success": False,
            "error": "Internal error",
            "detail": error_detail,
            "exit_code": EXIT_RUNTIME_ERROR,
            "run_id": run_id,
        },
        stream,
    )
    return EXIT_RUNTIME_ERROR


def handle_exception(exc: Exception, run_id: Optional[str] = None, stream: Optional[TextIO] = None) -> int:
    """Report an exception on standard error and return the process exit code."""
    if isinstance(exc, SpearError):
        return spear_error_handler(exc, run_id, stream)
    return generic_exception_handler(exc, run_id, stream)
