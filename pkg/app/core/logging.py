"""
Structured logging helpers.

Records are plain `logging` records whose message is a JSON object, so every
command, training epoch and pipeline stage can be grepped and parsed.
"""

import json
import logging
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator
from uuid import uuid4

logger = logging.getLogger(__name__)


def setup_logging(level: str = "INFO") -> None:
    """
    Configure root logging once for command-line use.

    Args:
        level: Logging level name (e.g., "INFO", "DEBUG")
    """
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format="%(message)s")
    logging.getLogger().setLevel(getattr(logging, level.upper(), logging.INFO))


def log_event(target: logging.Logger, event: str, level: int = logging.INFO, **fields: Any) -> None:
    """
    Emit one structured record.

    Args:
        target: Module logger to emit on
        event: Short event name (e.g., "epoch_completed")
        level: Logging level
        **fields: JSON-serializable payload
    """
    if not target.isEnabledFor(level):
        return
    payload: Dict[str, Any] = {"event": event, **fields}
    target.log(level, json.dumps(payload, default=str, sort_keys=True))


@contextmanager
def track_command(command: str, **fields: Any) -> Iterator[Dict[str, Any]]:
    """
    Log start/end of a command with a run id and its processing time.

    Yields:
        Mutable dict; keys added by the caller are included in the final record
    """
    run_id = str(uuid4())
    start_time = time.time()
    log_data: Dict[str, Any] = {"run_id": run_id, "command": command, **fields}

    try:
        yield log_data
        process_time = time.time() - start_time
        log_data.update({"process_time": f"{process_time:.3f}s", "success": True})
        log_event(logger, "command_completed", **log_data)
    except Exception as e:
        process_time = time.time() - start_time
        log_data.update({
            "process_time": f"{process_time:.3f}s",
            "error": str(e),
            "success": False,
        })
        log_event(logger, "command_failed", level=logging.ERROR, **log_data)
        raise
