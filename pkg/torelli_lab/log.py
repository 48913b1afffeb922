import os
import sys
import json
import logging
from logging.handlers import RotatingFileHandler

# Configure logging
logger = logging.getLogger("torelli_lab")
logger.setLevel(logging.INFO)

# Determine log file path
BASE_DIR = os.environ.get(
    'TORELLI_LAB_HOME',
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
)
LOG_DIR = os.path.join(BASE_DIR, 'instance')
os.makedirs(LOG_DIR, exist_ok=True)
LOG_FILE = os.path.join(LOG_DIR, 'torelli_lab.log')

if not any(getattr(h, "baseFilename", None) == LOG_FILE for h in logger.handlers):
    # File Handler
    file_handler = RotatingFileHandler(LOG_FILE, maxBytes=10*1024*1024, backupCount=5)
    file_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(name)s - %(message)s'))
    logger.addHandler(file_handler)

    # Stream Handler (stderr, stdout carries machine-readable results)
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(logging.Formatter('%(message)s'))
    stream_handler.setLevel(logging.WARNING)
    logger.addHandler(stream_handler)

# Debug logging (local-only file)
DEBUG_LOGGING = os.environ.get('DEBUG_LOGGING', 'false').lower() in ('1', 'true', 'yes', 'on')
DEBUG_LOG_DIR = os.path.join(BASE_DIR, 'debugging')
DEBUG_LOG_FILE = os.path.join(DEBUG_LOG_DIR, 'debug.log')

debug_logger = logging.getLogger("torelli_lab.debug")
debug_logger.setLevel(logging.INFO)
debug_logger.propagate = False
if DEBUG_LOGGING:
    os.makedirs(DEBUG_LOG_DIR, exist_ok=True)
    if not any(getattr(h, "baseFilename", None) == DEBUG_LOG_FILE for h in debug_logger.handlers):
        debug_handler = RotatingFileHandler(DEBUG_LOG_FILE, maxBytes=10 * 1024 * 1024, backupCount=10)
        debug_handler.setFormatter(logging.Formatter('%(message)s'))
        debug_logger.addHandler(debug_handler)
else:
    debug_logger.disabled = True


def set_verbose(enabled: bool) -> None:
    """Echo progress lines on stderr (the CLI's --verbose)."""
    for handler in logger.handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, RotatingFileHandler):
            handler.setLevel(logging.INFO if enabled else logging.WARNING)


def log(msg: str) -> None:
    """Log a progress message to the log file (and stderr when verbose)."""
    logger.info(msg)


def debug_log_event(event: dict) -> None:
    """Write structured debug events to a local file."""
    if debug_logger.disabled:
        return
    try:
        debug_logger.info(json.dumps(event, ensure_ascii=True, separators=(',', ':'), default=str))
    except Exception as exc:
        logger.info(f"⚠️ Debug log failure: {exc}")
