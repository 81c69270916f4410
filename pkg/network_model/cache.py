import logging
import os
import threading
from typing import Any, Hashable, Optional

from cachetools import LRUCache, TTLCache, cached
from cachetools.keys import hashkey
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger("network_model")

# Entries kept per memoized special function
MEMO_SIZE = int(os.getenv("D2D_MEMO_SIZE", 65536))

# Per-run result cache (orchestrator)
RESULT_CACHE_SIZE = int(os.getenv("D2D_RESULT_CACHE_SIZE", 256))
RESULT_TTL_SECONDS = int(os.getenv("D2D_CACHE_TTL_SECONDS", 3600))

QUANTIZE_DIGITS = 12


def quantize(value: Any, digits: int = QUANTIZE_DIGITS) -> Any:
    """Round floats to `digits` significant digits; other values pass through."""
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    return value


def quantized_key(*args, **kwargs) -> tuple:
    """Cache key where nearby floats (last-bit noise) share an entry."""
    return hashkey(
        *(quantize(a) for a in args),
        **{k: quantize(v) for k, v in kwargs.items()},
    )


def memoize(maxsize: int = MEMO_SIZE):
    """
    Thread-safe LRU memo with quantized float keys.

    The wrapped function exposes cache_info() and cache_clear().
    """
    return cached(
        cache=LRUCache(maxsize=maxsize),
        key=quantized_key,
        lock=threading.RLock(),
        info=True,
    )


_results = TTLCache(maxsize=RESULT_CACHE_SIZE, ttl=RESULT_TTL_SECONDS)
_results_lock = threading.Lock()


def get_cached(key: Hashable) -> Optional[Any]:
    """
    Look up a stored result.

    Fail-open: any cache problem is reported as a miss.
    """
    try:
        with _results_lock:
            return _results.get(key)
    except Exception as e:
        logger.debug("Result cache read error (ignoring): %s", e)
        return None


def set_cached(key: Hashable, value: Any) -> None:
    """Store a result; failures are ignored."""
    try:
        with _results_lock:
            _results[key] = value
    except Exception as e:
        logger.debug("Result cache write error (ignoring): %s", e)


def clear_results() -> None:
    with _results_lock:
        _results.clear()
