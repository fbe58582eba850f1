import inspect
import logging
import os
import threading
from functools import wraps
from typing import Optional

logger = logging.getLogger(__name__)

CAP_ENV_VAR = "CURVEDALG_CAP_DEFAULT"
FALLBACK_CAP = 6
FALLBACK_ARITY_CAP = 4
FALLBACK_CONILPOTENCY_CAP = 16


def _cap_from_env() -> int:
    """Read the default truncation cap from the environment.

    Returns:
        The integer in ``CURVEDALG_CAP_DEFAULT`` or 6 when unset or malformed.
    """
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return FALLBACK_CAP
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring malformed {CAP_ENV_VAR}={raw!r}, using {FALLBACK_CAP}")
        return FALLBACK_CAP
    if value < 0:
        logger.warning(f"Ignoring negative {CAP_ENV_VAR}={value}, using {FALLBACK_CAP}")
        return FALLBACK_CAP
    return value


class Settings:
    """Process-wide registry of truncation defaults.

    Use `set_default_cap()`, `get_default_cap()` for the word-length cap of bar and cobar.
    Use `set_arity_cap()`, `get_arity_cap()` for the highest operation arity checked by A-infinity validators.
    Use `clear()` to drop overrides and fall back to the environment.
    """

    _lock = threading.Lock()
    _default_cap: Optional[int] = None
    _arity_cap: Optional[int] = None
    _conilpotency_cap: Optional[int] = None

    @classmethod
    def set_default_cap(cls, cap: int) -> None:
        """Override the default truncation cap.

        Args:
            cap: Maximal word length kept by truncated tensor constructions.
        """
        with cls._lock:
            cls._default_cap = cap

    @classmethod
    def get_default_cap(cls) -> int:
        """Return the default truncation cap (override, else environment, else 6)."""
        with cls._lock:
            if cls._default_cap is not None:
                return cls._default_cap
        return _cap_from_env()

    @classmethod
    def set_arity_cap(cls, arity_cap: int) -> None:
        with cls._lock:
            cls._arity_cap = arity_cap

    @classmethod
    def get_arity_cap(cls) -> int:
        with cls._lock:
            return cls._arity_cap if cls._arity_cap is not None else FALLBACK_ARITY_CAP

    @classmethod
    def set_conilpotency_cap(cls, cap: int) -> None:
        with cls._lock:
            cls._conilpotency_cap = cap

    @classmethod
    def get_conilpotency_cap(cls) -> int:
        with cls._lock:
            return cls._conilpotency_cap if cls._conilpotency_cap is not None else FALLBACK_CONILPOTENCY_CAP

    @classmethod
    def clear(cls) -> None:
        """Drop every override."""
        with cls._lock:
            cls._default_cap = None
            cls._arity_cap = None
            cls._conilpotency_cap = None


def uses_default_cap(func):
    """Decorator filling a missing ``cap`` argument from :class:`Settings`.

    Args:
        func: The function to wrap. It must take a ``cap`` parameter.

    Returns:
        The wrapped function with ``cap`` injected when the caller passed None.
    """

    signature = inspect.signature(func)

    @wraps(func)
    def wrapper(*args, **kwargs):
        bound = signature.bind(*args, **kwargs)
        if bound.arguments.get("cap") is None:
            bound.arguments["cap"] = Settings.get_default_cap()
            logger.debug(f"{func.__name__}: using default cap {bound.arguments['cap']}")
        return func(*bound.args, **bound.kwargs)

    return wrapper
