"""Backend selection for the closed-loop kernel.

The compiled extension is used when it imports; otherwise the pure-Python
implementation is used. ``use_backend`` switches explicitly (tests and the
benchmark run both).
"""

from __future__ import annotations

import logging

from . import _pykernel

log = logging.getLogger(__name__)

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None
    log.debug("compiled kernel unavailable, using pure-Python fallback")

_BACKENDS = {"python": _pykernel}
if _ckernel is not None:
    _BACKENDS["compiled"] = _ckernel

BACKEND = "compiled" if _ckernel is not None else "python"
_impl = _BACKENDS[BACKEND]


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def use_backend(name: str) -> None:
    global BACKEND, _impl
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    BACKEND = name
    _impl = _BACKENDS[name]


def get_impl(name: str | None = None):
    return _impl if name is None else _BACKENDS[name]
