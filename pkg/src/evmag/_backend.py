"""Kernel backend selection: compiled extension when available, numpy otherwise.

Set EVMAG_BACKEND=python or EVMAG_BACKEND=native to force a choice; forcing
native without the built extension raises at import.
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("EVMAG_BACKEND", "").lower()

if _forced == "python":
    kernels = _kernels_py
elif _forced == "native":
    from . import _kernels as kernels  # noqa: F401
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND_NAME
interval_events = kernels.interval_events
