"""Kernel backend selection: compiled extension when built, pure Python otherwise.

Set D2DPA_PURE=1 to force the pure-Python path (used by the benchmark and the
twin-equivalence tests).
"""

from __future__ import annotations

import os

from . import fdnosic as _py

BACKEND = "python"
fd_nosic_search = _py.fd_nosic_search

if not os.environ.get("D2DPA_PURE"):
    try:
        from . import _speedups as _c

        fd_nosic_search = _c.fd_nosic_search
        BACKEND = "compiled"
    except ImportError:
        pass
