"""Kernel backend selection.

The compiled extension is used when it was built and
``URLLC_HMA_PURE`` is not set to ``1``; otherwise the pure-Python
reference implementations are used. ``BACKEND`` names the active one.
"""
import os

from . import _pykernels as python_backend
from ._pykernels import SELECTION, SUM_RATE

compiled_backend = None
try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("URLLC_HMA_PURE") != "1":
    _active = compiled_backend
    BACKEND = "compiled"
else:
    _active = python_backend
    BACKEND = "python"

count_failures = _active.count_failures
schedule_slots = _active.schedule_slots

__all__ = ["BACKEND", "SELECTION", "SUM_RATE", "count_failures", "schedule_slots",
           "compiled_backend", "python_backend"]
