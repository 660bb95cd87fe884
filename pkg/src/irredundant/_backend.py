"""Select the compiled kernels when available, else the pure-Python ones.

Set ``IRREDUNDANT_PURE=1`` to force the pure-Python implementation.
"""
from __future__ import annotations

import os

if os.environ.get("IRREDUNDANT_PURE", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND: str = kernels.BACKEND
branch_and_bound = kernels.branch_and_bound
random_family_core = kernels.random_family_core
min_orbit_keys = kernels.min_orbit_keys
