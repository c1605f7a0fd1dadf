"""Kernel selection.

Uses the compiled ``_core`` extension when it is importable, otherwise the
pure-Python ``_pure`` module. Set ``VSSCONTROL_PURE=1`` to force the
fallback (the test suite runs both backends against each other).
"""

import os

from . import _pure

BACKEND = "pure"
_core = None

if os.environ.get("VSSCONTROL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core  # type: ignore[no-redef]
    except ImportError:
        _core = None
    else:
        BACKEND = "compiled"

if _core is not None:
    horner = _core.horner
    lagrange_at_zero = _core.lagrange_at_zero
    walsh_spectrum = _core.walsh_spectrum

    def gf2_rref(rows, ncols):
        if ncols > 63:
            return _pure.gf2_rref(rows, ncols)
        return _core.gf2_rref(rows, ncols)

else:
    horner = _pure.horner
    lagrange_at_zero = _pure.lagrange_at_zero
    walsh_spectrum = _pure.walsh_spectrum
    gf2_rref = _pure.gf2_rref

__all__ = ["BACKEND", "horner", "lagrange_at_zero", "gf2_rref", "walsh_spectrum"]
