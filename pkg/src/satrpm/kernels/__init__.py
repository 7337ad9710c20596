"""Mixing-kernel backend selection.

The compiled Cython kernels are preferred; the pure-numpy implementation in
``_mix_py`` is a drop-in fallback.  Set ``SATRPM_BACKEND=py`` or
``SATRPM_BACKEND=c`` to force a backend (the latter raises if the extension
is missing, which is useful in CI).
"""

import os

from . import _mix_py

_requested = os.environ.get("SATRPM_BACKEND", "").strip().lower()

if _requested in ("py", "python", "numpy"):
    _impl = _mix_py
elif _requested in ("c", "cy", "cython", "compiled"):
    from . import _mix_cy as _impl
else:
    try:
        from . import _mix_cy as _impl
    except ImportError:
        _impl = _mix_py

mix_forward = _impl.mix_forward
mix_backward = _impl.mix_backward
DEGENERATE_EPS = _impl.DEGENERATE_EPS


def backend_name() -> str:
    """'compiled' when the Cython extension is active, else 'python'."""
    return "python" if _impl is _mix_py else "compiled"


def available_backends():
    """Module objects for every importable backend, keyed by name."""
    out = {"python": _mix_py}
    try:
        from . import _mix_cy
        out["compiled"] = _mix_cy
    except ImportError:
        pass
    return out
