"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the NumPy
fallback takes over with identical semantics.  ``BACKEND`` records which
one is active; ``get_kernels`` gives explicit access to either (used by the
benchmark and the backend-equivalence tests).
"""

from . import fallback as _fallback

try:
    from . import _core as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_active = _compiled if _compiled is not None else _fallback

emit_pair_keys = _active.emit_pair_keys
pfnet_retain = _active.pfnet_retain


def get_kernels(backend: str | None = None):
    """Return the kernel namespace for 'compiled' or 'python' (None = active)."""
    if backend is None:
        return _active
    if backend == "python":
        return _fallback
    if backend == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available in this install")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
