"""Backend dispatch for the compute kernels.

The compiled extension is preferred when importable; the numpy fallback is
always present.  Set WIGFREE_KERNELS=python (or =compiled) to force a
backend; the variable is read once at import.
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCED = os.environ.get("WIGFREE_KERNELS", "auto").lower()
if _FORCED not in ("auto", "compiled", "c", "python"):
    raise ImportError(
        f"WIGFREE_KERNELS={_FORCED!r} is not a known backend "
        "(use auto, compiled, or python)"
    )

_compiled = None
if _FORCED in ("auto", "compiled", "c"):
    try:
        from . import _ckernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None
        if _FORCED != "auto":
            raise ImportError(
                "WIGFREE_KERNELS requested the compiled backend but "
                "wigfree._ckernels is not built"
            )

_active = _compiled if _compiled is not None else _pykernels

BACKEND: str = _active.BACKEND_NAME

eval_groups = _active.eval_groups
quad_points = _active.quad_points


def available_backends() -> tuple[str, ...]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return tuple(names)


def get_backend(name: str):
    """Return the kernel module for ``name`` (for benchmarks and tests)."""
    if name == "python":
        return _pykernels
    if name in ("compiled", "c"):
        if _compiled is None:
            raise ValueError("compiled backend not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
