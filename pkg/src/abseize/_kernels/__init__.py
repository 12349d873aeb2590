"""Numeric kernel backend selection.

The compiled extension is preferred; the numpy/scalar reference backend is
used when the extension is unavailable or ``ABSEIZE_PURE_PYTHON`` is set.
``backend_name()`` reports which one is active.
"""

from __future__ import annotations

import os

import numpy as np

from . import reference

if os.environ.get("ABSEIZE_PURE_PYTHON"):
    _impl = reference
    _BACKEND = "python"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]

        _BACKEND = "compiled"
    except ImportError:  # missing or failed extension build
        _impl = reference
        _BACKEND = "python"


def backend_name() -> str:
    return _BACKEND


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ('compiled'/'python'/None=active)."""
    if name is None:
        return _impl
    if name == "python":
        return reference
    if name == "compiled":
        from . import _fastcore  # raises ImportError if not built

        return _fastcore
    raise ValueError(f"unknown kernel backend {name!r}")


def rhs_batch(u, y, prm, ab5, out=None, impl=None):
    impl = impl or _impl
    u = np.ascontiguousarray(u, dtype=np.float64)
    if out is None:
        out = np.empty((7, u.shape[0]), dtype=np.float64)
    impl.rhs_batch(u, y, prm, ab5, out)
    return out


def ionic_step_batch(u, y, prm, ab5, dt, out, impl=None):
    (impl or _impl).ionic_step_batch(u, y, prm, ab5, dt, out)


def integrate0d(u0, y0, prm, ab5, dt, n_steps, stride, scheme=0, impl=None):
    """Run the fixed-step 0D integrator.

    Returns (rec, final, status): rec is (5, n_samples) of [u, ca, ko, na,
    j_ab] at every ``stride`` steps, final the full end state, status -1 on
    success or the failing step index.
    """
    impl = impl or _impl
    n_rec = int(n_steps) // int(stride) + 1
    rec = np.empty((5, n_rec), dtype=np.float64)
    final = np.empty(7, dtype=np.float64)
    y0 = np.ascontiguousarray(y0, dtype=np.float64)
    prm = np.ascontiguousarray(prm, dtype=np.float64)
    ab5 = np.ascontiguousarray(ab5, dtype=np.float64)
    status = impl.integrate0d(
        float(u0), y0, prm, ab5, float(dt), int(n_steps), int(stride),
        int(scheme), rec, final,
    )
    return rec, final, int(status)
