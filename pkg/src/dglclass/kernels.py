"""Backend dispatch for the hot kernels.

Importing this module picks the compiled Cython extension when it is
available and silently falls back to the pure numpy implementation
otherwise.  Set ``DGLCLASS_BACKEND=python`` or ``DGLCLASS_BACKEND=compiled``
to force a choice (forcing ``compiled`` raises if the extension is missing).
Both backends are bitwise interchangeable; see ``benchmarks/`` for the
speed difference.
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCED = os.environ.get("DGLCLASS_BACKEND", "").strip().lower()

if _FORCED == "python":
    _impl = _kernels_py
    BACKEND = "python"
elif _FORCED == "compiled":
    from . import _kernels as _impl  # noqa: F401

    BACKEND = "compiled"
elif _FORCED == "":
    try:
        from . import _kernels as _impl  # noqa: F401

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
else:
    raise RuntimeError(
        f"DGLCLASS_BACKEND={_FORCED!r} is not recognized; "
        "use 'python' or 'compiled'"
    )

sample_from_cdf = _impl.sample_from_cdf
histogram = _impl.histogram
set_masses_from_counts = _impl.set_masses_from_counts
max_abs_dev = _impl.max_abs_dev
run_trial_kernel = _impl.run_trial_kernel


def active_backend() -> str:
    """Name of the kernel backend selected at import: 'compiled' or 'python'."""
    return BACKEND
