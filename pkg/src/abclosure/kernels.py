"""Kernel dispatch: compiled extension when built, pure Python otherwise.

Set ABCLOSURE_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests comparing the two implementations).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ABCLOSURE_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

sieve_primes = _impl.sieve_primes
scan_unit_fermat = _impl.scan_unit_fermat


def backend() -> str:
    """Name of the active kernel implementation ('cython' or 'python')."""
    return _impl.backend()
