"""Kernel dispatch: compiled core when importable, pure Python otherwise.

``BACKEND`` names the implementation picked at import.  Every entry point
takes ``backend=`` to force one, which the benchmarks and the
cross-checking tests use.
"""

import numpy as np

from balpack import _pykernels

try:
    from balpack import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

# headroom for sums of two values and a doubling inside the kernels
_INT64_SAFE = 1 << 60


def available_backends():
    return ("cython", "python") if _ckernels is not None else ("python",)


def _resolve(backend):
    if backend is None:
        return BACKEND
    if backend not in available_backends():
        raise ValueError(f"kernel backend {backend!r} is not available")
    return backend


def pack_boxes(sizes, m, backend=None):
    """Greedy lightest-box packing of integer sizes in the given order.

    Returns ``(box_of, loads)`` as Python lists.
    """
    backend = _resolve(backend)
    if backend == "cython" and sum(sizes) < _INT64_SAFE:
        box_of, loads = _ckernels.pack_boxes(np.asarray(sizes, dtype=np.int64), m)
        return box_of.tolist(), loads.tolist()
    return _pykernels.pack_boxes(sizes, m)


def distribute(box_sizes, backend=None):
    """Order boxes and compute stage-1 numerators/denominators.

    Returns ``(sigma, num1, den1)`` as lists, or ``None`` when a selection
    set is exhausted.
    """
    backend = _resolve(backend)
    m = len(box_sizes)
    total = sum(box_sizes)
    if backend == "cython" and 4 * m * max(box_sizes) < _INT64_SAFE and 4 * total < _INT64_SAFE:
        b = np.asarray(box_sizes, dtype=np.int64)
        mb = m * b
        up = np.lexsort((np.arange(m), b))
        up = up[mb[up] >= total]
        down = np.lexsort((np.arange(m), -b))
        down = down[mb[down] <= total]
        out = _ckernels.distribute(b, up.astype(np.int64), down.astype(np.int64))
        if out is None:
            return None
        return tuple(a.tolist() for a in out)
    return _pykernels.distribute(list(box_sizes))
