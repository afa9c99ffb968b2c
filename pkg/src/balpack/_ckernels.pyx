# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for phase-I packing and phase-II distribution.

int64 versions of ``_pykernels``; callers must check magnitudes with
``kernels.fits_int64`` before dispatching here.
"""

import numpy as np
from libc.stdint cimport int64_t


cdef inline bint _less(int64_t[::1] loads, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    return loads[a] < loads[b] or (loads[a] == loads[b] and a < b)


def pack_boxes(const int64_t[::1] sizes, Py_ssize_t m):
    cdef Py_ssize_t n = sizes.shape[0]
    box_of_arr = np.empty(n, dtype=np.int64)
    loads_arr = np.zeros(m, dtype=np.int64)
    heap_arr = np.arange(m, dtype=np.int64)
    cdef int64_t[::1] box_of = box_of_arr
    cdef int64_t[::1] loads = loads_arr
    cdef int64_t[::1] heap = heap_arr
    cdef Py_ssize_t i, pos, child, j, top
    with nogil:
        for i in range(n):
            top = heap[0]
            box_of[i] = top
            loads[top] += sizes[i]
            # sift the root down; keys are (load, box index)
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= m:
                    break
                if child + 1 < m and _less(loads, heap[child + 1], heap[child]):
                    child += 1
                if _less(loads, heap[child], top):
                    heap[pos] = heap[child]
                    pos = child
                else:
                    break
            heap[pos] = top
    return box_of_arr, loads_arr


def distribute(const int64_t[::1] box_sizes, const int64_t[::1] up, const int64_t[::1] down):
    """``up``/``down``: box indices sorted by (size, idx) and (-size, idx),
    already restricted to boxes at/above and at/below the average."""
    cdef Py_ssize_t m = box_sizes.shape[0]
    cdef Py_ssize_t nu = up.shape[0], nd = down.shape[0]
    cdef int64_t total = 0, mbmax = 0, resid = 0, mbj
    cdef Py_ssize_t ell, j, iu = 0, idn = 0
    sigma_arr = np.empty(m, dtype=np.int64)
    num_arr = np.empty(m, dtype=np.int64)
    den_arr = np.empty(m, dtype=np.int64)
    taken_arr = np.zeros(m, dtype=np.uint8)
    cdef int64_t[::1] sigma = sigma_arr
    cdef int64_t[::1] num1 = num_arr
    cdef int64_t[::1] den1 = den_arr
    cdef unsigned char[::1] taken = taken_arr
    cdef bint ok = True
    with nogil:
        for j in range(m):
            total += box_sizes[j]
            if m * box_sizes[j] > mbmax:
                mbmax = m * box_sizes[j]
        for ell in range(m):
            if ell == 0 or resid + mbmax <= 2 * total:
                while iu < nu and taken[up[iu]]:
                    iu += 1
                if iu == nu:
                    ok = False
                    break
                j = up[iu]
            else:
                while idn < nd and taken[down[idn]]:
                    idn += 1
                if idn == nd:
                    ok = False
                    break
                j = down[idn]
            taken[j] = 1
            mbj = m * box_sizes[j]
            if ell == 0:
                resid = mbj + total - mbmax
            else:
                resid += mbj - total
            sigma[ell] = j
            num1[ell] = resid
            den1[ell] = mbj
    if not ok:
        return None
    return sigma_arr, num_arr, den_arr
