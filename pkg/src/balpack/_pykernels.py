"""Pure-Python kernels, used when the compiled extension is unavailable.

Both kernels work on integer box/object sizes (callers scale rationals to
a common denominator first) and mirror ``_ckernels.pyx`` exactly.
"""

import heapq


def pack_boxes(sizes, m):
    """Assign each object, in the given order, to the lightest box.

    Ties go to the smallest box index.  Returns ``(box_of, loads)``.
    """
    heap = [(0, j) for j in range(m)]
    loads = [0] * m
    box_of = [0] * len(sizes)
    for i, a in enumerate(sizes):
        load, j = heap[0]
        box_of[i] = j
        load += a
        loads[j] = load
        heapq.heapreplace(heap, (load, j))
    return box_of, loads


def distribute(box_sizes):
    """Circular ordering and stage-1 coefficients for integer box sizes.

    With ``T = sum(B)`` and ``m = len(B)`` the average is ``T/m``.  The
    running residual ``R = m*S_l - (l-1)*T`` stays within ``[0, m*B]`` so
    the stage-1 coefficient of bin ``l`` is ``R / (m * B[sigma[l]])``.

    Returns ``(sigma, num1, den1)`` or ``None`` if a selection set came up
    empty, which the theory rules out.
    """
    m = len(box_sizes)
    total = sum(box_sizes)
    mb = [m * b for b in box_sizes]
    mbmax = max(mb)
    up = [j for j in sorted(range(m), key=lambda j: (box_sizes[j], j)) if mb[j] >= total]
    down = [j for j in sorted(range(m), key=lambda j: (-box_sizes[j], j)) if mb[j] <= total]
    taken = [False] * m
    iu = idn = 0
    sigma = [0] * m
    num1 = [0] * m
    den1 = [0] * m
    resid = 0
    for ell in range(m):
        if ell == 0 or resid + mbmax <= 2 * total:
            while iu < len(up) and taken[up[iu]]:
                iu += 1
            if iu == len(up):
                return None
            j = up[iu]
        else:
            while idn < len(down) and taken[down[idn]]:
                idn += 1
            if idn == len(down):
                return None
            j = down[idn]
        taken[j] = True
        if ell == 0:
            resid = mb[j] + total - mbmax
        else:
            resid += mb[j] - total
        sigma[ell] = j
        num1[ell] = resid
        den1[ell] = mb[j]
    return sigma, num1, den1
