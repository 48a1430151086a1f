"""Pure-Python versions of the hot loops (reference and import fallback).

States are permutations ``x`` with ``x[col] = row``; rank is the
lexicographic index among all permutations of ``range(k)``.
"""

from math import factorial

import numpy as np


def lex_rank(x):
    k = len(x)
    rank = 0
    for i in range(k):
        smaller = 0
        xi = x[i]
        for j in range(i + 1, k):
            if x[j] < xi:
                smaller += 1
        rank += smaller * factorial(k - 1 - i)
    return rank


def lex_unrank(rank, k):
    pool = list(range(k))
    out = []
    for i in range(k):
        f = factorial(k - 1 - i)
        q, rank = divmod(rank, f)
        out.append(pool.pop(q))
    return tuple(out)


def rectangles(states, wcol, zcol, forbid_w, forbid_z):
    """Empty rectangles out of each state.

    ``states`` is an (N, k) integer array.  A rectangle is kept only when it
    contains no ``z`` whose bit is set in ``forbid_z`` and no ``w`` whose bit
    is set in ``forbid_w`` (bits are indexed by row).  Returns three lists:
    source position in ``states``, lexicographic rank of the target, and the
    bitmask of w-rows inside the rectangle.
    """
    states = np.asarray(states)
    n_states, k = states.shape
    src, tgt, wmasks = [], [], []
    wcol = [int(c) for c in wcol]
    zcol = [-1 if c is None else int(c) for c in zcol]
    for s in range(n_states):
        x = [int(v) for v in states[s]]
        for i in range(k):
            xi = x[i]
            for width in range(1, k):
                j = (i + width) % k
                xj = x[j]
                height = (xj - xi) % k
                empty = True
                for d in range(1, width):
                    c = (i + d) % k
                    if 0 < (x[c] - xi) % k < height:
                        empty = False
                        break
                if not empty:
                    continue
                wm = 0
                bad = False
                for dr in range(height):
                    r = (xi + dr) % k
                    if (wcol[r] - i) % k < width:
                        if (forbid_w >> r) & 1:
                            bad = True
                            break
                        wm |= 1 << r
                    zc = zcol[r]
                    if zc >= 0 and (zc - i) % k < width and (forbid_z >> r) & 1:
                        bad = True
                        break
                if bad:
                    continue
                y = list(x)
                y[i], y[j] = xj, xi
                src.append(s)
                tgt.append(lex_rank(y))
                wmasks.append(wm)
    return src, tgt, wmasks
