# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_pykernel``; same signatures."""

import numpy as np
cimport numpy as cnp

cdef long long _fact[21]
_fact[0] = 1
for _i in range(1, 21):
    _fact[_i] = _fact[_i - 1] * _i


cdef inline long long _rank(int* x, int k) nogil:
    cdef long long rank = 0
    cdef int i, j, smaller
    for i in range(k):
        smaller = 0
        for j in range(i + 1, k):
            if x[j] < x[i]:
                smaller += 1
        rank += smaller * _fact[k - 1 - i]
    return rank


def lex_rank(x):
    cdef int buf[32]
    cdef int k = len(x)
    for i in range(k):
        buf[i] = x[i]
    return _rank(buf, k)


def lex_unrank(long long rank, int k):
    pool = list(range(k))
    out = []
    for i in range(k):
        q = rank // _fact[k - 1 - i]
        rank = rank % _fact[k - 1 - i]
        out.append(pool.pop(q))
    return tuple(out)


cdef inline int _mod(int a, int k) nogil:
    a = a % k
    return a + k if a < 0 else a


def rectangles(states, wcol, zcol, unsigned long long forbid_w,
               unsigned long long forbid_z):
    cdef cnp.int64_t[:, :] st = np.ascontiguousarray(states, dtype=np.int64)
    cdef Py_ssize_t n_states = st.shape[0]
    cdef int k = st.shape[1]
    cdef int wc[32]
    cdef int zc[32]
    cdef int x[32]
    cdef int i, j, width, height, d, c, dr, r, xi, xj
    cdef bint empty, bad
    cdef unsigned long long wm
    cdef Py_ssize_t s, cap, n = 0
    for i in range(k):
        wc[i] = wcol[i]
        zc[i] = -1 if zcol[i] is None else zcol[i]
    cap = max(16, n_states * k)
    src = np.empty(cap, dtype=np.int64)
    tgt = np.empty(cap, dtype=np.int64)
    wms = np.empty(cap, dtype=np.uint64)
    cdef cnp.int64_t[:] vsrc = src
    cdef cnp.int64_t[:] vtgt = tgt
    cdef cnp.uint64_t[:] vwm = wms
    for s in range(n_states):
        for i in range(k):
            x[i] = st[s, i]
        for i in range(k):
            xi = x[i]
            for width in range(1, k):
                j = (i + width) % k
                xj = x[j]
                height = _mod(xj - xi, k)
                empty = True
                for d in range(1, width):
                    c = (i + d) % k
                    r = _mod(x[c] - xi, k)
                    if 0 < r < height:
                        empty = False
                        break
                if not empty:
                    continue
                wm = 0
                bad = False
                for dr in range(height):
                    r = (xi + dr) % k
                    if _mod(wc[r] - i, k) < width:
                        if (forbid_w >> r) & 1:
                            bad = True
                            break
                        wm |= (<unsigned long long>1) << r
                    if zc[r] >= 0 and _mod(zc[r] - i, k) < width and (forbid_z >> r) & 1:
                        bad = True
                        break
                if bad:
                    continue
                if n == cap:
                    cap *= 2
                    src = np.resize(src, cap)
                    tgt = np.resize(tgt, cap)
                    wms = np.resize(wms, cap)
                    vsrc = src
                    vtgt = tgt
                    vwm = wms
                x[i] = xj
                x[j] = xi
                vsrc[n] = s
                vtgt[n] = _rank(x, k)
                vwm[n] = wm
                x[i] = xi
                x[j] = xj
                n += 1
    return src[:n], tgt[:n], wms[:n]
