# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for crossingless-matching composition.

Same interface as ``_kernel_py``; selected automatically by ``tlcat`` when
the extension was built.
"""

from libc.stdlib cimport malloc, free

IS_COMPILED = True

DEF MAXPTS = 128


cdef int _compose_core(const int* pg, int m, int k, const int* pf, int n,
                       int* out, char* used) nogil:
    cdef int i, j, q, side, pt, t, loops
    for i in range(m + n):
        out[i] = -1
    for t in range(k):
        used[t] = 0
    for i in range(m):
        if out[i] != -1:
            continue
        side = 0
        pt = i
        while True:
            if side == 0:
                q = pg[pt]
                if q < m:
                    j = q
                    break
                used[q - m] = 1
                side = 1
                pt = q - m
            else:
                q = pf[pt]
                if q >= k:
                    j = m + (q - k)
                    break
                used[q] = 1
                side = 0
                pt = m + q
        out[i] = j
        out[j] = i
    for i in range(n):
        if out[m + i] != -1:
            continue
        side = 1
        pt = k + i
        while True:
            if side == 0:
                q = pg[pt]
                if q < m:
                    j = q
                    break
                used[q - m] = 1
                side = 1
                pt = q - m
            else:
                q = pf[pt]
                if q >= k:
                    j = m + (q - k)
                    break
                used[q] = 1
                side = 0
                pt = m + q
        out[m + i] = j
        out[j] = m + i
    loops = 0
    for t in range(k):
        if used[t]:
            continue
        loops += 1
        used[t] = 1
        side = 1
        pt = t
        while True:
            if side == 1:
                q = pf[pt]
                used[q] = 1
                side = 0
                pt = m + q
            else:
                q = pg[pt]
                side = 1
                pt = q - m
                if pt == t:
                    break
                used[pt] = 1
    return loops


def compose_matchings(pair_g, int m, int k, pair_f, int n):
    cdef int pg[MAXPTS]
    cdef int pf[MAXPTS]
    cdef int out[MAXPTS]
    cdef char used[MAXPTS]
    cdef int i, loops
    if m + k > MAXPTS or k + n > MAXPTS:
        from . import _kernel_py
        return _kernel_py.compose_matchings(pair_g, m, k, pair_f, n)
    for i in range(m + k):
        pg[i] = pair_g[i]
    for i in range(k + n):
        pf[i] = pair_f[i]
    loops = _compose_core(pg, m, k, pf, n, out, used)
    return tuple([out[i] for i in range(m + n)]), loops


def compose_mod(terms_g, int m, int k, terms_f, int n, long p, long delta):
    """All pairwise stacks of integer-coefficient term lists mod p."""
    cdef int out_arr[MAXPTS]
    cdef char used[MAXPTS]
    cdef int i, loops, nf, ng, a, b
    cdef long cg, cf, c, val
    cdef dict out = {}
    cdef list gp = [], gc = [], fp = [], fc = []
    cdef long dpow[MAXPTS]
    if m + k > MAXPTS or k + n > MAXPTS:
        from . import _kernel_py
        return _kernel_py.compose_mod(terms_g, m, k, terms_f, n, p, delta)
    for pairing, coeff in terms_g:
        gp.append(pairing)
        gc.append(coeff % p)
    for pairing, coeff in terms_f:
        fp.append(pairing)
        fc.append(coeff % p)
    ng = len(gp)
    nf = len(fp)
    dpow[0] = 1
    for i in range(1, k // 2 + 2):
        dpow[i] = dpow[i - 1] * delta % p
    # flatten pairings into C arrays
    cdef int* gflat = NULL
    cdef int* fflat = NULL
    gflat = <int*> malloc(sizeof(int) * ng * (m + k))
    fflat = <int*> malloc(sizeof(int) * nf * (k + n))
    try:
        for a in range(ng):
            pairing = gp[a]
            for i in range(m + k):
                gflat[a * (m + k) + i] = pairing[i]
        for b in range(nf):
            pairing = fp[b]
            for i in range(k + n):
                fflat[b * (k + n) + i] = pairing[i]
        for a in range(ng):
            cg = gc[a]
            if cg == 0:
                continue
            for b in range(nf):
                cf = fc[b]
                if cf == 0:
                    continue
                loops = _compose_core(gflat + a * (m + k), m, k,
                                      fflat + b * (k + n), n, out_arr, used)
                val = cg * cf % p * dpow[loops] % p
                key = tuple([out_arr[i] for i in range(m + n)])
                c = out.get(key, 0)
                c = (c + val) % p
                if c:
                    out[key] = c
                elif key in out:
                    del out[key]
    finally:
        if gflat != NULL:
            free(gflat)
        if fflat != NULL:
            free(fflat)
    return out


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (lists of Python ints, lowest degree first)


def polymul(list a, list b):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    cdef object x, y
    for i in range(la):
        x = a[i]
        if x:
            for j in range(lb):
                y = b[j]
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def polyadd_into(list acc, list b, object scale=1):
    cdef Py_ssize_t lb = len(b), j
    if lb > len(acc):
        acc = acc + [0] * (lb - len(acc))
    for j in range(lb):
        if b[j]:
            acc[j] = acc[j] + scale * b[j]
    return acc


def polydiv_exact(a, b):
    cdef list aa = list(a)
    cdef list bb = list(b)
    while aa and aa[len(aa) - 1] == 0:
        aa.pop()
    while bb and bb[len(bb) - 1] == 0:
        bb.pop()
    if not bb:
        raise ZeroDivisionError
    if not aa:
        return []
    if len(aa) < len(bb):
        return None
    cdef object lead = bb[len(bb) - 1]
    cdef object c
    cdef Py_ssize_t d, i
    cdef list q = [0] * (len(aa) - len(bb) + 1)
    while len(aa) >= len(bb):
        if aa[len(aa) - 1] % lead:
            return None
        c = aa[len(aa) - 1] // lead
        d = len(aa) - len(bb)
        q[d] = c
        for i in range(len(bb)):
            aa[d + i] = aa[d + i] - c * bb[i]
        aa.pop()
        while aa and aa[len(aa) - 1] == 0:
            aa.pop()
        if len(aa) < len(bb) and aa:
            return None
    if aa:
        return None
    return q


def lp_add_c(tuple a, tuple b, object scale=1):
    """Shift-aware add of (shift, list) integer Laurent polys."""
    cdef Py_ssize_t s1 = a[0], s2 = b[0]
    cdef list l1 = a[1], l2 = b[1]
    if not l2:
        return a
    if not l1:
        if scale == 1:
            return b
        return (s2, [scale * c for c in l2])
    cdef Py_ssize_t lo = s1 if s1 < s2 else s2
    cdef Py_ssize_t hi1 = s1 + len(l1), hi2 = s2 + len(l2)
    cdef Py_ssize_t hi = hi1 if hi1 > hi2 else hi2
    cdef list out = [0] * (hi - lo)
    cdef Py_ssize_t i
    for i in range(len(l1)):
        out[s1 - lo + i] = l1[i]
    if scale == 1:
        for i in range(len(l2)):
            if l2[i]:
                out[s2 - lo + i] = out[s2 - lo + i] + l2[i]
    else:
        for i in range(len(l2)):
            if l2[i]:
                out[s2 - lo + i] = out[s2 - lo + i] + scale * l2[i]
    cdef Py_ssize_t a0 = 0, b0 = len(out)
    while a0 < b0 and out[a0] == 0:
        a0 += 1
    while b0 > a0 and out[b0 - 1] == 0:
        b0 -= 1
    if a0 == b0:
        return (0, [])
    return (lo + a0, out[a0:b0])
