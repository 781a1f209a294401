"""Pure-Python kernel for crossingless-matching operations.

A matching of m bottom and n top boundary points is encoded as a tuple
``pair`` of length m + n: points 0..m-1 run along the bottom (left to
right), points m..m+n-1 along the top (left to right), and ``pair[i]`` is
the partner of point i.  The compiled twin in ``_kernel.pyx`` implements the
same interface; ``tlcat`` picks whichever is importable.
"""

from __future__ import annotations

IS_COMPILED = False


def compose_matchings(pair_g, m, k, pair_f, n):
    """Pairing and closed-loop count of the stack f(k->n) over g(m->k)."""
    out = [-1] * (m + n)
    used = [False] * k

    def resolve(side, pt):
        # side 0: pt is a g-label (0..m+k-1); side 1: an f-label (0..k+n-1)
        while True:
            if side == 0:
                q = pair_g[pt]
                if q < m:
                    return 0, q
                used[q - m] = True
                side, pt = 1, q - m
            else:
                q = pair_f[pt]
                if q >= k:
                    return 1, q - k
                used[q] = True
                side, pt = 0, m + q

    for i in range(m):
        if out[i] != -1:
            continue
        side, q = resolve(0, i)
        j = q if side == 0 else m + q
        out[i], out[j] = j, i
    for i in range(n):
        if out[m + i] != -1:
            continue
        side, q = resolve(1, k + i)
        j = q if side == 0 else m + q
        out[m + i], out[j] = j, m + i

    loops = 0
    for t in range(k):
        if used[t]:
            continue
        loops += 1
        used[t] = True
        side, pt = 1, t
        while True:
            if side == 1:
                q = pair_f[pt]
                used[q] = True
                side, pt = 0, m + q
            else:
                q = pair_g[pt]
                side, pt = 1, q - m
                if pt == t:
                    break
                used[pt] = True
    return tuple(out), loops


def compose_mod(terms_g, m, k, terms_f, n, p, delta):
    """All pairwise stacks of two integer-coefficient term lists mod p.

    terms are sequences of (pairing, coeff); returns {pairing: coeff mod p}
    with each loop contributing a factor ``delta``.  Zero coefficients are
    dropped.
    """
    out = {}
    dpow = [1]
    for _ in range(k // 2 + 1):
        dpow.append(dpow[-1] * delta % p)
    for pg, cg in terms_g:
        for pf, cf in terms_f:
            pairing, loops = compose_matchings(pg, m, k, pf, n)
            c = (out.get(pairing, 0) + cg * cf * dpow[loops]) % p
            if c:
                out[pairing] = c
            elif pairing in out:
                del out[pairing]
    return out


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (lists of Python ints, lowest degree first)


def polymul(a, b):
    """Product of integer coefficient lists."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def polyadd_into(acc, b, scale=1):
    """acc += scale * b in place; returns acc (possibly reallocated)."""
    if len(b) > len(acc):
        acc = acc + [0] * (len(b) - len(acc))
    for j, y in enumerate(b):
        if y:
            acc[j] += scale * y
    return acc


def polydiv_exact(a, b):
    """a // b for integer lists when the division is exact, else None."""
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    bb = list(b)
    while bb and bb[-1] == 0:
        bb.pop()
    if not bb:
        raise ZeroDivisionError
    if not a:
        return []
    if len(a) < len(bb):
        return None
    lead = bb[-1]
    q = [0] * (len(a) - len(bb) + 1)
    r = a
    while len(r) >= len(bb):
        if r[-1] % lead:
            return None
        c = r[-1] // lead
        d = len(r) - len(bb)
        q[d] = c
        for i, y in enumerate(bb):
            r[d + i] -= c * y
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(bb) and any(r):
            return None
    if any(r):
        return None
    return q


def lp_add_c(a, b, scale=1):
    """Shift-aware add of (shift, list) integer Laurent polys."""
    s1, l1 = a
    s2, l2 = b
    if not l2:
        return a
    if not l1:
        return b if scale == 1 else (s2, [scale * c for c in l2])
    lo = min(s1, s2)
    hi = max(s1 + len(l1), s2 + len(l2))
    out = [0] * (hi - lo)
    for i, c in enumerate(l1):
        out[s1 - lo + i] = c
    for i, c in enumerate(l2):
        if c:
            out[s2 - lo + i] += scale * c
    a0, b0 = 0, len(out)
    while a0 < b0 and out[a0] == 0:
        a0 += 1
    while b0 > a0 and out[b0 - 1] == 0:
        b0 -= 1
    if a0 == b0:
        return (0, [])
    return (lo + a0, out[a0:b0])
