"""The diagrammatic Temperley-Lieb category.

Crossingless matchings, sparse linear combinations with exact coefficients,
composition with loop evaluation at delta = -[2], tensor product, flips,
skein crossings, encircling and partial traces.

Matchings are encoded as pairing tuples: for a matching with m bottom and n
top points, entry i < m is the partner of bottom point i, entries m..m+n-1
belong to the top points, read left to right.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from . import qarith as qa

try:  # compiled kernel if built, pure-Python twin otherwise
    from . import _kernel as _K
except ImportError:  # pragma: no cover - build-environment dependent
    from . import _kernel_py as _K

KERNEL_COMPILED = getattr(_K, "IS_COMPILED", False)


class ArityMismatch(ValueError):
    pass


class ParityError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Raised when an operation exceeds the desk-scale strand cap."""


def arity_cap() -> int:
    return int(os.environ.get("TILTLAB_MAX_STRANDS", "14"))


def check_cap(n: int, override: bool = False):
    if not override and n > arity_cap():
        raise CapExceeded(
            f"{n} strands exceeds the cap {arity_cap()} "
            "(set TILTLAB_MAX_STRANDS or pass override=True)")


# ---------------------------------------------------------------------------
# matchings


def is_planar(pair, m, n):
    """Non-crossing in the strip: no two arcs interleave in boundary order."""
    # boundary order: bottom left->right, then top right->left
    order = list(range(m)) + [m + n - 1 - i for i in range(n)]
    pos = {pt: i for i, pt in enumerate(order)}
    stack = []
    seen = set()
    for pt in order:
        if pt in seen:
            if stack and stack[-1] == pair[pt]:
                stack.pop()
            else:
                return False
        else:
            seen.add(pt)
            seen.add(pair[pt])
            if pos[pair[pt]] < pos[pt]:
                return False
            stack.append(pt)
    return not stack


@dataclass(frozen=True)
class Matching:
    """A planar perfect pairing of m bottom and n top boundary points."""

    m: int
    n: int
    pair: tuple

    def __post_init__(self):
        if (self.m + self.n) % 2:
            raise ParityError(f"odd number of points {self.m}+{self.n}")
        p = self.pair
        assert len(p) == self.m + self.n
        assert all(p[p[i]] == i and p[i] != i for i in range(len(p)))

    @property
    def through(self) -> int:
        """Number of strands connecting bottom to top."""
        return sum(1 for i in range(self.m) if self.pair[i] >= self.m)

    def arcs(self):
        return sorted({tuple(sorted((i, self.pair[i]))) for i in range(len(self.pair))})

    def __str__(self):
        return f"Matching({self.m}->{self.n}; {self.arcs()})"


def identity_pair(n: int) -> tuple:
    return tuple(list(range(n, 2 * n)) + list(range(n)))


def tensor_pair(p1, m1, n1, p2, m2, n2) -> tuple:
    """Horizontal juxtaposition of pairings."""
    def relabel1(i):
        return i if i < m1 else i + m2

    def relabel2(i):
        return i + m1 if i < m2 else i + m1 + n1

    out = [-1] * (m1 + m2 + n1 + n2)
    for i in range(m1 + n1):
        out[relabel1(i)] = relabel1(p1[i])
    for i in range(m2 + n2):
        out[relabel2(i)] = relabel2(p2[i])
    return tuple(out)


def flip_h_pair(p, m, n) -> tuple:
    """Reflect in a horizontal line: swaps source and target."""
    def relabel(i):
        return i + n if i < m else i - m

    out = [-1] * (m + n)
    for i in range(m + n):
        out[relabel(i)] = relabel(p[i])
    return tuple(out)


def flip_v_pair(p, m, n) -> tuple:
    """Mirror left to right."""
    def relabel(i):
        return m - 1 - i if i < m else m + (m + n - 1 - i)

    out = [-1] * (m + n)
    for i in range(m + n):
        out[relabel(i)] = relabel(p[i])
    return tuple(out)


def cup_at_pair(left: int, k: int, right: int) -> tuple:
    """left+right -> left+2k+right: k nested cups inserted after `left`."""
    m, n = left + right, left + 2 * k + right
    out = [-1] * (m + n)
    for i in range(left):
        out[i] = m + i
        out[m + i] = i
    for j in range(k):
        a = m + left + j
        b = m + left + 2 * k - 1 - j
        out[a] = b
        out[b] = a
    for i in range(right):
        out[left + i] = m + left + 2 * k + i
        out[m + left + 2 * k + i] = left + i
    return tuple(out)


def cap_at_pair(left: int, k: int, right: int) -> tuple:
    """left+2k+right -> left+right: k nested caps after `left`."""
    p = cup_at_pair(left, k, right)
    return flip_h_pair(p, left + right, left + 2 * k + right)


@lru_cache(maxsize=None)
def enumerate_pairs(m: int, n: int) -> tuple:
    """All planar pairings of (m, n), as a tuple of pairing tuples."""
    if (m + n) % 2:
        raise ParityError(f"{m}+{n} is odd")
    total = m + n
    if total == 0:
        return ((),)
    # boundary order: bottom left->right then top right->left; planar
    # matchings = non-crossing matchings of this linear order
    order = list(range(m)) + [m + n - 1 - i for i in range(n)]

    def nc(points):
        if not points:
            return [[]]
        res = []
        a = points[0]
        for idx in range(1, len(points), 2):
            b = points[idx]
            for ins in nc(points[1:idx]):
                for outs in nc(points[idx + 1:]):
                    res.append([(a, b)] + ins + outs)
        return res

    result = []
    for arcs in nc(order):
        pair = [-1] * total
        for a, b in arcs:
            pair[a], pair[b] = b, a
        result.append(tuple(pair))
    assert len(result) == catalan(total // 2)
    return tuple(result)


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


# ---------------------------------------------------------------------------
# morphisms


class TLMorphism:
    """Sparse linear combination of matchings with fixed arities.

    ``terms`` maps pairing tuples to nonzero coefficients in the field F
    (any of the qarith backends, including the generic one).
    """

    __slots__ = ("m", "n", "F", "terms")

    def __init__(self, m, n, F, terms=None):
        self.m = m
        self.n = n
        self.F = F
        self.terms = {}
        if terms:
            for pair, c in terms.items():
                if not F.is_zero(c):
                    self.terms[pair] = c

    # -- constructors
    @classmethod
    def zero(cls, m, n, F):
        return cls(m, n, F)

    @classmethod
    def identity(cls, n, F):
        return cls(n, n, F, {identity_pair(n): F.one()})

    @classmethod
    def from_pair(cls, pair, m, n, F, coeff=None):
        return cls(m, n, F, {tuple(pair): coeff if coeff is not None else F.one()})

    @classmethod
    def cup(cls, left, k, right, F):
        return cls.from_pair(cup_at_pair(left, k, right), left + right,
                             left + 2 * k + right, F)

    @classmethod
    def cap(cls, left, k, right, F):
        return cls.from_pair(cap_at_pair(left, k, right), left + 2 * k + right,
                             left + right, F)

    @classmethod
    def e_gen(cls, n, i, F):
        """The Temperley-Lieb generator e_i = cupcap on strands i, i+1 (0-based)."""
        cap = cap_at_pair(i, 1, n - i - 2)   # n -> n-2
        cup = cup_at_pair(i, 1, n - i - 2)   # n-2 -> n
        pair, loops = _K.compose_matchings(cap, n, n - 2, cup, n)
        assert loops == 0
        return cls.from_pair(pair, n, n, F)

    # -- basics
    def is_zero(self):
        return not self.terms

    def coeff(self, pair):
        return self.terms.get(tuple(pair), self.F.zero())

    def __eq__(self, other):
        if not isinstance(other, TLMorphism):
            return NotImplemented
        if (self.m, self.n) != (other.m, other.n):
            return False
        if set(self.terms) != set(other.terms):
            return False
        F = self.F
        return all(F.is_zero(F.sub(c, other.terms[p])) for p, c in self.terms.items())

    def __add__(self, other):
        assert (self.m, self.n) == (other.m, other.n)
        F = self.F
        out = dict(self.terms)
        for p, c in other.terms.items():
            s = F.add(out.get(p, F.zero()), c)
            if F.is_zero(s):
                out.pop(p, None)
            else:
                out[p] = s
        return TLMorphism(self.m, self.n, F, out)

    def __neg__(self):
        F = self.F
        return TLMorphism(self.m, self.n, F,
                          {p: F.neg(c) for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.F
        if F.is_zero(c):
            return TLMorphism.zero(self.m, self.n, F)
        return TLMorphism(self.m, self.n, F,
                          {p: F.mul(c, x) for p, x in self.terms.items()})

    def __len__(self):
        return len(self.terms)

    # -- structure
    def flip_h(self):
        return TLMorphism(self.n, self.m, self.F,
                          {flip_h_pair(p, self.m, self.n): c
                           for p, c in self.terms.items()})

    def flip_v(self):
        return TLMorphism(self.m, self.n, self.F,
                          {flip_v_pair(p, self.m, self.n): c
                           for p, c in self.terms.items()})

    def tensor(self, other):
        F = self.F
        out = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                pair = tensor_pair(p1, self.m, self.n, p2, other.m, other.n)
                c = F.mul(c1, c2)
                prev = out.get(pair)
                out[pair] = c if prev is None else F.add(prev, c)
        return TLMorphism(self.m + other.m, self.n + other.n, F, out)

    def delta(self):
        F = self.F
        return F.neg(F.add(F.q, F.q_inv))

    def __matmul__(self, other):
        return self.tensor(other)

    def __mul__(self, other):
        """Composition self o other (other applied first)."""
        return compose(self, other)

    def to_json_dict(self):
        items = []
        for pair in sorted(self.terms):
            mobj = Matching(self.m, self.n, pair)
            items.append({"pairs": [list(a) for a in mobj.arcs()],
                          "coeff": self.F.to_str(self.terms[pair])})
        return {"source": self.m, "target": self.n, "terms": items}

    def __str__(self):
        return (f"TLMorphism({self.m}->{self.n}, {len(self.terms)} terms "
                f"over {self.F.name})")

    __repr__ = __str__


def compose_pairs(pf, n_out, k, pg):
    """Pairing-level stack: f (k -> n_out) over g (source inferred) -- raw."""
    m = len(pg) - k
    return _K.compose_matchings(pg, m, k, pf, n_out)


def compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """f o g: apply g first (g: m->k), then f (k->n)."""
    if f.m != g.n:
        raise ArityMismatch(f"cannot compose {f} after {g}")
    F = f.F
    k, m, n = f.m, g.m, f.n
    if isinstance(F, qa.PrimeField) and f.terms and g.terms:
        delta = F.neg(F.add(F.q, F.q_inv))
        out = _K.compose_mod(list(g.terms.items()), m, k,
                             list(f.terms.items()), n, F.p, delta)
        return TLMorphism(m, n, F, out)
    delta = F.neg(F.add(F.q, F.q_inv))
    dpow = [F.one()]
    for _ in range(k // 2 + 1):
        dpow.append(F.mul(dpow[-1], delta))
    out = {}
    zero = F.zero()
    for pg, cg in g.terms.items():
        for pf, cf in f.terms.items():
            pair, loops = _K.compose_matchings(pg, m, k, pf, n)
            c = F.mul(F.mul(cg, cf), dpow[loops])
            s = F.add(out.get(pair, zero), c)
            if F.is_zero(s):
                out.pop(pair, None)
            else:
                out[pair] = s
    return TLMorphism(m, n, F, out)


def partial_trace_right(f: TLMorphism, k: int) -> TLMorphism:
    """Bend the k rightmost strands around to the right and close them."""
    if k == 0:
        return f
    if k > min(f.m, f.n):
        raise ArityMismatch("cannot trace more strands than present")
    F = f.F
    m2, n2 = f.m - k, f.n - k
    # ptr(f) = (id_{n2} ox nested caps) o (f ox id_k) o (id_{m2} ox nested cups):
    # the nesting closes the rightmost strand around the other traced ones
    idk = TLMorphism.identity(k, F)
    cup = TLMorphism.from_pair(cup_at_pair(m2, k, 0), m2, m2 + 2 * k, F)
    cap = TLMorphism.from_pair(cap_at_pair(n2, k, 0), n2 + 2 * k, n2, F)
    return compose(cap, compose(f.tensor(idk), cup))


def partial_trace_left(f: TLMorphism, k: int) -> TLMorphism:
    if k == 0:
        return f
    F = f.F
    m2, n2 = f.m - k, f.n - k
    idk = TLMorphism.identity(k, F)
    cup = TLMorphism.from_pair(cup_at_pair(0, k, m2), m2, m2 + 2 * k, F)
    cap = TLMorphism.from_pair(cap_at_pair(0, k, n2), n2 + 2 * k, n2, F)
    return compose(cap, compose(idk.tensor(f), cup))


def close_all(f: TLMorphism):
    """Categorical trace: close every strand; returns a field element."""
    if f.m != f.n:
        raise ArityMismatch("trace needs an endomorphism")
    g = partial_trace_right(f, f.m)
    return g.terms.get((), f.F.zero())


# ---------------------------------------------------------------------------
# skein crossings, braids, encircling


class NoSquareRoot(RuntimeError):
    pass


def _sqrt(F):
    s = getattr(F, "sqrt_q", None)
    if s is None:
        raise NoSquareRoot(f"{F.name} has no chosen square root of q")
    return s


def crossing(F, positive: bool = True) -> TLMorphism:
    """Kauffman crossing on two strands: s*id + s^-1*cupcap (s = sqrt q)."""
    s = _sqrt(F)
    si = F.inv(s)
    ident = TLMorphism.identity(2, F)
    cupcap = TLMorphism.e_gen(2, 0, F)
    if positive:
        return ident.scale(s) + cupcap.scale(si)
    return ident.scale(si) + cupcap.scale(s)


def crossing_at(F, n: int, i: int, positive: bool = True) -> TLMorphism:
    """Crossing of strands i, i+1 inside id_n."""
    c = crossing(F, positive)
    left = TLMorphism.identity(i, F)
    right = TLMorphism.identity(n - i - 2, F)
    return left.tensor(c).tensor(right)


def braid_lift(F, n: int, word) -> TLMorphism:
    """Positive braid word (list of 0-based generator indices) lifted by skein."""
    out = TLMorphism.identity(n, F)
    for i in word:
        out = compose(crossing_at(F, n, i, True), out)
    return out


def half_twist_word(n: int) -> list:
    """Reduced word for the longest element of the symmetric group."""
    word = []
    for k in range(n - 1, 0, -1):
        word.extend(range(k))
    return word


def coset_twist_word(blocks) -> list:
    """Positive braid word reversing the order of consecutive strand blocks
    while keeping each block's inner order (shortest coset representative of
    the half twist modulo the blockwise parabolic)."""
    def block_swap(offset, a, b):
        # move a block of size b left across a block of size a
        w = []
        for j in range(b):
            for t in range(a):
                w.append(offset + a + j - 1 - t)
        return w

    arr = list(blocks)
    perm = list(range(len(arr)))
    target = list(reversed(perm))
    word = []
    for dest in range(len(target)):
        src = perm.index(target[dest])
        while src > dest:
            off = sum(arr[i] for i in range(src - 1))
            word.extend(block_swap(off, arr[src - 1], arr[src]))
            arr[src - 1], arr[src] = arr[src], arr[src - 1]
            perm[src - 1], perm[src] = perm[src], perm[src - 1]
            src -= 1
    return word


def encircle(f: TLMorphism) -> TLMorphism:
    """Wrap an unknotted circle around all strands of an endomorphism.

    Built as the partial trace of the double braiding with one extra strand.
    """
    if f.m != f.n:
        raise ArityMismatch("encircle needs an endomorphism")
    F = f.F
    n = f.m
    if n == 0:
        d = f.delta()
        return f.scale(d)
    # braid the extra strand over all n strands and back
    word = list(range(n - 1, -1, -1)) + list(range(0, n))
    ring = TLMorphism.identity(n + 1, F)
    for i in word:
        ring = compose(crossing_at(F, n + 1, i, True), ring)
    return partial_trace_right(compose(ring, f.tensor(TLMorphism.identity(1, F))), 1)
