"""Exact engine for projector-heavy Temperley-Lieb computations.

Two layers:

* ``LazyFrac``: rational functions kept as (integer Laurent numerator,
  quantum-factored denominator).  Because every denominator in the calculus
  is a product of quantum integers, reduction needs only trial divisions by
  cyclotomic polynomials (never a generic gcd), and specialization at a
  mixed characteristic is the exact composite place: cyclotomic multiplicity
  first, p-adic valuation of the cofactor second.

* ``CellMorphism``: linear combinations of sandwiches cups o JW(s) o caps
  over the generic ring.  The classical kill property collapses products of
  sandwiches to sandwiches, which keeps every projector manipulation
  polynomial-sized where the raw diagram basis would be quadratically large.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf

from . import qarith as qa
from .qarith import QFactored, PoleError
from . import tlcat
from .tlcat import identity_pair, tensor_pair, flip_h_pair

try:
    from . import _kernel as _K
except ImportError:  # pragma: no cover
    from . import _kernel_py as _K

compose_m = _K.compose_matchings
polymul = _K.polymul
polyadd_into = _K.polyadd_into
polydiv_exact = _K.polydiv_exact


# ---------------------------------------------------------------------------
# integer Laurent polynomials as (shift, coefficient list)


def lp_from_qint(n: int):
    """[n] as (shift, list): v^-(n-1) + v^-(n-3) + ... + v^(n-1)."""
    if n == 0:
        return (0, [])
    sign = 1 if n > 0 else -1
    n = abs(n)
    arr = [0] * (2 * n - 1)
    for i in range(0, 2 * n - 1, 2):
        arr[i] = sign
    return (-(n - 1), arr)


def lp_trim(shift, arr):
    lo = 0
    while lo < len(arr) and arr[lo] == 0:
        lo += 1
    hi = len(arr)
    while hi > lo and arr[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return (0, [])
    return (shift + lo, arr[lo:hi])


def lp_mul(a, b):
    return lp_trim(a[0] + b[0], polymul(a[1], b[1]))


def lp_add(a, b, scale=1):
    return _K.lp_add_c(a, b, scale)


def lp_to_laurent(a) -> qa.LaurentPoly:
    return qa.LaurentPoly({a[0] + i: c for i, c in enumerate(a[1]) if c})


def lp_from_laurent(p: qa.LaurentPoly):
    if p.half:
        raise qa.GradingError("cellular engine is integrally graded")
    sh, arr = p.to_monic_list()
    return lp_trim(sh, arr)


_CYCLO = {}


def cyclo_list(d: int):
    if d not in _CYCLO:
        _CYCLO[d] = [int(c) for c in qa.cyclotomic_poly(d)]
    return _CYCLO[d]


def qnum_cyclo_factors(n: int):
    """[n] = v^-(n-1) * prod of Phi_d over d | 2n, d not dividing 2."""
    return [d for d in range(3, 2 * n + 1) if (2 * n) % d == 0]


_QF_POLY_CACHE = {}


def qf_to_lp(s: QFactored):
    """A quantum-factored scalar with nonnegative data as (shift, list)."""
    key = (s.sign, s.rat, s.factors)
    if key not in _QF_POLY_CACHE:
        assert s.rat.denominator == 1
        out = (0, [s.sign * s.rat.numerator])
        for n, e in s.factors:
            assert e > 0
            q = lp_from_qint(n)
            for _ in range(e):
                out = lp_mul(out, q)
        _QF_POLY_CACHE[key] = out
    return _QF_POLY_CACHE[key]


_ONE_FRACTION = Fraction(1)


def _den_mul(a: QFactored, b: QFactored) -> QFactored:
    """Product of denominators (positive rationals, nonneg exponents)."""
    if not b.factors and b.rat == 1:
        return a
    if not a.factors and a.rat == 1:
        return b
    f = dict(a.factors)
    for n, e in b.factors:
        f[n] = f.get(n, 0) + e
    rat = a.rat * b.rat if (a.rat != 1 or b.rat != 1) else _ONE_FRACTION
    return QFactored(1, rat, tuple(sorted(f.items())))


def qf_den_split(s: QFactored):
    """Split a quantum-factored scalar into (numerator part, denominator part),
    both with nonnegative exponents and integral rational parts."""
    num = QFactored(s.sign, Fraction(s.rat.numerator), tuple(
        (n, e) for n, e in s.factors if e > 0))
    den = QFactored(1, Fraction(s.rat.denominator), tuple(
        (n, -e) for n, e in s.factors if e < 0))
    return num, den


class LazyFrac:
    """num / den with num an integer Laurent poly and den a product of
    quantum integers times a positive integer."""

    __slots__ = ("num", "den")

    def __init__(self, num, den: QFactored = None):
        self.num = num                      # (shift, list)
        self.den = den if den is not None else QFactored.one()

    @classmethod
    def from_int(cls, c: int):
        return cls((0, [c]) if c else (0, []))

    @classmethod
    def from_qf(cls, s: QFactored):
        if s.is_zero():
            return cls.zero()
        num, den = qf_den_split(s)
        return cls(qf_to_lp(num), den)

    @classmethod
    def zero(cls):
        return cls((0, []))

    @classmethod
    def one(cls):
        return cls((0, [1]))

    def is_zero(self):
        return not self.num[1]

    def mul_qf(self, s: QFactored):
        if s.is_zero() or self.is_zero():
            return LazyFrac.zero()
        num, den = qf_den_split(s)
        return LazyFrac(lp_mul(self.num, qf_to_lp(num)), self.den * den)

    def mul(self, other: "LazyFrac"):
        if self.is_zero() or other.is_zero():
            return LazyFrac.zero()
        return LazyFrac(lp_mul(self.num, other.num),
                        _den_mul(self.den, other.den))

    def add(self, other: "LazyFrac"):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return LazyFrac(lp_add(self.num, other.num), self.den)
        lcm_f = {}
        for n, e in self.den.factors:
            lcm_f[n] = e
        for n, e in other.den.factors:
            lcm_f[n] = max(lcm_f.get(n, 0), e)
        import math
        r1, r2 = self.den.rat, other.den.rat
        lcm_rat = Fraction(r1.numerator * r2.numerator
                           // math.gcd(r1.numerator, r2.numerator))
        lcm = QFactored(1, lcm_rat, tuple(sorted(lcm_f.items())))
        cof1 = lcm / self.den
        cof2 = lcm / other.den
        n1 = lp_mul(self.num, qf_to_lp(cof1))
        n2 = lp_mul(other.num, qf_to_lp(cof2))
        return LazyFrac(lp_add(n1, n2), lcm)

    def neg(self):
        return LazyFrac((self.num[0], [-c for c in self.num[1]]), self.den)

    def scale_int(self, k: int):
        if k == 0:
            return LazyFrac.zero()
        return LazyFrac((self.num[0], [k * c for c in self.num[1]]), self.den)

    def reduced(self):
        """Cancel cyclotomic factors and integer content of the denominator."""
        if self.is_zero():
            return LazyFrac.zero()
        num = self.num
        # cheap necessary conditions: [n](1) = n and [n](-1) = +-n must
        # divide the corresponding evaluations of the numerator
        s_plus = sum(num[1])
        s_minus = sum(c if (num[0] + i) % 2 == 0 else -c
                      for i, c in enumerate(num[1]))
        fac = dict(self.den.factors)
        changed = True
        while changed:
            changed = False
            for n in list(fac):
                if fac[n] <= 0:
                    del fac[n]
                    continue
                if s_plus % n or s_minus % n:
                    continue
                q = polydiv_exact(num[1], lp_from_qint(n)[1])
                if q is not None:
                    num = lp_trim(num[0] - lp_from_qint(n)[0], q)
                    s_plus = sum(num[1])
                    s_minus = sum(c if (num[0] + i) % 2 == 0 else -c
                                  for i, c in enumerate(num[1]))
                    fac[n] -= 1
                    if not fac[n]:
                        del fac[n]
                    changed = True
        rat = self.den.rat
        if rat != 1:
            from math import gcd
            g = 0
            for c in num[1]:
                g = gcd(g, c)
                if g == 1:
                    break
            gg = gcd(g, rat.numerator) if g else rat.numerator
            if gg > 1:
                num = (num[0], [c // gg for c in num[1]])
                rat = rat / gg
        return LazyFrac(num, QFactored(1, rat, tuple(sorted(fac.items()))))

    def equals(self, other: "LazyFrac") -> bool:
        a = lp_mul(self.num, qf_to_lp(other.den))
        b = lp_mul(other.num, qf_to_lp(self.den))
        return a == b

    def to_ratfunc(self) -> qa.RatFunc:
        den = self.den.to_ratfunc()
        return qa.RatFunc(lp_to_laurent(self.num)) / den

    def __repr__(self):
        return f"LazyFrac({lp_to_laurent(self.num)} / {self.den})"


# -- exact specialization of LazyFrac ----------------------------------------


def _phi_strip(num, phi_list):
    m = 0
    while num[1]:
        q = polydiv_exact(num[1], phi_list)
        if q is None:
            break
        num = lp_trim(num[0], q)
        m += 1
    return m, num


def _kappa(mc):
    """(p-valuation, unit residue) of ([l] v^(l-1)) / Phi_e at the place.

    The quantum-integer normalization [n] = [l] * [n/l]_{v^l} and the
    cyclotomic normalization num/Phi_e^mult differ by this unit; it carries
    p-adic content exactly when e*p^j divides 2l (possible for p = 2).
    """
    cached = getattr(mc.field, "_kappa_cache", None)
    if cached is not None:
        return cached
    e = qa._order_of_q(mc)
    assert e > 2 and mc.ell is not inf
    num = lp_from_qint(mc.ell)
    q = polydiv_exact(num[1], cyclo_list(e))
    assert q is not None
    cof = lp_trim(num[0], q)
    F = mc.field
    if mc.p is inf:
        val, res = 0, lp_to_laurent(cof).eval_field(F, F.q, F.q_inv)
    else:
        emb = qa._embedding(mc)
        val, ra = emb.valuation_and_residue(lp_to_laurent(cof))
        res = qa._tuple_to_field(ra, mc)
    mc.field._kappa_cache = (val, res)
    return val, res


def _den_orders(den: QFactored, mc) -> tuple:
    """(cyclotomic multiplicity at q's order, p-adic part) of the denominator,
    in the same normalization as the Phi-stripped numerator."""
    e = qa._order_of_q(mc)
    mphi = 0
    mp = qa._vp(den.rat.numerator, mc.p) - qa._vp(den.rat.denominator, mc.p)
    kval = None
    for n, k in den.factors:
        o = qa.ord_qnum(n, mc)
        if o == 0:
            continue
        if e > 2:
            # [n] vanishes through Phi_e once; convert to that normalization
            if kval is None:
                kval = _kappa(mc)[0]
            mphi += k
            mp += k * (o - 1 + kval)
        else:
            # q = +-1: the vanishing is purely p-adic
            mp += k * o
    return mphi, mp


def _den_residue(den: QFactored, mc):
    F = mc.field
    p = mc.p
    e = qa._order_of_q(mc)
    num_r = den.rat.numerator
    den_r = den.rat.denominator
    if p is not inf:
        num_r //= p ** qa._vp(num_r, p)
        den_r //= p ** qa._vp(den_r, p)
    acc = F.mul(F.from_int(num_r), F.inv(F.from_int(den_r)))
    for n, k in den.factors:
        r = qa._unit_residue_qnum(n, mc)
        if e > 2 and mc.ell is not inf and n % mc.ell == 0:
            r = F.mul(r, _kappa(mc)[1])
        for _ in range(k):
            acc = F.mul(acc, r)
    return acc


def spec_lazy(x: LazyFrac, mc):
    """Exact image of x in mc's field under the place v -> q."""
    F = mc.field
    if isinstance(F, qa.GenericField):
        return qa.specialize_ratfunc(x.to_ratfunc(), mc)
    if x.is_zero():
        return F.zero()
    e = qa._order_of_q(mc)
    phi = cyclo_list(e)
    mn, num = _phi_strip(x.num, phi)
    mphi_d, mp_d = _den_orders(x.den, mc)
    dphi = mn - mphi_d
    if dphi < 0:
        raise PoleError("pole along the cyclotomic direction")
    if dphi > 0:
        return F.zero()
    lp = lp_to_laurent(num)
    if mc.p is inf:
        val = lp.eval_field(F, F.q, F.q_inv)
        if F.is_zero(val) and mp_d:
            raise PoleError("unexpected cancellation against p-part")
        den_val = _den_residue(x.den, mc)
        return F.mul(val, F.inv(den_val))
    emb = qa._embedding(mc)
    va, ra = emb.valuation_and_residue(lp)
    dp = (va if va is not inf else va) - mp_d
    if va is inf:
        return F.zero()
    if dp < 0:
        raise PoleError("negative p-adic valuation")
    if dp > 0:
        return F.zero()
    a = qa._tuple_to_field(ra, mc)
    return F.mul(a, F.inv(_den_residue(x.den, mc)))


def ord2_lazy(x: LazyFrac, mc) -> tuple:
    """Rank-two valuation (cyclotomic multiplicity, p-part); (inf, 0) for 0."""
    if x.is_zero():
        return (inf, 0)
    e = qa._order_of_q(mc)
    mn, num = _phi_strip(x.num, cyclo_list(e))
    mphi_d, mp_d = _den_orders(x.den, mc)
    if mc.p is inf:
        return (mn - mphi_d, 0)
    emb = qa._embedding(mc)
    va, _ = emb.valuation_and_residue(lp_to_laurent(num))
    if va is inf:
        return (inf, 0)
    return (mn - mphi_d, va - mp_d)


def ord_lazy(x: LazyFrac, mc):
    """Collapsed pl-adic valuation (cyclotomic multiplicity + p-part)."""
    a, b = ord2_lazy(x, mc)
    return inf if a is inf else a + b


# ---------------------------------------------------------------------------
# Jones-Wenzl diagram data over the generic ring


_JW_CACHE = {}


def jw_terms(n: int) -> dict:
    """Diagram expansion of the classical JW projector on n strands.

    Returns {pairing: LazyFrac}; the identity matching has coefficient 1 and
    all caps are killed (both facts are asserted by the test suite).  Built
    by the two-projector recursion, writing the lower clasp of the recursion
    through the surviving one-hook diagrams of the previous level.
    """
    if n in _JW_CACHE:
        return _JW_CACHE[n]
    if n == 0:
        out = {(): LazyFrac.one()}
    elif n == 1:
        out = {identity_pair(1): LazyFrac.one()}
    else:
        prev = jw_terms(n - 1)       # on n-1 strands
        lower = jw_terms(n - 2)      # on n-2 strands
        out = {}
        # top clasp: JW(n-1) tensor id
        for pair, c in prev.items():
            out[tensor_pair(pair, n - 1, n - 1, identity_pair(1), 1, 1)] = c
        # survivors W_m = (id ox cap) o (m ox id) with full through count
        cap = tlcat.cap_at_pair(n - 2, 1, 0)
        surv = []
        for pair, c in prev.items():
            ext = tensor_pair(pair, n - 1, n - 1, identity_pair(1), 1, 1)
            w, loops = compose_m(ext, n, n, cap, n - 2)
            assert loops == 0
            if sum(1 for i in range(n) if w[i] >= n) == n - 2:
                surv.append((w, c))
        # the lower clasp as one diagram dict: d = sum_m c_m JW(n-2) o W_m
        dtail = {}
        for w, c in surv:
            for mu, cmu in lower.items():
                low, l1 = compose_m(w, n, n - 2, mu, n - 2)
                assert l1 == 0
                contrib = c.mul(cmu)
                old = dtail.get(low)
                dtail[low] = contrib if old is None else old.add(contrib)
        # u o d = sum_m c_m flip(W_m) o d (the projector inside d absorbs)
        gamma = QFactored.qnum(n - 1) / QFactored.qnum(n)
        for w, c in surv:
            f1 = flip_h_pair(w, n, n - 2)
            cg = c.mul_qf(gamma)
            for low, cl in dtail.items():
                dia, l2 = compose_m(low, n, n - 2, f1, n)
                assert l2 == 0
                contrib = cg.mul(cl)
                old = out.get(dia)
                out[dia] = contrib if old is None else old.add(contrib)
        out = {p: c.reduced() for p, c in out.items() if not c.is_zero()}
    _JW_CACHE[n] = out
    return out


def jw_min_ord2(n: int, mc) -> tuple:
    """Lexicographic minimum of the rank-two valuations of JW(n) coefficients."""
    best = (inf, 0)
    for c in jw_terms(n).values():
        v = ord2_lazy(c, mc)
        if v < best:
            best = v
    return best


# ---------------------------------------------------------------------------
# cellular (sandwich) morphisms


def is_cap_matching(pair, m, u) -> bool:
    """True when every top point of the (m -> u)-matching is a through strand."""
    return all(pair[m + i] < m for i in range(u))


def is_cup_matching(pair, u, n) -> bool:
    return all(pair[i] >= u for i in range(u))


class CellMorphism:
    """Linear combination of sandwiches A o JW(u) o B over the generic ring.

    ``terms`` maps (u, A, B) to LazyFrac, with A a cup matching u -> n and B
    a cap matching m -> u.  These are a basis of Hom(m, n) over Q(v), and
    products collapse through the kill property of the classical projectors.
    """

    __slots__ = ("m", "n", "terms")

    def __init__(self, m, n, terms=None):
        self.m = m
        self.n = n
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if not c.is_zero():
                    self.terms[key] = c

    @classmethod
    def jw(cls, n: int) -> "CellMorphism":
        key = (n, identity_pair(n), identity_pair(n))
        return cls(n, n, {key: LazyFrac.one()})

    @classmethod
    def zero(cls, m, n) -> "CellMorphism":
        return cls(m, n)

    def is_zero(self):
        return not self.terms

    def add(self, other: "CellMorphism"):
        assert (self.m, self.n) == (other.m, other.n)
        out = dict(self.terms)
        for key, c in other.terms.items():
            old = out.get(key)
            s = c if old is None else old.add(c)
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return CellMorphism(self.m, self.n, out)

    def neg(self):
        return CellMorphism(self.m, self.n,
                            {k: c.neg() for k, c in self.terms.items()})

    def sub(self, other):
        return self.add(other.neg())

    def scale_qf(self, s: QFactored):
        if s.is_zero():
            return CellMorphism.zero(self.m, self.n)
        return CellMorphism(self.m, self.n,
                            {k: c.mul_qf(s) for k, c in self.terms.items()})

    def scale(self, x: LazyFrac):
        if x.is_zero():
            return CellMorphism.zero(self.m, self.n)
        return CellMorphism(self.m, self.n,
                            {k: c.mul(x) for k, c in self.terms.items()})

    def flip_h(self):
        out = {}
        for (u, A, B), c in self.terms.items():
            out[(u, flip_h_pair(B, self.m, u), flip_h_pair(A, u, self.n))] = c
        return CellMorphism(self.n, self.m, out)

    def compose(self, other: "CellMorphism"):
        """self o other (other first)."""
        assert self.m == other.n
        out = {}
        for (s, A, B), c1 in self.terms.items():
            for (t, A2, B2), c2 in other.terms.items():
                if s != t:
                    continue
                mid, loops = compose_m(A2, s, self.m, B, s)
                if mid != identity_pair(s):
                    continue
                c = c1.mul(c2)
                if loops:
                    c = c.mul_qf((QFactored.qnum(2).__neg__()) ** loops)
                key = (s, A, B2)
                old = out.get(key)
                acc = c if old is None else old.add(c)
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        return CellMorphism(other.m, self.n, out)

    def attach_top(self, pair, new_n):
        """Compose a single matching (n -> new_n) on top; kill applies."""
        out = {}
        delta = QFactored.qnum(2).__neg__()
        for (u, A, B), c in self.terms.items():
            A2, loops = compose_m(A, u, self.n, pair, new_n)
            if not is_cup_matching(A2, u, new_n):
                continue
            cc = c if not loops else c.mul_qf(delta ** loops)
            key = (u, A2, B)
            old = out.get(key)
            acc = cc if old is None else old.add(cc)
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        return CellMorphism(self.m, new_n, out)

    def attach_bottom(self, pair, new_m):
        """Compose a single matching (new_m -> m) below; kill applies."""
        out = {}
        delta = QFactored.qnum(2).__neg__()
        for (u, A, B), c in self.terms.items():
            B2, loops = compose_m(pair, new_m, self.m, B, u)
            if not is_cap_matching(B2, new_m, u):
                continue
            cc = c if not loops else c.mul_qf(delta ** loops)
            key = (u, A, B2)
            old = out.get(key)
            acc = cc if old is None else old.add(cc)
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        return CellMorphism(new_m, self.n, out)

    def to_diagram_lazy(self) -> dict:
        """Expand into the matching basis: {pairing: LazyFrac}."""
        out = {}
        for (u, A, B), c in self.terms.items():
            for mu, cmu in jw_terms(u).items():
                low, l1 = compose_m(B, self.m, u, mu, u)
                dia, l2 = compose_m(low, self.m, u, A, self.n)
                assert l1 == 0 and l2 == 0
                contrib = c.mul(cmu)
                old = out.get(dia)
                acc = contrib if old is None else old.add(contrib)
                out[dia] = acc
        return {p: c for p, c in out.items() if not c.is_zero()}

    def specialize(self, mc) -> tlcat.TLMorphism:
        """Diagram expansion followed by the exact place into mc's field."""
        F = mc.field
        terms = {}
        for pair, c in self.to_diagram_lazy().items():
            val = spec_lazy(c, mc)
            if not F.is_zero(val):
                terms[pair] = val
        return tlcat.TLMorphism(self.m, self.n, F, terms)

    def to_generic_morphism(self) -> tlcat.TLMorphism:
        F = qa.GenericField()
        terms = {}
        for pair, c in self.to_diagram_lazy().items():
            r = c.to_ratfunc()
            if not r.is_zero():
                terms[pair] = r
        return tlcat.TLMorphism(self.m, self.n, F, terms)

    def __repr__(self):
        return f"CellMorphism({self.m}->{self.n}, {len(self.terms)} sandwiches)"


def blocks_expansion(blocks) -> list:
    """Diagram expansion of JW(u1) ox ... ox JW(uk) as [(pair, LazyFrac)].

    Identity paddings should be passed as blocks of size 1.
    """
    items = [((), LazyFrac.one())]
    total = 0
    for u in blocks:
        terms = jw_terms(u)
        new = []
        for pair0, c0 in items:
            for mu, cmu in terms.items():
                new.append((tensor_pair(pair0, total, total, mu, u, u),
                            c0.mul(cmu)))
        items = new
        total += u
    return items


_BLOCKS_CACHE = {}


def blocks_expansion_cached(blocks) -> list:
    key = tuple(blocks)
    if key not in _BLOCKS_CACHE:
        _BLOCKS_CACHE[key] = blocks_expansion(key)
    return _BLOCKS_CACHE[key]


def apply_padded_below(cell: CellMorphism, m1_pair, blocks, m2_pair, new_m):
    """cell o M1 o (ox JW(u_i)) o M2, reduced by the kill property.

    M1 maps sum(blocks) -> cell.m and M2 maps new_m -> sum(blocks); the
    result is again cellular because the left projectors filter the
    composites down to cap matchings.
    """
    tot = sum(blocks)
    delta = QFactored.qnum(2).__neg__()
    out = {}
    for (u, A, B), c in cell.terms.items():
        w0, l0 = compose_m(m1_pair, tot, cell.m, B, u)
        base = c if not l0 else c.mul_qf(delta ** l0)
        for mu, cmu in blocks_expansion_cached(blocks):
            w1, l1 = compose_m(mu, tot, tot, w0, u)
            w2, l2 = compose_m(m2_pair, new_m, tot, w1, u)
            if not is_cap_matching(w2, new_m, u):
                continue
            cc = base.mul(cmu)
            loops = l1 + l2
            if loops:
                cc = cc.mul_qf(delta ** loops)
            key = (u, A, w2)
            old = out.get(key)
            acc = cc if old is None else old.add(cc)
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    return CellMorphism(new_m, cell.n, out)


def apply_padded_above(cell: CellMorphism, m1_pair, blocks, m2_pair, new_n):
    """M1 o (ox JW(u_i)) o M2 o cell, the flip of apply_padded_below.

    M2 maps cell.n -> sum(blocks) and M1 maps sum(blocks) -> new_n.
    """
    tot = sum(blocks)
    flipped = apply_padded_below(
        cell.flip_h(), flip_h_pair(m2_pair, cell.n, tot), list(blocks),
        flip_h_pair(m1_pair, tot, new_n), new_n)
    return flipped.flip_h()


def padded_compose(big: CellMorphism, small: CellMorphism, r: int,
                   below: bool = True, pad_left: bool = False):
    """big o (small ox id_r) when below, else (small ox id_r) o big.

    pad_left puts the identity strands on the left instead.
    """
    idr = identity_pair(r)

    def pad(pair, a, b):
        if pad_left:
            return tensor_pair(idr, r, r, pair, a, b)
        return tensor_pair(pair, a, b, idr, r, r)

    out = None
    for (u, A, B), c in small.terms.items():
        blocks = ([1] * r + [u]) if pad_left else ([u] + [1] * r)
        if below:
            piece = apply_padded_below(big, pad(A, u, small.n), blocks,
                                       pad(B, small.m, u), small.m + r)
        else:
            piece = apply_padded_above(big, pad(A, u, small.n), blocks,
                                       pad(B, small.m, u), small.n + r)
        piece = piece.scale(c)
        out = piece if out is None else out.add(piece)
    if out is None:
        m = big.m if below else big.m
        n = big.n if below else small.n + r
        return CellMorphism.zero(big.m, n if not below else big.n)
    return out


def cell_is_zero_generic(cell: CellMorphism) -> bool:
    """Exact zero test over Q(v) (reduce each sandwich coefficient)."""
    return all(c.reduced().is_zero() for c in cell.terms.values())


def cells_equal_generic(a: CellMorphism, b: CellMorphism) -> bool:
    return cell_is_zero_generic(a.sub(b))


def sandwich_blocks(top: CellMorphism, m1_pair, blocks, m2_pair,
                    bottom: CellMorphism):
    """top o M1 o (ox JW(u_i)) o M2 o bottom, collapsed by the kill rule."""
    tot = sum(blocks)
    delta = QFactored.qnum(2).__neg__()
    out = {}
    for (s, A, B), c1 in top.terms.items():
        w0, l0 = compose_m(m1_pair, tot, top.m, B, s)
        for (t, A2, B2), c2 in bottom.terms.items():
            w3, l3 = compose_m(A2, t, bottom.n, m2_pair, tot)
            if s != t:
                continue
            base = c1.mul(c2)
            loops0 = l0 + l3
            for mu, cmu in blocks_expansion_cached(blocks):
                w1, l1 = compose_m(mu, tot, tot, w0, s)
                mid, l2 = compose_m(w3, t, tot, w1, s)
                if mid != identity_pair(s):
                    continue
                cc = base.mul(cmu)
                loops = loops0 + l1 + l2
                if loops:
                    cc = cc.mul_qf(delta ** loops)
                key = (s, A, B2)
                old = out.get(key)
                acc = cc if old is None else old.add(cc)
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
    return CellMorphism(bottom.m, top.n, out)
