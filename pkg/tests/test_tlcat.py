import random

import pytest

from tiltlab import tlcat as tl
from tiltlab import qarith as qa
from tiltlab.qarith import LaurentPoly, RatFunc, generic_mc, prime_field_mc
from tiltlab.tlcat import TLMorphism, close_all, compose, enumerate_pairs, partial_trace_right


GEN = generic_mc().field
GENH = generic_mc(half=True).field
F7 = prime_field_mc(7, 2).field


def brute_force_compose(pg, m, k, pf, n):
    """Independent oracle: resolve strands by union-find over all points."""
    # nodes: 0..m+k-1 (g), m+k..m+k+k+n-1 (f)
    parent = list(range(m + 2 * k + n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i in range(m + k):
        union(i, pg[i])
    off = m + k
    for i in range(k + n):
        union(off + i, off + pf[i])
    for t in range(k):
        union(m + t, off + t)
    # boundary points: g-bottom 0..m-1, f-top off+k..off+k+n-1
    boundary = list(range(m)) + [off + k + i for i in range(n)]
    comp_of = {}
    pairs = {}
    for b in boundary:
        r = find(b)
        if r in comp_of:
            pairs[b] = comp_of[r]
            pairs[comp_of[r]] = b
        else:
            comp_of[r] = b
    out = [-1] * (m + n)
    for b in boundary:
        i = b if b < m else m + (b - off - k)
        j = pairs[b]
        out[i] = j if j < m else m + (j - off - k)
    # loops: components with no boundary point
    comps = {find(x) for x in range(m + 2 * k + n)}
    loops = len(comps) - len(comp_of)
    return tuple(out), loops


class TestMatchings:
    def test_counts_are_catalan(self):
        assert len(enumerate_pairs(2, 0)) == 1
        assert len(enumerate_pairs(3, 3)) == 5
        assert len(enumerate_pairs(4, 4)) == 14
        assert len(enumerate_pairs(0, 8)) == 14

    def test_all_planar_and_distinct(self):
        for (m, n) in [(3, 3), (4, 2), (0, 6), (5, 1)]:
            ps = enumerate_pairs(m, n)
            assert len(set(ps)) == len(ps)
            for p in ps:
                assert tl.is_planar(p, m, n)

    def test_kernel_against_union_find_oracle(self):
        # all pairs at arity <= 6, bottom/top splits (3,3) and (2,4)
        for (m, k, n) in [(3, 3, 3), (2, 4, 2), (4, 2, 4), (0, 4, 0)]:
            gs = enumerate_pairs(m, k)
            fs = enumerate_pairs(k, n)
            for pg in gs:
                for pf in fs:
                    got = tl._K.compose_matchings(pg, m, k, pf, n)
                    want = brute_force_compose(pg, m, k, pf, n)
                    assert got == want

    def test_flips_are_involutions(self):
        rng = random.Random(5)
        for _ in range(100):
            m, n = rng.choice([(3, 3), (2, 4), (4, 4), (1, 5)])
            p = rng.choice(enumerate_pairs(m, n))
            assert tl.flip_h_pair(tl.flip_h_pair(p, m, n), n, m) == p
            assert tl.flip_v_pair(tl.flip_v_pair(p, m, n), m, n) == p


def random_morphism(rng, m, n, F, nterms=3):
    terms = {}
    for _ in range(nterms):
        pair = rng.choice(enumerate_pairs(m, n))
        c = F.from_int(rng.randrange(1, 7))
        terms[pair] = F.add(terms.get(pair, F.zero()), c)
    return TLMorphism(m, n, F, terms)


class TestCategory:
    def test_snake_relations(self):
        # (cap ox id) o (id ox cup) = id and mirrored
        F = GEN
        zig = compose(TLMorphism.cap(0, 1, 1, F), TLMorphism.cup(1, 1, 0, F))
        assert zig == TLMorphism.identity(1, F)
        zag = compose(TLMorphism.cap(1, 1, 0, F), TLMorphism.cup(0, 1, 1, F))
        assert zag == TLMorphism.identity(1, F)

    def test_circle_evaluates_to_minus_q2(self):
        F = GEN
        circle = compose(TLMorphism.cap(0, 1, 0, F), TLMorphism.cup(0, 1, 0, F))
        d = RatFunc.from_poly(-qa.qint_poly(2))
        assert circle.terms[()] == d

    def test_identity_composition(self):
        rng = random.Random(1)
        F = F7
        f = random_morphism(rng, 4, 4, F)
        assert compose(TLMorphism.identity(4, F), f) == f
        assert compose(f, TLMorphism.identity(4, F)) == f

    def test_associativity_and_interchange(self):
        rng = random.Random(2)
        for F in (F7, GEN):
            reps = 25 if F is F7 else 4
            for _ in range(reps):
                f = random_morphism(rng, 4, 2, F, 2)
                g = random_morphism(rng, 2, 4, F, 2)
                h = random_morphism(rng, 4, 2, F, 2)
                assert compose(compose(f, g), h) == compose(f, compose(g, h))
                f2 = random_morphism(rng, 2, 2, F, 2)
                g2 = random_morphism(rng, 3, 3, F, 2)
                fp = random_morphism(rng, 2, 2, F, 2)
                gp = random_morphism(rng, 3, 3, F, 2)
                lhs = compose(f2.tensor(g2), fp.tensor(gp))
                rhs = compose(f2, fp).tensor(compose(g2, gp))
                assert lhs == rhs

    def test_fliph_contravariant_involution(self):
        rng = random.Random(3)
        for _ in range(50):
            f = random_morphism(rng, 3, 3, F7, 3)
            g = random_morphism(rng, 3, 3, F7, 3)
            assert f.flip_h().flip_h() == f
            assert compose(f, g).flip_h() == compose(g.flip_h(), f.flip_h())

    def test_flipv_monoidal_antihomomorphism(self):
        rng = random.Random(4)
        f = random_morphism(rng, 2, 2, F7, 2)
        g = random_morphism(rng, 3, 3, F7, 2)
        assert f.tensor(g).flip_v() == g.flip_v().tensor(f.flip_v())
        assert TLMorphism.identity(4, F7).flip_v() == TLMorphism.identity(4, F7)

    def test_e_gen_relations(self):
        # e_i^2 = delta e_i, e_i e_j e_i = e_i for |i-j| = 1
        F = GEN
        n = 4
        d = TLMorphism.identity(n, F).delta()
        for i in range(n - 1):
            e = TLMorphism.e_gen(n, i, F)
            assert compose(e, e) == e.scale(d)
        e0, e1 = TLMorphism.e_gen(n, 0, F), TLMorphism.e_gen(n, 1, F)
        assert compose(e0, compose(e1, e0)) == e0
        assert compose(e1, compose(e0, e1)) == e1

    def test_generic_specialized_compose_commute(self):
        # compose over Q(v) then specialize = specialize then compose
        rng = random.Random(6)
        mc = prime_field_mc(7, 2)
        for _ in range(10):
            f = random_generic_ratfunc_morphism(rng, 3, 3)
            g = random_generic_ratfunc_morphism(rng, 3, 3)
            fg = compose(f, g)
            sf = specialize_morphism(f, mc)
            sg = specialize_morphism(g, mc)
            assert specialize_morphism(fg, mc) == compose(sf, sg)


def random_generic_ratfunc_morphism(rng, m, n):
    terms = {}
    for _ in range(3):
        pair = rng.choice(enumerate_pairs(m, n))
        poly = LaurentPoly({rng.randrange(-3, 4): rng.randrange(1, 5),
                            rng.randrange(-3, 4): rng.randrange(1, 5)})
        if poly.is_zero():
            continue
        terms[pair] = RatFunc.from_poly(poly)
    return TLMorphism(m, n, GEN, terms)


def specialize_morphism(f, mc):
    terms = {}
    F = mc.field
    for p, c in f.terms.items():
        terms[p] = qa.specialize_ratfunc(c, mc)
    return TLMorphism(f.m, f.n, F, terms)


class TestTraces:
    def test_close_identity(self):
        F = GEN
        for n in range(0, 5):
            val = close_all(TLMorphism.identity(n, F))
            d = RatFunc.from_poly(-qa.qint_poly(2))
            want = RatFunc.from_int(1)
            for _ in range(n):
                want = want * d
            assert val == want

    def test_partial_trace_of_cupcap(self):
        F = GEN
        e = TLMorphism.e_gen(2, 0, F)
        assert partial_trace_right(e, 1) == TLMorphism.identity(1, F)

    def test_partial_trace_iterates(self):
        rng = random.Random(7)
        f = random_morphism(rng, 4, 4, F7, 4)
        a = partial_trace_right(partial_trace_right(f, 1), 1)
        b = partial_trace_right(f, 2)
        assert a == b


class TestSkein:
    def test_crossing_coefficients(self):
        c = tl.crossing(GENH, True)
        idp = tl.identity_pair(2)
        s = LaurentPoly({1: 1}, half=True)
        assert c.terms[idp] == RatFunc.from_poly(s)

    def test_reidemeister_2(self):
        pos = tl.crossing(GENH, True)
        neg = tl.crossing(GENH, False)
        assert compose(pos, neg) == TLMorphism.identity(2, GENH)

    def test_reidemeister_3(self):
        F = GENH
        a = compose(tl.crossing_at(F, 3, 0), compose(tl.crossing_at(F, 3, 1),
                                                     tl.crossing_at(F, 3, 0)))
        b = compose(tl.crossing_at(F, 3, 1), compose(tl.crossing_at(F, 3, 0),
                                                     tl.crossing_at(F, 3, 1)))
        assert a == b

    def test_encircle_single_strand(self):
        got = tl.encircle(TLMorphism.identity(1, GENH))
        want = TLMorphism.identity(1, GENH).scale(
            RatFunc.from_poly(-qa.qint_poly(2).subs_power(2).to_half()))
        assert got == want

    def test_braid_lift_empty(self):
        assert tl.braid_lift(GENH, 3, []) == TLMorphism.identity(3, GENH)

    def test_half_twist_conjugation_is_fliph(self):
        # conjugating a matching by the positive half twist reflects it
        F = GENH
        n = 3
        g = tl.braid_lift(F, n, tl.half_twist_word(n))
        ginv = TLMorphism.identity(n, F)
        for i in reversed(tl.half_twist_word(n)):
            ginv = compose(tl.crossing_at(F, n, i, False), ginv)
        assert compose(g, ginv) == TLMorphism.identity(n, F)
        e0 = TLMorphism.e_gen(n, 0, F)
        e1 = TLMorphism.e_gen(n, 1, F)
        assert compose(ginv, compose(e0, g)) == e1


class TestJson:
    def test_roundtrippable_shape(self):
        f = TLMorphism.e_gen(3, 1, F7).scale(F7.from_int(3))
        d = f.to_json_dict()
        assert d["source"] == 3 and d["target"] == 3
        assert d["terms"][0]["coeff"] == "3"
        assert all(isinstance(a, list) and len(a) == 2
                   for a in d["terms"][0]["pairs"])
