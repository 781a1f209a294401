import random
from fractions import Fraction
from math import comb, inf

import pytest

from tiltlab import qarith as qa
from tiltlab.qarith import (
    LaurentPoly, MixedChar, PoleError, QFactored, RatFunc,
    cyclotomic_mc, generic_mc, prime_field_mc, prime_ext_mc,
    ord_qf, ord_ratfunc, qbin_qf, qfac_qf, qint_at, qint_poly,
    quantum_lucas, quantum_lucas_value, specialize_qf, specialize_ratfunc,
)


F7Q2 = prime_field_mc(7, 2)
F7Q3 = prime_field_mc(7, 3)
F3Q1 = prime_field_mc(3, 1)
F2Q1 = prime_field_mc(2, 1)
Z3 = cyclotomic_mc(3)
Z5 = cyclotomic_mc(5)
GEN = generic_mc()


class TestLaurent:
    def test_qint_basics(self):
        assert qint_poly(0).is_zero()
        assert qint_poly(2) == LaurentPoly({1: 1, -1: 1})
        assert qint_poly(-3) == -qint_poly(3)

    def test_str_rendering(self):
        p = LaurentPoly({-2: 1, 0: 2, 2: 1})
        assert str(p) == "v^-2 + 2 + v^2"

    def test_pascal_identity(self):
        # [a+b] = v^b [a] + v^-a [b], exact in Z[v, v^-1]
        for a in range(1, 201, 13):
            for b in range(1, 201, 17):
                lhs = qint_poly(a + b)
                rhs = qint_poly(a).shift(b) + qint_poly(b).shift(-a)
                assert lhs == rhs

    def test_half_grading_is_separate(self):
        a = qint_poly(2)
        b = qint_poly(2, half=True)
        with pytest.raises(qa.GradingError):
            a * b
        assert a.to_half() == LaurentPoly({2: 1, -2: 1}, half=True)

    def test_ratfunc_reduction_canonical(self):
        # [4][3]/([2][1]) by exact division
        num = qint_poly(4) * qint_poly(3)
        den = qint_poly(2)
        r = RatFunc(num, den)
        assert r == RatFunc.from_poly(LaurentPoly({4: 1, 2: 1, 0: 2, -2: 1, -4: 1}))

    def test_ratfunc_arith(self):
        v = RatFunc.from_poly(qint_poly(2))
        w = RatFunc.from_poly(qint_poly(3))
        assert (v * w) / w == v
        assert v - v == RatFunc.from_int(0)
        assert (v / w + w.inverse() * v) == RatFunc(qint_poly(2) * 2, qint_poly(3))


class TestQbin:
    def test_qbin_zero_is_one(self):
        assert qbin_qf(5, 0) == QFactored.one()

    def test_qbin_at_one_is_binomial(self):
        mc1 = cyclotomic_mc(1)
        for b in range(0, 9):
            for a in range(0, b + 1):
                val = qbin_qf(b, a).to_ratfunc()
                assert specialize_ratfunc(val, mc1) == mc1.field.from_int(comb(b, a))

    def test_qbin_4_2(self):
        got = qbin_qf(4, 2).to_ratfunc()
        assert got == RatFunc.from_poly(LaurentPoly({4: 1, 2: 1, 0: 2, -2: 1, -4: 1}))

    def test_71_choose_1_at_f7(self):
        assert specialize_qf(qbin_qf(71, 1), F7Q2) == 6
        assert qint_at(71, F7Q2.field) == 6
        assert specialize_qf(qbin_qf(71, 1), F7Q3) == qint_at(71, F7Q3.field)


class TestLucas:
    def test_71_1_at_q2(self):
        eps, factors = quantum_lucas(71, 1, F7Q2)
        assert eps == 1
        assert quantum_lucas_value(71, 1, F7Q2) == 6

    def test_71_1_at_q3(self):
        eps, _ = quantum_lucas(71, 1, F7Q3)
        assert eps == -1
        assert quantum_lucas_value(71, 1, F7Q3) == qint_at(71, F7Q3.field)

    def test_choose_nothing(self):
        eps, factors = quantum_lucas(68, 0, F7Q2)
        assert eps == 1
        assert quantum_lucas_value(68, 0, F7Q2) == 1

    @pytest.mark.parametrize("mc", [F7Q2, F3Q1, F2Q1, Z5])
    def test_randomized_against_direct(self, mc):
        # independent oracle: balanced quantum binomials through the Gaussian
        # binomial Pascal recurrence g(n,k) = g(n-1,k-1) + x^k g(n-1,k) at
        # x = q^2, entirely inside the target field
        N = 260
        F = mc.field
        x = F.mul(F.q, F.q)
        xpow = [F.one()]
        for _ in range(N):
            xpow.append(F.mul(xpow[-1], x))
        prev = [F.one()]
        table = [prev]
        for n in range(1, N + 1):
            row = [F.one()] + [None] * (n - 1) + [F.one()]
            for k in range(1, n):
                row[k] = F.add(prev[k - 1], F.mul(xpow[k], prev[k]))
            table.append(row)
            prev = row

        def direct(v, w):
            g = table[v][w]
            return F.mul(g, F.power(F.q_inv, w * (v - w)))

        rng = random.Random(20240810)
        for _ in range(500):
            v = rng.randrange(0, N)
            w = rng.randrange(0, v + 1)
            assert quantum_lucas_value(v, w, mc) == direct(v, w), (v, w)

    def test_small_values_against_polynomial_route(self):
        for mc in (F7Q2, F3Q1, Z5):
            for v in range(0, 25):
                for w in (0, 1, 2, v // 2, v):
                    if w > v:
                        continue
                    direct = specialize_ratfunc(qbin_qf(v, w).to_ratfunc(), mc)
                    assert quantum_lucas_value(v, w, mc) == direct


class TestOrd:
    def test_ord_63(self):
        # [63] = [3]_v * [21]_{v^3} and [21]_{+-1} = +-21 = +-3*7: the
        # cyclotomic factor counts once and the cofactor carries one power of p
        assert ord_qf(QFactored.qnum(63), F7Q2) == 2
        assert ord_qf(QFactored.qnum(63), Z3) == 1

    def test_ord_unit(self):
        assert ord_qf(QFactored.one(), F7Q2) == 0

    def test_ord_prime_eves(self):
        # ord([p^(k)]) = k pins the cell boundaries
        for k, n in [(1, 3), (2, 21), (3, 147)]:
            assert ord_qf(QFactored.qnum(n), F7Q2) == k

    def test_ord_additive(self):
        rng = random.Random(7)
        for _ in range(1000):
            a = _random_qf(rng)
            b = _random_qf(rng)
            assert ord_qf(a * b, F7Q2) == ord_qf(a, F7Q2) + ord_qf(b, F7Q2)

    def test_ord_matches_ratfunc_route(self):
        rng = random.Random(11)
        for mc in (F7Q2, F3Q1, Z3):
            for _ in range(40):
                s = _random_qf(rng, small=True)
                assert ord_qf(s, mc) == ord_ratfunc(s.to_ratfunc(), mc)

    def test_ord_zero(self):
        assert ord_qf(QFactored.zero(), F7Q2) == inf


def _random_qf(rng, small=False):
    out = QFactored.rational(Fraction(rng.choice([1, 2, 3, 5, 7, 14]),
                                      rng.choice([1, 2, 7])))
    hi = 30 if small else 100
    for _ in range(rng.randrange(0, 4)):
        out = out * QFactored.qnum(rng.randrange(1, hi), rng.choice([1, 1, 1, -1]))
    return out


class TestSpecialize:
    def test_identity_quotient(self):
        s = QFactored.qnum(5) / QFactored.qnum(5)
        assert specialize_qf(s, F7Q2) == 1

    def test_change_of_variables_ratio(self):
        # [v]/[w] for v = [a_j..a_k,0..0], w = [b_j..b_k,0..0] -> +-a_k/b_k
        # e.g. v = 63 = [3,0,0], w = 21 = [1,0,0] at (7,3)
        s = QFactored.qnum(63) / QFactored.qnum(21)
        val = specialize_qf(s, F7Q2)
        # sign (q^l)^(sum of digit differences) = (+1)^2, value 3/1
        assert val == 3
        model = specialize_ratfunc(s.to_ratfunc(), F7Q2)
        assert val == model

    def test_pole_refused(self):
        s = QFactored.qnum(3) * QFactored.rational(Fraction(1, 7))
        s = s * QFactored.qnum(21, -1)
        assert ord_qf(s, F7Q2) < 0
        with pytest.raises(PoleError):
            specialize_qf(s, F7Q2)

    def test_63_unit_combination(self):
        # [63]/([3] * 21) is a pl-adic unit at (7,3); check against the
        # cyclotomic/finite-field evaluation model
        s = QFactored.qnum(63) / QFactored.qnum(3) * QFactored.rational(Fraction(1, 21))
        assert ord_qf(s, F7Q2) == 0
        got = specialize_qf(s, F7Q2)
        model = specialize_ratfunc(s.to_ratfunc(), F7Q2)
        assert got == model != 0

    @pytest.mark.parametrize("mc", [F7Q2, F3Q1, F2Q1, Z3, Z5])
    def test_agrees_with_model_on_lambda_type_scalars(self, mc):
        # products of quantum ratios [x]/[y] with ord[x] = ord[y]: the shape
        # every scalar of the calculus has (reflection coefficients, traces)
        rng = random.Random(sum(map(ord, mc.field.name)))
        checked = 0
        while checked < 60:
            s = QFactored.one()
            for _ in range(rng.randrange(1, 4)):
                x = rng.randrange(1, 40)
                ys = [y for y in range(1, 40)
                      if qa.ord_qnum(y, mc) == qa.ord_qnum(x, mc)]
                y = rng.choice(ys)
                s = s * QFactored.qnum(x) / QFactored.qnum(y)
                if rng.random() < 0.4:
                    s = s * QFactored.rational(Fraction(rng.randrange(1, 9),
                                                        rng.randrange(1, 9)))
            if s.is_zero() or ord_qf(s, mc) != 0:
                continue
            got = specialize_qf(s, mc)
            model = specialize_ratfunc(s.to_ratfunc(), mc)
            assert got == model, f"{s} at {mc}"
            checked += 1

    def test_specialize_zero_when_positive_ord(self):
        s = QFactored.qnum(3)
        assert specialize_qf(s, F7Q2) == 0

    def test_prime_field_ext_backend(self):
        # F_9 = F_3[x]/(x^2+1), q = x of order 4, so l = 2
        mc = prime_ext_mc(3, [1, 0, 1])
        assert mc.p == 3 and mc.ell == 2
        s = QFactored.qnum(10) / QFactored.qnum(2)
        got = specialize_qf(s, mc)
        model = specialize_ratfunc(s.to_ratfunc(), mc)
        assert got == model


class TestMixedChar:
    def test_quantum_characteristics(self):
        assert F7Q2.ell == 3
        assert F7Q3.ell == 3
        assert F3Q1.ell == 3
        assert F2Q1.ell == 2
        assert Z3.ell == 3
        assert cyclotomic_mc(8).ell == 4
        assert cyclotomic_mc(4).ell == 2
        assert GEN.ell is inf

    def test_signs(self):
        assert F7Q2.q_ell_sign == 1        # 2^3 = 1 mod 7
        assert F7Q3.q_ell_sign == -1       # 3^3 = -1 mod 7
        assert Z3.q_ell_sign == 1
        assert cyclotomic_mc(8).q_ell_sign == -1

    def test_validation_rejects_wrong_ell(self):
        with pytest.raises(ValueError):
            MixedChar(qa.PrimeField(7, 2), ell=5)

    def test_sqrt_availability(self):
        assert F7Q2.qsqrt_available          # 3^2 = 2 mod 7
        assert cyclotomic_mc(3).qsqrt_available
        assert cyclotomic_mc(8).qsqrt_available
        assert not cyclotomic_mc(8, want_sqrt=False).qsqrt_available


class TestHalfGrading:
    def test_half_specialization(self):
        mc = F7Q2
        r = RatFunc.from_poly(LaurentPoly({1: 1}, half=True))  # v^(1/2)
        val = specialize_ratfunc(r, mc)
        assert mc.field.mul(val, val) == mc.field.q

    def test_even_half_descends(self):
        mc = F7Q2
        r = RatFunc.from_poly(LaurentPoly({2: 1, -2: 1}, half=True))  # [2] in disguise
        assert specialize_ratfunc(r, mc) == qint_at(2, mc.field)
