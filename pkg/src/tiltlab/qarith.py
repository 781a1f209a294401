"""Exact coefficient arithmetic.

Laurent polynomials in v (optionally v^(1/2)), reduced rational functions,
quantum-factored scalars, quantum integers / factorials / binomials, the
quantum Lucas factorization, the pl-adic valuation, and specialization from
the generic ring Q(v) to a concrete coefficient field.

Specialization to a field (k, q) is a place of Q(v): cancel the cyclotomic
factor of the chosen root of unity, evaluate in the cyclotomic number field,
then (for finite characteristic) reduce along the prime above p singled out
by q, computed through a Teichmueller-style p-adic embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, inf

from . import pldigits


class PoleError(ArithmeticError):
    """Specialization hit a pole (negative pl-adic valuation)."""


class GradingError(TypeError):
    """Mixed integral and half-integral Laurent gradings."""


# ---------------------------------------------------------------------------
# Laurent polynomials over Z (or Q), exponents integral or half-integral


class LaurentPoly:
    """Sparse Laurent polynomial; ``coeffs[e]`` multiplies v**e.

    With ``half=True`` the stored exponent unit is v**(1/2).  Mixing the two
    gradings in arithmetic raises GradingError; ``to_half()`` promotes.
    """

    __slots__ = ("coeffs", "half")

    def __init__(self, coeffs=None, half=False):
        self.coeffs = {}
        self.half = half
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    self.coeffs[e] = c

    @classmethod
    def zero(cls, half=False):
        return cls({}, half)

    @classmethod
    def const(cls, c, half=False):
        return cls({0: c}, half)

    @classmethod
    def v_power(cls, e, half=False):
        return cls({e: 1}, half)

    def is_zero(self):
        return not self.coeffs

    def _match(self, other):
        if self.half != other.half:
            raise GradingError("cannot mix integral and half-integral gradings")

    def to_half(self):
        if self.half:
            return self
        return LaurentPoly({2 * e: c for e, c in self.coeffs.items()}, half=True)

    def __add__(self, other):
        self._match(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPoly(out, self.half)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()}, self.half)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly.zero(self.half)
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()}, self.half)
        self._match(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return LaurentPoly(out, self.half)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, self.half)
        return self.half == other.half and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.half, tuple(sorted(self.coeffs.items()))))

    def shift(self, k):
        """Multiply by v**k (k in grading units)."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()}, self.half)

    def subs_power(self, k):
        """Substitute v -> v**k; negative k allowed."""
        return LaurentPoly({e * k: c for e, c in self.coeffs.items()}, self.half)

    def min_exp(self):
        return min(self.coeffs) if self.coeffs else 0

    def max_exp(self):
        return max(self.coeffs) if self.coeffs else 0

    def content(self):
        """gcd of the integer coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, int(c))
            if g == 1:
                break
        return g

    def bar(self):
        """The involution v -> v**-1."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()}, self.half)

    def to_monic_list(self):
        """(shift, [c_0..c_d]) with v**shift * sum c_i v**i equal to self."""
        if not self.coeffs:
            return 0, []
        lo, hi = self.min_exp(), self.max_exp()
        arr = [0] * (hi - lo + 1)
        for e, c in self.coeffs.items():
            arr[e - lo] = c
        return lo, arr

    @classmethod
    def from_list(cls, shift, arr, half=False):
        return cls({shift + i: c for i, c in enumerate(arr) if c}, half)

    def eval_field(self, F, x, xinv):
        """Evaluate at v = x in the field F (xinv = x**-1); Horner scheme."""
        if not self.coeffs:
            return F.zero()
        lo, arr = self.to_monic_list()
        acc = F.zero()
        for c in reversed(arr):
            acc = F.mul(acc, x)
            if c:
                acc = F.add(acc, F.from_int(c) if isinstance(c, int)
                            else F.from_fraction(c))
        return F.mul(acc, F.power(x if lo >= 0 else xinv, abs(lo)))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            ee = Fraction(e, 2) if self.half else e
            if ee == 0:
                term = str(c)
            else:
                vs = "v" if ee == 1 else f"v^{ee}"
                if c == 1:
                    term = vs
                elif c == -1:
                    term = "-" + vs
                else:
                    term = f"{c}*{vs}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    __repr__ = __str__


def _poly_divmod_int(a, b):
    """Exact-friendly division of integer coefficient lists (b monic-ish not
    required); returns (q, r) over the rationals as Fractions-free when exact."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        coef = r[-1] / b[-1]
        deg = len(r) - len(b)
        q[deg] = coef
        for i, bc in enumerate(b):
            r[deg + i] -= coef * bc
        r.pop()
    return q, r


def poly_exact_div(a: LaurentPoly, b: LaurentPoly):
    """a / b if the division is exact over Q, else None."""
    if a.is_zero():
        return LaurentPoly.zero(a.half)
    if a.half != b.half:
        raise GradingError("grading mismatch in division")
    sa, la = a.to_monic_list()
    sb, lb = b.to_monic_list()
    q, r = _poly_divmod_int(la, lb)
    if any(r):
        return None
    out = {}
    for i, c in enumerate(q):
        if c:
            if c.denominator != 1:
                return None
            out[sa - sb + i] = int(c)
    return LaurentPoly(out, a.half)


def _list_primitive(arr):
    g = 0
    for c in arr:
        g = gcd(g, c)
    if g == 0:
        return arr, 0
    return [c // g for c in arr], g


def _poly_gcd_int(a, b):
    """gcd of integer coefficient lists, primitive, via subresultant PRS."""
    a, _ = _list_primitive([int(c) for c in a])
    b, _ = _list_primitive([int(c) for c in b])
    while b and b[-1] == 0:
        b.pop()
    while a and a[-1] == 0:
        a.pop()
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while True:
        # pseudo-remainder
        r = a[:]
        lb = b[-1]
        while len(r) >= len(b) and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(b):
                break
            coef = r[-1]
            deg = len(r) - len(b)
            r = [c * lb for c in r]
            for i, bc in enumerate(b):
                r[deg + i] -= coef * bc
            r.pop()
        while r and r[-1] == 0:
            r.pop()
        if not any(r):
            b, _ = _list_primitive(b)
            return b
        r, _ = _list_primitive(r)
        a, b = b, r


class RatFunc:
    """Reduced fraction of integer Laurent polynomials.

    Canonical form: the denominator is an ordinary polynomial with nonzero
    constant term, positive leading coefficient, and gcd(content(num),
    content(den)) = 1; num and den share no polynomial factor.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = None, reduce=True):
        if den is None:
            den = LaurentPoly.const(1, num.half)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.half != den.half:
            raise GradingError("grading mismatch")
        if reduce:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num, den):
        half = num.half
        if num.is_zero():
            return LaurentPoly.zero(half), LaurentPoly.const(1, half)
        sn, ln = num.to_monic_list()
        sd, ld = den.to_monic_list()
        # strip v-powers into the numerator shift
        g = _poly_gcd_int(ln, ld)
        if len(g) > 1:
            qn, rn = _poly_divmod_int(ln, g)
            qd, rd = _poly_divmod_int(ld, g)
            assert not any(rn) and not any(rd)
            ln = [int(c) for c in qn]
            ld = [int(c) for c in qd]
        ln, cn = _list_primitive([int(c) for c in ln])
        ld, cd = _list_primitive([int(c) for c in ld])
        cg = gcd(cn, cd)
        cn //= cg
        cd //= cg
        if ld[-1] < 0:
            ld = [-c for c in ld]
            ln = [-c for c in ln]
        num = LaurentPoly.from_list(sn - sd, [c * cn for c in ln], half)
        den = LaurentPoly.from_list(0, [c * cd for c in ld], half)
        return num, den

    @classmethod
    def from_int(cls, c, half=False):
        return cls(LaurentPoly.const(c, half), reduce=False)

    @classmethod
    def from_fraction(cls, f: Fraction, half=False):
        return cls(LaurentPoly.const(f.numerator, half),
                   LaurentPoly.const(f.denominator, half), reduce=False)

    @classmethod
    def from_poly(cls, p: LaurentPoly):
        return cls(p, reduce=False)

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = _as_ratfunc(other, self.num.half)
        num = self.num * other.den + other.num * self.den
        return RatFunc(num, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other, self.num.half))

    def __mul__(self, other):
        other = _as_ratfunc(other, self.num.half)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__
    __radd__ = __add__

    def __truediv__(self, other):
        other = _as_ratfunc(other, self.num.half)
        if other.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.num * other.den, self.den * other.num)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.den, self.num)

    def __eq__(self, other):
        other = _as_ratfunc(other, self.num.half)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def bar(self):
        return RatFunc(self.num.bar(), self.den.bar())

    def __str__(self):
        if self.den == LaurentPoly.const(1, self.den.half):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _as_ratfunc(x, half=False):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, LaurentPoly):
        return RatFunc.from_poly(x)
    if isinstance(x, int):
        return RatFunc.from_int(x, half)
    if isinstance(x, Fraction):
        return RatFunc.from_fraction(x, half)
    if isinstance(x, QFactored):
        return x.to_ratfunc(half)
    raise TypeError(f"cannot coerce {type(x)} to RatFunc")


# ---------------------------------------------------------------------------
# quantum numbers over the generic ring


def qint_poly(a: int, half=False) -> LaurentPoly:
    """[a]_v = v^-(a-1) + v^-(a-3) + ... + v^(a-1); [-a] = -[a]."""
    if a == 0:
        return LaurentPoly.zero(half)
    sign = 1 if a > 0 else -1
    a = abs(a)
    step = 2 if half else 1
    return LaurentPoly({step * e: sign for e in range(-(a - 1), a, 2)}, half)


def qint_at(a: int, F, x=None, xinv=None):
    """[a]_x in the field F; x defaults to F.q."""
    if x is None:
        x, xinv = F.q, F.q_inv
    acc = F.zero()
    if a == 0:
        return acc
    sign = 1 if a > 0 else -1
    a = abs(a)
    t = F.power(xinv, a - 1)
    x2 = F.mul(x, x)
    for _ in range(a):
        acc = F.add(acc, t)
        t = F.mul(t, x2)
    if sign < 0:
        acc = F.neg(acc)
    return acc


def qfac_qf(a: int) -> "QFactored":
    """[a]! as a quantum-factored scalar."""
    out = QFactored.one()
    for k in range(2, a + 1):
        out = out * QFactored.qnum(k)
    return out


def qbin_qf(b: int, a: int) -> "QFactored":
    """Quantum binomial [b choose a] as a quantum-factored scalar (a >= 0)."""
    if a < 0:
        raise ValueError("lower index must be nonnegative")
    out = QFactored.one()
    for k in range(a):
        out = out * QFactored.qnum(b - k)
        if out.is_zero():
            return out
    return out / qfac_qf(a)


# ---------------------------------------------------------------------------
# quantum-factored scalars


@dataclass(frozen=True)
class QFactored:
    """sign * rat * prod [n]^e; the canonical exact form of trace scalars.

    factors maps n >= 2 to a nonzero integer exponent; [1] and [0] never
    appear ([1] is 1 and a vanishing factor is encoded by rat == 0).
    """

    sign: int = 1
    rat: Fraction = Fraction(1)
    factors: tuple = ()

    @classmethod
    def one(cls):
        return cls()

    @classmethod
    def zero(cls):
        return cls(1, Fraction(0), ())

    @classmethod
    def rational(cls, f):
        f = Fraction(f)
        if f == 0:
            return cls.zero()
        s = 1 if f > 0 else -1
        return cls(s, abs(f), ())

    @classmethod
    def qnum(cls, n: int, e: int = 1):
        """[n]^e; negative n flips the sign by (-1)^e."""
        if n == 0:
            if e < 0:
                raise ZeroDivisionError("[0] is not invertible")
            return cls.zero() if e > 0 else cls.one()
        sign = 1
        if n < 0:
            n = -n
            sign = (-1) ** e
        if n == 1:
            return cls(sign, Fraction(1), ())
        return cls(sign, Fraction(1), ((n, e),))

    def is_zero(self):
        return self.rat == 0

    def _fac(self):
        return dict(self.factors)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QFactored.rational(other)
        if self.is_zero() or other.is_zero():
            return QFactored.zero()
        f = self._fac()
        for n, e in other.factors:
            f[n] = f.get(n, 0) + e
            if not f[n]:
                del f[n]
        return QFactored(self.sign * other.sign, self.rat * other.rat,
                         tuple(sorted(f.items())))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError
        return QFactored(self.sign, 1 / self.rat,
                         tuple((n, -e) for n, e in self.factors))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QFactored.rational(other)
        return self * other.inverse()

    def __neg__(self):
        if self.is_zero():
            return self
        return QFactored(-self.sign, self.rat, self.factors)

    def __pow__(self, k: int):
        if k == 0:
            return QFactored.one()
        if self.is_zero():
            if k < 0:
                raise ZeroDivisionError
            return self
        base = self if k > 0 else self.inverse()
        out = QFactored.one()
        for _ in range(abs(k)):
            out = out * base
        return out

    def to_ratfunc(self, half=False) -> RatFunc:
        if self.is_zero():
            return RatFunc.from_int(0, half)
        num = LaurentPoly.const(self.sign * self.rat.numerator, half)
        den = LaurentPoly.const(self.rat.denominator, half)
        for n, e in self.factors:
            q = qint_poly(n, half)
            for _ in range(abs(e)):
                if e > 0:
                    num = num * q
                else:
                    den = den * q
        return RatFunc(num, den)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        r = self.sign * self.rat
        if r != 1 or not self.factors:
            parts.append(str(r))
        for n, e in self.factors:
            parts.append(f"[{n}]" + (f"^{e}" if e != 1 else ""))
        return "*".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the coefficient-field backends


def cyclotomic_poly(n: int) -> list:
    """Integer coefficient list of the n-th cyclotomic polynomial."""
    coeffs = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            phi_d = cyclotomic_poly(d)
            q, r = _poly_divmod_int(coeffs, phi_d)
            assert not any(r)
            coeffs = [int(c) for c in q]
    return coeffs


def _multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    k, x = 1, a
    while x != 1:
        x = x * a % p
        k += 1
    return k


class GenericField:
    """Q(v) itself (or its half-graded extension); elements are RatFunc."""

    char = inf

    def __init__(self, half=False):
        self.half = half
        self.name = "Q(v^1/2)" if half else "Q(v)"
        self.q = RatFunc.from_poly(LaurentPoly.v_power(2 if half else 1, half))
        self.q_inv = RatFunc.from_poly(LaurentPoly.v_power(-2 if half else -1, half))
        self.sqrt_q = RatFunc.from_poly(LaurentPoly.v_power(1, half)) if half else None

    def zero(self):
        return RatFunc.from_int(0, self.half)

    def one(self):
        return RatFunc.from_int(1, self.half)

    def from_int(self, c):
        return RatFunc.from_int(c, self.half)

    def from_fraction(self, f):
        return RatFunc.from_fraction(Fraction(f), self.half)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inverse()

    def is_zero(self, a):
        return a.is_zero()

    def power(self, a, k):
        out = self.one()
        base = a if k >= 0 else self.inv(a)
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def to_str(self, a):
        return str(a)


class PrimeField:
    """F_p with a chosen q; elements are ints in range(p)."""

    def __init__(self, p: int, q: int, sqrt_q=None):
        self.p = p
        self.char = p
        self.q = q % p
        if self.q == 0:
            raise ValueError("q must be invertible")
        self.q_inv = pow(self.q, p - 2, p)
        self.name = f"F_{p}(q={self.q})"
        if sqrt_q is None:
            sqrt_q = next((r for r in range(p) if r * r % p == self.q), None)
        self.sqrt_q = sqrt_q

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, c):
        return c % self.p

    def from_fraction(self, f):
        f = Fraction(f)
        if f.denominator % self.p == 0:
            raise PoleError(f"denominator {f.denominator} not invertible mod {self.p}")
        return f.numerator * pow(f.denominator, self.p - 2, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        return pow(a, k, self.p)

    def to_str(self, a):
        return str(a % self.p)


class CyclotomicField:
    """Q[x]/Phi_n with q = class of x; elements are tuples of Fractions."""

    char = inf

    def __init__(self, n: int, sqrt_exponent=None):
        self.n = n
        self.phi = cyclotomic_poly(n)
        self.deg = len(self.phi) - 1
        self.name = f"Q(zeta_{n})"
        self.q = self._x_power(1)
        self.q_inv = self._x_power(-1)
        # sqrt_q as x**sqrt_exponent when provided (n even twists handled by caller)
        self.sqrt_q = self._x_power(sqrt_exponent) if sqrt_exponent is not None else None

    def _x_power(self, k):
        k %= self.n
        out = [Fraction(0)] * self.deg
        if self.deg == 0:
            raise ValueError("n must be >= 1")
        # reduce x^k mod phi
        arr = [Fraction(0)] * (k + 1)
        arr[k] = Fraction(1)
        return self._reduce(arr)

    def _reduce(self, arr):
        arr = [Fraction(c) for c in arr]
        phi = [Fraction(c) for c in self.phi]
        while len(arr) > self.deg:
            if arr[-1]:
                coef = arr[-1] / phi[-1]
                off = len(arr) - len(phi)
                for i, c in enumerate(phi):
                    arr[off + i] -= coef * c
            arr.pop()
        arr += [Fraction(0)] * (self.deg - len(arr))
        return tuple(arr)

    def zero(self):
        return tuple(Fraction(0) for _ in range(self.deg))

    def one(self):
        return self._reduce([Fraction(1)])

    def from_int(self, c):
        return self._reduce([Fraction(c)])

    def from_fraction(self, f):
        return self._reduce([Fraction(f)])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        out = [Fraction(0)] * (2 * self.deg - 1) if self.deg > 1 else [Fraction(0)]
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
        return self._reduce(out)

    def inv(self, a):
        # extended Euclid against phi over Q
        r0 = [Fraction(c) for c in self.phi]
        r1 = list(a)
        while r1 and not r1[-1]:
            r1.pop()
        if not r1:
            raise ZeroDivisionError
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            q, r = _poly_divmod_int(r0, r1)
            if not any(r):
                break
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, s0, r1, s1 = r1, s1, [Fraction(c) for c in r], s
            while r1 and not r1[-1]:
                r1.pop()
        lead = r1[-1] if r1 else None
        if lead is None or len(r1) != 1:
            raise ZeroDivisionError("element not invertible (phi not irreducible?)")
        return self._reduce([c / r1[0] for c in s1])

    def is_zero(self, a):
        return all(not c for c in a)

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        out = self.one()
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def to_str(self, a):
        parts = []
        for i, c in enumerate(a):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = "z" if i == 1 else f"z^{i}"
                parts.append(z if c == 1 else f"{c}*{z}")
        return " + ".join(parts) if parts else "0"


class PrimeFieldExt:
    """F_p[x]/g(x) with q = class of x; elements are int tuples mod p."""

    def __init__(self, p: int, g: list, sqrt_q=None):
        self.p = p
        self.char = p
        self.g = [c % p for c in g]
        assert self.g[-1] % p != 0
        self.deg = len(self.g) - 1
        self.name = f"F_{p}[x]/{g}"
        self.q = self._reduce([0, 1])
        self.q_inv = self.inv(self.q)
        self.sqrt_q = sqrt_q

    def _reduce(self, arr):
        p = self.p
        arr = [c % p for c in arr]
        ginv = pow(self.g[-1], p - 2, p)
        while len(arr) > self.deg:
            if arr[-1]:
                coef = arr[-1] * ginv % p
                off = len(arr) - len(self.g)
                for i, c in enumerate(self.g):
                    arr[off + i] = (arr[off + i] - coef * c) % p
            arr.pop()
        arr += [0] * (self.deg - len(arr))
        return tuple(arr)

    def zero(self):
        return tuple([0] * self.deg)

    def one(self):
        return self._reduce([1])

    def from_int(self, c):
        return self._reduce([c])

    def from_fraction(self, f):
        f = Fraction(f)
        if f.denominator % self.p == 0:
            raise PoleError("denominator not invertible")
        return self._reduce([f.numerator * pow(f.denominator, self.p - 2, self.p)])

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        out = [0] * (2 * self.deg - 1) if self.deg > 1 else [0]
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._reduce(out)

    def is_zero(self, a):
        return all(x % self.p == 0 for x in a)

    def inv(self, a):
        # a^(p^deg - 2)
        if self.is_zero(a):
            raise ZeroDivisionError
        return self.power(a, self.p ** self.deg - 2)

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        out = self.one()
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def to_str(self, a):
        return str(list(a))


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


# ---------------------------------------------------------------------------
# mixed characteristic


def _quantum_char(F, limit=10 ** 6):
    """Minimal n >= 2 with [n]_q = 0 in F, else inf."""
    if isinstance(F, GenericField):
        return inf
    q = F.q
    if F.is_zero(F.sub(q, F.one())) or F.is_zero(F.add(q, F.one())):
        # q = +-1: [n] = +-n, vanishing iff char divides n
        return F.char if F.char is not inf else inf
    # [n]_q = 0 iff q^(2n) = 1
    x = F.mul(q, q)
    acc = x
    n = 1
    while not F.is_zero(F.sub(acc, F.one())):
        acc = F.mul(acc, x)
        n += 1
        if n > limit:
            return inf
    return n if n >= 2 else inf


@dataclass
class MixedChar:
    """The pair (p, l) together with a concrete coefficient field."""

    field: object
    p: object = None
    ell: object = None
    cyclotomic_order: object = None

    def __post_init__(self):
        if self.p is None:
            self.p = self.field.char
        if self.p is not inf and self.field.char is not inf and self.p != self.field.char:
            raise ValueError("p must match the field characteristic")
        ell = _quantum_char(self.field)
        if self.ell is None:
            self.ell = ell
        elif self.ell != ell:
            raise ValueError(f"declared l={self.ell} but [{ell}]_q = 0")
        if self.ell is not inf:
            s = self.field.power(self.field.q, self.ell)
            one = self.field.one()
            if not (self.field.is_zero(self.field.sub(s, one))
                    or self.field.is_zero(self.field.add(s, one))):
                raise ValueError("q^l is not +-1")

    @property
    def q_ell_sign(self) -> int:
        """+1 or -1 according to q^l (+1 when l = inf)."""
        if self.ell is inf:
            return 1
        s = self.field.power(self.field.q, self.ell)
        return 1 if self.field.is_zero(self.field.sub(s, self.field.one())) else -1

    @property
    def neg_q_ell_sign(self) -> int:
        """(-q)^l as a sign times q^l parity."""
        if self.ell is inf:
            raise ValueError("(-q)^l needs finite l")
        return self.q_ell_sign * (-1) ** (self.ell % 2)

    @property
    def qsqrt_available(self) -> bool:
        return getattr(self.field, "sqrt_q", None) is not None

    def radix(self, i):
        return pldigits.radix(i, (self.p, self.ell))

    def __str__(self):
        return f"({self.p},{self.ell}) over {self.field.name}"


def generic_mc(half=False) -> MixedChar:
    return MixedChar(GenericField(half))


def prime_field_mc(p: int, q: int) -> MixedChar:
    return MixedChar(PrimeField(p, q))


def cyclotomic_mc(n: int, want_sqrt: bool = True) -> MixedChar:
    """Complex quantum group style backend: q a primitive n-th root of unity.

    For odd n a square root of q already lives in Q(zeta_n); for even n it
    does not, so (when requested) the field is modelled as Q(zeta_2n) with
    q = zeta_2n^2.
    """
    if n % 2 == 1:
        F = CyclotomicField(n)
        F.sqrt_q = F._x_power((n + 1) // 2)
    elif want_sqrt:
        F = _CyclotomicPower(CyclotomicField(2 * n), 2)
    else:
        F = CyclotomicField(n)
    return MixedChar(F, cyclotomic_order=n)


class _CyclotomicPower:
    """Q(zeta_m) with q = zeta_m^k (used to adjoin square roots)."""

    char = inf

    def __init__(self, base: CyclotomicField, k: int):
        self._F = base
        self.k = k
        self.name = base.name + f" (q=z^{k})"
        self.q = base._x_power(k)
        self.q_inv = base._x_power(-k)
        self.sqrt_q = base._x_power(1) if k == 2 else None

    def __getattr__(self, item):
        return getattr(self._F, item)


def prime_ext_mc(p: int, g: list) -> MixedChar:
    return MixedChar(PrimeFieldExt(p, g))


# ---------------------------------------------------------------------------
# quantum binomials over fields, quantum Lucas


def qbin_at(b: int, a: int, mc: MixedChar):
    """[b choose a]_q in mc's field, via the generic ring when denominators
    vanish (safe specialization through QFactored)."""
    s = qbin_qf(b, a)
    return specialize_qf(s, mc)


def quantum_lucas(v: int, w: int, mc: MixedChar):
    """Digitwise factorization of [v choose w]_q.

    Returns (epsilon, factors) where factors starts with the quantum binomial
    [a_0 choose b_0]_q (as a field element) followed by the plain integer
    binomials of the higher digits; epsilon * product = [v choose w]_q.
    """
    from math import comb

    if mc.ell is inf:
        raise ValueError("quantum Lucas needs finite l")
    ell = mc.ell
    base = (mc.p, mc.ell)
    a0, b0 = v % ell, w % ell
    A1, B1 = (v - a0) // ell, (w - b0) // ell
    eps = mc.q_ell_sign ** ((A1 * b0 + a0 * B1 + ell * (A1 * B1 - B1 * B1)) % 2)
    av = pldigits.expand(v, base) if v else (0,)
    aw = pldigits.expand(w, base) if w else (0,)
    factors = [qbin_at(a0, b0, mc)]
    ints = []
    n = max(len(av), len(aw))
    for i in range(1, n):
        ai = av[i] if i < len(av) else 0
        bi = aw[i] if i < len(aw) else 0
        ints.append(comb(ai, bi))
    return eps, factors + ints


def quantum_lucas_value(v: int, w: int, mc: MixedChar):
    eps, factors = quantum_lucas(v, w, mc)
    F = mc.field
    acc = F.from_int(eps)
    for f in factors:
        acc = F.mul(acc, f if not isinstance(f, int) else F.from_int(f))
    return acc


# ---------------------------------------------------------------------------
# the pl-adic valuation and specialization


def _vp(n: int, p) -> int:
    if p is inf:
        return 0
    if n == 0:
        return 10 ** 9
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord_qnum(n: int, mc: MixedChar) -> int:
    """ord([n]): 0 unless l | n, else 1 + v_p(n/l)."""
    n = abs(n)
    if n == 0:
        raise ValueError("[0] has infinite valuation")
    if mc.ell is inf or n % mc.ell:
        return 0
    return 1 + _vp(n // mc.ell, mc.p)


def ord_qf(s: QFactored, mc: MixedChar):
    """pl-adic valuation of a quantum-factored scalar (inf for 0)."""
    if s.is_zero():
        return inf
    total = _vp(s.rat.numerator, mc.p) - _vp(s.rat.denominator, mc.p)
    for n, e in s.factors:
        total += e * ord_qnum(n, mc)
    return total


def _unit_residue_qnum(n: int, mc: MixedChar):
    """The nonzero field value of [n] / (its vanishing part).

    For l not dividing n this is [n]_q itself: (q^l)^((n-a0)/l) * [a0]_q.
    For n = l*p^k*m (p not dividing m) it is (q^l)^(l*p^k*m/l - 1) * m with
    the p-power stripped.
    """
    F = mc.field
    ell = mc.ell
    if ell is inf:
        return qint_at(n, F)
    if n % ell:
        a0 = n % ell
        e = (n - a0) // ell
        val = qint_at(a0, F)
        if mc.q_ell_sign < 0 and e % 2:
            val = F.neg(val)
        return val
    M = n // ell
    k = _vp(M, mc.p)
    m = M // (mc.p ** k if mc.p is not inf else 1)
    val = F.from_int(m)
    if mc.q_ell_sign < 0 and (M - 1) % 2:
        val = F.neg(val)
    return val


def specialize_qf(s: QFactored, mc: MixedChar):
    """Value of a quantum-factored scalar in mc's field.

    Zero when ord > 0, PoleError when ord < 0, otherwise the product of unit
    residues.  Agrees with direct evaluation in a cyclotomic model (tested).
    """
    F = mc.field
    if s.is_zero():
        return F.zero()
    o = ord_qf(s, mc)
    if o < 0:
        raise PoleError(f"negative pl-adic valuation {o} for {s}")
    if o > 0:
        return F.zero()
    p = mc.p
    num, den = s.rat.numerator, s.rat.denominator
    if p is not inf:
        num //= p ** _vp(num, p)
        den //= p ** _vp(den, p)
    acc = F.mul(F.from_int(s.sign * num), F.inv(F.from_int(den)))
    for n, e in s.factors:
        r = _unit_residue_qnum(n, mc)
        if e < 0:
            r = F.inv(r)
        for _ in range(abs(e)):
            acc = F.mul(acc, r)
    return acc


# -- RatFunc specialization ---------------------------------------------------

def _phi_for_mc(mc: MixedChar):
    """The cyclotomic polynomial of the order of q, as a LaurentPoly."""
    e = _order_of_q(mc)
    coeffs = cyclotomic_poly(e)
    return LaurentPoly({i: c for i, c in enumerate(coeffs) if c})


def _order_of_q(mc: MixedChar) -> int:
    F = mc.field
    one = F.one()
    x = F.q
    n = 1
    while not F.is_zero(F.sub(x, one)):
        x = F.mul(x, F.q)
        n += 1
        if n > 10 ** 6:
            raise ValueError("q does not look like a root of unity")
    return n


def _strip_phi(poly: LaurentPoly, phi: LaurentPoly):
    """(multiplicity of phi in poly, cofactor)."""
    if poly.is_zero():
        return inf, poly
    m = 0
    while True:
        q = poly_exact_div(poly, phi)
        if q is None:
            return m, poly
        poly = q
        m += 1


class _PadicEmbedding:
    """Exact p-adic embedding of Z[x] along the prime above p singled out by q.

    Maps x to a Teichmueller-style root t of the Hensel lift of q's minimal
    polynomial over Z/p^K; the working precision K grows on demand so that
    valuations returned are exact (a nonzero value is never mistaken for 0).
    """

    def __init__(self, mc: MixedChar):
        self.p = mc.p
        self.e = _order_of_q(mc)
        F = mc.field
        self.deg = getattr(F, "deg", 1)
        if isinstance(F, PrimeField):
            self.g = [(-F.q) % self.p, 1]
        elif isinstance(F, PrimeFieldExt):
            self.g = [c % self.p for c in F.g]
            lead = self.g[-1]
            if lead != 1:
                li = pow(lead, self.p - 2, self.p)
                self.g = [c * li % self.p for c in self.g]
        else:
            raise TypeError("p-adic embedding needs a finite field backend")
        self.K = 64
        self._lift()

    def _lift(self):
        p, K = self.p, self.K
        mod = p ** K
        if self.deg == 1:
            # Teichmueller lift of the root: t = lim q^(p^n)
            t = (-self.g[0]) % p
            t = pow(t, pow(p, K + 1), mod)
            assert pow(t, self.e, mod) == 1
            self.gk = [(-t) % mod, 1]
        else:
            self.gk = _hensel_lift_factor(cyclotomic_poly(self.e), self.g, p, K)
        self.mod = mod

    def valuation_and_residue(self, ipoly: LaurentPoly):
        """(v_p, residue coeff tuple mod p) of an integer Laurent poly."""
        if ipoly.is_zero():
            return inf, None
        while True:
            m = self.mod
            sh, arr = ipoly.to_monic_list()
            red = _polyrem_mod(arr, self.gk, m)
            # multiply by x^sh; x^e = 1 modulo (m, gk) by construction
            sh %= self.e
            if sh:
                xs = _polyrem_mod([0] * sh + [1], self.gk, m)
                red = _polyrem_mod(_polymul_mod(red, xs, m), self.gk, m)
            if not red:
                red = [0]
            val = min((_vp(c, self.p) for c in red if c % m), default=None)
            if val is None or 2 * val + 8 > self.K:
                # everything vanished (or margin too small) at this precision
                self.K *= 2
                self._lift()
                continue
            res = [(c // self.p ** val) % self.p for c in red]
            return val, tuple(res + [0] * (self.deg - len(res)))


def _polydiv_mod(a, b, m):
    """Division with remainder over Z/m, b monic."""
    a = [c % m for c in a]
    b = [c % m for c in b]
    assert b[-1] == 1
    out = [0] * max(1, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b):
        c = r[-1] % m
        d = len(r) - len(b)
        out[d] = c
        for i, bc in enumerate(b):
            r[d + i] = (r[d + i] - c * bc) % m
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return out, r


def _polyrem_mod(a, b, m):
    return _polydiv_mod(a, b, m)[1]


def _polymul_mod(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return out


def _poly_xgcd_prime(a, g, p):
    """s with s*a = 1 mod (g, p); F_p[x] extended Euclid."""
    def trim(x):
        x = [c % p for c in x]
        while x and x[-1] == 0:
            x.pop()
        return x

    r0, r1 = trim(list(g)), trim(list(a))
    s0, s1 = [], [1]
    while r1:
        inv_lead = pow(r1[-1], p - 2, p)
        q = [0] * max(1, len(r0) - len(r1) + 1)
        r = r0[:]
        while len(r) >= len(r1):
            if r[-1] == 0:
                r.pop()
                continue
            c = r[-1] * inv_lead % p
            d = len(r) - len(r1)
            q[d] = c
            for i, bc in enumerate(r1):
                r[d + i] = (r[d + i] - c * bc) % p
            r.pop()
        r = trim(r)
        qs1 = _polymul_mod(q, s1, p)
        news = [(x - y) % p for x, y in
                zip(s0 + [0] * max(0, len(qs1) - len(s0)),
                    qs1 + [0] * max(0, len(s0) - len(qs1)))]
        r0, r1, s0, s1 = r1, r, s1, news
    if len(r0) != 1:
        raise ZeroDivisionError("not coprime")
    c = pow(r0[0], p - 2, p)
    return [x * c % p for x in s0]


def _hensel_lift_factor(phi, g0, p, K):
    """Monic factor of phi over Z/p^K reducing to g0 mod p (phi squarefree mod p)."""
    g = [c % p for c in g0]
    prec = 1
    while prec < K:
        prec = min(2 * prec, K)
        m = p ** prec
        q, r = _polydiv_mod(phi, g, m)
        qinv = _poly_xgcd_prime(q, g, p)
        # Newton refinement to the current precision
        qi = qinv[:]
        step = p
        while step < m:
            step = min(step * step, m)
            prod = _polyrem_mod(_polymul_mod(q, qi, step), g, step)
            corr = [(2 if i == 0 else 0) - c for i, c in enumerate(prod)]
            qi = _polyrem_mod(_polymul_mod(qi, corr, step), g, step)
        s = _polyrem_mod(_polymul_mod(r, qi, m), g, m)
        g = [(a + b) % m for a, b in
             zip(g + [0] * max(0, len(s) - len(g)), s + [0] * max(0, len(g) - len(s)))]
    mod = p ** K
    _, rem = _polydiv_mod(phi, g, mod)
    assert not rem, "Hensel lift failed to divide"
    return g


def _embedding(mc: MixedChar) -> _PadicEmbedding:
    emb = getattr(mc.field, "_padic_embedding", None)
    if emb is None:
        emb = _PadicEmbedding(mc)
        mc.field._padic_embedding = emb
    return emb


def specialize_ratfunc(r: RatFunc, mc: MixedChar):
    """Image of r in mc's field under v -> q (PoleError at poles)."""
    F = mc.field
    if isinstance(F, GenericField):
        if r.num.half and not F.half:
            raise GradingError("half-graded value in integrally graded field")
        return r if F.half == r.num.half else RatFunc(r.num.to_half(), r.den.to_half())
    if r.is_zero():
        return F.zero()
    num, den = r.num, r.den
    if num.half or den.half:
        num, den, ok = _descend_half(num, den)
        if not ok:
            return _specialize_half(r, mc)
    e = _order_of_q(mc)
    phi = _phi_for_mc(mc)
    mn, num = _strip_phi(num, phi)
    md, den = _strip_phi(den, phi)
    if mn < md:
        raise PoleError("pole along the cyclotomic direction")
    if mn > md:
        return F.zero()
    if mc.p is inf:
        a = num.eval_field(F, F.q, F.q_inv)
        b = den.eval_field(F, F.q, F.q_inv)
        if F.is_zero(b):
            raise PoleError("denominator vanished after cancellation")
        return F.mul(a, F.inv(b))
    emb = _embedding(mc)
    va, ra = emb.valuation_and_residue(num)
    vb, rb = emb.valuation_and_residue(den)
    if va is inf:
        return F.zero()
    if vb is inf:
        raise PoleError("denominator specializes to zero")
    if va < vb:
        raise PoleError("negative p-adic valuation")
    if va > vb:
        return F.zero()
    a = _tuple_to_field(ra, mc)
    b = _tuple_to_field(rb, mc)
    return F.mul(a, F.inv(b))


def _tuple_to_field(t, mc: MixedChar):
    F = mc.field
    if isinstance(F, PrimeField):
        return t[0] % F.p
    acc = F.zero()
    for i, c in enumerate(t):
        acc = F.add(acc, F.mul(F.from_int(c), F.power(F.q, i)))
    return acc


def _descend_half(num: LaurentPoly, den: LaurentPoly):
    """Try to rewrite a half-graded fraction in integral grading."""
    def desc(p):
        if not p.half:
            return p, True
        if any(e % 2 for e in p.coeffs):
            return p, False
        return LaurentPoly({e // 2: c for e, c in p.coeffs.items()}), True

    n2, okn = desc(num)
    d2, okd = desc(den)
    if okn and okd:
        return n2, d2, True
    # shift by v^(1/2): maybe all exponents are odd
    return num, den, False


def _specialize_half(r: RatFunc, mc: MixedChar):
    """Specialize a genuinely half-graded fraction using sqrt(q)."""
    F = mc.field
    s = getattr(F, "sqrt_q", None)
    if s is None:
        raise PoleError("no square root of q available in " + F.name)
    sinv = F.inv(s)
    num, den = r.num, r.den
    if not num.half:
        num = num.to_half()
    if not den.half:
        den = den.to_half()
    a = num.eval_field(F, s, sinv)
    b = den.eval_field(F, s, sinv)
    if F.is_zero(b):
        # fall back through the integral route after multiplying by v^(1/2)
        raise PoleError("half-graded denominator vanished; reduce first")
    return F.mul(a, F.inv(b))


def ord_ratfunc(r: RatFunc, mc: MixedChar):
    """Collapsed pl-adic valuation of a rational function at mc.

    Multiplicity of the cyclotomic factor of q plus the p-adic valuation of
    the evaluated cofactor; inf for 0.  For l = inf with finite p this is the
    p-adic valuation of the rational content (a convention).
    """
    if r.is_zero():
        return inf
    if mc.ell is inf:
        if mc.p is inf:
            return 0
        return _vp(r.num.content(), mc.p) - _vp(r.den.content(), mc.p)
    phi = _phi_for_mc(mc)
    mn, num = _strip_phi(r.num, phi)
    md, den = _strip_phi(r.den, phi)
    if mc.p is inf:
        return mn - md
    emb = _embedding(mc)
    va, _ = emb.valuation_and_residue(num)
    vb, _ = emb.valuation_and_residue(den)
    return (mn - md) + (va - vb)
