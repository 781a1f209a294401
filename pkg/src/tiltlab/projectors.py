"""Jones-Wenzl projectors: classical, semisimple mixed-base, and specialized.

The semisimple projector of weight v is the loop sum over the support of v;
loops are ladders of classical projectors with digit-thickness caps, kept in
the cellular (sandwich) form, so products and specializations stay exact and
small.  Specialization to a mixed characteristic is the place from qarith.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from . import cellular as ce
from . import pldigits as pl
from . import qarith as qa
from . import tlcat as tl
from .cellular import CellMorphism, LazyFrac
from .qarith import QFactored
from .tlcat import TLMorphism


class NotAdmissible(pl.NotAdmissible):
    pass


def reflect_loose(v: int, S, base) -> int:
    """Negate the digits of v indexed by S, without admissibility checks.

    Used for reflecting ancestors whose S-digits may already be zero.
    """
    digits = list(pl.expand(v, base))
    for s in S:
        if s < len(digits):
            digits[s] = -digits[s]
    return pl.value_of(digits, base)


def lambda_coeff(v: int, S, base) -> QFactored:
    """The loop coefficient of the semisimple projector at a reflection set.

    Product over s in S of (-1)^(a_s * radix(s-1)) [f(v,s-1)[S]] / [f(v,s)[S]],
    with radix(-1) read as 1.
    """
    S = frozenset(S)
    if not pl.is_down_admissible(S, v, base) and S:
        raise NotAdmissible(f"{sorted(S)} not down-admissible for {v}")
    out = QFactored.one()
    digits = pl.expand(v, base)
    for s in sorted(S):
        a_s = digits[s] if s < len(digits) else 0
        up = pl.youngest_ancestor_with_zero(v, s - 1, base)
        dn = pl.youngest_ancestor_with_zero(v, s, base)
        num = reflect_loose(up, S, base)
        den = reflect_loose(dn, S, base)
        radix = 1 if s == 0 else pl.radix(s - 1, base)
        sign = -1 if (a_s * radix) % 2 else 1
        out = out * QFactored.rational(sign) * QFactored.qnum(num) / QFactored.qnum(den)
    return out


def _stretch_caps(v: int, S, base):
    """Cap data for the trapeze of a down-admissible S at weight v.

    Yields, for each minimal stretch from the highest down, the tuple
    (weight it acts at, cap position, cap thickness, trailing throughs,
    boxed strand count).
    """
    S = frozenset(S)
    stretches = pl.minimal_stretches(S, v, base, "down")
    stretches.sort(key=lambda st: min(st))
    # the highest stretch acts first (at weight v), so walk from the top
    weight = v
    out = []
    for st in reversed(stretches):
        low = min(st)
        digits = pl.expand(weight, base)
        a = digits[low]
        thick = a * pl.radix(low, base)
        below = sum(digits[i] * pl.radix(i, base) for i in range(low))
        vpp = weight - below - thick       # ancestor with digit `low` zeroed
        boxed = vpp - 1
        pos = boxed - thick
        assert pos >= 0
        out.append((weight, pos, thick, below, boxed))
        weight = pl.reflect_down(weight, st, base)
    assert weight == pl.reflect_down(v, S, base)
    return list(reversed(out))   # ascending: thin end first


def trapeze_cell(v: int, S, base) -> CellMorphism:
    """Downward simple trapeze (v-1 strands -> v[S]-1 strands) as a cell sum.

    Ladder of classical projectors with one digit-thickness cap per minimal
    stretch; the thin end carries the projector of the reflected weight.
    """
    S = frozenset(S)
    if not pl.is_down_admissible(S, v, base):
        raise NotAdmissible(f"{sorted(S)} not down-admissible for {v}")
    target = pl.reflect_down(v, S, base)
    cell = CellMorphism.jw(target - 1)
    for weight, pos, thick, below, boxed in _stretch_caps(v, S, base):
        cap = tl.cap_at_pair(pos, thick, below)       # weight-1 -> reflected-1
        blocks = [boxed] + [1] * (thick + below)
        cell = ce.apply_padded_below(cell, cap, blocks,
                                     tl.identity_pair(weight - 1), weight - 1)
    return cell


def loop_cell(v: int, S, base) -> CellMorphism:
    """The loop at S: upward trapeze over downward trapeze, on v-1 strands."""
    t = trapeze_cell(v, S, base)
    return t.flip_h().compose(t)


_PQJW_CACHE = {}


def pqjw_cell(v: int, base) -> CellMorphism:
    """Semisimple mixed-base projector of weight v over the generic ring."""
    base = pl._pl(base)
    key = (v, base)
    if key not in _PQJW_CACHE:
        out = CellMorphism.zero(v - 1, v - 1)
        for S in pl.down_admissible_sets(v, base):
            lam = lambda_coeff(v, S, base)
            out = out.add(loop_cell(v, S, base).scale_qf(lam))
        _PQJW_CACHE[key] = out
    return _PQJW_CACHE[key]


def qjw_generic(n: int) -> TLMorphism:
    """Classical projector on n strands in the matching basis over Q(v)."""
    F = qa.GenericField()
    return TLMorphism(n, n, F,
                      {p: c.to_ratfunc() for p, c in ce.jw_terms(n).items()})


def _mixed_cache(mc):
    cache = getattr(mc.field, "_mixed_jw_cache", None)
    if cache is None:
        cache = {}
        mc.field._mixed_jw_cache = cache
    return cache


def mixed_jw(v: int, mc) -> TLMorphism:
    """The mixed projector of weight v over mc, in the matching basis."""
    cache = _mixed_cache(mc)
    if v not in cache:
        tl.check_cap(v - 1)
        cell = pqjw_cell(v, (mc.p, mc.ell))
        cache[v] = cell.specialize(mc)
    return cache[v]


def mixed_jw_cell(v: int, mc) -> CellMorphism:
    return pqjw_cell(v, (mc.p, mc.ell))


@dataclass
class Projector:
    """A projector with its weight, flavor, and cached expansion."""

    weight: int
    variant: str           # "classical" | "semisimple" | "mixed"
    mc: object
    expansion: TLMorphism

    @property
    def strands(self):
        return self.weight - 1


def projector(v: int, mc, variant: str = "mixed") -> Projector:
    if variant == "classical":
        if not isinstance(mc.field, qa.GenericField) and not pl.is_eve(v, (mc.p, mc.ell)):
            raise ValueError(
                "classical projectors only descend at eve weights")
        if isinstance(mc.field, qa.GenericField):
            exp = qjw_generic(v - 1)
        else:
            exp = mixed_jw(v, mc)
        return Projector(v, variant, mc, exp)
    if variant == "semisimple":
        return Projector(v, variant, mc,
                         pqjw_cell(v, (mc.p, mc.ell)).to_generic_morphism())
    if variant == "mixed":
        return Projector(v, variant, mc, mixed_jw(v, mc))
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# partial traces


def qnum2_at(mc, k: int):
    """[2] at q**k, as a field element."""
    F = mc.field
    t = F.power(F.q, k)
    return F.add(t, F.inv(t))


def ptrace_to_ancestor(v: int, w: int, mc):
    """Scalar for tracing the mixed projector down to the ancestor v - w.

    w must be the value of a suffix of v's digits; returns (scalar, v - w)
    with partial trace over w strands of mixed_jw(v) equal to
    scalar * mixed_jw(v - w).  For eves the trace annihilates: scalar 0.
    """
    base = (mc.p, mc.ell)
    F = mc.field
    if pl.is_eve(v, base):
        # an eve traced part-way down to a smaller eve is annihilated
        if w >= v or not pl.is_eve(v - w, base):
            raise ValueError("eve can only be traced to a smaller eve")
        return F.zero(), v - w
    if v - w not in pl.ancestors(v, base):
        raise ValueError(f"{w} is not a digit suffix of {v}")
    wd = pl.expand(w, base)
    scalar = F.one() if w % 2 == 0 else F.neg(F.one())
    for i, a in enumerate(wd):
        if a:
            scalar = F.mul(scalar, qnum2_at(mc, a * pl.radix(i, base)))
    return scalar, v - w


def check_ptrace_to_ancestor(v: int, w: int, mc) -> bool:
    """Diagrammatic verification of the ancestor partial-trace rule."""
    lhs = tl.partial_trace_right(mixed_jw(v, mc), w)
    scalar, rest = ptrace_to_ancestor(v, w, mc)
    rhs = mixed_jw(rest, mc).scale(scalar)
    return lhs == rhs


def check_eve_annihilation(v: int, k: int, mc) -> bool:
    """Tracing an eve projector part-way down to a smaller eve gives zero."""
    base = (mc.p, mc.ell)
    assert pl.is_eve(v, base) and pl.is_eve(v - k, base)
    lhs = tl.partial_trace_right(mixed_jw(v, mc), k)
    return lhs.is_zero()


def recursion_check(v: int, base) -> bool:
    """Exact cellular check of the mother-loop expansion of the projector.

    The weight-v semisimple projector expands over the mother's reflection
    sets: for each S, a middle classical projector of the reflected weight
    with the live bottom digit's strands passing by, plus a correction with
    those strands folded into a smaller projector, weighted by a quantum
    ratio.  Nothing about the statement is special to small v; this runs the
    identity exactly over Q(v).
    """
    base = pl._pl(base)
    if pl.is_eve(v, base):
        return ce.cells_equal_generic(pqjw_cell(v, base),
                                      CellMorphism.jw(v - 1))
    m = pl.mother(v, base)
    digits = pl.expand(v, base)
    s = min(i for i, d in enumerate(digits) if d)
    step = digits[s] * pl.radix(s, base)
    rhs = None
    for S in pl.down_admissible_sets(m, base):
        lam = lambda_coeff(m, S, base)
        tz = trapeze_cell(m, S, base)
        flip_tz = tz.flip_h()
        vS = pl.reflect_down(m, S, base) + step
        mid = CellMorphism.jw(vS - 1)
        a_term = ce.padded_compose(ce.padded_compose(mid, tz, step, below=True),
                                   flip_tz, step, below=False)
        piece = a_term
        vSs = vS - 2 * step
        if vSs >= 1:
            mid2 = CellMorphism.jw(vSs - 1)
            cup = tl.cup_at_pair(vSs - 1, step, 0)
            cap = tl.cap_at_pair(vSs - 1, step, 0)
            folded = mid2.attach_top(cup, vS - 1).attach_bottom(cap, vS - 1)
            b_term = ce.padded_compose(ce.padded_compose(folded, tz, step, True),
                                       flip_tz, step, False)
            ratio = QFactored.qnum(vSs) / QFactored.qnum(vS - step)
            sign = -1 if (step % 2) else 1
            b_term = b_term.scale_qf(QFactored.rational(sign) * ratio)
            piece = piece.add(b_term)
        piece = piece.scale_qf(lam)
        rhs = piece if rhs is None else rhs.add(piece)
    return ce.cells_equal_generic(pqjw_cell(v, base), rhs)


# ---------------------------------------------------------------------------
# mixed trapezes (projector-flanked), the zigzag generators


def mixed_trapeze_cell(v: int, S, base, direction: str = "down") -> CellMorphism:
    """Projector-flanked trapeze over the generic ring.

    For a minimal stretch this is a single digit-thickness cap between the
    two semisimple projectors; a general admissible set composes its minimal
    stretches (highest first) through the intermediate projectors.  Up is
    the horizontal flip taken at the upward-reflected weight.
    """
    S = frozenset(S)
    if direction == "up":
        if not pl.is_up_admissible(S, v, base):
            raise NotAdmissible(f"{sorted(S)} not up-admissible for {v}")
        w = pl.reflect_up(v, S, base)
        return mixed_trapeze_cell(w, S, base, "down").flip_h()
    if not pl.is_down_admissible(S, v, base):
        raise NotAdmissible(f"{sorted(S)} not down-admissible for {v}")
    if not S:
        return pqjw_cell(v, base)
    stretches = pl.minimal_stretches(S, v, base, "down")
    if len(stretches) > 1:
        cell = None
        weight = v
        for st in sorted(stretches, key=min, reverse=True):
            piece = mixed_trapeze_cell(weight, frozenset(st), base)
            cell = piece if cell is None else piece.compose(cell)
            weight = pl.reflect_down(weight, st, base)
        return cell
    (weight, pos, thick, below, boxed), = _stretch_caps(v, S, base)
    top = pqjw_cell(pl.reflect_down(v, S, base), base)
    bot = pqjw_cell(v, base)
    cap = tl.cap_at_pair(pos, thick, below)
    return top.attach_bottom(cap, weight - 1).compose(bot)


def zigzag_generator(v: int, S, mc, direction: str = "down") -> TLMorphism:
    """Specialized mixed trapeze as a matching-basis morphism."""
    return mixed_trapeze_cell(v, S, (mc.p, mc.ell), direction).specialize(mc)


# ---------------------------------------------------------------------------
# half-twist conjugation


def half_twist_check(v: int, base) -> bool:
    """Conjugating the semisimple projector by the positive half twist (or by
    its block-reversing coset part) yields the vertical flip."""
    F = qa.GenericField(half=True)
    n = v - 1
    cellm = pqjw_cell(v, base)
    terms = {}
    for pair, c in cellm.to_diagram_lazy().items():
        r = c.to_ratfunc()
        terms[pair] = qa.RatFunc(r.num.to_half(), r.den.to_half())
    pq = TLMorphism(n, n, F, terms)
    g = tl.braid_lift(F, n, tl.half_twist_word(n))
    ginv = TLMorphism.identity(n, F)
    for i in reversed(tl.half_twist_word(n)):
        ginv = tl.compose(tl.crossing_at(F, n, i, False), ginv)
    conj = tl.compose(ginv, tl.compose(pq, g))
    if conj != pq.flip_v():
        return False
    digits = pl.expand(v, base)
    blocks = [digits[-1] * pl.radix(len(digits) - 1, base) - 1]
    for i in range(len(digits) - 2, -1, -1):
        if digits[i]:
            blocks.append(digits[i] * pl.radix(i, base))
    word = tl.coset_twist_word(blocks)
    r = tl.braid_lift(F, n, word)
    rinv = TLMorphism.identity(n, F)
    for i in reversed(word):
        rinv = tl.compose(tl.crossing_at(F, n, i, False), rinv)
    conj2 = tl.compose(rinv, tl.compose(pq, r))
    return conj2 == pq.flip_v()
