"""Mixed-base digit combinatorics for SL2 weights.

Weights v >= 1 are expanded in the mixed base 1, l, pl, p^2*l, ... where
(p, l) is a mixed characteristic; either entry may be infinite.  All the
combinatorics of eves, mothers, supports, admissible sets and reflections
lives here.  Digits are stored little-endian: ``digits[i]`` is the
coefficient of ``radix(i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import Iterable, Sequence


class NotAdmissible(ValueError):
    """Raised when a set of digit indices fails an admissibility condition."""


class MotherOfEve(ValueError):
    """Raised when asking for the mother of an eve."""


def _pl(mc) -> tuple:
    """Accept a (p, l) pair or any object with .p/.ell attributes."""
    if isinstance(mc, tuple):
        p, ell = mc
    else:
        p, ell = mc.p, mc.ell
    p = inf if p in (None, inf) else int(p)
    ell = inf if ell in (None, inf) else int(ell)
    if p is not inf and p < 2:
        raise ValueError(f"p must be a prime or infinity, got {p}")
    if ell is not inf and ell < 2:
        raise ValueError(f"l must be >= 2 or infinity, got {ell}")
    return p, ell


def radix(i: int, mc) -> int:
    """The i-th mixed radix: 1, l, p*l, p^2*l, ..."""
    p, ell = _pl(mc)
    if i == 0:
        return 1
    if ell is inf:
        return inf
    if p is inf and i >= 2:
        return inf
    return p ** (i - 1) * ell


def digit_bound(i: int, mc) -> int:
    """Largest allowed value of digit i, plus one (l at position 0, p above)."""
    p, ell = _pl(mc)
    return ell if i == 0 else p


def expand(v: int, mc) -> tuple:
    """Little-endian digit tuple of v >= 1; unique, leading digit nonzero."""
    if v < 1:
        raise ValueError(f"weights must be positive, got {v}")
    p, ell = _pl(mc)
    if ell is inf:
        return (v,)
    digits = [v % ell]
    rest = v // ell
    if p is inf:
        if rest:
            digits.append(rest)
        return tuple(digits)
    while rest:
        digits.append(rest % p)
        rest //= p
    return tuple(digits)


def value_of(digits: Sequence[int], mc) -> int:
    """Evaluate a digit tuple, negative entries allowed (little-endian)."""
    p, ell = _pl(mc)
    total = 0
    for i, d in enumerate(digits):
        if d == 0:
            continue
        r = radix(i, mc)
        if r is inf:
            raise ValueError(f"digit position {i} unavailable at (p,l)=({p},{ell})")
        total += d * r
    return total


def digit(v: int, i: int, mc) -> int:
    """Digit a_i of v, zero beyond the leading digit."""
    d = expand(v, mc)
    return d[i] if i < len(d) else 0


def leading_index(v: int, mc) -> int:
    return len(expand(v, mc)) - 1


def is_eve(v: int, mc) -> bool:
    """An eve has a single nonzero digit."""
    return sum(1 for d in expand(v, mc) if d) == 1


def mother(v: int, mc) -> int:
    """Zero out the rightmost nonzero digit; undefined for eves."""
    if is_eve(v, mc):
        raise MotherOfEve(f"{v} is an eve")
    digits = list(expand(v, mc))
    for i, d in enumerate(digits):
        if d:
            digits[i] = 0
            return value_of(digits, mc)
    raise AssertionError("unreachable")


def ancestors(v: int, mc) -> list:
    """The chain mother, mother^2, ..., up to the eve [a_j, 0, ..., 0]."""
    chain = []
    w = v
    while not is_eve(w, mc):
        w = mother(w, mc)
        chain.append(w)
    return chain


def generation(v: int, mc) -> int:
    """Number of ancestors = number of nonzero non-leading digits."""
    digits = expand(v, mc)
    return sum(1 for d in digits[:-1] if d)


def eldest(v: int, mc) -> int:
    """The eve ancestor [a_j, 0, ..., 0] (v itself if v is an eve)."""
    digits = expand(v, mc)
    return digits[-1] * radix(len(digits) - 1, mc)


def tail_length(v: int, mc) -> int:
    """Minimal k such that digits a_i are maximal for all i < k."""
    p, ell = _pl(mc)
    digits = expand(v, mc)
    k = 0
    while k < len(digits):
        bound = digit_bound(k, mc)
        if bound is inf or digits[k] != bound - 1:
            break
        k += 1
    return k


def youngest_ancestor_with_zero(v: int, s: int, mc) -> int:
    """Youngest proper ancestor of v whose digit a_s vanishes.

    Equals v with all digits at positions <= s dropped; s = -1 returns v
    itself by convention.
    """
    if s < 0:
        return v
    digits = expand(v, mc)
    if s >= len(digits) - 1:
        raise ValueError(f"no ancestor of {v} has digit {s} zero")
    return value_of([0] * (s + 1) + list(digits[s + 1:]), mc)


# ---------------------------------------------------------------------------
# admissible sets, reflections


def stretches(indices: Iterable[int]) -> list:
    """Coarsest partition of an index set into runs of consecutive integers.

    Returned as a list of descending-sorted tuples, ordered by lowest index.
    """
    idx = sorted(set(indices))
    out = []
    run = []
    for i in idx:
        if run and i != run[-1] + 1:
            out.append(tuple(reversed(run)))
            run = []
        run.append(i)
    if run:
        out.append(tuple(reversed(run)))
    return out


@dataclass(frozen=True)
class StretchSet:
    """A finite set of digit indices with its canonical stretch partition."""

    indices: frozenset

    @classmethod
    def of(cls, indices: Iterable[int]) -> "StretchSet":
        return cls(frozenset(int(i) for i in indices))

    @property
    def stretches(self) -> list:
        return stretches(self.indices)

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self):
        return len(self.indices)


def is_down_admissible(S: Iterable[int], v: int, mc) -> bool:
    S = set(S)
    if not S:
        return True
    if min(S) < 0:
        return False
    digits = expand(v, mc)
    for run in stretches(S):
        if digit(v, min(run), mc) == 0:
            return False
    for s in S:
        # a zero digit above s forces s+1 into the set; digits beyond the
        # leading one are zero, which rules out sets touching the leading digit
        if s + 1 not in S and digit(v, s + 1, mc) == 0:
            return False
    if max(S) >= len(digits) - 1:
        return False
    return True


def is_up_admissible(S: Iterable[int], v: int, mc) -> bool:
    S = set(S)
    if not S:
        return True
    if min(S) < 0:
        return False
    if radix(max(S) + 1, mc) is inf:
        # the reflection would need a digit position that does not exist
        return False
    for run in stretches(S):
        if digit(v, min(run), mc) == 0:
            return False
    for s in S:
        if s + 1 in S:
            continue
        bound = digit_bound(s + 1, mc)
        if bound is not inf and digit(v, s + 1, mc) == bound - 1:
            return False
    return True


def reflect_down(v: int, S: Iterable[int], mc) -> int:
    """v[S]: negate the digits indexed by S; requires down-admissibility."""
    S = set(S)
    if not is_down_admissible(S, v, mc):
        raise NotAdmissible(f"{sorted(S)} is not down-admissible for {v}")
    digits = list(expand(v, mc))
    for s in S:
        digits[s] = -digits[s]
    return value_of(digits, mc)


def reflect_up(v: int, S: Iterable[int], mc) -> int:
    """v(S): the upward reflection; requires up-admissibility."""
    S = set(S)
    if not S:
        return v
    if not is_up_admissible(S, v, mc):
        raise NotAdmissible(f"{sorted(S)} is not up-admissible for {v}")
    digits = list(expand(v, mc))
    digits += [0] * (max(S) + 2 - len(digits))
    for k in range(len(digits)):
        if k in S:
            digits[k] = -digits[k]
        elif k - 1 in S:
            digits[k] += 2
    return value_of(digits, mc)


def down_admissible_sets(v: int, mc) -> list:
    """All down-admissible sets for v, as frozensets (the empty set included).

    A down-admissible set is the upward zero-closure of its nonzero-digit
    positions, so these are in bijection with subsets of the nonzero
    non-leading digit positions (and with support(v)).
    """
    digits = expand(v, mc)
    j = len(digits) - 1
    candidates = [i for i in range(j) if digits[i]]
    out = []
    for mask in range(1 << len(candidates)):
        S = {candidates[i] for i in range(len(candidates)) if mask >> i & 1}
        T = set(S)
        for s in sorted(S):
            t = s
            while t + 1 not in T and digit(v, t + 1, mc) == 0:
                t += 1
                T.add(t)
        assert is_down_admissible(T, v, mc)
        out.append(frozenset(T))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def support(v: int, mc) -> set:
    """All weights [a_j, +-a_{j-1}, ..., +-a_0]; has size 2**generation(v)."""
    digits = expand(v, mc)
    out = set()
    nonleading = [i for i in range(len(digits) - 1) if digits[i]]
    for mask in range(1 << len(nonleading)):
        d = list(digits)
        for b, i in enumerate(nonleading):
            if mask >> b & 1:
                d[i] = -d[i]
        out.add(value_of(d, mc))
    return out


def support_map(v: int, mc) -> dict:
    """Map S -> v[S] over all down-admissible sets; a bijection onto support(v)."""
    return {S: reflect_down(v, S, mc) for S in down_admissible_sets(v, mc)}


def minimal_stretches(S: Iterable[int], v: int, mc, direction: str = "down") -> list:
    """Finest partition of an admissible set into admissible stretches.

    Within a run, a new stretch starts at every index carrying a nonzero
    digit; zero digits (down) are forced companions of the index below.
    """
    S = set(S)
    if direction == "down":
        if not is_down_admissible(S, v, mc):
            raise NotAdmissible(f"{sorted(S)} is not down-admissible for {v}")
    elif direction == "up":
        if not is_up_admissible(S, v, mc):
            raise NotAdmissible(f"{sorted(S)} is not up-admissible for {v}")
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out = []
    for run in stretches(S):
        lo, hi = min(run), max(run)
        part = [lo]
        for i in range(lo + 1, hi + 1):
            d = digit(v, i, mc)
            if direction == "down":
                cut = d != 0
            else:
                bound = digit_bound(i, mc)
                cut = d != 0 and (bound is inf or d != bound - 1)
            if cut:
                out.append(tuple(reversed(part)))
                part = []
            part.append(i)
        out.append(tuple(reversed(part)))
    return out


def hull(S: Iterable[int], v: int, mc):
    """Down-admissible hull: the smallest down-admissible superset, or None.

    Defined for up-admissible S.  Grows through zero digits above each
    element; growing past the leading digit means no hull exists.
    """
    S = set(S)
    if not is_up_admissible(S, v, mc):
        raise NotAdmissible(f"{sorted(S)} is not up-admissible for {v}")
    if not S:
        return frozenset()
    j = leading_index(v, mc)
    T = set(S)
    frontier = sorted(T)
    for s in frontier:
        t = s
        while t + 1 not in T and digit(v, t + 1, mc) == 0:
            t += 1
            if t > j:
                return None
            T.add(t)
    if max(T) >= j:
        return None
    return frozenset(T)


def format_digits(v: int, mc) -> str:
    """Big-endian display like '[3,1,2]_{7,3}'."""
    p, ell = _pl(mc)
    digits = expand(v, mc)
    ps = "inf" if p is inf else str(p)
    ls = "inf" if ell is inf else str(ell)
    return "[%s]_{%s,%s}" % (",".join(str(d) for d in reversed(digits)), ps, ls)
