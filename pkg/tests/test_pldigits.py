import pytest
from hypothesis import given, settings, strategies as st
from math import inf

from tiltlab import pldigits as pl


MC73 = (7, 3)
MC77 = (7, 7)
MC33 = (3, 3)
MC22 = (2, 2)
MCI3 = (inf, 3)
MC57 = (5, 7)


def be(*digits_bigendian):
    """Helper: big-endian digits as written on paper -> little-endian tuple."""
    return tuple(reversed(digits_bigendian))


class TestExpand:
    def test_68_in_four_characteristics(self):
        assert pl.expand(68, (7, inf)) == (68,)
        assert pl.expand(68, MCI3) == be(22, 2)
        assert pl.expand(68, MC77) == be(1, 2, 5)
        assert pl.expand(68, MC73) == be(3, 1, 2)

    def test_value_with_negative_digits(self):
        assert pl.value_of(be(3, -1, 2), MC73) == 62

    def test_radix_ladder(self):
        assert [pl.radix(i, MC73) for i in range(4)] == [1, 3, 21, 147]

    @given(st.integers(min_value=1, max_value=10 ** 6))
    @settings(max_examples=300)
    def test_roundtrip_73(self, v):
        assert pl.value_of(pl.expand(v, MC73), MC73) == v

    @given(st.integers(min_value=1, max_value=10 ** 6))
    @settings(max_examples=200)
    def test_roundtrip_22(self, v):
        assert pl.value_of(pl.expand(v, MC22), MC22) == v

    def test_digit_bounds(self):
        for v in range(1, 500):
            d = pl.expand(v, MC73)
            assert d[-1] != 0
            assert 0 <= d[0] < 3
            assert all(0 <= x < 7 for x in d[1:])


class TestAncestry:
    def test_ancestors_68(self):
        assert pl.ancestors(68, MC73) == [66, 63]

    def test_generation_examples(self):
        assert pl.generation(68, (inf, inf)) == 0
        assert pl.generation(68, MCI3) == 1
        assert pl.generation(68, MC77) == 2
        assert pl.generation(68, MC73) == 2

    def test_eve_has_no_mother(self):
        with pytest.raises(pl.MotherOfEve):
            pl.mother(63, MC73)

    def test_prime_eves(self):
        for k in range(4):
            r = pl.radix(k, MC73)
            assert pl.is_eve(r, MC73)

    def test_eldest(self):
        assert pl.eldest(68, MC73) == 63

    def test_support_68(self):
        assert pl.support(68, MC73) == {68, 64, 62, 58}

    def test_support_eve(self):
        assert pl.support(63, MC73) == {63}

    def test_support_size_is_power_of_two(self):
        for v in range(1, 3001):
            assert len(pl.support(v, MC73)) == 2 ** pl.generation(v, MC73)
        for v in range(1, 3001):
            assert len(pl.support(v, MC22)) == 2 ** pl.generation(v, MC22)


class TestAdmissible:
    def test_down_sets_of_68(self):
        got = pl.down_admissible_sets(68, MC73)
        assert sorted(map(sorted, got)) == [[], [0], [0, 1], [1]]

    def test_bijection_with_support(self):
        for mc in (MC73, MC33, MC22, MCI3):
            for v in range(1, 3001):
                sets = pl.down_admissible_sets(v, mc)
                images = {pl.reflect_down(v, S, mc) for S in sets}
                assert images == pl.support(v, mc)
                assert len(sets) == len(images)

    def test_worked_reflection_5_7(self):
        v = pl.value_of(be(3, 1, 2, 2, 4, 4, 1, 0, 2, 3, 2, 4, 1, 0), MC57)
        S = {10, 9, 8, 7, 4, 3, 2, 1}
        assert pl.is_down_admissible(S, v, MC57)
        w = pl.reflect_down(v, S, MC57)
        assert pl.expand(w, MC57) == be(3, 1, 1, 2, 0, 0, 4, 0, 1, 1, 2, 0, 4, 0)

    def test_duality(self):
        for mc in (MC73, MC33, MC22):
            for v in range(1, 3001):
                for S in pl.down_admissible_sets(v, mc):
                    w = pl.reflect_down(v, S, mc)
                    assert pl.is_up_admissible(S, w, mc)
                    assert pl.reflect_up(w, S, mc) == v

    def test_empty_reflection(self):
        assert pl.reflect_down(68, set(), MC73) == 68

    def test_up_down_roundtrip_68(self):
        w = pl.reflect_down(68, {1}, MC73)
        assert pl.reflect_up(w, {1}, MC73) == 68

    def test_up_reflection_overflowing_digit(self):
        # at (3,3): 4 = [1,1]; reflecting digit 0 up lands on 8 = [2,2]
        assert pl.is_up_admissible({0}, 4, MC33)
        assert pl.reflect_up(4, {0}, MC33) == 8
        assert pl.reflect_down(8, {0}, MC33) == 4

    def test_up_inadmissible_when_next_digit_maximal(self):
        # 7 = [2,1] at (3,3): digit above position 0 is p-1
        assert not pl.is_up_admissible({0}, 7, MC33)
        assert pl.is_up_admissible({0, 1}, 7, MC33)
        assert pl.reflect_up(7, {0, 1}, MC33) == 11

    def test_quantum_group_case_only_zeroth(self):
        assert pl.is_up_admissible({0}, 5, MCI3)
        assert not pl.is_up_admissible({1}, 5, MCI3)


class TestStretches:
    def test_minimal_stretches_empty(self):
        assert pl.minimal_stretches(set(), 68, MC73) == []

    def test_minimal_down_stretches_split_at_nonzero(self):
        v = pl.value_of(be(2, 5, 3, 0, 1), MC73)
        assert pl.minimal_stretches({0, 1}, v, MC73) == [(1, 0)]
        assert pl.minimal_stretches({2, 3}, v, MC73) == [(2,), (3,)]

    def test_hull_examples(self):
        # zigzag worked example at (7,3)
        v = pl.value_of(be(2, 5, 3, 0, 1), MC73)
        assert pl.hull({0}, v, MC73) == {0, 1}
        assert pl.hull({2}, v, MC73) == {2}
        # leading-digit singleton has no hull
        j = pl.leading_index(v, MC73)
        assert pl.hull({j}, v, MC73) is None

    def test_hull_grows_through_zeros(self):
        # the worked (5,7) example modulo its digit-position offset: a weight
        # with digits ..,2,0,0,4,.. at positions 7,6,5,4 pulls {4} up to {6,5,4}
        u = pl.value_of(be(3, 1, 1, 2, 0, 0, 4, 0, 1, 1, 2), MC57)
        assert pl.hull({4}, u, MC57) == {6, 5, 4}
        w = pl.value_of(be(3, 1, 1, 2, 0, 0, 4, 0, 1, 1, 2, 0, 4, 0), MC57)
        assert pl.hull({7}, w, MC57) == {9, 8, 7}
        # on the printed 14-digit weight itself, {4} is already down-admissible
        v = pl.value_of(be(3, 1, 2, 2, 4, 4, 1, 0, 2, 3, 2, 4, 1, 0), MC57)
        assert pl.hull({4}, v, MC57) == {4}


class TestTail:
    def test_tail_length_example(self):
        v = pl.value_of(be(4, 1, 6, 6, 6, 10), (7, 11))
        assert pl.tail_length(v, (7, 11)) == 4

    def test_tail_zero_when_a0_not_maximal(self):
        assert pl.tail_length(67, MC73) == 0  # 67 = [3,1,1], a_0 = 1 < l-1
        assert pl.tail_length(68, MC73) == 1  # 68 = [3,1,2], a_0 maximal

    def test_youngest_ancestor_convention(self):
        assert pl.youngest_ancestor_with_zero(68, -1, MC73) == 68
        assert pl.youngest_ancestor_with_zero(68, 0, MC73) == 66
        assert pl.youngest_ancestor_with_zero(68, 1, MC73) == 63
