from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osculants.combinatorics import (
    Multidegree,
    Necklace,
    all_words,
    brute_force_necklace_words,
    brute_force_selfcomp_achiral,
    canonical_rotation,
    color_root_sums,
    count_all,
    count_primitive,
    count_selfcomp_achiral,
    divisors,
    enumerate_necklaces,
    find_balanced_necklaces,
    fold_class,
    is_achiral,
    is_balanced_embedding,
    is_self_complementary,
    is_squarefree,
    iter_necklace_words,
    multinomial,
    necklace_from_string,
    necklace_to_string,
    recursion_identity_holds,
    squarefree_parity,
)

from conftest import PRIMITIVE_GRID, mobius_count


degrees = st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda d: sum(d) <= 9)


class TestMultidegree:
    def test_parse_forms(self):
        assert Multidegree.parse("4,4").d == (4, 4)
        assert Multidegree.parse([2, 3, 1]).total == 6
        assert Multidegree.parse(" 3, 6 ").gcd == 3

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Multidegree.parse("0,2")
        with pytest.raises(ValueError):
            Multidegree(())

    def test_divided(self):
        assert Multidegree.parse("4,6").divided(2).d == (2, 3)
        with pytest.raises(ValueError):
            Multidegree.parse("4,6").divided(3)


class TestNecklace:
    def test_canonical_rotation_enforced(self):
        with pytest.raises(ValueError):
            Necklace((2, 1, 1), Multidegree((2, 1)))
        assert Necklace.from_word("211").word == (1, 1, 2)

    def test_string_round_trip(self):
        nk = Necklace.from_word("112212")
        assert necklace_from_string(necklace_to_string(nk)) == nk
        assert nk.content.d == (3, 3)
        assert nk.positions(2) == [2, 3, 5]

    def test_fold_class(self):
        k, core = fold_class(Necklace.from_word("121212"))
        assert k == 3 and core.word == (1, 2)
        assert fold_class(Necklace.from_word("111222"))[0] == 1


class TestEnumeration:
    def test_figure_three_three(self):
        words = {necklace_to_string(n) for n in enumerate_necklaces((3, 3))}
        assert words == {"111222", "112122", "112212", "121212"}
        prim = enumerate_necklaces((3, 3), primitive_only=True)
        assert len(prim) == 3 and all(n.is_primitive() for n in prim)

    def test_three_colors(self):
        prim = {n.word for n in enumerate_necklaces((1, 1, 1), primitive_only=True)}
        assert prim == {(1, 2, 3), (1, 3, 2)}

    def test_single_color(self):
        assert [n.word for n in enumerate_necklaces((1,))] == [(1,)]
        assert enumerate_necklaces((3,), primitive_only=True) == []
        assert count_primitive((3,)) == 0 and count_primitive((1,)) == 1

    def test_output_sorted_and_unique(self):
        words = list(iter_necklace_words((2, 2, 2)))
        assert words == sorted(set(words))

    @settings(max_examples=40, deadline=None)
    @given(degrees)
    def test_matches_brute_force(self, d):
        assert set(iter_necklace_words(d)) == brute_force_necklace_words(d)
        assert set(iter_necklace_words(d, True)) == brute_force_necklace_words(d, True)

    @settings(max_examples=40, deadline=None)
    @given(degrees)
    def test_every_word_is_canonical(self, d):
        for w in iter_necklace_words(d):
            assert canonical_rotation(w) == w

    def test_all_words_count(self):
        rows = all_words((2, 1, 1))
        assert rows.shape == (12, 4)
        assert len({tuple(r) for r in rows}) == 12


class TestCounts:
    def test_primitive_grid(self):
        for i in range(8):
            for j in range(8):
                assert count_primitive((i + 1, j + 1)) == PRIMITIVE_GRID[i][j]

    def test_five_five(self):
        assert count_primitive((5, 5)) == 25

    def test_large_exact(self):
        # Python integers: no overflow far past 64 bits
        d = (40, 40, 40)
        assert count_primitive(d) == mobius_count(d)
        assert count_primitive(d) > 2**64

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(1, 9), min_size=1, max_size=4))
    def test_mobius_oracle(self, d):
        assert count_primitive(d) == mobius_count(d)
        assert recursion_identity_holds(d)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(1, 7), min_size=1, max_size=4), st.randoms())
    def test_permutation_invariant(self, d, r):
        perm = list(d)
        r.shuffle(perm)
        assert count_primitive(d) == count_primitive(perm)

    def test_count_all_sums_fold_classes(self):
        for d in [(3, 3), (4, 6), (2, 2, 2)]:
            nks = enumerate_necklaces(d)
            assert count_all(d) == len(nks)
            by_k = {}
            for nk in nks:
                k, core = fold_class(nk)
                by_k.setdefault(k, set()).add(core)
            for k, cores in by_k.items():
                assert len(cores) == count_primitive(Multidegree.parse(d).divided(k))

    def test_multinomial_and_divisors(self):
        assert multinomial((4, 4)) == 70
        assert multinomial((1, 1, 1)) == 6
        assert divisors(12) == [1, 2, 3, 4, 6, 12]


class TestParity:
    def test_squarefree(self):
        assert [d for d in range(1, 13) if not is_squarefree(d)] == [4, 8, 9, 12]

    @pytest.mark.parametrize("d", range(1, 21))
    def test_diagonal_parity(self, d):
        assert count_primitive((d, d)) % 2 == squarefree_parity(d)


class TestSymmetry:
    def test_predicates(self):
        nk = Necklace.from_word("1122")
        assert is_self_complementary(nk) and is_achiral(nk)
        assert not is_self_complementary(Necklace.from_word("1112"))
        assert not is_achiral(Necklace.from_word("112132"))
        with pytest.raises(ValueError):
            is_self_complementary(Necklace.from_word("123"))

    def test_closed_form_vs_scan(self):
        for N in range(1, 9):
            assert count_selfcomp_achiral(N) == brute_force_selfcomp_achiral(N)

    def test_values(self):
        # 2 beads: 12; 4 beads: 1122, 1212; 6 beads: 111222, 121212
        assert [count_selfcomp_achiral(N) for N in (1, 2, 3)] == [1, 2, 2]

    @pytest.mark.parametrize("N", range(2, 65))
    def test_even_above_one(self, N):
        assert count_selfcomp_achiral(N) % 2 == 0
        assert count_selfcomp_achiral(1) == 1


class TestBalanced:
    def test_two_beads_balanced(self):
        # (1,1): the roots i and -i are each alone; the sums are nonzero
        assert not is_balanced_embedding(Necklace.from_word("12"))

    def test_root_sums_total_zero(self):
        for nk in enumerate_necklaces((3, 2, 2), primitive_only=True):
            assert abs(color_root_sums(nk).sum()) < 1e-12

    def test_rejects_nonprimitive(self):
        with pytest.raises(ValueError):
            is_balanced_embedding(Necklace.from_word("1212"))

    def test_nine_nine_witness(self):
        nk = Necklace.from_word("111122212121112222")
        assert nk.is_primitive() and is_balanced_embedding(nk)

    def test_scan_agrees_with_predicate(self):
        found = {n.word for n in find_balanced_necklaces((5, 5))}
        assert found == {n.word for n in enumerate_necklaces((5, 5), True) if is_balanced_embedding(n)}
