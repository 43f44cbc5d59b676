import json

import numpy as np
import pytest

from osculants.combinatorics import Multidegree, Necklace, enumerate_necklaces, is_balanced_embedding
from osculants.start import (
    StartSet,
    StartSystemError,
    alpha_from_word,
    build_start_set,
    orbit_representatives_check,
    parametrization_key,
    product_series,
    reparametrization_factor,
    roots_of_minus_one,
    rotate_word,
    special_fibre_defect,
    start_point,
)
from osculants.system import AlphaPoint, evaluate, expand_parametrization, tilde_hypersurface


def same_multiset(a, b, tol):
    left = list(b)
    for z in a:
        dist = [abs(z - w) for w in left]
        k = int(np.argmin(dist))
        if dist[k] > tol:
            return False
        left.pop(k)
    return not left


def same_point(p: AlphaPoint, q: AlphaPoint, tol=1e-12) -> bool:
    return all(same_multiset(a, b, tol) for a, b in zip(p.alpha, q.alpha))


class TestRoots:
    def test_small(self):
        assert np.allclose(roots_of_minus_one(2), [1j, -1j])
        assert np.allclose(roots_of_minus_one(1), [-1])
        k = np.array([1, 3, 5, 7])
        assert np.allclose(roots_of_minus_one(4), np.exp(1j * np.pi * k / 4))

    @pytest.mark.parametrize("N", [1, 2, 5, 12])
    def test_are_roots(self, N):
        assert np.allclose(roots_of_minus_one(N) ** N, -1)
        with pytest.raises(ValueError):
            roots_of_minus_one(0)


class TestStartPoint:
    def test_one_one(self):
        p = start_point(Necklace.from_word("12"))
        assert np.allclose(p.alpha[0], [1j]) and np.allclose(p.alpha[1], [-1j])
        assert np.allclose(product_series(p).coeffs, [1, 0, 1])

    def test_one_two(self):
        p = start_point(Necklace.from_word("122"))
        assert special_fibre_defect(p) <= 1e-12
        assert abs(p.norm_defect()) <= 1e-12

    def test_rejects_nonprimitive(self):
        with pytest.raises(ValueError):
            start_point(Necklace.from_word("1212"))

    @pytest.mark.parametrize("d", [(3, 3), (2, 5), (2, 2, 2), (4, 3, 1)])
    def test_special_fibre(self, d):
        f = tilde_hypersurface(len(d))
        for nk in enumerate_necklaces(d, primitive_only=True):
            p = start_point(nk)
            assert special_fibre_defect(p) <= 1e-12
            assert evaluate(f, p).max_norm <= 1e-12


class TestStartSet:
    @pytest.mark.parametrize("d, n", [((3, 3), 3), ((4, 4), 8), ((1, 1), 1), ((2, 2, 1), 6)])
    def test_counts(self, d, n):
        assert len(build_start_set(d)) == n

    def test_json_round_trip(self):
        ss = build_start_set((2, 3))
        doc = json.loads(ss.to_json())
        assert doc["degree"] == [2, 3] and len(doc["points"]) == 2
        back = StartSet.from_dict(doc)
        for (n1, p1), (n2, p2) in zip(ss, back):
            assert n1 == n2 and np.array_equal(p1.flat, p2.flat)

    def test_error_carries_necklace(self):
        err = StartSystemError("bad", Necklace.from_word("12"))
        assert err.necklace.word == (1, 2)

    def test_distinct_points_not_related(self):
        # no two start points agree after permutation and root-of-unity scaling
        for d in [(3, 3), (2, 4), (2, 2, 2)]:
            ss = build_start_set(d)
            N = Multidegree.parse(d).total
            omega = np.exp(2j * np.pi / N)
            keys = [{parametrization_key(p.scaled(omega**r)) for r in range(N)} for _, p in ss]
            for i in range(len(keys)):
                for j in range(i + 1, len(keys)):
                    assert not keys[i] & keys[j]


class TestOrbits:
    def test_three_three(self):
        rep = orbit_representatives_check((3, 3))
        assert rep.n_parametrizations == 20
        assert rep.orbit_sizes == {6: 3, 2: 1}
        assert rep.ok

    def test_two_two(self):
        rep = orbit_representatives_check((2, 2))
        assert rep.n_parametrizations == 6 and rep.orbit_sizes == {4: 1, 2: 1}

    def test_one_one(self):
        rep = orbit_representatives_check((1, 1))
        assert rep.n_parametrizations == 2 and rep.orbit_sizes == {2: 1}

    def test_three_colors(self):
        assert orbit_representatives_check((2, 2, 2)).ok


class TestRotation:
    def test_rotate_word(self):
        assert rotate_word((1, 1, 2), 1) == (2, 1, 1)
        assert rotate_word((1, 2, 3), 3) == (1, 2, 3)

    @pytest.mark.parametrize("d", [(3, 3), (2, 3, 1), (4, 4)])
    def test_rotation_is_reparametrization(self, d):
        w = 1 / reparametrization_factor(sum(d))
        assert np.isclose(w ** sum(d), 1)
        for nk in enumerate_necklaces(d, primitive_only=True):
            p = start_point(nk)
            for r in range(1, 4):
                q = alpha_from_word(rotate_word(nk.word, r), nk.content)
                assert same_point(q, p.scaled(reparametrization_factor(sum(d)) ** r))


def test_balanced_iff_zero_linear_term():
    for d in [(5, 5), (3, 3, 3), (4, 2)]:
        for nk in enumerate_necklaces(d, primitive_only=True):
            xs = expand_parametrization(start_point(nk), 2)
            flat = all(abs(x.coeffs[1]) <= 1e-10 for x in xs)
            assert flat == is_balanced_embedding(nk)
