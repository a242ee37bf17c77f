"""Lattice toolkit tests: conformal order, Graver bases, decompositions,
circuits, Egyptian fractions."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from mimopt.errors import InputError
from mimopt.lattice import (
    circuits,
    conformal_leq,
    egyptian_fraction,
    enumerate_kernel,
    graver_basis,
    graver_norm_bound,
    make_matrix,
    positive_sum_decompose,
)
from mimopt.rational import Rat, floor_log2


class TestConformalOrder:
    def test_examples(self):
        assert conformal_leq((1, -1), (2, -3))
        assert not conformal_leq((1, 1), (2, -3))
        assert conformal_leq((0, 0), (7, -9))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            conformal_leq((1,), (1, 2))

    @given(
        st.lists(st.integers(-4, 4), min_size=1, max_size=5),
        st.lists(st.integers(-4, 4), min_size=1, max_size=5),
    )
    @settings(max_examples=200, deadline=None)
    def test_partial_order_properties(self, xs, ys):
        n = min(len(xs), len(ys))
        x, y = tuple(xs[:n]), tuple(ys[:n])
        assert conformal_leq(x, x)  # reflexive
        if conformal_leq(x, y) and conformal_leq(y, x):
            assert x == y  # antisymmetric


class TestGraverBasis:
    def test_one_one(self):
        g = graver_basis(make_matrix([[1, 1]]))
        assert set(g.elements) == {(1, -1), (-1, 1)}

    def test_one_two(self):
        g = graver_basis(make_matrix([[1, 2]]))
        assert set(g.elements) == {(2, -1), (-2, 1)}

    def test_zero_matrix(self):
        g = graver_basis(make_matrix([[0]]))
        assert set(g.elements) == {(1,), (-1,)}

    def test_low_cap_rejected_without_override(self):
        with pytest.raises(InputError):
            graver_basis(make_matrix([[1, 2]]), norm_cap=1)
        truncated = graver_basis(make_matrix([[1, 2]]), norm_cap=1, allow_low_cap=True)
        assert truncated.elements == ()

    def test_kernel_membership_and_minimality(self):
        matrix = make_matrix([[1, -1, 1], [0, 1, 1]])
        basis = graver_basis(matrix)
        for g in basis.elements:
            assert not any(matrix.apply(g))
            assert any(g)
        for g, h in itertools.permutations(basis.elements, 2):
            assert not conformal_leq(h, g) or h == g


def brute_force_graver(matrix, cap):
    """Independent oracle: direct minimal-element scan over the capped kernel."""
    n = matrix.num_cols
    kernel = []
    for point in itertools.product(range(-cap, cap + 1), repeat=n):
        if any(point) and not any(matrix.apply(point)):
            kernel.append(point)
    out = []
    for g in kernel:
        if not any(h != g and conformal_leq(h, g) for h in kernel):
            out.append(g)
    return sorted(out)


def test_graver_matches_brute_force_sample():
    rng = random.Random(3)
    for _ in range(25):
        m = rng.randint(1, 2)
        n = rng.randint(1, 3)
        matrix = make_matrix(
            [[rng.randint(-1, 1) for _ in range(n)] for _ in range(m)]
        )
        cap = graver_norm_bound(matrix)
        assert sorted(graver_basis(matrix).elements) == brute_force_graver(matrix, cap)


class TestPositiveSumDecompose:
    def test_scalar_multiple(self):
        matrix = make_matrix([[1, 1]])
        assert positive_sum_decompose(matrix, (3, -3)) == [((1, -1), 3)]

    def test_greedy_extraction(self):
        matrix = make_matrix([[1, 2]])
        assert positive_sum_decompose(matrix, (4, -2)) == [((2, -1), 2)]

    def test_zero_vector(self):
        assert positive_sum_decompose(make_matrix([[1, 1]]), (0, 0)) == []

    def test_rejects_non_kernel(self):
        with pytest.raises(InputError):
            positive_sum_decompose(make_matrix([[1, 1]]), (1, 1))

    def test_random_kernel_vectors(self):
        """Valid conformal decompositions with at most 2n-2 terms; re-summing
        reproduces the vector exactly."""
        rng = random.Random(11)
        done = 0
        while done < 100:
            m = rng.randint(1, 2)
            n = rng.randint(2, 3)
            matrix = make_matrix(
                [[rng.randint(-1, 1) for _ in range(n)] for _ in range(m)]
            )
            candidates = enumerate_kernel(matrix, 4)
            if not candidates:
                continue
            half = rng.choice(candidates)
            scale = rng.randint(1, 5) * rng.choice([1, -1])
            x = tuple(v * scale for v in half)
            if not any(x):
                continue
            terms = positive_sum_decompose(matrix, x)
            done += 1
            assert len(terms) <= 2 * n - 2
            total = [0] * n
            for g, coef in terms:
                assert coef >= 1
                assert conformal_leq(g, x)
                for i, v in enumerate(g):
                    total[i] += coef * v
            assert tuple(total) == x


def test_circuits_subset_of_graver():
    rng = random.Random(8)
    for _ in range(20):
        m = rng.randint(1, 2)
        n = rng.randint(2, 3)
        matrix = make_matrix([[rng.randint(-1, 1) for _ in range(n)] for _ in range(m)])
        basis = set(graver_basis(matrix).elements)
        for c in circuits(matrix):
            assert c in basis


class TestEgyptianFractions:
    def test_three_quarters(self):
        assert egyptian_fraction(3, 4) == [2, 4]

    def test_unit_fraction(self):
        assert egyptian_fraction(1, 7) == [7]

    def test_one(self):
        assert egyptian_fraction(1, 1) == [1]

    def test_rejects_bad_input(self):
        with pytest.raises(InputError):
            egyptian_fraction(5, 4)
        with pytest.raises(InputError):
            egyptian_fraction(0, 4)

    @given(st.integers(1, 400), st.integers(1, 400))
    @settings(max_examples=300, deadline=None)
    def test_exactness_distinctness_length(self, a, b):
        p, q = min(a, b), max(a, b)
        dens = egyptian_fraction(p, q)
        assert sum(Rat(1, den) for den in dens) == Rat(p, q)
        assert len(set(dens)) == len(dens)
        assert len(dens) <= 2 * floor_log2(q) + 1
        assert all(den <= q * q for den in dens)
