import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parasphere.clifford import (
    BladeIndex,
    HiddenState,
    Multivector,
    associativity_defect,
    bivector_of,
    dual_bivector,
    dual_bivector_batch,
    fano_trivector,
    geometric_product,
    geometric_product_batch,
    grade_project,
    handed_product,
    norm,
    pseudoscalar,
    reorder_sign,
    reverse,
)

from conftest import unit_vectors
from oracles import blade_mul, clifford_mul, mask_to_tuple, permutation_parity


def random_mv(rng, dim):
    c = rng.standard_normal(1 << dim)
    return Multivector(dim, c / np.linalg.norm(c))


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_reorder_sign_matches_bubble_sort(dim):
    for a in range(1 << dim):
        for b in range(1 << dim):
            sign, _ = blade_mul(mask_to_tuple(a), mask_to_tuple(b))
            assert reorder_sign(a, b) == sign


def test_reorder_sign_matches_inversion_parity_on_disjoint_blades():
    for a, b in itertools.product(range(16), repeat=2):
        if a & b:
            continue
        seq = list(mask_to_tuple(a)) + list(mask_to_tuple(b))
        assert reorder_sign(a, b) == permutation_parity(seq)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_every_blade_pair_matches_oracle(dim):
    for i in range(1 << dim):
        for j in range(1 << dim):
            x = np.zeros(1 << dim)
            y = np.zeros(1 << dim)
            x[i] = y[j] = 1.0
            got = geometric_product(Multivector(dim, x), Multivector(dim, y)).coeffs
            np.testing.assert_array_equal(got, clifford_mul(x, y, dim))


@pytest.mark.parametrize("dim", [3, 7])
def test_dense_product_matches_oracle(dim, rng):
    x, y = rng.standard_normal((2, 1 << dim))
    got = geometric_product(Multivector(dim, x), Multivector(dim, y)).coeffs
    np.testing.assert_allclose(got, clifford_mul(x, y, dim), atol=1e-12)


def test_batch_product_matches_single(rng):
    x = rng.standard_normal((20, 8))
    y = rng.standard_normal((20, 8))
    batch = geometric_product_batch(x, y, 3)
    for k in range(20):
        single = geometric_product(Multivector(3, x[k]), Multivector(3, y[k])).coeffs
        np.testing.assert_allclose(batch[k], single, atol=1e-14)


@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 7]))
def test_associativity(seed, dim):
    rng = np.random.default_rng(seed)
    x, y, z = (random_mv(rng, dim) for _ in range(3))
    assert ((x * y) * z).isclose(x * (y * z), atol=1e-12)


def test_associativity_defect_helper():
    assert associativity_defect(3, 500) < 1e-12
    assert associativity_defect(7, 50) < 1e-12
    with pytest.raises(ValueError):
        associativity_defect(8)


@pytest.mark.parametrize("dim", [3, 7])
def test_vector_squares_and_anticommutation(dim):
    for i in range(1, dim + 1):
        ei = Multivector.blade(dim, i)
        assert (ei * ei).isclose(Multivector.scalar(dim, 1.0))
        for j in range(i + 1, dim + 1):
            ej = Multivector.blade(dim, j)
            assert (ei * ej).isclose(-(ej * ei))


def test_pseudoscalar_cl3_is_central_and_squares_to_minus_one(rng):
    i3 = pseudoscalar(3)
    assert (i3 * i3).isclose(Multivector.scalar(3, -1.0))
    x = random_mv(rng, 3)
    assert (i3 * x).isclose(x * i3)


def test_dual_bivector_is_pseudoscalar_times_vector(rng):
    n = rng.standard_normal(3)
    n /= np.linalg.norm(n)
    assert dual_bivector(n).isclose(pseudoscalar(3) * Multivector.vector(n))
    np.testing.assert_allclose(dual_bivector_batch(n[None])[0], dual_bivector(n).coeffs)


def test_reverse_is_antiautomorphism(rng):
    x, y = random_mv(rng, 4), random_mv(rng, 4)
    assert reverse(x * y).isclose(reverse(y) * reverse(x))
    assert reverse(reverse(x)) == x


def test_grade_projection_partitions(rng):
    x = random_mv(rng, 4)
    total = sum((grade_project(x, [g]) for g in range(5)), Multivector.zero(4))
    assert total.isclose(x)
    assert grade_project(x, [2]).isclose(x.grade(2))
    with pytest.raises(ValueError):
        grade_project(x, [5])


@given(unit_vectors(3))
def test_norm_of_vector_is_euclidean(n):
    v = Multivector.vector(3 * n)
    assert norm(v) == pytest.approx(3.0, abs=1e-12)


@given(unit_vectors(3), st.sampled_from([1, -1]))
def test_bivector_of_dim3(n, h):
    b = bivector_of(n, h)
    assert b.isclose(dual_bivector(n) * float(h))
    assert (b * b).isclose(Multivector.scalar(3, -1.0), atol=1e-12)
    assert norm(b) == pytest.approx(1.0, abs=1e-12)


@given(unit_vectors(7), st.sampled_from([1, -1]))
def test_bivector_of_dim7_is_unit_bivector(n, h):
    b = bivector_of(n, HiddenState(h))
    assert norm(b) == pytest.approx(1.0, abs=1e-12)
    assert b.isclose(b.grade(2))


def test_fano_trivector_norm():
    assert norm(fano_trivector()) == pytest.approx(np.sqrt(7.0), abs=1e-12)
    assert fano_trivector().isclose(fano_trivector().grade(3))


def test_handed_product_left_frame_is_opposite(rng):
    x, y = random_mv(rng, 3), random_mv(rng, 3)
    assert handed_product(x, y, 1) == geometric_product(x, y)
    assert handed_product(x, y, HiddenState(-1)) == geometric_product(y, x)


def test_validation_errors():
    with pytest.raises(ValueError):
        BladeIndex(8, 3)
    with pytest.raises(ValueError):
        BladeIndex.of(3, 2, 1)
    with pytest.raises(ValueError):
        Multivector(3, np.zeros(7))
    with pytest.raises(ValueError):
        Multivector(3, [np.nan] + [0.0] * 7)
    with pytest.raises(ValueError):
        Multivector.zero(3) + Multivector.zero(4)
    with pytest.raises(ValueError):
        bivector_of([1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        bivector_of([1.0, 0.0, 0.0], 2)
    with pytest.raises(ValueError):
        HiddenState(0)
    with pytest.raises(AttributeError):
        Multivector.zero(3).dim = 4


def test_blade_index_grade():
    assert BladeIndex.of(7, 1, 2, 4).grade == 3
    assert BladeIndex.of(3, 2, 3).mask == 0b110
