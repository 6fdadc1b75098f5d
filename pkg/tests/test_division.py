import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parasphere.clifford import FANO_TRIPLES, Multivector, geometric_product
from parasphere.division import (
    Octonion,
    Quaternion,
    alternativity_defect,
    associator,
    corrupted_octonion_table,
    cross3,
    cross7,
    cross7_xi,
    cross7_xi_batch,
    fano_structure_constants,
    fano_subalgebra_associator,
    fano_subalgebra_closure_defect,
    levi_civita,
    max_unit_associator,
    norm_composition_defect,
    oct_mul_array,
    oct_mul_handed,
    octonion_table,
    quat_mul_array,
    quaternion_norm_composition_defect,
    structure_functions,
    xi_product,
)

from conftest import unit_vectors
from oracles import cayley_dickson_mul, clifford_mul, fano_index_triples, octonion_mul, \
    structure_functions_by_inner_product

# structure functions at xi = (1, 2, ..., 8) / sqrt(204), frozen from the inner-product oracle
XI_RAMP = np.arange(1.0, 9.0) / np.sqrt(204.0)
FROZEN_F = {(0, 1, 3): -63 / 102, (0, 1, 2): 1 / 102, (2, 4, 6): 25 / 102}


def canonical(triples):
    out = set()
    for t in triples:
        k = t.index(min(t))
        out.add(t[k:] + t[:k])
    return out


def test_fano_triples_follow_cyclic_index_rule():
    assert canonical(FANO_TRIPLES) == canonical(fano_index_triples())


def test_octonion_table_matches_index_rule_oracle(rng):
    e = np.eye(8)
    for a in range(8):
        for b in range(8):
            np.testing.assert_array_equal(oct_mul_array(e[a], e[b]), octonion_mul(e[a], e[b]))
    x, y = rng.standard_normal((2, 8))
    np.testing.assert_allclose(oct_mul_array(x, y), octonion_mul(x, y), atol=1e-13)


def test_structure_constants_totally_antisymmetric():
    f = fano_structure_constants()
    for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
        np.testing.assert_array_equal(f, -f.transpose(perm))
    assert np.count_nonzero(f) == 42


def test_norm_composition_quaternion_and_octonion():
    assert quaternion_norm_composition_defect(10_000, 0) < 1e-12
    assert norm_composition_defect(octonion_table(), 10_000, 0) < 1e-12


def test_cayley_dickson_oracle_composes(rng):
    # sanity check on the independent construction itself
    x, y = rng.standard_normal((2, 8))
    assert abs(np.linalg.norm(cayley_dickson_mul(x, y)) - np.linalg.norm(x) * np.linalg.norm(y)) < 1e-12


def test_corrupted_table_breaks_composition():
    assert norm_composition_defect(corrupted_octonion_table(), 1000, 0) > 1e-3
    assert alternativity_defect(corrupted_octonion_table(), 1000, 0) > 1e-3


def test_alternative_but_not_associative():
    assert alternativity_defect(samples=10_000) < 1e-12
    assert max_unit_associator() == pytest.approx(2.0)
    e = [Octonion.unit(j) for j in range(8)]
    assert associator(e[1], e[2], e[3]).norm() == pytest.approx(2.0)


@pytest.mark.parametrize("triple", FANO_TRIPLES)
def test_fano_triples_span_quaternion_subalgebras(triple):
    assert fano_subalgebra_closure_defect(triple) == 0.0
    assert fano_subalgebra_associator(triple) == 0.0
    j, k, l = triple
    prod = Octonion.unit(j) * Octonion.unit(k)
    assert prod == Octonion.unit(l)


@given(st.integers(0, 2**32 - 1))
def test_quaternion_product_matches_clifford_oracle(seed):
    rng = np.random.default_rng(seed)
    p, q = rng.standard_normal((2, 4))
    got = quat_mul_array(p, q)
    mp = Quaternion.from_array(p).to_multivector().coeffs
    mq = Quaternion.from_array(q).to_multivector().coeffs
    expected = Quaternion.from_multivector(Multivector(3, clifford_mul(mp, mq, 3))).as_array()
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_quaternion_roundtrip_and_conjugate(rng):
    q = Quaternion.from_array(rng.standard_normal(4))
    assert np.allclose(Quaternion.from_multivector(q.to_multivector()).as_array(), q.as_array())
    assert np.allclose((q * q.conj()).as_array(), [q.norm() ** 2, 0, 0, 0])
    mv = geometric_product(q.to_multivector(), q.conj().to_multivector())
    assert mv.scalar_part == pytest.approx(q.norm() ** 2)
    with pytest.raises(ValueError):
        Quaternion.from_multivector(Multivector.vector([1.0, 0.0, 0.0]))


def test_structure_functions_match_inner_product_oracle():
    f = structure_functions(XI_RAMP)
    np.testing.assert_allclose(f, structure_functions_by_inner_product(XI_RAMP), atol=1e-13)
    for idx, val in FROZEN_F.items():
        assert f[idx] == pytest.approx(val, abs=1e-14)


@given(unit_vectors(8))
def test_structure_functions_antisymmetric_and_reduce_at_one(xi):
    f = structure_functions(xi)
    for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
        np.testing.assert_allclose(f, -f.transpose(perm), atol=1e-12)
    np.testing.assert_allclose(structure_functions(np.eye(8)[0]), fano_structure_constants(), atol=0)


@given(unit_vectors(7), unit_vectors(7), unit_vectors(8))
def test_twisted_cross_product_pythagoras(n, n2, xi):
    c = cross7_xi(n, n2, xi)
    assert c @ c == pytest.approx(1.0 - (n @ n2) ** 2, abs=1e-12)
    assert abs(c @ n) < 1e-12 and abs(c @ n2) < 1e-12
    np.testing.assert_allclose(cross7_xi_batch(n[None], n2[None], xi[None])[0], c, atol=1e-13)


def test_cross_products(rng):
    a, b = rng.standard_normal((2, 3))
    np.testing.assert_allclose(cross3(a, b), np.cross(a, b), atol=1e-14)
    np.testing.assert_array_equal(levi_civita()[0, 1, 2], 1.0)
    u, v = rng.standard_normal((2, 7))
    prod = oct_mul_array(np.r_[0.0, u], np.r_[0.0, v])
    np.testing.assert_allclose(prod[1:], cross7(u, v), atol=1e-13)
    assert prod[0] == pytest.approx(-u @ v)


def test_xi_product_reduces_and_is_not_associative(rng):
    x, y, z = (Octonion(rng.standard_normal(8)) for _ in range(3))
    for s in (1.0, -1.0):
        assert xi_product(x, y, s * np.eye(8)[0]).isclose(x * y, atol=1e-12)
    xi = XI_RAMP
    left = xi_product(xi_product(x, y, xi), z, xi)
    right = xi_product(x, xi_product(y, z, xi), xi)
    assert (left - right).norm() > 1e-3


def test_handed_octonion_product(rng):
    x, y = Octonion(rng.standard_normal(8)), Octonion(rng.standard_normal(8))
    assert oct_mul_handed(x, y, 1) == x * y
    assert oct_mul_handed(x, y, -1) == y * x


def test_octonion_validation():
    with pytest.raises(ValueError):
        Octonion(np.zeros(7))
    with pytest.raises(ValueError):
        structure_functions(np.ones(8))
    with pytest.raises(AttributeError):
        Octonion.unit(1).c = np.zeros(8)
