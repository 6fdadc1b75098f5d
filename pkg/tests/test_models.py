import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parasphere.clifford import HiddenState, Multivector, bivector_of
from parasphere.division import Octonion
from parasphere.models import (
    CHUNK,
    EnsembleSpec,
    GhzDirectionEmbedding,
    MeasurementFunction,
    embed_ghz,
    embed_ghz_batch,
    epr_correlation,
    epr_correlation_batch,
    exclusive_direction_average,
    factorizability_check,
    ghz_closed_form,
    ghz_correlation,
    ghz_local_values,
    linear_closed_form,
    linear_correlation_exact,
    linear_model_correlation,
    nonequatorial_correlation,
    outcome_table,
    s1_commutativity_check,
    s1_continuous_correlation,
    s1_rotor,
    s1_rotor_angle,
    s7_correlation,
    uniform_sphere,
    value_norm,
)
from parasphere.quantum import GhzAngles, ghz4_expectation

from conftest import unit_vectors
from oracles import kron_all, ket, spin_op

angles = st.floats(0.0, np.pi, allow_nan=False)


def unit_rows(rng, n, dim=3):
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@given(unit_vectors(3), unit_vectors(3))
def test_epr_matches_singlet_oracle(a, b):
    psi = (ket("01") - ket("10")) / np.sqrt(2)
    oracle = np.vdot(psi, kron_all([spin_op(a), spin_op(b)]) @ psi).real
    est = epr_correlation(a, b)
    assert est.scalar_part == pytest.approx(oracle, abs=1e-12)
    assert est.mean_value.isclose(Multivector.scalar(3, est.scalar_part), atol=1e-12)


def test_epr_batch(rng):
    a, b = unit_rows(rng, 10_000), unit_rows(rng, 10_000)
    scalars, mean = epr_correlation_batch(a, b)
    assert np.max(np.abs(scalars + np.sum(a * b, axis=1))) < 1e-12
    assert np.max(np.abs(mean[:, 1:])) < 1e-12
    assert scalars[7] == pytest.approx(epr_correlation(a[7], b[7]).scalar_part, abs=1e-15)


def test_epr_rejects_other_ensembles():
    with pytest.raises(ValueError):
        epr_correlation([1, 0, 0], [0, 1, 0], EnsembleSpec("uniform-sphere-lambda", 0, 100))


def test_uniform_sphere_deterministic_and_chunked():
    x = uniform_sphere(3, CHUNK + 17)
    np.testing.assert_array_equal(x, uniform_sphere(3, CHUNK + 17))
    np.testing.assert_array_equal(x[:CHUNK], uniform_sphere(3, CHUNK))
    np.testing.assert_allclose(np.linalg.norm(x, axis=1), 1.0)


def test_linear_model_within_three_standard_errors():
    ens = EnsembleSpec("uniform-sphere-lambda", 0, 200_000)
    a = np.array([1.0, 0.0, 0.0])
    for t in np.linspace(0, np.pi, 9):
        b = np.array([np.cos(t), np.sin(t), 0.0])
        est = linear_model_correlation(a, b, ens)
        assert abs(est.scalar_part - linear_closed_form(np.cos(t))) <= 3 * est.stderr + 1e-15
    with pytest.raises(ValueError):
        linear_model_correlation(a, a, EnsembleSpec("uniform-sphere-lambda", 0, 10))


def test_linear_closed_form_endpoints():
    np.testing.assert_allclose(linear_closed_form([1.0, 0.0, -1.0]), [-1.0, 0.0, 1.0], atol=1e-15)


@given(unit_vectors(3), unit_vectors(3))
def test_linear_correlation_exact_is_well_conditioned(a, b):
    assert linear_correlation_exact(a, a) == pytest.approx(-1.0, abs=1e-15)
    assert linear_correlation_exact(a, -a) == pytest.approx(1.0, abs=1e-15)
    assert linear_correlation_exact(a, b) == pytest.approx(linear_closed_form(a @ b), abs=1e-7)


@pytest.mark.parametrize("variant", ["s3-equatorial", "s3-nonequatorial"])
@given(n=unit_vectors(3), h=st.sampled_from([1, -1]))
def test_s3_measurement_values_are_unit(variant, n, h):
    v = MeasurementFunction(variant, alpha=0.4)(n, h)
    assert value_norm(v) == pytest.approx(1.0, abs=1e-12)


@given(unit_vectors(7), st.sampled_from([1, -1]), angles)
def test_s7_measurement_values_are_unit(n, h, alpha):
    assert value_norm(MeasurementFunction("s7-equatorial")(n, h)) == pytest.approx(1.0, abs=1e-12)
    assert value_norm(MeasurementFunction("s7-nonequatorial", alpha)(n, h)) == pytest.approx(1.0, abs=1e-12)


def test_sign_and_rotor_measurements():
    f = MeasurementFunction("s0-sign")
    assert f([0, 0, 1], 1, lam=[0, 0, -2]).scalar_part == -1.0
    assert f([0, 0, 1], -1).scalar_part == -1.0
    r = MeasurementFunction("s1-rotor")([1, 0, 0], 1, lam=np.pi)
    assert s1_rotor_angle(r) == pytest.approx(-np.pi / 2)
    with pytest.raises(ValueError):
        MeasurementFunction("s2-bogus")([1, 0, 0])


@given(st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi), st.sampled_from([1, -1]))
def test_s1_rotors_commute(phi, phi2, h):
    res = s1_commutativity_check(phi, phi2, h)
    assert res.commutes
    assert np.cos(res.composed_angle) == pytest.approx(np.cos(phi + phi2), abs=1e-12)


def test_s1_continuous_correlation_is_product_scalar_part():
    for h in (1, -1):
        prod = s1_rotor(0.3, mu=h) * s1_rotor(1.1, mu=h)
        assert prod.scalar_part == pytest.approx(s1_continuous_correlation(0.3, 1.1))


@given(angles, unit_vectors(3), angles, unit_vectors(3))
def test_nonequatorial_correlation_formula(alpha, a, beta, b):
    got = nonequatorial_correlation(alpha, a, beta, b).scalar_part
    expected = np.cos(alpha) * np.cos(beta) - np.sin(alpha) * np.sin(beta) * (a @ b)
    assert got == pytest.approx(expected, abs=1e-12)


def test_ghz_embedding_is_unit_and_batched(rng):
    n = unit_rows(rng, 5)
    for particle in range(1, 5):
        batch = embed_ghz_batch(particle, n)
        for k in range(5):
            np.testing.assert_array_equal(batch[k], embed_ghz(particle, n[k]))
            assert np.linalg.norm(batch[k]) == pytest.approx(1.0)
    emb = GhzDirectionEmbedding.from_directions(list(n[:4]))
    np.testing.assert_allclose(emb.norms(), 1.0)
    with pytest.raises(ValueError):
        embed_ghz(5, n[0])


def test_ghz_correlation_matches_oracle(rng):
    theta = rng.uniform(0, np.pi, (50, 4))
    phi = rng.uniform(0, 2 * np.pi, (50, 4))
    for t, p in zip(theta, phi):
        ang = GhzAngles(tuple(t), tuple(p))
        assert ghz_correlation(ang) == pytest.approx(ghz4_expectation(t, p), abs=1e-10)
        for v in ghz_local_values(ang, -1):
            assert v.real == 0.0 and v.norm() == pytest.approx(1.0)
    np.testing.assert_allclose(ghz_closed_form(theta, phi),
                               [ghz4_expectation(t, p) for t, p in zip(theta, phi)], atol=1e-10)


@given(unit_vectors(3), unit_vectors(3), angles, angles)
def test_s7_correlation(a, b, alpha, beta):
    na, nb = embed_ghz(1, a), embed_ghz(2, b)
    assert s7_correlation(na, nb).scalar_part == pytest.approx(-na @ nb, abs=1e-12)
    got = s7_correlation(na, nb, alpha, beta).scalar_part
    expected = np.cos(alpha) * np.cos(beta) - np.sin(alpha) * np.sin(beta) * (na @ nb)
    assert got == pytest.approx(expected, abs=1e-12)


def test_outcome_table():
    table = outcome_table()
    assert all(r.holds for r in table.rows)
    assert all(r.holds for r in table.counterfactual_rows)
    assert table.outcomes == {("up", "up"), ("up", "down"), ("down", "down"), ("down", "up")}
    # ordinary product of the three values gives the handedness; the handed product gives +1 for both
    assert table.net_beable == {1: pytest.approx(1.0), -1: pytest.approx(-1.0)}
    assert table.net_beable_in_frame == {1: pytest.approx(1.0), -1: pytest.approx(1.0)}


def test_factorizability(rng):
    vals = [bivector_of(v, 1) for v in unit_rows(rng, 4)]
    res = factorizability_check(vals, HiddenState(-1))
    assert res.closed and res.product_norm == pytest.approx(1.0)
    xi = unit_rows(rng, 1, 8)[0]
    octs = [Octonion(v) for v in unit_rows(rng, 3, 8)]
    res = factorizability_check(octs, 1, xi)
    assert res.closed
    assert res.associativity_defect > 1e-3
    with pytest.raises(ValueError):
        factorizability_check(vals[:1])
    with pytest.raises(TypeError):
        factorizability_check([vals[0], octs[0]])


def test_exclusive_direction_average_is_null():
    assert exclusive_direction_average([0, 0, 1]) == 0.0
    assert exclusive_direction_average(np.eye(7)[3]) == 0.0
    assert exclusive_direction_average([0, 0, 1], states=(1, 1)) == 1.0


def test_ensemble_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("gaussian")
    with pytest.raises(ValueError):
        EnsembleSpec(samples=0)
