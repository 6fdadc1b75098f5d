"""Hidden-state measurement functions, ensemble averages and outcome tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import numpy.typing as npt

from .clifford import (
    ATOL,
    HiddenState,
    Multivector,
    bivector_of,
    dual_bivector,
    dual_bivector_batch,
    geometric_product,
    geometric_product_batch,
    handed_product,
    norm,
)
from .division import Octonion, oct_mul, oct_mul_handed, xi_product
from .parallel import nonequatorial_value, octonion_measurement
from .quantum import GhzAngles

FloatArray = npt.NDArray[np.float64]

CHUNK = 1 << 16


def _unit(v: npt.ArrayLike, size: int | None = None) -> FloatArray:
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    if size is not None and arr.size != size:
        raise ValueError(f"expected {size} components, got {arr.size}")
    if abs(np.linalg.norm(arr) - 1.0) > ATOL:
        raise ValueError(f"direction must be unit norm, got |n| = {np.linalg.norm(arr)!r}")
    return arr


# ensembles ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnsembleSpec:
    kind: Literal["two-point-uniform", "uniform-sphere-lambda"] = "two-point-uniform"
    seed: int = 0
    samples: int = 2

    def __post_init__(self) -> None:
        if self.kind not in ("two-point-uniform", "uniform-sphere-lambda"):
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


TWO_POINT = EnsembleSpec()


def chunk_rng(seed: int, chunk: int, stream: int = 0) -> np.random.Generator:
    """Independent generator keyed by (seed, stream, chunk).

    Work is cut into fixed-size chunks, so results do not depend on how the
    chunks are scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, stream, chunk]))


def uniform_sphere(seed: int, samples: int, dim: int = 3) -> FloatArray:
    """Uniform points on S^{dim-1}, drawn chunk by chunk so the result is chunk-layout independent."""
    out = np.empty((samples, dim))
    for c, start in enumerate(range(0, samples, CHUNK)):
        stop = min(start + CHUNK, samples)
        g = chunk_rng(seed, c).standard_normal((stop - start, dim))
        out[start:stop] = g / np.linalg.norm(g, axis=1, keepdims=True)
    return out


@dataclass(frozen=True)
class CorrelationEstimate:
    mean_value: Multivector | None
    scalar_part: float
    stderr: float
    samples_used: int


# measurement functions -----------------------------------------------------------------

Variant = Literal["s0-sign", "s1-rotor", "s3-equatorial", "s3-nonequatorial",
                  "s7-equatorial", "s7-nonequatorial"]


@dataclass(frozen=True)
class MeasurementFunction:
    """Local value A(n, lambda) for one of the supported spheres.

    ``alpha`` is the polar offset of non-equatorial variants. The S1 rotor
    lives in the plane of {1, mu x} with ``axis`` = x; its binary angle is
    set by the side of the hidden circle angle relative to the azimuth of n.
    """

    variant: Variant
    alpha: float = np.pi / 2
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __call__(self, n: npt.ArrayLike, mu: HiddenState | int = 1,
                 lam: float | npt.ArrayLike | None = None) -> Multivector | Octonion:
        h = mu.handedness if isinstance(mu, HiddenState) else int(mu)
        if self.variant == "s0-sign":
            v = _unit(n, 3)
            s = h if lam is None else float(np.sign(np.dot(np.asarray(lam, float), v)) or 1.0)
            return Multivector.scalar(3, s)
        if self.variant == "s1-rotor":
            s = 1.0 if lam is None else binary_angle_sign(azimuth(n, self.axis), float(lam))
            return s1_rotor(s * np.pi / 2, self.axis, h)
        if self.variant == "s3-equatorial":
            return bivector_of(_unit(n, 3), h)
        if self.variant == "s3-nonequatorial":
            return nonequatorial_value(self.alpha, _unit(n, 3), h)
        if self.variant == "s7-equatorial":
            return octonion_measurement(_unit(n, 7), h)
        if self.variant == "s7-nonequatorial":
            imag = octonion_measurement(_unit(n, 7), h)
            return imag * float(np.sin(self.alpha)) + Octonion.unit(0) * float(np.cos(self.alpha))
        raise ValueError(f"unknown variant {self.variant!r}")


def value_norm(v: Multivector | Octonion) -> float:
    return v.norm() if isinstance(v, Octonion) else norm(v)


# EPR-Bohm bivector model ---------------------------------------------------------------


def epr_correlation(a: npt.ArrayLike, b: npt.ArrayLike, ens: EnsembleSpec = TWO_POINT) -> CorrelationEstimate:
    """Average of (mu a)(mu b) over mu = +-I, each product taken in the frame of mu."""
    if ens.kind != "two-point-uniform":
        raise ValueError("epr_correlation enumerates the two-point ensemble")
    a, b = _unit(a, 3), _unit(b, 3)
    terms = [handed_product(bivector_of(a, mu), bivector_of(b, mu), mu) for mu in HiddenState.both()]
    mean = (terms[0] + terms[1]) * 0.5
    return CorrelationEstimate(mean, mean.scalar_part, 0.0, 2)


def epr_correlation_batch(a: FloatArray, b: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Vectorized enumeration over many direction pairs.

    Returns (scalar parts, full mean coefficient arrays).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ia, ib = dual_bivector_batch(a), dual_bivector_batch(b)
    right = geometric_product_batch(ia, ib, 3)
    # left-handed frame: (-I a) * (-I b) := (-I b)(-I a)
    left = geometric_product_batch(-ib, -ia, 3)
    mean = 0.5 * (right + left)
    return mean[:, 0], mean


# linear sign model ---------------------------------------------------------------------


def linear_closed_form(cos_angle: npt.ArrayLike) -> FloatArray:
    return -1.0 + (2.0 / np.pi) * np.arccos(np.clip(cos_angle, -1.0, 1.0))


def linear_correlation_exact(a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
    """-1 + 2 angle(a, b) / pi, with the angle from atan2 (well conditioned near 0 and pi)."""
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    ang = np.arctan2(np.linalg.norm(np.cross(a, b), axis=-1), np.sum(a * b, axis=-1))
    return -1.0 + (2.0 / np.pi) * ang


def linear_model_correlation(a: npt.ArrayLike, b: npt.ArrayLike, ens: EnsembleSpec) -> CorrelationEstimate:
    """Monte Carlo of A = sign(lambda.a), B = -sign(lambda.b) with lambda uniform on S2."""
    if ens.kind != "uniform-sphere-lambda":
        raise ValueError("linear model needs the uniform-sphere-lambda ensemble")
    if ens.samples < 100:
        raise ValueError("need at least 100 samples for a meaningful stderr")
    a, b = _unit(a, 3), _unit(b, 3)
    prod_sum = 0.0
    sq_sum = 0.0
    for c, start in enumerate(range(0, ens.samples, CHUNK)):
        stop = min(start + CHUNK, ens.samples)
        g = chunk_rng(ens.seed, c).standard_normal((stop - start, 3))
        # the norm of lambda does not change a sign
        p = -np.sign(g @ a) * np.sign(g @ b)
        prod_sum += float(p.sum())
        sq_sum += float((p * p).sum())
    n = ens.samples
    mean = prod_sum / n
    var = max(sq_sum / n - mean * mean, 0.0) * n / (n - 1)
    return CorrelationEstimate(None, mean, float(np.sqrt(var / n)), n)


# S1 rotors ---------------------------------------------------------------------------


def s1_rotor(phi: float, axis: npt.ArrayLike = (0.0, 0.0, 1.0), mu: HiddenState | int = 1) -> Multivector:
    """exp{(mu x) phi} = cos(phi) + (mu x) sin(phi)."""
    return bivector_of(_unit(axis, 3), mu) * float(np.sin(phi)) + float(np.cos(phi))


def azimuth(n: npt.ArrayLike, axis: npt.ArrayLike = (0.0, 0.0, 1.0)) -> float:
    """Angle of n projected on the plane orthogonal to axis."""
    x = _unit(axis, 3)
    n = np.asarray(n, dtype=np.float64)
    ref = np.array([1.0, 0.0, 0.0]) if abs(x[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = ref - x * (ref @ x)
    u /= np.linalg.norm(u)
    w = np.cross(x, u)
    return float(np.arctan2(n @ w, n @ u))


def binary_angle_sign(theta_n: float, lam: float) -> float:
    return 1.0 if np.cos(theta_n - lam) >= 0 else -1.0


def s1_rotor_angle(r: Multivector, axis: npt.ArrayLike = (0.0, 0.0, 1.0), mu: HiddenState | int = 1) -> float:
    """Angle phi with r = exp{(mu x) phi}, in (-pi, pi]."""
    b = bivector_of(_unit(axis, 3), mu)
    sin_part = -geometric_product(r, b).scalar_part  # (mu x)^2 = -1
    return float(np.arctan2(sin_part, r.scalar_part))


@dataclass(frozen=True)
class CommutativityResult:
    commutes: bool
    residual: float
    composed_angle: float


def s1_commutativity_check(phi: float, phi2: float, mu: HiddenState | int = 1,
                           axis: npt.ArrayLike = (0.0, 0.0, 1.0)) -> CommutativityResult:
    r1, r2 = s1_rotor(phi, axis, mu), s1_rotor(phi2, axis, mu)
    left, right = geometric_product(r1, r2), geometric_product(r2, r1)
    composed = s1_rotor(phi + phi2, axis, mu)
    residual = max(float(np.max(np.abs((left - right).coeffs))),
                   float(np.max(np.abs((left - composed).coeffs))))
    return CommutativityResult(residual < ATOL, residual, s1_rotor_angle(left, axis, mu))


def s1_continuous_correlation(phi_a: float, phi_b: float) -> float:
    """Scalar part of exp{(mu x) phi_a} exp{(mu x) phi_b}, equal for both mu."""
    return float(np.cos(phi_a + phi_b))


# non-equatorial S3 values --------------------------------------------------------------


def hardy_local_value(alpha: float, a: npt.ArrayLike, mu: HiddenState | int = 1) -> Multivector:
    """cos(alpha) + (mu a) sin(alpha)."""
    return nonequatorial_value(alpha, _unit(a, 3), mu)


def nonequatorial_correlation(alpha: float, a: npt.ArrayLike, beta: float, b: npt.ArrayLike) -> CorrelationEstimate:
    terms = [handed_product(hardy_local_value(alpha, a, mu), hardy_local_value(beta, b, mu), mu)
             for mu in HiddenState.both()]
    mean = (terms[0] + terms[1]) * 0.5
    return CorrelationEstimate(mean, mean.scalar_part, 0.0, 2)


# S7 and GHZ ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GhzDirectionEmbedding:
    """Four 7-vectors N(n_1) ... N(n_4) assembled from 3-vector components."""

    vectors: FloatArray

    @classmethod
    def from_directions(cls, n: Sequence[npt.ArrayLike]) -> "GhzDirectionEmbedding":
        if len(n) != 4:
            raise ValueError("GHZ embedding needs four directions")
        return cls(np.stack([embed_ghz(i + 1, d) for i, d in enumerate(n)]))

    def norms(self) -> FloatArray:
        return np.linalg.norm(self.vectors, axis=1)


def embed_ghz(particle: int, n: npt.ArrayLike) -> FloatArray:
    """7-vector of particle 1..4 for the 3-vector n."""
    x, y, z = np.asarray(n, dtype=np.float64)
    out = np.zeros(7)
    if particle == 1:
        out[:3] = (-x, y, -z)
    elif particle == 2:
        out[[0, 1, 3]] = (x, y, z)
    elif particle == 3:
        out[[0, 1, 4]] = (x, y, z)
    elif particle == 4:
        out[[0, 1, 5]] = (x, -y, -z)
    else:
        raise ValueError("particle index must be 1..4")
    return out


def embed_ghz_batch(particle: int, n: FloatArray) -> FloatArray:
    n = np.asarray(n, dtype=np.float64)
    out = np.zeros(n.shape[:-1] + (7,))
    cols = {1: [0, 1, 2], 2: [0, 1, 3], 3: [0, 1, 4], 4: [0, 1, 5]}[particle]
    signs = {1: (-1, 1, -1), 2: (1, 1, 1), 3: (1, 1, 1), 4: (1, -1, -1)}[particle]
    for col, s, k in zip(cols, signs, range(3)):
        out[..., col] = s * n[..., k]
    return out


def ghz_closed_form(theta: npt.ArrayLike, phi: npt.ArrayLike) -> FloatArray:
    t, p = np.asarray(theta, dtype=np.float64), np.asarray(phi, dtype=np.float64)
    c, s = np.cos(t), np.sin(t)
    return (np.prod(c, axis=-1)
            - np.prod(s, axis=-1) * np.cos(p[..., 0] + p[..., 1] - p[..., 2] - p[..., 3]))


def ghz_local_values(angles: GhzAngles, mu: HiddenState | int = 1) -> list[Octonion]:
    dirs = angles.directions()
    return [octonion_measurement(embed_ghz(i + 1, d), mu) for i, d in enumerate(dirs)]


def ghz_correlation(angles: GhzAngles) -> float:
    """Closed-form four-particle correlation, after checking the embedded local values are unit."""
    emb = GhzDirectionEmbedding.from_directions(angles.directions())
    if np.max(np.abs(emb.norms() - 1.0)) > ATOL:
        raise ArithmeticError("embedded GHZ directions are not unit vectors")
    for mu in HiddenState.both():
        for v in ghz_local_values(angles, mu):
            # purely imaginary unit octonions: points of the equatorial S6 in S7
            if abs(v.real) > ATOL or abs(v.norm() - 1.0) > ATOL:
                raise ArithmeticError("GHZ local value left the unit S6")
    return float(ghz_closed_form(angles.theta, angles.phi))


def s7_correlation(na: npt.ArrayLike, nb: npt.ArrayLike, alpha: float = np.pi / 2,
                   beta: float = np.pi / 2) -> CorrelationEstimate:
    """Two-point average of the handed octonion product of the two local values."""
    fa = MeasurementFunction("s7-nonequatorial", alpha)
    fb = MeasurementFunction("s7-nonequatorial", beta)
    terms = [oct_mul_handed(fa(na, mu), fb(nb, mu), mu) for mu in HiddenState.both()]
    mean = (terms[0] + terms[1]) * 0.5
    return CorrelationEstimate(None, mean.real, 0.0, 2)


# outcome table -------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeRow:
    state: int              # handedness of mu
    alice_sign: int         # sign s in (s I) . e_x
    bob_sign: int           # sign t in (t I) . e_y
    result_sign: int        # sign r in (r I) . e_z
    outcome: tuple[str, str]
    holds: bool


@dataclass(frozen=True)
class OutcomeTable:
    rows: tuple[OutcomeRow, ...]
    counterfactual_rows: tuple[OutcomeRow, ...]
    net_beable: dict[int, float]
    net_beable_in_frame: dict[int, float]

    @property
    def outcomes(self) -> set[tuple[str, str]]:
        return {r.outcome for r in self.rows}


def _label(s: int) -> str:
    return "up" if s > 0 else "down"


def _signed_row(state: int, s: int, t: int) -> OutcomeRow:
    ex, ey, ez = np.eye(3)
    prod = handed_product(dual_bivector(ex) * float(s), dual_bivector(ey) * float(t), state)
    # read off the sign r with prod = (r I) . e_z
    target = dual_bivector(ez)
    r = 1 if prod.isclose(target) else -1 if prod.isclose(-target) else 0
    expected = -s * t * state
    return OutcomeRow(state, s, t, r, (_label(s), _label(t)), r == expected and r != 0)


def outcome_table() -> OutcomeTable:
    """Sign compositions for detectors along e_x (Alice) and e_y (Bob), e_z counterfactual.

    Each listed identity is checked by a blade-level product in the frame of
    the state. The net beable uses the ordinary geometric product of the
    three values mu.e_x, mu.e_y, mu.e_z; the same triple product taken in the
    frame of mu is reported alongside.
    """
    rows = (
        _signed_row(+1, +1, +1), _signed_row(+1, +1, -1),
        _signed_row(-1, -1, -1), _signed_row(-1, -1, +1),
    )
    counterfactual = tuple(_signed_row(+1, s, t) for s, t in ((-1, -1), (1, -1), (-1, 1), (1, 1)))
    beable, beable_frame = {}, {}
    ex, ey, ez = np.eye(3)
    for h in (1, -1):
        vals = [bivector_of(v, h) for v in (ex, ey, ez)]
        beable[h] = geometric_product(geometric_product(vals[0], vals[1]), vals[2]).scalar_part
        beable_frame[h] = handed_product(handed_product(vals[0], vals[1], h), vals[2], h).scalar_part
    return OutcomeTable(rows, counterfactual, beable, beable_frame)


# factorizability ----------------------------------------------------------------------


@dataclass(frozen=True)
class FactorizabilityResult:
    closed: bool
    residual: float
    product_norm: float
    associativity_defect: float | None = None


def factorizability_check(values: Sequence[Multivector | Octonion], mu: HiddenState | int = 1,
                          xi: npt.ArrayLike | Octonion | None = None) -> FactorizabilityResult:
    """Left-to-right product of local values stays on the unit sphere.

    Octonion inputs use the xi-dependent product when xi is given; the
    associativity defect of the first three factors under that product is
    reported since it is not zero in general.
    """
    if len(values) < 2:
        raise ValueError("need at least two values")
    kinds = {type(v) for v in values}
    if len(kinds) != 1:
        raise TypeError("values must all lie on the same sphere")
    h = mu.handedness if isinstance(mu, HiddenState) else int(mu)
    if isinstance(values[0], Multivector):
        if len({v.dim for v in values}) != 1:
            raise TypeError("values must all lie on the same sphere")
        acc = values[0]
        for v in values[1:]:
            acc = handed_product(acc, v, h)
        n = norm(acc)
        return FactorizabilityResult(abs(n - 1.0) < ATOL, abs(n - 1.0), n)

    def mul(x: Octonion, y: Octonion) -> Octonion:
        if h == -1:
            x, y = y, x
        return xi_product(x, y, xi) if xi is not None else oct_mul(x, y)

    acc = values[0]
    for v in values[1:]:
        acc = mul(acc, v)
    n = acc.norm()
    defect = None
    if len(values) >= 3:
        x, y, z = values[:3]
        defect = (mul(mul(x, y), z) - mul(x, mul(y, z))).norm()
    return FactorizabilityResult(abs(n - 1.0) < ATOL, abs(n - 1.0), n, defect)


# exclusive direction ------------------------------------------------------------------


def exclusive_direction_average(z: npt.ArrayLike, ens: EnsembleSpec = TWO_POINT,
                                states: Sequence[int] = (1, -1)) -> float:
    """Average of the readout C_z = sign of mu.z, i.e. the handedness, over the states.

    Directions outside the measured pair read out zero.
    """
    if ens.kind != "two-point-uniform":
        raise ValueError("exclusive direction average uses the two-point ensemble")
    v = np.asarray(z, dtype=np.float64)
    if v.size not in (3, 7):
        raise ValueError("z must be a 3- or 7-vector")
    _unit(v)
    readouts = []
    for h in states:
        val = bivector_of(v, h) if v.size == 3 else octonion_measurement(v, h)
        ref = bivector_of(v, 1) if v.size == 3 else octonion_measurement(v, 1)
        c = val.coeffs if isinstance(val, Multivector) else val.c
        r = ref.coeffs if isinstance(ref, Multivector) else ref.c
        readouts.append(float(np.sign(c @ r)))
    return float(np.mean(readouts))

