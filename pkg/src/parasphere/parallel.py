"""Global tangent frames on S3 and S7, torsion commutators, and a numerical
Weitzenboeck curvature check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
import numpy.typing as npt

from .clifford import ATOL, HiddenState, Multivector, bivector_of, dual_bivector, handed_product
from .division import (
    Octonion,
    Quaternion,
    cross3,
    cross7_xi,
    levi_civita,
    oct_mul_array,
    quat_mul_array,
    structure_functions,
    xi_product,
)

FloatArray = npt.NDArray[np.float64]

# I e_1, I e_2, I e_3 as quaternion arrays
_QUNITS = np.eye(4)[1:]
_OUNITS = np.eye(8)[1:]


def _as_point(x, size: int) -> FloatArray:
    if isinstance(x, Quaternion):
        x = x.as_array()
    elif isinstance(x, Octonion):
        x = x.c
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size != size:
        raise ValueError(f"expected {size} components, got {arr.size}")
    if abs(np.linalg.norm(arr) - 1.0) > ATOL:
        raise ValueError(f"point must be unit norm, got {np.linalg.norm(arr)!r}")
    return arr


@dataclass(frozen=True)
class TangentFrame:
    """Rows are the frame vectors as R^4 (S3) or R^8 (S7) arrays."""

    beta: FloatArray

    def gram(self) -> FloatArray:
        return self.beta @ self.beta.T

    def orthonormality_defect(self, base: npt.ArrayLike | None = None) -> float:
        d = float(np.max(np.abs(self.gram() - np.eye(len(self.beta)))))
        if base is not None:
            d = max(d, float(np.max(np.abs(self.beta @ np.asarray(base, dtype=float)))))
        return d

    def as_quaternions(self) -> list[Quaternion]:
        return [Quaternion.from_array(b) for b in self.beta]


def s3_frame(x) -> TangentFrame:
    """beta_i(X) = (I e_i) X."""
    p = _as_point(x, 4)
    return TangentFrame(quat_mul_array(_QUNITS, np.broadcast_to(p, (3, 4))))


def s7_frame(xi) -> TangentFrame:
    """(J e_j) xi, with J e_j standing for the octonion -e_j (see octonion_measurement)."""
    p = _as_point(xi, 8)
    return TangentFrame(oct_mul_array(-_OUNITS, np.broadcast_to(p, (7, 8))))


def transport_frame(frame: TangentFrame, y) -> TangentFrame:
    """Right-multiply every frame vector by the unit quaternion Y."""
    q = _as_point(y, 4)
    return TangentFrame(quat_mul_array(frame.beta, np.broadcast_to(q, frame.beta.shape)))


def transport_between(frame: TangentFrame, x, y) -> TangentFrame:
    """Carry a frame sitting at X over to Y via right multiplication by X^-1 Y."""
    px, py = _as_point(x, 4), _as_point(y, 4)
    conj = px * np.array([1.0, -1.0, -1.0, -1.0])
    return transport_frame(frame, quat_mul_array(conj, py))


# torsion ---------------------------------------------------------------------


def _h(mu: HiddenState | int) -> int:
    return mu.handedness if isinstance(mu, HiddenState) else int(mu)


def half_commutator(x: Multivector, y: Multivector, mu: HiddenState | int) -> Multivector:
    return (handed_product(x, y, mu) - handed_product(y, x, mu)) * 0.5


def torsion_equatorial(a, a2, mu: HiddenState | int) -> Multivector:
    """1/2 [mu a, mu a'] from blade-level products."""
    return half_commutator(bivector_of(a, mu), bivector_of(a2, mu), mu)


def torsion_equatorial_formula(a, a2, mu: HiddenState | int) -> Multivector:
    """-mu (a x a')."""
    return dual_bivector(cross3(a, a2)) * (-float(_h(mu)))


def nonequatorial_value(alpha: float, a, mu: HiddenState | int) -> Multivector:
    """cos(alpha) + (mu a) sin(alpha)."""
    return bivector_of(a, mu) * float(np.sin(alpha)) + float(np.cos(alpha))


def torsion_nonequatorial(alpha: float, alpha2: float, a, a2, mu: HiddenState | int) -> Multivector:
    return half_commutator(nonequatorial_value(alpha, a, mu), nonequatorial_value(alpha2, a2, mu), mu)


def torsion_nonequatorial_formula(alpha: float, alpha2: float, a, a2, mu: HiddenState | int) -> Multivector:
    return torsion_equatorial_formula(a, a2, mu) * float(np.sin(alpha) * np.sin(alpha2))


def octonion_measurement(n, mu: HiddenState | int) -> Octonion:
    """Octonion standing for mu*N: the imaginary octonion -h N.

    This mirrors Cl(3,0), where I*n carries the opposite orientation to the
    Fano-ordered units.
    """
    v = np.asarray(n, dtype=np.float64)
    if abs(np.linalg.norm(v) - 1.0) > ATOL:
        raise ValueError("direction must be unit norm")
    return Octonion.imaginary(-_h(mu) * v)


def torsion_7sphere(na, na2, xi, mu: HiddenState | int) -> Octonion:
    """1/2 [mu N, mu N'] under the xi-dependent product in the frame of mu.

    Equals the octonion standing for -mu (N x_xi N'), which is the imaginary
    octonion h (N x_xi N').
    """
    h = _h(mu)
    x, y = octonion_measurement(na, h), octonion_measurement(na2, h)
    if h == -1:
        x, y = y, x
    return (xi_product(x, y, xi) - xi_product(y, x, xi)) * 0.5


def torsion_7sphere_formula(na, na2, xi, mu: HiddenState | int = 1) -> Octonion:
    """-mu (N x_xi N') in the octonion representation of mu-values."""
    return Octonion.imaginary(_h(mu) * cross7_xi(na, na2, xi))


# curvature -------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    """Frame-basis torsion, halved: components[a, b, c] = 1/2 T^a_{bc}."""

    components: FloatArray
    expected: FloatArray
    max_deviation: float
    matches_expected: bool


@dataclass(frozen=True)
class CurvatureReport:
    sphere: str
    max_abs_component: float
    sample_points: int
    step: float
    torsion: TorsionReport
    per_point_max: FloatArray = field(repr=False)


FrameField = Callable[[FloatArray], FloatArray]  # (m, ambient) -> (m, d, ambient)


def _s3_field(points: FloatArray) -> FloatArray:
    m = points.shape[0]
    return quat_mul_array(np.broadcast_to(_QUNITS, (m, 3, 4)), points[:, None, :])


def _s7_field(points: FloatArray) -> FloatArray:
    m = points.shape[0]
    return oct_mul_array(np.broadcast_to(-_OUNITS, (m, 7, 8)), points[:, None, :])


def _flat_field(points: FloatArray) -> FloatArray:
    return np.broadcast_to(np.eye(3), (points.shape[0], 3, 3)).copy()


def _coframe(center: FloatArray, frame_at_center: FloatArray, field_fn: FrameField,
             coords: FloatArray, sphere: bool) -> FloatArray:
    """theta^a_mu at chart coordinates, shape (m, d, d).

    Gnomonic chart phi(x) = (p + sum x_i E_i(p)) / |...| on the sphere; the flat
    control uses phi(x) = p + x.
    """
    y = center + coords @ frame_at_center
    if sphere:
        r = np.linalg.norm(y, axis=1, keepdims=True)
        phi = y / r
        # d phi / d x_i = (E_i - phi (phi . E_i)) / r
        proj = np.einsum("ma,ia->mi", phi, frame_at_center)
        jac = (frame_at_center[None] - proj[:, :, None] * phi[:, None, :]) / r[:, :, None]
    else:
        phi = y
        jac = np.broadcast_to(frame_at_center, (len(coords),) + frame_at_center.shape)
    fields = field_fn(phi)  # (m, d, ambient)
    # E_a = sum_mu e[mu, a] dphi/dx_mu, solved with the pseudoinverse of the Jacobian
    e = np.einsum("muk,mak->mua", np.linalg.pinv(jac.transpose(0, 2, 1)), fields)
    return np.linalg.inv(e)  # theta[m, a, mu]


def _connection_and_curvature(center, frame0, field_fn, d: int, h: float, sphere: bool):
    eye = np.eye(d)
    # sample grid: 0, +-h e_g, and +-h e_g +- h e_d for nested differences
    offsets = [np.zeros(d)]
    for g in range(d):
        for s in (1.0, -1.0):
            offsets.append(s * h * eye[g])
    for g in range(d):
        for sg in (1.0, -1.0):
            for dd in range(d):
                for sd in (1.0, -1.0):
                    offsets.append(sg * h * eye[g] + sd * h * eye[dd])
    offsets = np.array(offsets)
    theta = _coframe(center, frame0, field_fn, offsets, sphere)

    def th(*steps: tuple[int, float]) -> FloatArray:
        off = np.zeros(d)
        for axis, s in steps:
            off = off + s * h * eye[axis]
        k = int(np.argmin(np.max(np.abs(offsets - off), axis=1)))
        return theta[k]

    def omega(base: tuple[tuple[int, float], ...]) -> FloatArray:
        # Omega^alpha_{beta delta} = e^alpha_a d_delta theta^a_beta
        e = np.linalg.inv(th(*base))
        dth = np.stack([(th(*base, (dl, 1.0)) - th(*base, (dl, -1.0))) / (2 * h) for dl in range(d)],
                       axis=-1)  # [a, beta, delta]
        return np.einsum("xa,abd->xbd", e, dth)

    om0 = omega(())
    dom = np.stack([(omega(((g, 1.0),)) - omega(((g, -1.0),))) / (2 * h) for g in range(d)],
                   axis=-1)  # [alpha, beta, delta, gamma]
    # R^a_{b g d} = d_g Om^a_{b d} - d_d Om^a_{b g} + Om^a_{s g} Om^s_{b d} - Om^a_{s d} Om^s_{b g}
    r = (dom.transpose(0, 1, 3, 2) - dom
         + np.einsum("asg,sbd->abgd", om0, om0) - np.einsum("asd,sbg->abgd", om0, om0))
    theta0 = th()
    e0 = np.linalg.inv(theta0)
    t_coord = om0.transpose(0, 2, 1) - om0  # T^a_{b d} = Om^a_{d b} - Om^a_{b d}
    t_frame = np.einsum("ax,xbd,bj,dk->ajk", theta0, t_coord, e0, e0)
    return r, 0.5 * t_frame


def curvature_check(sphere: Literal["S3", "S7", "flat"] = "S3", samples: int = 50,
                    step: float = 1e-4, seed: int = 0, torsion_tol: float = 1e-6) -> CurvatureReport:
    """Finite-difference Weitzenboeck curvature and torsion of the global frame.

    The expected halved torsion is -eps_jkl on S3, -f_jkl(X) on S7 and 0 for the flat control.
    """
    if not 0 < step <= 1e-2:
        raise ValueError("step must lie in (0, 1e-2]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    if sphere == "S3":
        ambient, field_fn, is_sphere = 4, _s3_field, True
    elif sphere == "S7":
        ambient, field_fn, is_sphere = 8, _s7_field, True
    elif sphere == "flat":
        ambient, field_fn, is_sphere = 3, _flat_field, False
    else:
        raise ValueError(f"unknown sphere {sphere!r}")

    per_point = np.empty(samples)
    worst_t = 0.0
    t_last = exp_last = None
    for i in range(samples):
        p = rng.standard_normal(ambient)
        if is_sphere:
            p /= np.linalg.norm(p)
        frame0 = field_fn(p[None])[0]
        if np.linalg.cond(frame0 @ frame0.T) > 1e8:
            raise RuntimeError("degenerate chart at sampled point")
        d = frame0.shape[0]
        r, t_half = _connection_and_curvature(p, frame0, field_fn, d, step, is_sphere)
        per_point[i] = float(np.max(np.abs(r)))
        if sphere == "S3":
            expected = -levi_civita()
        elif sphere == "S7":
            expected = -structure_functions(p)
        else:
            expected = np.zeros((3, 3, 3))
        worst_t = max(worst_t, float(np.max(np.abs(t_half - expected))))
        t_last, exp_last = t_half, expected
    torsion = TorsionReport(t_last, exp_last, worst_t, worst_t < torsion_tol)
    return CurvatureReport(sphere, float(per_point.max()), samples, step, torsion, per_point)
