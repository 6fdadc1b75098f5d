"""CHSH strings, torsion-based bound formulas, inequality scans and the optimizer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from .clifford import ATOL, HiddenState, bivector_of, geometric_product
from .division import cross3, cross7_xi, cross7_xi_batch
from .models import (
    EnsembleSpec,
    chunk_rng,
    embed_ghz,
    embed_ghz_batch,
    epr_correlation,
    linear_correlation_exact,
    nonequatorial_correlation,
    s7_correlation,
    uniform_sphere,
)
from .parallel import half_commutator, torsion_equatorial

FloatArray = npt.NDArray[np.float64]

Mode = Literal["S0", "S1", "S3-equatorial", "S3-nonequatorial", "S7-equatorial", "S7-nonequatorial", "linear"]
MODES: tuple[str, ...] = ("S0", "S1", "S3-equatorial", "S3-nonequatorial", "S7-equatorial",
                          "S7-nonequatorial", "linear")
TSIRELSON = 2.0 * np.sqrt(2.0)
VIOLATION_TOL = 1e-9
HALF_PI = np.pi / 2


def _unit(v: npt.ArrayLike) -> FloatArray:
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    if abs(np.linalg.norm(arr) - 1.0) > ATOL:
        raise ValueError(f"direction must be unit norm, got |n| = {np.linalg.norm(arr)!r}")
    return arr


@dataclass(frozen=True)
class DirectionQuadruple:
    """Alice's a, a' and Bob's b, b' with optional polar offsets and S7 points."""

    a: FloatArray
    a2: FloatArray
    b: FloatArray
    b2: FloatArray
    alpha_a: float = HALF_PI
    alpha_a2: float = HALF_PI
    beta_b: float = HALF_PI
    beta_b2: float = HALF_PI
    xi1: FloatArray | None = None
    xi2: FloatArray | None = None

    def __post_init__(self) -> None:
        for name in ("a", "a2", "b", "b2"):
            object.__setattr__(self, name, _unit(getattr(self, name)))
        for name in ("xi1", "xi2"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _unit(v))

    @classmethod
    def coplanar(cls, a_deg: float, a2_deg: float, b_deg: float, b2_deg: float) -> "DirectionQuadruple":
        def d(t: float) -> FloatArray:
            r = np.deg2rad(t)
            return np.array([np.cos(r), np.sin(r), 0.0])
        return cls(d(a_deg), d(a2_deg), d(b_deg), d(b2_deg))

    def torsion_dot(self) -> float:
        """(a x a') . (b' x b)."""
        return float(cross3(self.a, self.a2) @ cross3(self.b2, self.b))

    def sines(self) -> float:
        return float(np.sin(self.alpha_a) * np.sin(self.alpha_a2) * np.sin(self.beta_b) * np.sin(self.beta_b2))


@dataclass(frozen=True)
class CHSHReport:
    correlations: tuple[float, float, float, float]
    string_value: float
    bound: float
    violated_bound: bool
    model: str


# correlations ---------------------------------------------------------------------


def pair_correlation(mode: str, a: FloatArray, b: FloatArray,
                     alpha: float = HALF_PI, beta: float = HALF_PI) -> float:
    """E(a, b) for one mode, through the local values and their products (closed form for S0)."""
    if mode == "S0" or mode == "linear":
        return float(linear_correlation_exact(a, b))
    if mode == "S1":
        return float(s1_binary_correlation(np.array([a]), np.array([b]))[0])
    if mode == "S3-equatorial":
        return epr_correlation(a, b).scalar_part
    if mode == "S3-nonequatorial":
        return nonequatorial_correlation(alpha, a, beta, b).scalar_part
    if mode == "S7-equatorial":
        return s7_correlation(embed_ghz(1, a), embed_ghz(2, b)).scalar_part
    if mode == "S7-nonequatorial":
        return s7_correlation(embed_ghz(1, a), embed_ghz(2, b), alpha, beta).scalar_part
    raise ValueError(f"unknown mode {mode!r}")


def s1_binary_correlation(a: FloatArray, b: FloatArray) -> FloatArray:
    """-1 + 2 delta / pi, delta the angle between the azimuths of a and b about e_z."""
    pa = np.arctan2(a[..., 1], a[..., 0])
    pb = np.arctan2(b[..., 1], b[..., 0])
    delta = np.abs(np.angle(np.exp(1j * (pa - pb))))
    return -1.0 + 2.0 * delta / np.pi


def closed_form_correlation(mode: str, a: FloatArray, b: FloatArray,
                            alpha: FloatArray, beta: FloatArray) -> FloatArray:
    """Vectorized closed forms of the pair correlations (checked against the product path in tests)."""
    if mode in ("S0", "linear"):
        return linear_correlation_exact(a, b)
    if mode == "S1":
        return s1_binary_correlation(a, b)
    if mode == "S3-equatorial":
        return -np.sum(a * b, axis=-1)
    if mode == "S3-nonequatorial":
        return np.cos(alpha) * np.cos(beta) - np.sin(alpha) * np.sin(beta) * np.sum(a * b, axis=-1)
    if mode in ("S7-equatorial", "S7-nonequatorial"):
        dot = np.sum(embed_ghz_batch(1, a) * embed_ghz_batch(2, b), axis=-1)
        if mode == "S7-equatorial":
            return -dot
        return np.cos(alpha) * np.cos(beta) - np.sin(alpha) * np.sin(beta) * dot
    raise ValueError(f"unknown mode {mode!r}")


def _string_batch(mode: str, a, a2, b, b2, aa, aa2, bb, bb2) -> FloatArray:
    c = closed_form_correlation
    return c(mode, a, b, aa, bb) + c(mode, a, b2, aa, bb2) + c(mode, a2, b, aa2, bb) - c(mode, a2, b2, aa2, bb2)


# bounds -----------------------------------------------------------------------------


def bound_s3(q: DirectionQuadruple) -> float:
    """2 sqrt(1 - (a x a') . (b' x b))."""
    return float(2.0 * np.sqrt(max(1.0 - q.torsion_dot(), 0.0)))


def bound_s3_nonequatorial(q: DirectionQuadruple) -> float:
    return float(2.0 * np.sqrt(max(1.0 - q.torsion_dot() * q.sines(), 0.0)))


def landau_bound_s3(q: DirectionQuadruple) -> float:
    """2 sqrt(1 + (a x a') . (b' x b)), the quantum bound for the singlet correlation -a.b."""
    return float(2.0 * np.sqrt(max(1.0 + q.torsion_dot(), 0.0)))


def s7_torsion_dot(na: FloatArray, na2: FloatArray, nb: FloatArray, nb2: FloatArray,
                   xi1: FloatArray, xi2: FloatArray) -> float:
    return float(cross7_xi(na, na2, xi1) @ cross7_xi(nb2, nb, xi2))


def bound_s7(q: DirectionQuadruple, raw: tuple[FloatArray, FloatArray, FloatArray, FloatArray] | None = None,
             nonequatorial: bool = False) -> float:
    """2 sqrt(1 - (N(a) x_xi1 N(a')) . (N(b') x_xi2 N(b))), optionally scaled by the four sines.

    ``raw`` overrides the GHZ embedding with explicit 7-vectors (N(a), N(a'), N(b), N(b')).
    """
    if raw is None:
        na, na2 = embed_ghz(1, q.a), embed_ghz(1, q.a2)
        nb, nb2 = embed_ghz(2, q.b), embed_ghz(2, q.b2)
    else:
        na, na2, nb, nb2 = (_unit(v) for v in raw)
    one = np.eye(8)[0]
    xi1 = one if q.xi1 is None else q.xi1
    xi2 = one if q.xi2 is None else q.xi2
    dot = s7_torsion_dot(na, na2, nb, nb2, xi1, xi2)
    if nonequatorial:
        dot *= q.sines()
    return float(2.0 * np.sqrt(max(1.0 - dot, 0.0)))


def bound_for(mode: str, q: DirectionQuadruple) -> float:
    if mode in ("S0", "S1", "linear"):
        return 2.0
    if mode == "S3-equatorial":
        return bound_s3(q)
    if mode == "S3-nonequatorial":
        return bound_s3_nonequatorial(q)
    if mode == "S7-equatorial":
        return bound_s7(q)
    if mode == "S7-nonequatorial":
        return bound_s7(q, nonequatorial=True)
    raise ValueError(f"unknown mode {mode!r}")


def _bound_batch(mode: str, a, a2, b, b2, aa, aa2, bb, bb2, xi1, xi2) -> FloatArray:
    if mode in ("S0", "S1", "linear"):
        return np.full(a.shape[0], 2.0)
    sines = np.sin(aa) * np.sin(aa2) * np.sin(bb) * np.sin(bb2)
    if mode.startswith("S3"):
        dot = np.sum(np.cross(a, a2) * np.cross(b2, b), axis=-1)
    else:
        t1 = cross7_xi_batch(embed_ghz_batch(1, a), embed_ghz_batch(1, a2), xi1)
        t2 = cross7_xi_batch(embed_ghz_batch(2, b2), embed_ghz_batch(2, b), xi2)
        dot = np.sum(t1 * t2, axis=-1)
    if mode.endswith("nonequatorial"):
        dot = dot * sines
    return 2.0 * np.sqrt(np.maximum(1.0 - dot, 0.0))


# string -----------------------------------------------------------------------------


def chsh_string(mode: str, q: DirectionQuadruple, ens: EnsembleSpec | None = None) -> CHSHReport:
    """E(a,b) + E(a,b') + E(a',b) - E(a',b') from the model's pair correlation.

    The linear mode runs the Monte Carlo sign model on one shared lambda sample.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode.startswith("S7") and (q.xi1 is None) != (q.xi2 is None):
        raise ValueError("give both xi1 and xi2 or neither")
    if mode == "linear":
        ens = ens or EnsembleSpec("uniform-sphere-lambda", 0, 10**6)
        corr = linear_mc_correlations(q, ens)[0]
    else:
        pairs = ((q.a, q.b, q.alpha_a, q.beta_b), (q.a, q.b2, q.alpha_a, q.beta_b2),
                 (q.a2, q.b, q.alpha_a2, q.beta_b), (q.a2, q.b2, q.alpha_a2, q.beta_b2))
        corr = tuple(pair_correlation(mode, a, b, al, be) for a, b, al, be in pairs)
    s = corr[0] + corr[1] + corr[2] - corr[3]
    bound = bound_for(mode, q)
    return CHSHReport(tuple(float(c) for c in corr), float(s), bound, abs(s) > bound + VIOLATION_TOL, mode)


def linear_mc_correlations(q: DirectionQuadruple, ens: EnsembleSpec) -> tuple[tuple[float, ...], float]:
    """Four sign-model correlations on a shared lambda sample, plus the stderr of the string."""
    if ens.kind != "uniform-sphere-lambda":
        raise ValueError("linear model needs the uniform-sphere-lambda ensemble")
    lam = uniform_sphere(ens.seed, ens.samples)
    sa, sa2 = np.sign(lam @ q.a), np.sign(lam @ q.a2)
    sb, sb2 = -np.sign(lam @ q.b), -np.sign(lam @ q.b2)
    terms = np.stack([sa * sb, sa * sb2, sa2 * sb, -(sa2 * sb2)])
    per_sample = terms.sum(axis=0)
    stderr = float(per_sample.std(ddof=1) / np.sqrt(ens.samples))
    return tuple(float(v) for v in (terms[0].mean(), terms[1].mean(), terms[2].mean(), -terms[3].mean())), stderr


def variance_link_residual(q: DirectionQuadruple, mu: HiddenState | int = 1) -> float:
    """| [A_a, A_a'][B_b', B_b] - 4 T_aa' T_b'b | with both sides built from blade-level products."""
    h = mu.handedness if isinstance(mu, HiddenState) else int(mu)
    aa, aa2 = bivector_of(q.a, h), bivector_of(q.a2, h)
    bb, bb2 = bivector_of(q.b, h), bivector_of(q.b2, h)
    lhs = geometric_product(half_commutator(aa, aa2, h) * 2.0, half_commutator(bb2, bb, h) * 2.0)
    rhs = geometric_product(torsion_equatorial(q.a, q.a2, h), torsion_equatorial(q.b2, q.b, h)) * 4.0
    return float(np.max(np.abs((lhs - rhs).coeffs)))


# scans and optimizer -------------------------------------------------------------


@dataclass(frozen=True)
class ScanConfig:
    mode: str = "S3-equatorial"
    seed: int = 0
    trials: int = 1000
    grid_deg: float = 1.0
    random_starts: int = 64
    refine_top: int = 8
    samples: int = 10**6  # Monte Carlo size for the linear mode

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class ScanResult:
    mode: str
    trials: int
    violations: int
    worst_margin: float
    max_abs_string: float
    max_bound: float
    worst_index: int


def _random_batch(cfg: ScanConfig) -> dict[str, FloatArray]:
    n = cfg.trials
    dirs = uniform_sphere(cfg.seed, 4 * n).reshape(n, 4, 3)
    out = {"a": dirs[:, 0], "a2": dirs[:, 1], "b": dirs[:, 2], "b2": dirs[:, 3]}
    rng = chunk_rng(cfg.seed, 0, stream=1)
    if cfg.mode.endswith("nonequatorial"):
        ang = rng.uniform(0.0, np.pi, (n, 4))
    else:
        ang = np.full((n, 4), HALF_PI)
    out.update(aa=ang[:, 0], aa2=ang[:, 1], bb=ang[:, 2], bb2=ang[:, 3])
    xi = rng.standard_normal((n, 2, 8))
    xi /= np.linalg.norm(xi, axis=-1, keepdims=True)
    out.update(xi1=xi[:, 0], xi2=xi[:, 1])
    return out


def scan_inequality(cfg: ScanConfig) -> ScanResult:
    """Random quadruples; counts |S| > bound + 1e-9."""
    if cfg.mode == "linear":
        raise ValueError("scan the linear model through its exact expectation, mode S0")
    r = _random_batch(cfg)
    s = _string_batch(cfg.mode, r["a"], r["a2"], r["b"], r["b2"], r["aa"], r["aa2"], r["bb"], r["bb2"])
    bound = _bound_batch(cfg.mode, r["a"], r["a2"], r["b"], r["b2"], r["aa"], r["aa2"], r["bb"], r["bb2"],
                         r["xi1"], r["xi2"])
    margin = np.abs(s) - bound
    worst = int(np.argmax(margin))
    return ScanResult(cfg.mode, cfg.trials, int(np.sum(margin > VIOLATION_TOL)), float(margin[worst]),
                      float(np.max(np.abs(s))), float(np.max(bound)), worst)


@dataclass(frozen=True)
class MaximizeResult:
    mode: str
    quadruple: DirectionQuadruple
    value: float
    bound: float
    torsion_dot: float
    stderr: float = 0.0
    starts: int = 0
    report: CHSHReport | None = field(default=None, repr=False)


def _sph(theta: FloatArray, phi: FloatArray) -> FloatArray:
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def _unpack(p: FloatArray, nonequatorial: bool):
    p = np.atleast_2d(p)
    dirs = [_sph(p[:, 2 * i], p[:, 2 * i + 1]) for i in range(4)]
    if nonequatorial:
        ang = [p[:, 8 + i] for i in range(4)]
    else:
        ang = [np.full(p.shape[0], HALF_PI)] * 4
    return dirs, ang


def _objective(mode: str, p: FloatArray) -> FloatArray:
    dirs, ang = _unpack(p, mode.endswith("nonequatorial"))
    return np.abs(_string_batch(mode, *dirs, *ang))


def _coplanar_grid_best(mode: str, step_deg: float, keep: int) -> list[FloatArray]:
    """a fixed at 0 in the xy-plane; a', b, b' swept on a grid; returns the top parameter vectors.

    Degenerate settings, where any two of the four directions are parallel
    or antiparallel, are skipped. The pair correlation
    matrix is evaluated once and the string is assembled from its rows.
    """
    g = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    n = g.size
    e = lambda t: np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=-1)  # noqa: E731
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    half = np.full(n * n, HALF_PI)
    corr = closed_form_correlation(mode, e(g[ii.ravel()]), e(g[jj.ravel()]), half, half).reshape(n, n)
    ok = np.abs(np.sin(g)) > 1e-9  # angle not 0 or 180 degrees
    pair_ok = ok[:, None] & ok[None, :] & (np.abs(np.sin(g[:, None] - g[None, :])) > 1e-9)
    cands: list[tuple[float, FloatArray]] = []
    for t in range(1, n):
        if not ok[t]:
            continue
        vals = np.abs(corr[0][:, None] + corr[0][None, :] + corr[t][:, None] - corr[t][None, :])
        sep = np.abs(np.sin(g[t] - g)) > 1e-9
        vals[~(pair_ok & sep[:, None] & sep[None, :])] = -np.inf
        flat = vals.ravel()
        idx = np.argpartition(-flat, min(keep, flat.size - 1))[:keep]
        for i in idx:
            cands.append((float(flat[i]), np.array([g[t], g[i // n], g[i % n]])))
    cands.sort(key=lambda c: -c[0])
    out = []
    for _, (t, u, v) in cands[:keep]:
        p = [HALF_PI, 0.0, HALF_PI, t, HALF_PI, u, HALF_PI, v]
        if mode.endswith("nonequatorial"):
            p += [HALF_PI] * 4
        out.append(np.array(p))
    return out


def maximize_chsh(cfg: ScanConfig) -> MaximizeResult:
    """Multi-start search for max |S|: coplanar grid seeds plus seeded random starts,
    each refined with Nelder-Mead."""
    if cfg.trials < 100:
        raise ValueError("maximize_chsh needs trials >= 100")
    if cfg.mode == "linear":
        # exact search is done on the sign model; the Monte Carlo string is then
        # evaluated at the best distinct grid settings and the largest is kept
        ens = EnsembleSpec("uniform-sphere-lambda", cfg.seed, cfg.samples)
        best = None
        seeds = _coplanar_grid_best("S0", cfg.grid_deg, cfg.refine_top)
        for p in seeds:
            dirs, _ = _unpack(p, False)
            q = DirectionQuadruple(*(d[0] for d in dirs))
            corr, stderr = linear_mc_correlations(q, ens)
            s = corr[0] + corr[1] + corr[2] - corr[3]
            if best is None or abs(s) > abs(best[2]):
                best = (q, corr, s, stderr)
        q, corr, s, stderr = best
        rep = CHSHReport(corr, s, 2.0, abs(s) > 2.0 + VIOLATION_TOL, "linear")
        return MaximizeResult("linear", q, abs(s), 2.0, q.torsion_dot(), stderr, len(seeds), rep)


    noneq = cfg.mode.endswith("nonequatorial")
    starts = _coplanar_grid_best(cfg.mode, cfg.grid_deg, cfg.refine_top)
    for i in range(cfg.random_starts):
        rng = chunk_rng(cfg.seed, i, stream=2)
        p = np.concatenate([rng.uniform(0, np.pi, 8) * np.tile([1.0, 2.0], 4)])
        if noneq:
            p = np.concatenate([p, rng.uniform(0, np.pi, 4)])
        starts.append(p)

    best_val, best_p = -np.inf, None
    for p0 in starts:
        res = minimize(lambda p: -float(_objective(cfg.mode, p)[0]), p0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 5000, "maxfev": 5000})
        val = float(_objective(cfg.mode, res.x)[0])
        if val > best_val + 1e-15:
            best_val, best_p = val, res.x
    dirs, ang = _unpack(best_p, noneq)
    q = DirectionQuadruple(*(d[0] / np.linalg.norm(d[0]) for d in dirs),
                           *(float(x[0]) for x in ang))
    rep = chsh_string(cfg.mode, q)
    return MaximizeResult(cfg.mode, q, abs(rep.string_value), rep.bound, q.torsion_dot(), 0.0, len(starts), rep)


def maximize_bound(mode: str = "S3-equatorial", seed: int = 0, starts: int = 16) -> float:
    """Largest value of the bound formula itself over directions (and offsets / xi points)."""
    noneq = mode.endswith("nonequatorial")
    s7 = mode.startswith("S7")

    def bound(p):
        dirs = [_sph(np.array([p[2 * i]]), np.array([p[2 * i + 1]]))[0] for i in range(4)]
        k = 8
        ang = [HALF_PI] * 4
        if noneq:
            ang = list(p[8:12])
            k = 12
        xi1 = xi2 = None
        if s7:
            xi1 = p[k:k + 8] / np.linalg.norm(p[k:k + 8])
            xi2 = p[k + 8:k + 16] / np.linalg.norm(p[k + 8:k + 16])
        q = DirectionQuadruple(*dirs, *ang, xi1=xi1, xi2=xi2)
        return bound_for(mode, q)

    best = -np.inf
    for i in range(starts):
        rng = chunk_rng(seed, i, stream=3)
        p = rng.uniform(0, np.pi, 8) * np.tile([1.0, 2.0], 4)
        if noneq:
            p = np.concatenate([p, rng.uniform(0, np.pi, 4)])
        if s7:
            p = np.concatenate([p, rng.standard_normal(16)])
        res = minimize(lambda x: -bound(x), p, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 40000, "maxfev": 80000})
        best = max(best, bound(res.x))
    return float(best)
