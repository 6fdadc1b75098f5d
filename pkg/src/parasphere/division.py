"""Quaternions, octonions, cross products and point-dependent structure functions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from .clifford import ATOL, FANO_TRIPLES, HiddenState, Multivector

FloatArray = npt.NDArray[np.float64]


# structure tensors -------------------------------------------------------


def levi_civita() -> FloatArray:
    eps = np.zeros((3, 3, 3))
    for (i, j, k), s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                         ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)):
        eps[i, j, k] = s
    return eps


@lru_cache(maxsize=None)
def fano_structure_constants(triples: tuple[tuple[int, int, int], ...] = FANO_TRIPLES) -> FloatArray:
    """Totally antisymmetric f (0-based, 7x7x7) with f[j,k,l] = +1 on each triple."""
    f = np.zeros((7, 7, 7))
    for j, k, l in triples:
        j, k, l = j - 1, k - 1, l - 1
        for a, b, c in ((j, k, l), (k, l, j), (l, j, k)):
            f[a, b, c] = 1.0
            f[b, a, c] = -1.0
    f.setflags(write=False)
    return f


def octonion_table(f: FloatArray | None = None) -> FloatArray:
    """M[a, b, c]: coefficient of unit c in u_a u_b, with u_0 = 1 and u_j = e_j.

    e_j e_k = -delta_jk + sum_l f[j,k,l] e_l.
    """
    f = fano_structure_constants() if f is None else f
    m = np.zeros((8, 8, 8))
    for a in range(8):
        m[0, a, a] = 1.0
        m[a, 0, a] = 1.0
    for j in range(1, 8):
        m[j, j, 0] = -1.0
    m[1:, 1:, 1:] = f
    return m


def corrupted_octonion_table() -> FloatArray:
    """Table with e1 e2 flipped to -e4 while e2 e1 stays -e4 (negative control)."""
    m = octonion_table().copy()
    m[1, 2, 4] = -m[1, 2, 4]
    return m


_TABLE = octonion_table()
_TABLE.setflags(write=False)


# quaternions -------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    """w + x (I e1) + y (I e2) + z (I e3) in the even subalgebra of Cl(3,0)."""

    w: float
    xyz: tuple[float, float, float]

    @classmethod
    def from_array(cls, q: npt.ArrayLike) -> "Quaternion":
        q = np.asarray(q, dtype=np.float64)
        return cls(float(q[0]), (float(q[1]), float(q[2]), float(q[3])))

    def as_array(self) -> FloatArray:
        return np.array([self.w, *self.xyz])

    def to_multivector(self) -> Multivector:
        c = np.zeros(8)
        c[0] = self.w
        c[0b110] = self.xyz[0]
        c[0b101] = -self.xyz[1]
        c[0b011] = self.xyz[2]
        return Multivector(3, c)

    @classmethod
    def from_multivector(cls, x: Multivector) -> "Quaternion":
        if x.dim != 3:
            raise ValueError("expected an element of Cl(3,0)")
        c = x.coeffs
        odd = c[[0b001, 0b010, 0b100, 0b111]]
        if np.max(np.abs(odd)) > ATOL:
            raise ValueError("multivector has odd-grade parts")
        return cls(float(c[0]), (float(c[0b110]), float(-c[0b101]), float(c[0b011])))

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return quat_mul(self, other)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, (-self.xyz[0], -self.xyz[1], -self.xyz[2]))

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def quat_mul_array(p: FloatArray, q: FloatArray) -> FloatArray:
    """Vectorized product over trailing axis of length 4."""
    pw, pv = p[..., 0], p[..., 1:]
    qw, qv = q[..., 0], q[..., 1:]
    # (I e_j)(I e_k) = -delta_jk - eps_jkl I e_l
    w = pw * qw - np.sum(pv * qv, axis=-1)
    v = pw[..., None] * qv + qw[..., None] * pv - np.cross(pv, qv)
    return np.concatenate([w[..., None], v], axis=-1)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion.from_array(quat_mul_array(p.as_array(), q.as_array()))


# octonions ---------------------------------------------------------------


class Octonion:
    """Real octonion with components (1, e1, ..., e7)."""

    __slots__ = ("c",)

    def __init__(self, components: npt.ArrayLike) -> None:
        c = np.array(components, dtype=np.float64).reshape(-1)
        if c.size != 8:
            raise ValueError(f"octonion needs 8 components, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("Octonion is immutable")

    @classmethod
    def unit(cls, j: int) -> "Octonion":
        c = np.zeros(8)
        c[j] = 1.0
        return cls(c)

    @classmethod
    def imaginary(cls, v: npt.ArrayLike) -> "Octonion":
        return cls(np.concatenate([[0.0], np.asarray(v, dtype=np.float64)]))

    @property
    def real(self) -> float:
        return float(self.c[0])

    @property
    def imag(self) -> FloatArray:
        return self.c[1:].copy()

    def conj(self) -> "Octonion":
        return Octonion(np.concatenate([[self.c[0]], -self.c[1:]]))

    def norm(self) -> float:
        return float(np.linalg.norm(self.c))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.c + other.c)

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.c - other.c)

    def __neg__(self) -> "Octonion":
        return Octonion(-self.c)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        return Octonion(self.c * float(other))

    def __rmul__(self, other):
        return Octonion(self.c * float(other))

    def isclose(self, other: "Octonion", atol: float = ATOL) -> bool:
        return bool(np.max(np.abs(self.c - other.c)) <= atol)

    def __eq__(self, other) -> bool:
        return isinstance(other, Octonion) and bool(np.array_equal(self.c, other.c))

    def __hash__(self) -> int:
        return hash(self.c.tobytes())

    def __repr__(self) -> str:
        return f"Octonion({np.array2string(self.c, precision=6)})"


def oct_mul_array(x: FloatArray, y: FloatArray, table: FloatArray = _TABLE) -> FloatArray:
    return np.einsum("...a,...b,abc->...c", x, y, table)


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    return Octonion(oct_mul_array(x.c, y.c))


def oct_mul_handed(x: Octonion, y: Octonion, mu: HiddenState | int) -> Octonion:
    """Right-handed frame: x y. Left-handed frame: the opposite product y x."""
    h = mu.handedness if isinstance(mu, HiddenState) else int(mu)
    return oct_mul(x, y) if h == 1 else oct_mul(y, x)


def associator_array(x: FloatArray, y: FloatArray, z: FloatArray, table: FloatArray = _TABLE) -> FloatArray:
    return oct_mul_array(oct_mul_array(x, y, table), z, table) - oct_mul_array(x, oct_mul_array(y, z, table), table)


def associator(x: Octonion, y: Octonion, z: Octonion) -> Octonion:
    return Octonion(associator_array(x.c, y.c, z.c))


def norm_composition_defect(table: FloatArray, samples: int = 10_000, seed: int = 0) -> float:
    """max | |xy| - |x||y| | over random pairs under the given table."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, 8))
    y = rng.standard_normal((samples, 8))
    xy = oct_mul_array(x, y, table)
    lhs = np.linalg.norm(xy, axis=1)
    rhs = np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1)
    return float(np.max(np.abs(lhs - rhs)))


# cross products ----------------------------------------------------------


def cross3(a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
    return np.einsum("...j,...k,jkl->...l", np.asarray(a, float), np.asarray(b, float), levi_civita())


def cross7(n: npt.ArrayLike, n2: npt.ArrayLike) -> FloatArray:
    return np.einsum("...j,...k,jkl->...l", np.asarray(n, float), np.asarray(n2, float),
                     fano_structure_constants())


def _unit_octonion(xi: Octonion | npt.ArrayLike) -> FloatArray:
    c = xi.c if isinstance(xi, Octonion) else np.asarray(xi, dtype=np.float64)
    if c.shape != (8,):
        raise ValueError("xi must have 8 components")
    if abs(np.linalg.norm(c) - 1.0) > ATOL:
        raise ValueError(f"xi must be a unit octonion, got |xi| = {np.linalg.norm(c)!r}")
    return c


_UNITS = np.eye(8)[1:]  # e1..e7 as octonion arrays


def structure_functions(xi: Octonion | npt.ArrayLike) -> FloatArray:
    """f_jkl(xi) = f_jkl - Re( [e_j, e_k, xi] (xi^dagger e_l^dagger) ), 0-based 7x7x7."""
    c = _unit_octonion(xi)
    ej = _UNITS[:, None, :]
    ek = _UNITS[None, :, :]
    assoc = associator_array(ej, ek, np.broadcast_to(c, (7, 7, 8)))
    xi_bar = np.concatenate([[c[0]], -c[1:]])
    el_bar = -_UNITS
    right = oct_mul_array(np.broadcast_to(xi_bar, (7, 8)), el_bar)  # xi^dagger e_l^dagger, shape (7, 8)
    # Re(a b) = <a, conj(b)>
    right_conj = right * np.r_[1.0, -np.ones(7)]
    correction = np.einsum("jka,la->jkl", assoc, right_conj)
    return fano_structure_constants() - correction


def cross7_xi(n: npt.ArrayLike, n2: npt.ArrayLike, xi: Octonion | npt.ArrayLike) -> FloatArray:
    f = structure_functions(xi)
    return np.einsum("...j,...k,jkl->...l", np.asarray(n, float), np.asarray(n2, float), f)


def xi_product(x: Octonion, y: Octonion, xi: Octonion | npt.ArrayLike) -> Octonion:
    """Point-dependent product (x xi)(xi^dagger y); reduces to x y at xi = +-1."""
    c = _unit_octonion(xi)
    xi_bar = np.concatenate([[c[0]], -c[1:]])
    return Octonion(oct_mul_array(oct_mul_array(x.c, c), oct_mul_array(xi_bar, y.c)))


def fano_subalgebra_closure_defect(triple: tuple[int, int, int]) -> float:
    """Largest component of a product of triple units that leaks outside span{1, e_j, e_k, e_l}."""
    idx = [0, *triple]
    outside = [i for i in range(8) if i not in idx]
    worst = 0.0
    for a in idx:
        for b in idx:
            prod = _TABLE[a, b]
            worst = max(worst, float(np.max(np.abs(prod[outside]))))
    return worst


def cross7_xi_batch(n: FloatArray, n2: FloatArray, xi: FloatArray) -> FloatArray:
    """Row-wise N x_xi N' via the imaginary part of (N xi)(xi^dagger N')."""
    n, n2, xi = (np.asarray(v, dtype=np.float64) for v in (n, n2, xi))
    zero = np.zeros(n.shape[:-1] + (1,))
    x = np.concatenate([zero, n], axis=-1)
    y = np.concatenate([zero, n2], axis=-1)
    xi_bar = xi * np.r_[1.0, -np.ones(7)]
    return oct_mul_array(oct_mul_array(x, xi), oct_mul_array(xi_bar, y))[..., 1:]


def quaternion_norm_composition_defect(samples: int = 10_000, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    p = rng.standard_normal((samples, 4))
    q = rng.standard_normal((samples, 4))
    lhs = np.linalg.norm(quat_mul_array(p, q), axis=1)
    rhs = np.linalg.norm(p, axis=1) * np.linalg.norm(q, axis=1)
    return float(np.max(np.abs(lhs - rhs)))


def alternativity_defect(table: FloatArray = _TABLE, samples: int = 10_000, seed: int = 0) -> float:
    """max of |[x, x, y]| and |[x, y, y]| over random pairs."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, 8))
    y = rng.standard_normal((samples, 8))
    left = np.linalg.norm(associator_array(x, x, y, table), axis=1)
    right = np.linalg.norm(associator_array(x, y, y, table), axis=1)
    return float(max(left.max(), right.max()))


def max_unit_associator(table: FloatArray = _TABLE) -> float:
    """Largest |[e_a, e_b, e_c]| over imaginary units; 0 for an associative table."""
    u = _UNITS
    a = associator_array(u[:, None, None], u[None, :, None], u[None, None, :], table)
    return float(np.max(np.linalg.norm(a, axis=-1)))


def fano_subalgebra_associator(triple: tuple[int, int, int]) -> float:
    """Largest associator among the units of one triple; 0 when the span is quaternionic."""
    idx = [0, *triple]
    u = np.eye(8)[idx]
    a = associator_array(u[:, None, None], u[None, :, None], u[None, None, :])
    return float(np.max(np.abs(a)))
