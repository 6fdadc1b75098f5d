"""Dense Euclidean Clifford algebra Cl(n,0) for n <= 7.

Blades are addressed by bitmask: bit j-1 set means e_j is a factor.
Coefficients live in a dense array of length 2**n ordered by mask value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
import numpy.typing as npt

MAX_DIM = 7
ATOL = 1e-12

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class BladeIndex:
    """A basis blade e_{j1} e_{j2} ... with j1 < j2 < ..."""

    mask: int
    dim: int

    def __post_init__(self) -> None:
        if not 0 <= self.dim <= MAX_DIM:
            raise ValueError(f"dim must be in [0, {MAX_DIM}], got {self.dim}")
        if not 0 <= self.mask < (1 << self.dim):
            raise ValueError(f"mask {self.mask} out of range for dim {self.dim}")

    @property
    def grade(self) -> int:
        return bin(self.mask).count("1")

    @classmethod
    def of(cls, dim: int, *indices: int) -> "BladeIndex":
        """Blade from 1-based vector indices, which must be strictly increasing."""
        if list(indices) != sorted(set(indices)):
            raise ValueError("indices must be strictly increasing")
        mask = 0
        for j in indices:
            mask |= 1 << (j - 1)
        return cls(mask, dim)


def reorder_sign(a: int, b: int) -> int:
    """Sign from bringing the blade product a*b into canonical order.

    Counts, for every vector in ``a``, the vectors in ``b`` with a lower index
    that it has to hop over.
    """
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def _tables(dim: int) -> tuple[npt.NDArray[np.intp], FloatArray, npt.NDArray[np.intp]]:
    """Gather index and sign tables for the product, plus per-blade grades.

    ``out[k] = sum_i x[i] * y[i ^ k] * sign[i, k]``; with a unit metric the
    contraction e_j e_j = +1 contributes no extra sign.
    """
    size = 1 << dim
    idx = np.arange(size)
    partner = idx[:, None] ^ idx[None, :]
    sign = np.empty((size, size))
    for i in range(size):
        for k in range(size):
            sign[i, k] = reorder_sign(i, i ^ k)
    grades = np.bitwise_count(idx.astype(np.uint8)).astype(np.intp)
    partner.setflags(write=False)
    sign.setflags(write=False)
    grades.setflags(write=False)
    return partner, sign, grades


def blade_grades(dim: int) -> npt.NDArray[np.intp]:
    return _tables(dim)[2]


class Multivector:
    """Immutable element of Cl(dim, 0)."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: npt.ArrayLike) -> None:
        if not 0 <= dim <= MAX_DIM:
            raise ValueError(f"dim must be in [0, {MAX_DIM}], got {dim}")
        arr = np.array(coeffs, dtype=np.float64).reshape(-1)
        if arr.size != 1 << dim:
            raise ValueError(f"expected {1 << dim} coefficients, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors

    @classmethod
    def zero(cls, dim: int) -> "Multivector":
        return cls(dim, np.zeros(1 << dim))

    @classmethod
    def scalar(cls, dim: int, value: float) -> "Multivector":
        c = np.zeros(1 << dim)
        c[0] = value
        return cls(dim, c)

    @classmethod
    def blade(cls, dim: int, *indices: int, coeff: float = 1.0) -> "Multivector":
        c = np.zeros(1 << dim)
        c[BladeIndex.of(dim, *indices).mask] = coeff
        return cls(dim, c)

    @classmethod
    def vector(cls, components: npt.ArrayLike) -> "Multivector":
        v = np.asarray(components, dtype=np.float64)
        dim = v.size
        c = np.zeros(1 << dim)
        c[1 << np.arange(dim)] = v
        return cls(dim, c)

    # accessors

    def __getitem__(self, blade: BladeIndex | int) -> float:
        mask = blade.mask if isinstance(blade, BladeIndex) else blade
        return float(self.coeffs[mask])

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def vector_part(self) -> FloatArray:
        return self.coeffs[1 << np.arange(self.dim)].copy()

    # arithmetic

    def _check(self, other: "Multivector") -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        return Multivector(self.dim, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        return Multivector(self.dim, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.dim, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return Multivector(self.dim, self.coeffs * float(other))
        return geometric_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return Multivector(self.dim, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other: float):
        return Multivector(self.dim, self.coeffs / float(other))

    def reverse(self) -> "Multivector":
        return reverse(self)

    def grade(self, *grades: int) -> "Multivector":
        return grade_project(self, set(grades))

    def norm(self) -> float:
        return norm(self)

    def isclose(self, other: "Multivector", atol: float = ATOL) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= atol)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multivector)
            and other.dim == self.dim
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        terms = []
        for mask in np.flatnonzero(self.coeffs):
            name = "".join(str(j + 1) for j in range(self.dim) if mask >> j & 1)
            terms.append(f"{self.coeffs[mask]:+.6g}" + (f"*e{name}" if name else ""))
        return f"Multivector({self.dim}, {' '.join(terms) or '0'})"


def geometric_product(x: Multivector, y: Multivector) -> Multivector:
    x._check(y)
    partner, sign, _ = _tables(x.dim)
    out = (x.coeffs[:, None] * y.coeffs[partner] * sign).sum(axis=0)
    return Multivector(x.dim, out)


def geometric_product_batch(x: FloatArray, y: FloatArray, dim: int) -> FloatArray:
    """Row-wise geometric product of coefficient arrays of shape (m, 2**dim)."""
    partner, sign, _ = _tables(dim)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.einsum("mi,mik,ik->mk", x, y[:, partner], sign)


def reverse(x: Multivector) -> Multivector:
    k = blade_grades(x.dim)
    return Multivector(x.dim, x.coeffs * np.where((k * (k - 1) // 2) % 2, -1.0, 1.0))


def grade_project(x: Multivector, grades: Iterable[int]) -> Multivector:
    grades = set(grades)
    bad = [g for g in grades if not 0 <= g <= x.dim]
    if bad:
        raise ValueError(f"grades {bad} outside [0, {x.dim}]")
    keep = np.isin(blade_grades(x.dim), sorted(grades))
    return Multivector(x.dim, np.where(keep, x.coeffs, 0.0))


def norm(x: Multivector) -> float:
    s = geometric_product(reverse(x), x).scalar_part
    # scalar part of rev(x) x is a sum of squares in Euclidean signature
    return float(np.sqrt(max(s, 0.0)))


def pseudoscalar(dim: int = 3) -> Multivector:
    return Multivector.blade(dim, *range(1, dim + 1))


# Fano triples (j, j+1, j+3) mod 7 fixing the octonion product e_j e_{j+1} = e_{j+3}
FANO_TRIPLES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3),
)


def fano_trivector() -> Multivector:
    """J = sum over Fano triples of e_j e_k e_l in Cl(7,0)."""
    out = Multivector.zero(7)
    for j, k, l in FANO_TRIPLES:
        out = out + Multivector.blade(7, j) * Multivector.blade(7, k) * Multivector.blade(7, l)
    return out


@dataclass(frozen=True)
class HiddenState:
    """Handedness of the hidden state: +1 selects +I (or +J), -1 selects -I (or -J)."""

    handedness: int = 1

    def __post_init__(self) -> None:
        if self.handedness not in (1, -1):
            raise ValueError(f"handedness must be +1 or -1, got {self.handedness}")

    @classmethod
    def both(cls) -> tuple["HiddenState", "HiddenState"]:
        return cls(1), cls(-1)


def handed_product(x: Multivector, y: Multivector, mu: HiddenState | int) -> Multivector:
    """Product in the frame of the given handedness.

    The right-handed frame uses the geometric product; the left-handed frame
    uses the opposite algebra, x*y = y x.
    """
    h = mu.handedness if isinstance(mu, HiddenState) else int(mu)
    return geometric_product(x, y) if h == 1 else geometric_product(y, x)


def _unit(direction: npt.ArrayLike) -> FloatArray:
    n = np.asarray(direction, dtype=np.float64).reshape(-1)
    if abs(np.linalg.norm(n) - 1.0) > ATOL:
        raise ValueError(f"direction must be unit norm, got |n| = {np.linalg.norm(n)!r}")
    return n


def dual_bivector(n: npt.ArrayLike) -> Multivector:
    """I*n in Cl(3,0): n1 e2e3 + n2 e3e1 + n3 e1e2."""
    n = np.asarray(n, dtype=np.float64)
    c = np.zeros(8)
    c[0b110] = n[0]
    c[0b101] = -n[1]
    c[0b011] = n[2]
    return Multivector(3, c)


def dual_bivector_batch(n: FloatArray) -> FloatArray:
    """Rows of I*n as Cl(3,0) coefficient arrays."""
    n = np.asarray(n, dtype=np.float64)
    out = np.zeros(n.shape[:-1] + (8,))
    out[..., 0b110] = n[..., 0]
    out[..., 0b101] = -n[..., 1]
    out[..., 0b011] = n[..., 2]
    return out


def _j_contraction(n: FloatArray) -> Multivector:
    # left contraction of J by the vector n: for a blade e_j e_k e_l, e_j picks
    # +e_k e_l, e_k picks -e_j e_l, e_l picks +e_j e_k
    out = np.zeros(128)
    for j, k, l in FANO_TRIPLES:
        for first, pair in ((j, (k, l)), (k, (l, j)), (l, (j, k))):
            a, b = pair
            s = 1.0 if a < b else -1.0
            out[(1 << (a - 1)) | (1 << (b - 1))] += s * n[first - 1]
    return Multivector(7, out)


def bivector_of(direction: npt.ArrayLike, handedness: int | HiddenState = 1) -> Multivector:
    """mu*n as a multivector, with mu = handedness times I (n=3) or J (n=7).

    For n=7 the J-contraction of a unit vector has norm sqrt(3); it is rescaled
    to unit norm so that values lie on the unit sphere.
    """
    h = handedness.handedness if isinstance(handedness, HiddenState) else int(handedness)
    if h not in (1, -1):
        raise ValueError(f"handedness must be +1 or -1, got {h}")
    n = _unit(direction)
    if n.size == 3:
        return dual_bivector(n) * float(h)
    if n.size == 7:
        return _j_contraction(n) * (h / np.sqrt(3.0))
    raise ValueError(f"direction must have 3 or 7 components, got {n.size}")


def associativity_defect(dim: int, samples: int = 1000, seed: int = 0) -> float:
    """max |(xy)z - x(yz)| over random unit-norm multivectors of Cl(dim, 0)."""
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"dim must lie in [1, {MAX_DIM}]")
    rng = np.random.default_rng(seed)
    x, y, z = (v / np.linalg.norm(v, axis=1, keepdims=True)
               for v in rng.standard_normal((3, samples, 1 << dim)))
    left = geometric_product_batch(geometric_product_batch(x, y, dim), z, dim)
    right = geometric_product_batch(x, geometric_product_batch(y, z, dim), dim)
    return float(np.max(np.abs(left - right)))
