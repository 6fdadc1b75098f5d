"""Reference quantum mechanics on at most four qubits.

Kets are in the sigma_z basis with |+> = (1, 0) and |-> = (0, 1); multi-qubit
basis order follows np.kron, so the leftmost factor is the most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq

ComplexMatrix = npt.NDArray[np.complex128]
ATOL = 1e-12
IMAG_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def _unit3(n: npt.ArrayLike) -> npt.NDArray[np.float64]:
    v = np.asarray(n, dtype=np.float64).reshape(-1)
    if v.size != 3 or abs(np.linalg.norm(v) - 1.0) > ATOL:
        raise ValueError(f"expected a unit 3-vector, got {v!r}")
    return v


@dataclass(frozen=True)
class Ket:
    amplitudes: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if abs(np.linalg.norm(amp) - 1.0) > ATOL:
            raise ValueError(f"ket is not normalized: |psi| = {np.linalg.norm(amp)!r}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def amplitude(self, label: str) -> complex:
        """Amplitude of a basis ket given as a string of '+' and '-'."""
        idx = int(label.replace("+", "0").replace("-", "1"), 2)
        return complex(self.amplitudes[idx])

    def bra(self, other: npt.ArrayLike) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, np.asarray(other, dtype=complex)))


def basis_ket(label: str) -> Ket:
    amp = np.zeros(2 ** len(label), dtype=complex)
    amp[int(label.replace("+", "0").replace("-", "1"), 2)] = 1.0
    return Ket(amp)


def pauli_dot(n: npt.ArrayLike) -> ComplexMatrix:
    v = _unit3(n)
    return v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z


def tensor(ops: Sequence[npt.ArrayLike]) -> ComplexMatrix:
    if len(ops) == 0:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def expectation(state: Ket, op: npt.ArrayLike) -> float:
    op = np.asarray(op, dtype=complex)
    if op.shape != (state.dim, state.dim):
        raise ValueError(f"operator shape {op.shape} does not match ket dim {state.dim}")
    if not np.allclose(op, op.conj().T, atol=1e-12):
        raise ValueError("operator is not Hermitian")
    val = np.vdot(state.amplitudes, op @ state.amplitudes)
    if abs(val.imag) > IMAG_TOL:
        raise ArithmeticError(f"expectation has imaginary residue {val.imag!r}")
    return float(val.real)


def singlet_state() -> Ket:
    return Ket(np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2))


def ghz4_state() -> Ket:
    """(|++--> - |--++>) / sqrt(2)."""
    amp = np.zeros(16, dtype=complex)
    amp[0b0011] = 1 / np.sqrt(2)
    amp[0b1100] = -1 / np.sqrt(2)
    return Ket(amp)


def hardy_state(theta: float) -> Ket:
    """(cos t (|+-> + |-+>) - sin t |++>) / sqrt(1 + cos^2 t)."""
    c, s = np.cos(theta), np.sin(theta)
    amp = np.array([-s, c, c, 0.0], dtype=complex) / np.sqrt(1 + c * c)
    return Ket(amp)


def spin_ket(n: npt.ArrayLike, sign: int = +1) -> npt.NDArray[np.complex128]:
    """Eigenvector of sigma.n with eigenvalue sign, Bloch phase convention.

    |n,+> = (cos(t/2), e^{i p} sin(t/2)) and |n,-> = (sin(t/2), -e^{i p} cos(t/2)).
    """
    v = _unit3(n)
    t = np.arctan2(np.hypot(v[0], v[1]), v[2])
    p = np.arctan2(v[1], v[0])
    if sign > 0:
        return np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)])
    return np.array([np.sin(t / 2), -np.exp(1j * p) * np.cos(t / 2)])


def ghz_direction(theta: float, phi: float) -> npt.NDArray[np.float64]:
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


@dataclass(frozen=True)
class GhzAngles:
    theta: tuple[float, float, float, float]
    phi: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        t = tuple(float(v) for v in self.theta)
        p = tuple(float(v) for v in self.phi)
        if len(t) != 4 or len(p) != 4:
            raise ValueError("GHZ angles need four polar and four azimuthal values")
        if not all(np.isfinite(t + p)):
            raise ValueError("GHZ angles must be finite")
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p)

    def directions(self) -> list[npt.NDArray[np.float64]]:
        return [ghz_direction(t, p) for t, p in zip(self.theta, self.phi)]


def ghz4_expectation(theta: npt.ArrayLike, phi: npt.ArrayLike) -> float:
    """<GHZ4| sigma.n1 x sigma.n2 x sigma.n3 x sigma.n4 |GHZ4> by direct matrix evaluation."""
    theta, phi = np.asarray(theta, float), np.asarray(phi, float)
    ops = [pauli_dot(ghz_direction(t, p)) for t, p in zip(theta, phi)]
    return expectation(ghz4_state(), tensor(ops))


def hardy_amplitudes(theta: float, a, a2, b, b2) -> tuple[complex, complex, complex, complex]:
    """<Psi| projected on (a'+, b+), (a+, b'+), (a-, b-), (a'+, b'+)."""
    psi = hardy_state(theta)
    pairs = (
        (spin_ket(a2, +1), spin_ket(b, +1)),
        (spin_ket(a, +1), spin_ket(b2, +1)),
        (spin_ket(a, -1), spin_ket(b, -1)),
        (spin_ket(a2, +1), spin_ket(b2, +1)),
    )
    return tuple(psi.bra(np.kron(u, v)) for u, v in pairs)  # type: ignore[return-value]


def hardy_closed_form(theta: float) -> float:
    return float(np.sin(theta) * np.cos(theta) ** 2 / np.sqrt(1 + np.cos(theta) ** 2))


@dataclass(frozen=True)
class HardySolution:
    theta: float
    a: npt.NDArray[np.float64]
    a2: npt.NDArray[np.float64]
    b: npt.NDArray[np.float64]
    b2: npt.NDArray[np.float64]
    residual: float


class HardySolveError(RuntimeError):
    pass


def _xz(angle: float) -> npt.NDArray[np.float64]:
    return np.array([np.sin(angle), 0.0, np.cos(angle)])


def _real_roots(fn, grid: npt.NDArray[np.float64]) -> list[float]:
    vals = np.array([fn(t) for t in grid])
    out = []
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo == 0.0:
            out.append(float(lo))
        elif flo * fhi < 0:
            out.append(float(brentq(fn, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)))
    return out


def hardy_roots(theta: float, tol: float = 1e-8) -> list[HardySolution]:
    """Planar symmetric roots (a = b, a' = b') by nested 1-d bracketing.

    In the x-z plane every amplitude is real, so the (a-, b-) condition is a
    scalar equation in the polar angle of a, and the (a'+, b+) condition is
    then a scalar equation in the polar angle of a'. Sign flips caused by the
    ket phase jump at the south pole are rejected by the residual check.
    """
    if not 0 < theta < np.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    psi = hardy_state(theta)
    grid = np.linspace(-np.pi, np.pi, 181)

    def amp(u, v) -> complex:
        return psi.bra(np.kron(u, v))

    roots: list[HardySolution] = []
    for ta in _real_roots(lambda t: amp(spin_ket(_xz(t), -1), spin_ket(_xz(t), -1)).real, grid):
        a = _xz(ta)
        ka = spin_ket(a, +1)
        for ta2 in _real_roots(lambda t: amp(spin_ket(_xz(t), +1), ka).real, grid):
            a2 = _xz(ta2)
            res = max(abs(z) for z in hardy_amplitudes(theta, a, a2, a, a2)[:3])
            if res >= tol:
                continue
            if any(np.allclose(a, r.a, atol=1e-9) and np.allclose(a2, r.a2, atol=1e-9) for r in roots):
                continue
            roots.append(HardySolution(theta, a, a2, a.copy(), a2.copy(), float(res)))
    return roots


def hardy_find_directions(theta: float, tol: float = 1e-8) -> HardySolution:
    """Directions meeting the three zero conditions; the smallest-residual root is returned."""
    roots = hardy_roots(theta, tol)
    if not roots:
        raise HardySolveError(f"no direction set with residual < {tol} for theta={theta}")
    return min(roots, key=lambda r: r.residual)
