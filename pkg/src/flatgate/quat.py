"""Quaternion algebra and the SU(2) bridge.

All quaternions are scalar-first: q = w + x*e1 + y*e2 + z*e3 with
e1*e2 = e3, e2*e3 = e1, e3*e1 = e2 and e_k**2 = -1.  Unit quaternions are
identified with SU(2) through e_k = -i*sigma_k, which makes the map
q -> U one-to-one (no sign ambiguity).

Sign convention for conjugation rotations: rotate_vector(q, v) = q* v q,
so rotate_vector(exp_pure((pi/4) e3), e1) = -e2 (a rotation by -pi/2
about e3 when read as an ordinary 3-vector rotation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotSpecialUnitary

UNIT_NORM_TOL = 1e-12     # invariant after construction
UNIT_RENORM_TOL = 1e-6    # larger deviations are rejected, not hidden
SMALL_ANGLE = 1e-8        # series switch in exp_pure
SU2_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    """General quaternion, scalar-first (w, x, y, z)."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x
                         + self.y * self.y + self.z * self.z)

    def imag(self) -> "ImagQuaternion":
        return ImagQuaternion(self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __neg__(self):
        return type(self)(-self.w, -self.x, -self.y, -self.z)


@dataclass(frozen=True)
class UnitQuaternion(Quaternion):
    """Quaternion with q q* = 1; renormalized on construction.

    Norm deviations below 1e-6 are silently renormalized; anything larger
    is rejected so that integrator bugs stay visible.
    """

    def __post_init__(self):
        super().__post_init__()
        n = self.norm()
        if abs(n - 1.0) >= UNIT_RENORM_TOL:
            raise ValueError(f"not a unit quaternion: |q| = {n!r}")
        if n != 1.0:
            object.__setattr__(self, "w", self.w / n)
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)


@dataclass(frozen=True)
class ImagQuaternion:
    """Pure imaginary quaternion x*e1 + y*e2 + z*e3 (scalar part zero)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))

    def norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self):
        return ImagQuaternion(-self.x, -self.y, -self.z)


ONE = UnitQuaternion(1.0, 0.0, 0.0, 0.0)
E1 = UnitQuaternion(0.0, 1.0, 0.0, 0.0)
E2 = UnitQuaternion(0.0, 0.0, 1.0, 0.0)
E3 = UnitQuaternion(0.0, 0.0, 0.0, 1.0)
IM_E1 = ImagQuaternion(1.0, 0.0, 0.0)
IM_E2 = ImagQuaternion(0.0, 1.0, 0.0)
IM_E3 = ImagQuaternion(0.0, 0.0, 1.0)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b. Unit inputs give a unit result."""
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    if isinstance(a, UnitQuaternion) and isinstance(b, UnitQuaternion):
        return UnitQuaternion(w, x, y, z)
    return Quaternion(w, x, y, z)


def conj(q: Quaternion) -> Quaternion:
    """Quaternion conjugate q* (negates the imaginary part)."""
    return type(q)(q.w, -q.x, -q.y, -q.z)


def exp_pure(v: ImagQuaternion) -> UnitQuaternion:
    """exp(v) = cos|v| + (v/|v|) sin|v| for pure imaginary v.

    Below |v| = 1e-8 the factor sin|v|/|v| is replaced by its series
    1 - |v|^2/6 to avoid 0/0; the switch is far below the series error.
    """
    phi = v.norm()
    if phi < SMALL_ANGLE:
        s = 1.0 - phi * phi / 6.0
        return UnitQuaternion(math.cos(phi), v.x * s, v.y * s, v.z * s)
    s = math.sin(phi) / phi
    return UnitQuaternion(math.cos(phi), v.x * s, v.y * s, v.z * s)


def rotate_vector(q: UnitQuaternion, v: ImagQuaternion) -> ImagQuaternion:
    """Conjugation q* v q; preserves |v|. See the module note on its sign."""
    r = mul(mul(conj(q), v.as_quaternion()), q)
    return ImagQuaternion(r.x, r.y, r.z)


@dataclass(frozen=True)
class SU2Matrix:
    """2x2 complex matrix, unitary with determinant 1."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("SU2Matrix needs a 2x2 matrix")
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > SU2_TOL:
            raise NotSpecialUnitary("matrix is not unitary")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > SU2_TOL:
            raise NotSpecialUnitary(f"determinant is {det}, not 1")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)


def to_su2(q: UnitQuaternion) -> SU2Matrix:
    """U = w - x*i*sigma1 - y*i*sigma2 - z*i*sigma3."""
    return SU2Matrix(np.array([
        [q.w - 1j * q.z, -q.y - 1j * q.x],
        [q.y - 1j * q.x, q.w + 1j * q.z],
    ]))


def from_su2(u: SU2Matrix) -> UnitQuaternion:
    """Inverse of to_su2; exact on its image (no sign flip)."""
    m = u.m
    return UnitQuaternion(m[0, 0].real, -m[0, 1].imag,
                          -m[0, 1].real, -m[0, 0].imag)


# Array kernels for vectorized paths. Rows are scalar-first (w, x, y, z).

def qmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product on (..., 4) arrays."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def qconj_arr(a: np.ndarray) -> np.ndarray:
    """Conjugate on (..., 4) arrays."""
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def random_unit(rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Uniform random unit quaternions, shape (4,) or (n, 4)."""
    v = rng.normal(size=4 if n is None else (n, 4))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def as_unit(row) -> UnitQuaternion:
    """Build a UnitQuaternion from a length-4 array row."""
    return UnitQuaternion(row[0], row[1], row[2], row[3])
