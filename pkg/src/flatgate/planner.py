"""Single-pulse planner: steer the qubit from the identity to an arbitrary
target gate with one smooth control pulse.

Pipeline, all in closed form:

1. decompose_target      target angles (eta_bar, alpha_bar, beta_bar,
                         lambda_bar); the eta_bar rotation removes the e1
                         component, the lambda_bar offset keeps
                         sin(alpha)cos(alpha) away from zero at the ends.
2. hermite cubics        alpha(s), beta(s) of degree <= 3 matching eight
                         endpoint conditions exactly.
3. check_alpha_monotone  analytic proof obligation alpha' > 0 on (0, 1)
                         plus a numeric grid confirmation.
4. controls_in_s         body rates and controls in virtual time s with a
                         winding check on z(s) = w2 - i*w3.
5. smoothstep warp       s = warp(t) with vanishing endpoint derivatives,
                         making the physical controls vanish at 0 and T.

The planned control, rotated back by eta_bar and scaled by the warp rate,
steers dq/dt = (u1 e1 + u2 e2) q from q(0) = 1 to q(T) = target.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IdentityTarget, MonotonicityViolation, SingularFlatCurve, WindingNonzero
from .flat import BodyVelocity, LiftSamplePath, unwrap_phase
from .quat import UnitQuaternion
from .schedule import INTERP_LINEAR, PulseSchedule

IDENTITY_TOL = 1e-12
ETA_DEGENERATE_SQ = 1e-24        # q1^2 + q2^2 below this: eta_bar := 0
Z_GRID = 2048                    # validation grid for |z| and theta
ALPHA_GRID = 1024                # open grid for the alpha' > 0 confirmation
WINDING_TOL = 1e-6
# 8192 intervals keep the linear-interpolation floor of a written schedule
# near 1e-7 on desk-scale scenarios; 2048 would leave it above 1e-6.
DEFAULT_SAMPLES = 8192
MIN_SAMPLES = 64


@dataclass(frozen=True)
class TargetDecomposition:
    """Angles normalizing a target gate.

    eta_bar in [0, 2*pi) rotates the e1/e2 components onto the e2 axis;
    alpha_bar in (0, pi] and beta_bar in [-pi/2, pi/2] place the rotated
    target at cos(a) + sin(a)(cos(b) e2 + sin(b) e3); lambda_bar offsets
    the alpha ramp.
    """

    eta_bar: float
    alpha_bar: float
    beta_bar: float
    lambda_bar: float

    def rotated_target(self) -> UnitQuaternion:
        """The eta_bar-normalized target (zero e1 component)."""
        a, b = self.alpha_bar, self.beta_bar
        return UnitQuaternion(math.cos(a), 0.0,
                              math.sin(a) * math.cos(b),
                              math.sin(a) * math.sin(b))

    def reconstruct(self) -> UnitQuaternion:
        """Rebuild the original target from the four angles."""
        p = self.rotated_target()
        se, ce = math.sin(self.eta_bar), math.cos(self.eta_bar)
        return UnitQuaternion(p.w, p.y * se, p.y * ce, p.z)


def decompose_target(qbar: UnitQuaternion) -> TargetDecomposition:
    """Normalize a target gate; the identity is rejected."""
    dist = math.sqrt((qbar.w - 1.0) ** 2 + qbar.x ** 2 + qbar.y ** 2 + qbar.z ** 2)
    if dist <= IDENTITY_TOL:
        raise IdentityTarget("target is the identity; no pulse to plan")
    r2 = qbar.x * qbar.x + qbar.y * qbar.y
    eta = 0.0 if r2 < ETA_DEGENERATE_SQ else math.atan2(qbar.x, qbar.y) % (2.0 * math.pi)
    r = math.sqrt(r2)
    alpha = math.acos(max(-1.0, min(1.0, qbar.w)))
    # at alpha = pi both r and q3 vanish and atan2(0, 0) = 0 picks beta = 0
    beta = math.atan2(qbar.z, r)
    return TargetDecomposition(eta, alpha, beta, start_offset(alpha))


def start_offset(alpha_bar: float) -> float:
    """Initial alpha offset keeping |sin(a)cos(a)| away from 0 at both ends."""
    if math.pi / 4 <= alpha_bar <= 3 * math.pi / 4:
        lam = -alpha_bar / 2.0
    else:
        lam = math.pi / 4 - alpha_bar / 2.0
    assert abs(math.sin(lam) * math.cos(lam)) >= 0.17
    assert abs(math.sin(lam + alpha_bar) * math.cos(lam + alpha_bar)) >= 0.17
    return lam


@dataclass(frozen=True)
class BoundaryData:
    """Endpoint values and slopes for the two cubics."""

    alpha0: float
    alpha1: float
    dalpha0: float
    dalpha1: float
    beta0: float
    beta1: float
    dbeta0: float
    dbeta1: float


def boundary_data(dec: TargetDecomposition) -> BoundaryData:
    """Endpoint conditions: alpha ramps by alpha_bar, beta closes a loop."""
    a, b, lam = dec.alpha_bar, dec.beta_bar, dec.lambda_bar
    da = a * math.cos(b)
    db0 = -a * math.sin(b) / (math.sin(lam) * math.cos(lam))
    db1 = -a * math.sin(b) / (math.sin(lam + a) * math.cos(lam + a))
    return BoundaryData(lam, lam + a, da, da, b, b, db0, db1)


def hermite_cubic(p0: float, p1: float, d0: float, d1: float) -> np.ndarray:
    """Coefficients (c0, c1, c2, c3) of the cubic matching value and slope
    at s = 0 and s = 1."""
    return np.array([
        p0,
        d0,
        3.0 * (p1 - p0) - 2.0 * d0 - d1,
        2.0 * (p0 - p1) + d0 + d1,
    ])


def _poly_eval(c: np.ndarray, s):
    return c[0] + s * (c[1] + s * (c[2] + s * c[3]))


def _poly_d1(c: np.ndarray, s):
    return c[1] + s * (2.0 * c[2] + s * 3.0 * c[3])


def _poly_d2(c: np.ndarray, s):
    return 2.0 * c[2] + s * 6.0 * c[3]


@dataclass(frozen=True)
class CubicPair:
    """The two boundary-value cubics with their derivative closed forms."""

    ca: np.ndarray            # alpha coefficients, ascending powers
    cb: np.ndarray            # beta coefficients
    delta: float              # alpha_bar * (1 - cos(beta_bar))

    def __post_init__(self):
        for name in ("ca", "cb"):
            a = np.asarray(getattr(self, name), dtype=float).copy()
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @classmethod
    def from_decomposition(cls, dec: TargetDecomposition) -> "CubicPair":
        bd = boundary_data(dec)
        ca = hermite_cubic(bd.alpha0, bd.alpha1, bd.dalpha0, bd.dalpha1)
        cb = hermite_cubic(bd.beta0, bd.beta1, bd.dbeta0, bd.dbeta1)
        return cls(ca, cb, dec.alpha_bar * (1.0 - math.cos(dec.beta_bar)))

    def alpha(self, s):
        return _poly_eval(self.ca, s)

    def dalpha(self, s):
        return _poly_d1(self.ca, s)

    def ddalpha(self, s):
        return _poly_d2(self.ca, s)

    def beta(self, s):
        return _poly_eval(self.cb, s)

    def dbeta(self, s):
        return _poly_d1(self.cb, s)

    def ddbeta(self, s):
        return _poly_d2(self.cb, s)


def check_alpha_monotone(c: CubicPair) -> float:
    """Verify alpha' > 0 on (0, 1); returns the grid minimum as a witness.

    Analytically alpha'(s) = -6*delta*s*(s - 1) + alpha'(0) with
    delta >= 0, so positivity needs delta > 0 with alpha'(0) >= 0, or
    delta = 0 with alpha'(0) > 0.  A 1024-point open grid confirms.
    """
    d0 = float(c.ca[1])
    ok = (c.delta > 0.0 and d0 >= 0.0) or (c.delta == 0.0 and d0 > 0.0)
    if not ok:
        raise MonotonicityViolation(
            f"alpha'(0) = {d0!r}, delta = {c.delta!r}: alpha is not increasing")
    s = np.linspace(0.0, 1.0, ALPHA_GRID + 2)[1:-1]
    grid_min = float(np.min(c.dalpha(s)))
    if grid_min <= 0.0:
        raise MonotonicityViolation(f"grid min alpha' = {grid_min!r}")
    return grid_min


def _rates_arrays(c: CubicPair, s):
    """Body rates of the lift and the derivatives of w2, w3, all closed form."""
    s = np.asarray(s, dtype=float)
    al, be = c.alpha(s), c.beta(s)
    da, db = c.dalpha(s), c.dbeta(s)
    dda, ddb = c.ddalpha(s), c.ddbeta(s)
    sa, ca_, sb, cb = np.sin(al), np.cos(al), np.sin(be), np.cos(be)
    # q = db * sin(al) cos(al); w2 - i w3 = exp(-i be)(da - i q)
    q = db * sa * ca_
    qd = ddb * sa * ca_ + da * db * (ca_ * ca_ - sa * sa)
    w1 = db * sa * sa
    w2 = da * cb - q * sb
    w3 = da * sb + q * cb
    w2d = dda * cb - da * db * sb - qd * sb - q * db * cb
    w3d = dda * sb + da * db * cb + qd * cb - q * db * sb
    return w1, w2, w3, w2d, w3d


def body_rates(c: CubicPair, s: float) -> tuple[BodyVelocity, tuple[float, float]]:
    """Body velocity of the lift at s plus (w2', w3')."""
    w1, w2, w3, w2d, w3d = _rates_arrays(c, float(s))
    return BodyVelocity(float(w1), float(w2), float(w3)), (float(w2d), float(w3d))


def lift_path(c: CubicPair, m: int) -> LiftSamplePath:
    """The planner's lift Y(s) on an m-point grid with exact derivatives.

    Y = cos(al) + sin(al)(cos(be) e2 + sin(be) e3); the first and second
    derivatives follow by differentiating the closed form, so downstream
    consistency checks see no numerical-differentiation noise.
    """
    s = np.linspace(0.0, 1.0, m)
    al, be = c.alpha(s), c.beta(s)
    da, db = c.dalpha(s), c.dbeta(s)
    dda, ddb = c.ddalpha(s), c.ddbeta(s)
    sa, ca_, sb, cb = np.sin(al), np.cos(al), np.sin(be), np.cos(be)
    y = np.stack([ca_, np.zeros_like(s), sa * cb, sa * sb], axis=1)
    # m-direction (cos be, sin be) and its orthogonal n-direction
    m2, m3 = cb, sb
    n2, n3 = -sb, cb
    cm = da * ca_                      # coefficient of m in Y'
    cn = db * sa                       # coefficient of n in Y'
    yd = np.stack([-da * sa, np.zeros_like(s), cm * m2 + cn * n2, cm * m3 + cn * n3], axis=1)
    cw = -ca_ * da * da - sa * dda
    cm2 = dda * ca_ - sa * da * da - sa * db * db
    cn2 = 2.0 * ca_ * da * db + sa * ddb
    ydd = np.stack([cw, np.zeros_like(s), cm2 * m2 + cn2 * n2, cm2 * m3 + cn2 * n3], axis=1)
    return LiftSamplePath(s, y, yd, ydd)


@dataclass(frozen=True)
class SSchedule:
    """Controls in virtual time s with the validation traces that proved
    them usable (body rates, unwrapped phase, grid minimum of |z|)."""

    cubics: CubicPair
    u1s: Callable
    u2s: Callable
    s_grid: np.ndarray
    omega: np.ndarray        # (m, 3)
    theta: np.ndarray
    min_abs_z: float

    @property
    def theta_end(self) -> float:
        return float(self.theta[-1])


def controls_in_s(c: CubicPair) -> SSchedule:
    """Closed-form controls in s and their validity checks.

    u2s = |z| stays positive (z(0) = z(1) = alpha_bar > 0 and alpha' > 0
    in between); the unwrapped argument of z must return to 0 at s = 1,
    otherwise the plan would end on the wrong branch and is aborted.
    """

    def u1s(s):
        w1, w2, w3, w2d, w3d = _rates_arrays(c, s)
        return w1 + (w3 * w2d - w2 * w3d) / (2.0 * (w2 * w2 + w3 * w3))

    def u2s(s):
        _, w2, w3, _, _ = _rates_arrays(c, s)
        return np.hypot(w2, w3)

    s = np.linspace(0.0, 1.0, Z_GRID)
    w1, w2, w3, _, _ = _rates_arrays(c, s)
    z = w2 - 1j * w3
    min_abs_z = float(np.min(np.abs(z)))
    if min_abs_z <= 1e-12:
        raise SingularFlatCurve(f"|z| reaches {min_abs_z!r} on the s grid")
    theta = unwrap_phase(z, 0.0)
    if abs(theta[-1]) > WINDING_TOL:
        raise WindingNonzero(f"theta(1) = {theta[-1]!r}; z winds around 0")
    omega = np.stack([w1, w2, w3], axis=1)
    return SSchedule(c, u1s, u2s, s, omega, theta, min_abs_z)


def _smoothstep_coeffs(k: int) -> np.ndarray:
    """Integer coefficients of the order-k smoothstep, powers k+1 .. 2k+1."""
    ck = math.factorial(2 * k + 1) // (math.factorial(k) ** 2)
    out = np.empty(k + 1)
    for j in range(k + 1):
        num = ck * math.comb(k, j) * (-1) ** j
        den = k + j + 1
        assert num % den == 0
        out[j] = num // den
    return out


def smoothstep(t, big_t: float, k: int = 1):
    """Polynomial clock s(t) on [0, T] with s(0) = 0, s(T) = 1 and the
    first k derivatives vanishing at both ends; returns (s, ds/dt).

    k = 1 is the cubic 3(t/T)^2 - 2(t/T)^3; higher k raises the endpoint
    flatness (degree 2k + 1).
    """
    if big_t <= 0.0:
        raise ValueError("duration must be positive")
    if k < 1:
        raise ValueError("warp order must be at least 1")
    u = np.asarray(t, dtype=float) / big_t
    if np.any(u < -1e-12) or np.any(u > 1.0 + 1e-12):
        raise ValueError("t must lie in [0, T]")
    coeffs = _smoothstep_coeffs(k)
    s = np.zeros_like(u)
    for j in range(k, -1, -1):
        s = s * u + coeffs[j]
    s *= u ** (k + 1)
    ck = float(math.factorial(2 * k + 1) // (math.factorial(k) ** 2))
    ds = ck * (u * (1.0 - u)) ** k / big_t
    if np.ndim(t) == 0:
        return float(s), float(ds)
    return s, ds


def plan_controls(qbar: UnitQuaternion) -> tuple[TargetDecomposition, CubicPair, SSchedule]:
    dec = decompose_target(qbar)
    cubics = CubicPair.from_decomposition(dec)
    check_alpha_monotone(cubics)
    return dec, cubics, controls_in_s(cubics)


def _rotated_controls(dec: TargetDecomposition, ss: SSchedule, s: np.ndarray):
    """Apply the eta_bar rotation that maps the normalized plan back to
    the original target."""
    ce, se = math.cos(dec.eta_bar), math.sin(dec.eta_bar)
    a = ss.u1s(s)
    b = ss.u2s(s)
    return ce * a + se * b, -se * a + ce * b


def synthesize(qbar: UnitQuaternion, big_t: float, n: int = DEFAULT_SAMPLES,
               k: int = 1) -> PulseSchedule:
    """Full pipeline: one smooth pulse steering 1 -> qbar over [0, T].

    n is the number of uniform sample intervals (n + 1 samples); k is the
    clock smoothness order, giving controls of class C^(k-1) that vanish
    exactly at both ends.
    """
    if big_t <= 0.0:
        raise ValueError("duration must be positive")
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} sample intervals")
    dec, _, ss = plan_controls(qbar)
    t = np.linspace(0.0, big_t, n + 1)
    s, sd = smoothstep(t, big_t, k)
    u1, u2 = _rotated_controls(dec, ss, s)
    u1 *= sd
    u2 *= sd
    # sd vanishes identically at both ends; pin the exact zeros
    u1[0] = u1[-1] = 0.0
    u2[0] = u2[-1] = 0.0
    return PulseSchedule(t, u1, u2, target=qbar, interpolation=INTERP_LINEAR,
                         warp_order=k, eta_bar=dec.eta_bar, min_abs_z=ss.min_abs_z)


def unwarped_schedule(qbar: UnitQuaternion, n: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """The same plan sampled directly in virtual time on [0, 1] (no clock
    warp, endpoint controls nonzero); useful to check reparameterization
    invariance."""
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} sample intervals")
    dec, _, ss = plan_controls(qbar)
    s = np.linspace(0.0, 1.0, n + 1)
    u1, u2 = _rotated_controls(dec, ss, s)
    return PulseSchedule(s, u1, u2, target=qbar, interpolation=INTERP_LINEAR,
                         warp_order=None, eta_bar=dec.eta_bar, min_abs_z=ss.min_abs_z)


def rotate_controls(sched: PulseSchedule, eta: float) -> PulseSchedule:
    """Rotate the control pair by eta; steers to the eta-rotated target.

    If (u1, u2) steers 1 -> q then (cos(eta) u1 - sin(eta) u2,
    sin(eta) u1 + cos(eta) u2) steers 1 -> the target with its (q1, q2)
    components rotated by eta.
    """
    ce, se = math.cos(eta), math.sin(eta)
    u1 = ce * sched.u1 - se * sched.u2
    u2 = se * sched.u1 + ce * sched.u2
    p = sched.target
    target = UnitQuaternion(p.w, ce * p.x - se * p.y, se * p.x + ce * p.y, p.z)
    return PulseSchedule(sched.t, u1, u2, target=target,
                         interpolation=sched.interpolation,
                         warp_order=sched.warp_order, eta_bar=None,
                         min_abs_z=sched.min_abs_z)
