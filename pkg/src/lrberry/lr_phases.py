"""
Lewis-Riesenfeld invariants and the phases of their eigenstates.

The Hamiltonian family is H(t) = c0(t) X0 + lam(t) (e^{i phi(t)} X+ + h.c.).
The invariant is parametrized by (theta, gamma) through
xi = -(theta/2) exp(-i gamma), and its eigenstates are D(xi)|basis>.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from . import kernels
from .algebra import SU11, SU2
from .displacement import CoherentParams, transform_coefficients
from .errors import AuxiliarySingularity, NoAdiabaticFixedPoint
from .linalg import commutator, frobenius

TWO_PI = 2.0 * math.pi


def _const(value):
    return lambda t: np.full(np.shape(t), float(value)) if np.ndim(t) else float(value)


def _zero(t):
    return np.zeros(np.shape(t)) if np.ndim(t) else 0.0


def schedule(kind, base, amp=0.0, period=1.0):
    """Return (f, df) for a scalar schedule of the given kind.

    ``constant``: base; ``linear-ramp``: base + amp t/period;
    ``sinusoid``: base + amp sin(2 pi t/period).
    """
    base, amp, period = float(base), float(amp), float(period)
    if kind == "constant" or amp == 0.0:
        return _const(base), _zero
    if kind == "linear-ramp":
        return (lambda t: base + amp * np.asarray(t) / period), _const(amp / period)
    if kind == "sinusoid":
        w = TWO_PI / period
        return (lambda t: base + amp * np.sin(w * np.asarray(t))), (lambda t: amp * w * np.cos(w * np.asarray(t)))
    raise ValueError(f"unknown schedule kind {kind!r}")


def phase_profile(kind, winding, period, phi0=0.0):
    """Monotone phase ramp with net change 2 pi winding over one period.

    ``linear`` advances uniformly; ``sinusoid`` adds the reparametrization
    t -> t - (T/2pi) sin(2pi t/T), which keeps the endpoints fixed.
    """
    w, big_t, phi0 = float(winding), float(period), float(phi0)
    rate = TWO_PI * w / big_t
    if kind == "linear":
        return (lambda t: phi0 + rate * np.asarray(t)), _const(rate)
    if kind == "sinusoid":
        om = TWO_PI / big_t
        return (
            lambda t: phi0 + rate * (np.asarray(t) - np.sin(om * np.asarray(t)) / om),
            lambda t: rate * (1.0 - np.cos(om * np.asarray(t))),
        )
    raise ValueError(f"unknown phase profile {kind!r}")


@dataclass(frozen=True)
class DrivingProtocol:
    """Coefficient schedules c0(t), lam(t), phi(t) over one period T.

    Derivative callables are optional; missing ones fall back to central
    differences.  ``frozen`` marks c0 and lam as constant over the loop.
    """

    algebra: str
    c0: object
    lam: object
    phi: object
    period: float
    winding: int = 0
    dc0: object = None
    dlam: object = None
    dphi: object = None
    frozen: bool = False
    samples: int = 257

    def __post_init__(self):
        if self.algebra not in (SU11, SU2):
            raise ValueError(f"unknown algebra {self.algebra!r}")
        if not self.period > 0:
            raise ValueError("period must be positive")
        t = self.grid(self.samples)
        for name in ("c0", "lam", "phi"):
            if not np.all(np.isfinite(getattr(self, name)(t))):
                raise ValueError(f"schedule {name} is not finite on [0, T]")
        turn = (float(self.phi(self.period)) - float(self.phi(0.0))) / TWO_PI
        if abs(turn - self.winding) > 1e-9:
            raise ValueError(f"phi winds {turn:.6g} times but winding={self.winding}")

    @classmethod
    def constant_loop(cls, algebra, c0, lam, period, winding=1, profile="linear", phi0=0.0):
        phi, dphi = phase_profile(profile, winding, period, phi0)
        return cls(
            algebra, _const(c0), _const(lam), phi, float(period), int(winding),
            dc0=_zero, dlam=_zero, dphi=dphi, frozen=True,
        )

    def grid(self, n):
        return np.linspace(0.0, self.period, n)

    def _diff(self, f, df, t):
        if df is not None:
            return df(t)
        h = 1e-6 * self.period
        return (f(np.asarray(t) + h) - f(np.asarray(t) - h)) / (2 * h)

    def rates(self, t):
        """(dc0/dt, dlam/dt, dphi/dt) at t."""
        return (
            self._diff(self.c0, self.dc0, t),
            self._diff(self.lam, self.dlam, t),
            self._diff(self.phi, self.dphi, t),
        )

    def coefficients(self, t):
        """(c0, c1, c2) with c1 = lam e^{i phi} and c2 = conj(c1)."""
        c1 = self.lam(t) * np.exp(1j * self.phi(t))
        return np.array([self.c0(t), c1, np.conj(c1)], dtype=np.complex128)

    def hamiltonian(self, gens, t):
        c0, c1, c2 = self.coefficients(t)
        return c0.real * gens.x0 + c1 * gens.xplus + c2 * gens.xminus

    @property
    def hyperbolic(self):
        return self.algebra == SU11

    def check_admissible(self):
        """su(1,1) adiabatic regime: |c0| > 2|lam| on the sample grid."""
        if not self.hyperbolic:
            return
        t = self.grid(self.samples)
        if np.any(np.abs(self.c0(t)) <= 2.0 * np.abs(self.lam(t))):
            raise NoAdiabaticFixedPoint("su11 protocol leaves the region |c0| > 2|lam|")


@dataclass(frozen=True)
class AuxiliaryState:
    theta: float
    gamma: float

    @property
    def params(self):
        return CoherentParams(self.theta, self.gamma)


@dataclass(frozen=True)
class AuxTrajectory:
    protocol: DrivingProtocol
    t: np.ndarray
    theta: np.ndarray
    gamma: np.ndarray
    steps: int = field(default=0)

    def __len__(self):
        return self.t.size

    def state(self, i):
        return AuxiliaryState(float(self.theta[i]), float(self.gamma[i]))

    def rates(self):
        """(dtheta/dt, dgamma/dt) from the auxiliary equations at each sample."""
        return auxiliary_rhs(self.protocol, self.t, self.theta, self.gamma)


@dataclass(frozen=True)
class PhaseBreakdown:
    total: float
    dynamical: float
    geometric: float
    state_label: tuple


def label_weight(algebra, state_label):
    """X0 eigenvalue of the tracked basis state: k+n for su11, mu for su2."""
    a, b = state_label
    return float(a) + float(b) if algebra == SU11 else float(b)


def basis_index(algebra, state_label):
    a, b = state_label
    return int(b) if algebra == SU11 else int(round(float(a) - float(b)))


def _fg(algebra, theta):
    if algebra == SU11:
        return np.cosh(theta), np.sinh(theta)
    return np.cos(theta), np.sin(theta)


def invariant_matrix(gens, aux):
    f, g = _fg(gens.algebra, aux.theta)
    off = 0.5 * g * np.exp(-1j * aux.gamma)
    return f * gens.x0 + off * gens.xplus + np.conj(off) * gens.xminus


def auxiliary_rhs(protocol, t, theta, gamma):
    c0, lam, phi = protocol.c0(t), protocol.lam(t), protocol.phi(t)
    arg = phi + gamma
    dtheta = -2.0 * lam * np.sin(arg)
    f, g = _fg(protocol.algebra, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        dgamma = np.where(np.abs(g) < kernels.SINGULAR_EPS, c0, c0 - 2.0 * lam * np.cos(arg) * f / g)
    return dtheta, dgamma


def _rk4_step(protocol, t, theta, gamma, h):
    def rhs(tt, th, ga):
        return kernels._aux_rhs(
            float(protocol.c0(tt)), float(protocol.lam(tt)), float(protocol.phi(tt)), th, ga, protocol.hyperbolic
        )

    k1t, k1g, ok1 = rhs(t, theta, gamma)
    k2t, k2g, ok2 = rhs(t + h / 2, theta + h / 2 * k1t, gamma + h / 2 * k1g)
    k3t, k3g, ok3 = rhs(t + h / 2, theta + h / 2 * k2t, gamma + h / 2 * k2g)
    k4t, k4g, ok4 = rhs(t + h, theta + h * k3t, gamma + h * k3g)
    if not (ok1 and ok2 and ok3 and ok4):
        raise AuxiliarySingularity(f"theta reached zero with nonzero coupling near t={t:g}")
    return (
        theta + h * (k1t + 2 * k2t + 2 * k3t + k4t) / 6,
        gamma + h * (k1g + 2 * k2g + 2 * k3g + k4g) / 6,
    )


def integrate_auxiliary(protocol, init, steps):
    """Fixed-step RK4 solution of the auxiliary equations over [0, T]."""
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be positive")
    h = protocol.period / steps
    half = np.linspace(0.0, protocol.period, 2 * steps + 1)
    theta, gamma, fail = kernels.rk4_auxiliary(
        protocol.c0(half) * np.ones_like(half),
        protocol.lam(half) * np.ones_like(half),
        protocol.phi(half) * np.ones_like(half),
        init.theta,
        init.gamma,
        h,
        protocol.hyperbolic,
    )
    if fail >= 0:
        raise AuxiliarySingularity(f"theta reached zero with nonzero coupling at step {fail}")
    return AuxTrajectory(protocol, half[::2].copy(), theta, gamma, steps)


def adiabatic_fixed_point(protocol, t, branch=1):
    """Stationary (theta, gamma) of the auxiliary equations at frozen time t."""
    c0, lam, phi = float(protocol.c0(t)), float(protocol.lam(t)), float(protocol.phi(t))
    sign = -1.0 if branch % 2 else 1.0
    if protocol.hyperbolic:
        if not abs(c0) > 2.0 * abs(lam):
            raise NoAdiabaticFixedPoint(f"|c0|={abs(c0)} must exceed 2|lam|={2 * abs(lam)}")
        theta = math.atanh(sign * 2.0 * lam / c0)
    else:
        theta = math.atan2(sign * 2.0 * lam, c0)
    return AuxiliaryState(theta, branch * math.pi - phi)


def invariance_residual(gens, traj, t, protocol=None):
    """Guarded Frobenius norm of i dI/dt + [I, H] at time t.

    The state at t is reached from the nearest stored sample with one RK4
    step; dI/dt is a central difference with step T * 1e-6.
    """
    protocol = protocol or traj.protocol
    i = int(np.argmin(np.abs(traj.t - t)))
    th, ga = float(traj.theta[i]), float(traj.gamma[i])
    if traj.t[i] != t:
        th, ga = _rk4_step(protocol, float(traj.t[i]), th, ga, float(t - traj.t[i]))
    h = protocol.period * 1e-6
    fwd = _rk4_step(protocol, t, th, ga, h)
    bwd = _rk4_step(protocol, t, th, ga, -h)
    di = (invariant_matrix(gens, AuxiliaryState(*fwd)) - invariant_matrix(gens, AuxiliaryState(*bwd))) / (2 * h)
    inv = invariant_matrix(gens, AuxiliaryState(th, ga))
    return frobenius(gens.guarded(1j * di + commutator(inv, protocol.hamiltonian(gens, t))))


def hamiltonian_norm(gens, protocol, t):
    return frobenius(gens.guarded(protocol.hamiltonian(gens, t)))


def total_phase_integrand(protocol, t, theta, gamma, dgamma, weight):
    """Per-unit-time LR phase of the eigenstate with X0 eigenvalue ``weight``."""
    c0, lam, phi = protocol.c0(t), protocol.lam(t), protocol.phi(t)
    f, g = _fg(protocol.algebra, theta)
    cross = 2.0 * lam * np.cos(gamma + phi) * g
    if protocol.algebra == SU2:
        cross = -cross
    return weight * ((dgamma - c0) * (f - 1.0) + cross - c0)


def time_derivative_coefficients(algebra, theta, gamma, dtheta, dgamma):
    """Coefficients of D^dag (i d/dt) D - i d/dt on (X0, X+, X-)."""
    f, g = _fg(algebra, theta)
    up = -0.5 * np.exp(-1j * gamma) * (dgamma * g + 1j * dtheta)
    down = -0.5 * np.exp(1j * gamma) * (dgamma * g - 1j * dtheta)
    return np.array([dgamma * (f - 1.0), up, down], dtype=np.complex128)


def lr_total_phase(gens, protocol, traj, state_label, method="closed"):
    """Integral of <state|(i d/dt - H)|state> along the trajectory.

    ``closed`` uses the scalar integrand; ``matrix`` forms the transformed
    operator D^dag (i d/dt - H) D and reads off its diagonal element.
    """
    algebra = protocol.algebra
    dtheta, dgamma = traj.rates()
    if method == "closed":
        w = label_weight(algebra, state_label)
        vals = total_phase_integrand(protocol, traj.t, traj.theta, traj.gamma, dgamma, w)
    elif method == "matrix":
        b = basis_index(algebra, state_label)
        vals = np.empty(traj.t.size)
        for i, t in enumerate(traj.t):
            params = CoherentParams(traj.theta[i], traj.gamma[i])
            h_coef = transform_coefficients(algebra, params, protocol.coefficients(t))
            d_coef = time_derivative_coefficients(algebra, traj.theta[i], traj.gamma[i], dtheta[i], dgamma[i])
            c = d_coef - h_coef
            op = c[0] * gens.x0 + c[1] * gens.xplus + c[2] * gens.xminus
            vals[i] = op[b, b].real
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(simpson(vals, x=traj.t))


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=48):
    """Adaptive Simpson quadrature with Richardson correction."""

    def simp(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    total = 0.0
    stack = [(a, b, fa, fm, fb, simp(fa, fm, fb, a, b), tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simp(fa, flm, fm, a, m)
        right = simp(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, eps / 2, depth + 1))
            stack.append((m, b, fm, frm, fb, right, eps / 2, depth + 1))
    return total


def energy_scale(algebra, c0, lam):
    """Instantaneous diagonal scale: sign(c0) sqrt(c0^2-4lam^2) or sqrt(c0^2+4lam^2)."""
    if algebra == SU11:
        return np.sign(c0) * np.sqrt(c0 * c0 - 4.0 * lam * lam)
    return np.sqrt(c0 * c0 + 4.0 * lam * lam)


def adiabatic_dynamical_phase(protocol, state_label, tol=1e-10):
    protocol.check_admissible()
    w = label_weight(protocol.algebra, state_label)

    def rate(t):
        return float(energy_scale(protocol.algebra, float(protocol.c0(t)), float(protocol.lam(t))))

    if protocol.frozen:
        return -w * rate(0.0) * protocol.period
    return -w * adaptive_simpson(rate, 0.0, protocol.period, tol)


def tilt_factor(algebra, c0, lam):
    """cosh(theta) or cos(theta) at the adiabatic fixed point."""
    return c0 / energy_scale(algebra, c0, lam)


def berry_phase_closed_form(protocol, state_label, tol=1e-10):
    """-(weight) * loop integral of (f(theta) - 1) dphi.

    The minus sign is the orientation produced by H containing e^{+i phi} X+:
    the eigenstates are transported around the loop with angle -phi.
    """
    protocol.check_admissible()
    w = label_weight(protocol.algebra, state_label)
    alg = protocol.algebra

    def tilt(t):
        return float(tilt_factor(alg, float(protocol.c0(t)), float(protocol.lam(t)))) - 1.0

    if protocol.frozen:
        sweep = float(protocol.phi(protocol.period)) - float(protocol.phi(0.0))
        return -w * tilt(0.0) * sweep + 0.0
    return -w * adaptive_simpson(lambda t: tilt(t) * float(protocol.rates(t)[2]), 0.0, protocol.period, tol) + 0.0


def lr_breakdown(protocol, state_label, steps, branch=1, gens=None, method="closed"):
    """Total LR phase along the trajectory started at the fixed point, split
    into the adiabatic dynamical phase and the remainder."""
    init = adiabatic_fixed_point(protocol, 0.0, branch)
    traj = integrate_auxiliary(protocol, init, steps)
    total = lr_total_phase(gens, protocol, traj, state_label, method)
    dyn = adiabatic_dynamical_phase(protocol, state_label)
    return PhaseBreakdown(total, dyn, total - dyn, tuple(state_label))
