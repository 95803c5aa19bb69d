"""
Three-mode trilinear model

    H = w1 n_a + w2 n_b + w3 n_c + lam (a^dag b c e^{-i phi} + a b^dag c^dag e^{i phi})

and its two reductions to linear algebra Hamiltonians.

* su(1,1) on modes (b, c): K+ = b^dag c^dag, with n_a replaced by a c-number.
* su(2) on modes (a, b): J+ = b^dag a, J0 = (n_b - n_a)/2, with n_c replaced
  by a c-number.

Both conserve s_ab = n_a + n_b and s_ac = n_a + n_c, which cut the Fock
space into finite sectors.
"""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import MAX_COMPOSITE_DIM, SU11, SU2, build_boson_mode
from .diagonalizer import LinearHamiltonian
from .errors import EmptySector, HyperbolicSingularity, InvalidDimension, NoAdiabaticFixedPoint
from .lr_phases import DrivingProtocol, berry_phase_closed_form, energy_scale, phase_profile, _const, _zero

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TCParams:
    omega1: object
    omega2: object
    omega3: object
    lam: object
    phi: object
    period: float = 1.0
    winding: int = 0
    dphi: object = None
    frozen: bool = False

    @classmethod
    def constant_loop(cls, omega1, omega2, omega3, lam, period, winding=1, profile="linear", phi0=0.0):
        phi, dphi = phase_profile(profile, winding, period, phi0)
        return cls(
            _const(omega1), _const(omega2), _const(omega3), _const(lam), phi,
            float(period), int(winding), dphi=dphi, frozen=True,
        )

    def at(self, t):
        """(w1, w2, w3, lam, phi) at time t as floats."""
        return tuple(float(f(t)) for f in (self.omega1, self.omega2, self.omega3, self.lam, self.phi))

    def max_rates(self, samples=257):
        """Largest |d/dt| of each schedule on a uniform grid (reported only)."""
        t = np.linspace(0.0, self.period, samples)
        out = {}
        for name in ("omega1", "omega2", "omega3", "lam", "phi"):
            v = np.broadcast_to(getattr(self, name)(t), t.shape)
            out[name] = float(np.max(np.abs(np.gradient(v, t))))
        return out


@dataclass(frozen=True)
class SectorSpec:
    """Sector of fixed s_ab = n_a + n_b and s_ac = n_a + n_c."""

    s_ab: int
    s_ac: int

    def __post_init__(self):
        if self.s_ab < 0 or self.s_ac < 0:
            raise EmptySector(f"sector ({self.s_ab}, {self.s_ac}) has no states")

    @property
    def n_d(self):
        return self.s_ab - self.s_ac

    def states(self):
        """Occupations (n_a, n_b, n_c), ordered by n_a descending."""
        top = min(self.s_ab, self.s_ac)
        return [(na, self.s_ab - na, self.s_ac - na) for na in range(top, -1, -1)]


@dataclass(frozen=True)
class TCLabels:
    """Quantum numbers of one Fock state in the language of both reductions."""

    n_a: int
    n_b: int
    n_c: int

    @property
    def su11(self):
        """(n_l, m_n, k, n): n_l = min(n_b, n_c), m_n = n_c - n_b, k = (|m_n|+1)/2."""
        n_l = min(self.n_b, self.n_c)
        m_n = self.n_c - self.n_b
        return n_l, m_n, (abs(m_n) + 1) / 2, n_l

    @property
    def su2(self):
        """(n_l, m_n, j, mu): n_l = n_a, m_n = n_b - n_a, j = N_s/2, mu = m_n/2."""
        m_n = self.n_b - self.n_a
        return self.n_a, m_n, (self.n_a + self.n_b) / 2, m_n / 2

    @classmethod
    def from_su11(cls, n_a, n_l, m_n):
        n_b = n_l + max(0, -m_n)
        return cls(n_a, n_b, n_b + m_n)

    @classmethod
    def from_su2(cls, n_c, n_l, m_n):
        return cls(n_l, n_l + m_n, n_c)


def _three_mode_ops(dims):
    da, db, dc = (int(d) for d in dims)
    if min(da, db, dc) < 2:
        raise InvalidDimension("each mode needs dim >= 2")
    if da * db * dc > MAX_COMPOSITE_DIM:
        raise InvalidDimension(f"three-mode dimension {da * db * dc} exceeds {MAX_COMPOSITE_DIM}")
    modes = [build_boson_mode(d) for d in (da, db, dc)]
    eye = [m.identity for m in modes]

    def embed(op, slot):
        mats = list(eye)
        mats[slot] = op
        return np.kron(np.kron(mats[0], mats[1]), mats[2])

    return modes, embed


def build_trilinear_hamiltonian(params, dims, t):
    w1, w2, w3, lam, phi = params.at(t)
    modes, embed = _three_mode_ops(dims)
    a, b, c = modes
    h = w1 * embed(a.number, 0) + w2 * embed(b.number, 1) + w3 * embed(c.number, 2)
    hop = embed(a.raise_, 0) @ embed(b.lower, 1) @ embed(c.lower, 2)
    h = h + lam * (np.exp(-1j * phi) * hop + np.exp(1j * phi) * hop.conj().T)
    return h


def sector_indices(dims, sector):
    da, db, dc = dims
    idx = [
        (na * db + nb) * dc + nc
        for na, nb, nc in sector.states()
        if na < da and nb < db and nc < dc
    ]
    if not idx:
        raise EmptySector(f"sector ({sector.s_ab}, {sector.s_ac}) has no states within dims {tuple(dims)}")
    return np.array(idx)


def extract_sector(h, dims, sector):
    """(block, leakage): restriction of H to the sector and the norm of P H (1-P)."""
    idx = sector_indices(dims, sector)
    block = h[np.ix_(idx, idx)]
    mask = np.ones(h.shape[0], dtype=bool)
    mask[idx] = False
    leak = float(np.linalg.norm(h[np.ix_(idx, np.flatnonzero(mask))])) if mask.any() else 0.0
    return block, leak


def sector_hamiltonian(params, sector, t):
    """The sector block built directly from occupations, without the full space."""
    w1, w2, w3, lam, phi = params.at(t)
    states = sector.states()
    h = np.diag([w1 * na + w2 * nb + w3 * nc for na, nb, nc in states]).astype(np.complex128)
    # states are ordered by n_a descending: entry i+1 is a b^dag c^dag applied to entry i
    for i in range(len(states) - 1):
        na, nb, nc = states[i]
        amp = lam * math.sqrt(na * (nb + 1) * (nc + 1)) * np.exp(1j * phi)
        h[i + 1, i] = amp
        h[i, i + 1] = np.conj(amp)
    return h


def decompose_su11(params, t, n_a_reference):
    """Linear su(1,1) Hamiltonian with n_a frozen at ``n_a_reference``.

    Returns ``(H, offsets)`` with offsets ``{"n_d": (w2-w3)/2, "scalar": -(w2+w3)/2, "n_a": w1}``.
    """
    if n_a_reference < 1:
        raise ValueError("n_a_reference must be at least 1")
    w1, w2, w3, lam, phi = params.at(t)
    c1 = lam * math.sqrt(n_a_reference) * complex(math.cos(phi), math.sin(phi))
    return LinearHamiltonian(SU11, w2 + w3, c1), {"n_d": (w2 - w3) / 2, "scalar": -(w2 + w3) / 2, "n_a": w1}


def decompose_su2(params, t, n_c_reference):
    """Linear su(2) Hamiltonian with n_c frozen at ``n_c_reference``.

    Returns ``(H, offsets)`` with offsets ``{"n_s": (w1+w2)/2, "n_c": w3}``.
    """
    if n_c_reference < 1:
        raise ValueError("n_c_reference must be at least 1")
    w1, w2, w3, lam, phi = params.at(t)
    c1 = lam * math.sqrt(n_c_reference) * complex(math.cos(phi), math.sin(phi))
    return LinearHamiltonian(SU2, w2 - w1, c1), {"n_s": (w1 + w2) / 2, "n_c": w3}


def tc_protocol(branch, params, n_reference, frozen=True, samples=257):
    """Driving protocol of the reduced linear model.

    With ``frozen`` the frequencies and coupling are replaced by their loop
    averages; otherwise the full schedules are kept.
    """
    root = math.sqrt(n_reference)
    if branch == SU11:
        c0 = lambda t: params.omega2(t) + params.omega3(t)  # noqa: E731
    else:
        c0 = lambda t: params.omega2(t) - params.omega1(t)  # noqa: E731
    lam = lambda t: params.lam(t) * root  # noqa: E731
    if frozen or params.frozen:
        t = np.linspace(0.0, params.period, samples)
        c0_bar = float(np.mean(np.broadcast_to(c0(t), t.shape)))
        lam_bar = float(np.mean(np.broadcast_to(lam(t), t.shape)))
        return DrivingProtocol(
            branch, _const(c0_bar), _const(lam_bar), params.phi, params.period, params.winding,
            dc0=_zero, dlam=_zero, dphi=params.dphi, frozen=True,
        )
    return DrivingProtocol(branch, c0, lam, params.phi, params.period, params.winding, dphi=params.dphi)


def _check_su11(w2, w3, lam, n_a):
    if (w2 + w3) ** 2 <= 4.0 * lam * lam * n_a:
        raise HyperbolicSingularity(f"(w2+w3)^2 = {(w2 + w3) ** 2} must exceed 4 lam^2 n_a = {4 * lam * lam * n_a}")


def tc_dynamical_energy(branch, params, t, labels):
    w1, w2, w3, lam, _ = params.at(t)
    if branch == SU11:
        n_l, m_n, k, n = labels.su11
        _check_su11(w2, w3, lam, labels.n_a)
        scale = math.sqrt((w2 + w3) ** 2 - 4.0 * lam * lam * labels.n_a)
        return scale * (k + n) + w1 * labels.n_a + (w3 - w2) / 2 * m_n - (w2 + w3) / 2
    n_l, m_n, j, mu = labels.su2
    # signed like the su11 branch so mu keeps following the Fock label when w2 < w1
    scale = math.copysign(math.sqrt((w2 - w1) ** 2 + 4.0 * lam * lam * labels.n_c), w2 - w1)
    return scale * mu + (w1 + w2) * j + w3 * labels.n_c


def tc_berry_phase(branch, params, labels, mode="frozen"):
    """Berry phase of the tracked level; returns ``(value, printed_form)``.

    ``value`` is the loop integral -(weight) * (f(theta) - 1) dphi of the
    reduced model.  ``printed_form`` is the regrouped expression
    (2 n_l + m_n + 1) pi (c0 - S)/S (su11) or pi m_n (c0 - S)/S (su2) with
    S the diagonal scale, times the winding.
    """
    frozen = mode == "frozen"
    if mode not in ("frozen", "quadrature"):
        raise ValueError(f"unknown mode {mode!r}")
    if branch == SU11:
        n_l, m_n, k, n = labels.su11
        ref, label = labels.n_a, (k, n)
    else:
        n_l, m_n, j, mu = labels.su2
        ref, label = labels.n_c, (j, mu)
    proto = tc_protocol(branch, params, ref, frozen=frozen)
    try:
        value = berry_phase_closed_form(proto, label)
    except NoAdiabaticFixedPoint as exc:
        raise HyperbolicSingularity(str(exc)) from exc
    c0, lam = float(proto.c0(0.0)), float(proto.lam(0.0))
    s = float(energy_scale(branch, c0, lam))
    ratio = (c0 - s) / s
    count = (2 * n_l + abs(m_n) + 1) if branch == SU11 else m_n
    printed = count * ratio * math.pi * params.winding
    return value, printed
