"""Number coherent states by series and by displacement; grid wavefunctions."""

import cmath
import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.special import gammaln

from . import kernels
from .algebra import SU11, SU2, RepSpec
from .errors import InvalidWeight, SeriesNotConverged, TanPole

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class NumberCoherentState:
    spec: RepSpec
    zeta: complex
    eta: float
    base_label: int
    amplitudes: np.ndarray

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class PolarGrid:
    """Samples of a field on a (rho, angle) tensor grid.

    ``field`` has shape ``(len(rho), len(angle))`` once evaluated.
    """

    rho: np.ndarray
    angle: np.ndarray
    n_l: int = 0
    m_n: int = 0
    field: np.ndarray | None = None

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        if rho.ndim != 1 or np.any(rho < 0) or np.any(np.diff(rho) <= 0):
            raise ValueError("rho grid must be nonnegative and strictly increasing")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "angle", np.asarray(self.angle, dtype=float))

    @classmethod
    def uniform(cls, rho_max, n_rho, n_angle, n_l=0, m_n=0):
        rho = np.linspace(0.0, rho_max, n_rho)
        angle = np.linspace(0.0, 2 * math.pi, n_angle, endpoint=False)
        return cls(rho, angle, n_l, m_n)

    def with_field(self, values):
        return PolarGrid(self.rho, self.angle, self.n_l, self.m_n, np.asarray(values, dtype=np.complex128))

    def norm(self):
        """Quadrature of |psi|^2 rho drho dangle (Simpson in rho, uniform angle)."""
        dens = np.abs(self.field) ** 2
        d_angle = 2 * math.pi / len(self.angle)
        radial = dens.sum(axis=1) * d_angle
        return float(simpson(radial * self.rho, x=self.rho))

    def rows(self):
        for i, r in enumerate(self.rho):
            for j, a in enumerate(self.angle):
                v = self.field[i, j]
                yield r, a, v.real, v.imag, abs(v) ** 2

    def to_csv(self, fh=None):
        """CSV with columns rho, angle, re, im, abs2; returns text if no handle."""
        own = fh is None
        fh = io.StringIO() if own else fh
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rho", "angle", "re", "im", "abs2"])
        for row in self.rows():
            w.writerow(["%.17g" % x for x in row])
        return fh.getvalue() if own else None


def zeta_from_params(algebra, params):
    """(zeta, eta) of the disentangled form of D(xi)."""
    tau, phi = params.tau, params.phi
    if tau == 0.0:
        return 0j, 0.0
    rot = cmath.exp(-1j * phi)
    if algebra == SU11:
        zeta = -math.tanh(tau / 2) * rot
        return zeta, math.log1p(-abs(zeta) ** 2)
    half = tau / 2
    if abs(math.cos(half)) < 1e-12:
        raise TanPole(f"tan(tau/2) diverges at tau={tau}")
    zeta = -math.tan(half) * rot
    return zeta, math.log1p(abs(zeta) ** 2)


def pncs_su11_series(k, n, zeta, trunc_dim):
    k, n, zeta = float(k), int(n), complex(zeta)
    spec = RepSpec(SU11, k, int(trunc_dim))
    if not abs(zeta) < 1:
        raise ValueError("su11 coherent states need |zeta| < 1")
    if not 0 <= n < trunc_dim:
        raise ValueError(f"level n={n} outside 0..{trunc_dim - 1}")
    eta = math.log1p(-abs(zeta) ** 2)
    if zeta == 0:
        amps = np.zeros(trunc_dim, dtype=np.complex128)
        amps[n] = 1.0
        return NumberCoherentState(spec, zeta, eta, n, amps)
    amps, stop = kernels.pncs_su11(k, n, abs(zeta), cmath.phase(zeta), eta, trunc_dim)
    tail = 1.0 - float(np.vdot(amps, amps).real)
    if stop >= trunc_dim and tail > TAIL_TOL:
        raise SeriesNotConverged(f"tail weight {tail:.3g} beyond {trunc_dim} levels")
    amps = amps / np.linalg.norm(amps)
    return NumberCoherentState(spec, zeta, eta, n, amps)


def _check_weight(j, mu):
    two_j, two_mu = 2 * j, 2 * mu
    if (
        abs(two_j - round(two_j)) > 1e-12
        or round(two_j) < 1
        or abs(two_mu - round(two_mu)) > 1e-12
        or abs(mu) > j + 1e-12
        or abs((j - mu) - round(j - mu)) > 1e-12
    ):
        raise InvalidWeight(f"(j, mu) = ({j}, {mu}) is not a valid weight")
    return round(two_j) / 2, round(two_mu) / 2


def pncs_su2_series(j, mu, zeta):
    j, mu = _check_weight(float(j), float(mu))
    zeta = complex(zeta)
    dim = int(round(2 * j)) + 1
    spec = RepSpec(SU2, j, dim)
    eta = math.log1p(abs(zeta) ** 2)
    base = int(round(j - mu))
    if zeta == 0:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[base] = 1.0
        return NumberCoherentState(spec, zeta, eta, base, amps)
    if abs(zeta) > 1.0:
        # the alternating sum cancels badly past the equator; rotate by pi
        # first, which maps mu -> -mu and zeta -> -1/conj(zeta)
        flip = -1.0 / zeta.conjugate()
        amps = kernels.pncs_su2(j, -mu, abs(flip), cmath.phase(flip), math.log1p(abs(flip) ** 2))
        amps = amps * ((-1) ** round(j - mu) * (-zeta.conjugate() / abs(zeta)) ** round(2 * mu))
    else:
        amps = kernels.pncs_su2(j, mu, abs(zeta), cmath.phase(zeta), eta)
    amps = amps / np.linalg.norm(amps)
    return NumberCoherentState(spec, zeta, eta, base, amps)


def gauge_fix(vec):
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    vec = np.asarray(vec, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(vec) > 1e-14 * max(np.abs(vec).max(), 1e-300))
    if nz.size == 0:
        return vec
    a = vec[nz[0]]
    return vec * (abs(a) / a)


def oscillator_mode(n_r, m, rho, angle):
    """Normalized 2D oscillator eigenfunction with radial number n_r, angular m."""
    am = abs(m)
    rho = np.asarray(rho, dtype=float)[:, None]
    norm = math.exp(0.5 * (gammaln(n_r + 1) - gammaln(n_r + am + 1))) / math.sqrt(math.pi)
    radial = norm * rho**am * np.exp(-(rho**2) / 2) * kernels.laguerre(n_r, am, rho**2)
    return radial * np.exp(1j * m * np.asarray(angle, dtype=float))[None, :]


def evaluate_su11_wavefunction(n_l, m_n, zeta, grid):
    n_l, m_n, zeta = int(n_l), int(m_n), complex(zeta)
    if n_l < 0 or m_n < 0:
        raise ValueError("labels n_l and m_n must be nonnegative")
    if not abs(zeta) < 1:
        raise ValueError("|zeta| must be below 1")
    rho = grid.rho[:, None]
    ang = grid.angle[None, :]
    one_m = 1.0 - zeta
    shrink = 1.0 - abs(zeta) ** 2
    pref = math.exp(0.5 * (gammaln(n_l + 1) - gammaln(n_l + m_n + 1))) / math.sqrt(math.pi)
    pref *= ((1.0 - zeta.conjugate()) / one_m) ** n_l
    pref *= shrink ** ((m_n + 1) / 2) / one_m ** (m_n + 1)
    x = (grid.rho**2) * shrink / abs(one_m) ** 2
    lag = kernels.laguerre(n_l, m_n, x)[:, None]
    gauss = np.exp(-(rho**2) * (1.0 + zeta) / (2.0 * one_m))
    field = pref * np.exp(1j * m_n * ang) * gauss * rho**m_n * lag
    return PolarGrid(grid.rho, grid.angle, n_l, m_n, field)


def _lowered_power_laguerre(r, p, rho):
    """rho^p L_r^(p)(rho^2) for any integer p, using the reflection for p < 0."""
    x = rho**2
    if p >= 0:
        return rho**p * kernels.laguerre(r, p, x)
    q = -p
    factor = (-1) ** q * math.exp(gammaln(r - q + 1) - gammaln(r + 1))
    return factor * rho**q * kernels.laguerre(r - q, q, x)


def evaluate_su2_wavefunction(n_l, m_n, zeta, grid):
    """Double sum over (n, s) of Laguerre modes; j = n_l + m_n/2, mu = m_n/2."""
    n_l, m_n, zeta = int(n_l), int(m_n), complex(zeta)
    if n_l < 0 or m_n < 0:
        raise ValueError("labels n_l and m_n must be nonnegative")
    eta = math.log1p(abs(zeta) ** 2)
    rho = grid.rho
    ang = grid.angle[None, :]
    head = 0.5 * (gammaln(n_l + m_n + 1) - gammaln(n_l + 1))
    field = np.zeros((rho.size, grid.angle.size), dtype=np.complex128)
    for n in range(n_l + m_n + 1):
        cn = (-zeta.conjugate()) ** n / math.factorial(n) * math.exp(0.5 * eta * (m_n - 2 * n))
        cn *= math.exp(gammaln(n_l + n + 1) - gammaln(n_l + m_n - n + 1) + head)
        for s in range(n_l + n + 1):
            mp = m_n - 2 * n + 2 * s
            r = n_l + n - s
            coef = cn * zeta**s / math.factorial(s) * (-1) ** r
            radial = _lowered_power_laguerre(r, mp, rho)[:, None]
            field += coef * radial * np.exp(1j * mp * ang)
    field *= np.exp(-(rho**2) / 2)[:, None] / math.sqrt(math.pi)
    return PolarGrid(grid.rho, grid.angle, n_l, m_n, field)
