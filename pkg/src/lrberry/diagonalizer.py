"""Closed-form diagonalization of linear su(1,1) and su(2) Hamiltonians."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import SU11, SU2
from .displacement import CoherentParams, transform_coefficients
from .errors import NoExactDiagonalization
from .linalg import eigh


@dataclass(frozen=True)
class LinearHamiltonian:
    """H = c0 X0 + c1 X+ + c2 X-; ``c2`` defaults to conj(c1)."""

    algebra: str
    c0: float
    c1: complex = 0.0
    c2: complex | None = None

    def __post_init__(self):
        if self.algebra not in (SU11, SU2):
            raise ValueError(f"unknown algebra {self.algebra!r}")
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))
        c2 = np.conj(self.c1) if self.c2 is None else self.c2
        object.__setattr__(self, "c2", complex(c2))

    @property
    def hermitian(self):
        return abs(self.c2 - self.c1.conjugate()) <= 1e-14 * max(1.0, abs(self.c1))

    def matrix(self, gens):
        return self.c0 * gens.x0 + self.c1 * gens.xplus + self.c2 * gens.xminus

    def coefficients(self):
        return np.array([self.c0, self.c1, self.c2], dtype=np.complex128)


@dataclass(frozen=True)
class DiagResult:
    params: CoherentParams
    energy_scale: float
    residual_offdiag: float


def _check_regime(h):
    r = abs(h.c1)
    if r == 0.0:
        return
    if h.c0 == 0.0 and h.algebra == SU11:
        raise NoExactDiagonalization("c0 = 0 with nonzero coupling has no exact diagonal form")
    if h.algebra == SU11 and h.c0**2 <= 4.0 * r * r:
        raise NoExactDiagonalization(f"su11 needs c0^2 > 4|c1|^2, got c0={h.c0}, |c1|={r}")


def solve_coherent_params(h):
    """(tau, phi) such that D^dag H D is proportional to X0."""
    _check_regime(h)
    r = abs(h.c1)
    if r == 0.0:
        return CoherentParams(0.0, 0.0)
    phi = -cmath.phase(h.c1)
    if h.algebra == SU11:
        tau = math.atanh(2.0 * r / h.c0)
    else:
        tau = math.atan2(2.0 * r, h.c0)
    return CoherentParams(tau, phi)


def diagonal_energy_scale(h):
    """Coefficient of X0 after diagonalization.

    Hermitian input gives a real number carrying the sign of c0 (su11) or a
    positive number (su2); other input gives the principal complex root.
    """
    if not h.hermitian:
        sign = -1.0 if h.algebra == SU11 else 1.0
        return complex(np.sqrt(complex(h.c0**2 + sign * 4.0 * h.c1 * h.c2)))
    _check_regime(h)
    r2 = abs(h.c1) ** 2
    if h.algebra == SU11:
        return math.copysign(math.sqrt(h.c0**2 - 4.0 * r2), h.c0)
    return math.sqrt(h.c0**2 + 4.0 * r2)


def transformed_coefficients(h, params):
    """(A0, A+, A-) or (B0, B+, B-) of D^dag H D."""
    return transform_coefficients(h.algebra, params, h.coefficients())


def diagonalize(h):
    params = solve_coherent_params(h)
    coeffs = transformed_coefficients(h, params)
    scale = diagonal_energy_scale(h)
    off = max(abs(coeffs[1]), abs(coeffs[2])) / max(abs(coeffs[0]), abs(h.c0), 1e-300)
    return DiagResult(params, scale, float(off))


def spectrum_check(h, rep):
    """Compare numeric eigenvalues of H with scale times the X0 weights."""
    if not h.hermitian:
        raise ValueError("spectrum_check requires a Hermitian Hamiltonian")
    scale = diagonal_energy_scale(h)
    evals = eigh(h.matrix(rep))[0]
    weights = np.sort(scale * rep.weights())
    if rep.algebra == SU11:
        n = rep.dim // 4
        if scale >= 0:
            got, want = np.sort(evals)[:n], weights[:n]
        else:
            got, want = np.sort(evals)[::-1][:n], weights[::-1][:n]
        dev = float(np.max(np.abs(got - want))) if n else 0.0
        return {"max_abs_dev": dev, "levels_compared": int(n)}
    dev = float(np.max(np.abs(np.sort(evals) - weights)))
    return {"max_abs_dev": dev, "levels_compared": int(rep.dim)}
