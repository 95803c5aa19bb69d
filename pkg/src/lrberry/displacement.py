"""Displacement operators and the closed-form transformed generators."""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .algebra import SU11
from .linalg import adjoint, expm, frobenius, restrict

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoherentParams:
    """Group parameters (tau, phi) with xi = -(tau/2) exp(-i phi)."""

    tau: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @property
    def xi(self):
        return -0.5 * self.tau * complex(math.cos(self.phi), -math.sin(self.phi))

    @classmethod
    def from_xi(cls, xi):
        xi = complex(xi)
        if xi == 0:
            return cls(0.0, 0.0)
        return cls(2.0 * abs(xi), -math.atan2(-xi.imag, -xi.real))


@dataclass(frozen=True)
class TransformCoeffs:
    algebra: str
    alpha: float = 0.0
    beta: float = 0.0
    delta: float = 0.0
    epsilon: float = 0.0

    @classmethod
    def from_params(cls, algebra, params):
        r = abs(params.xi)
        if algebra == SU11:
            return cls(algebra, alpha=math.sinh(2 * r), beta=0.5 * (math.cosh(2 * r) - 1.0))
        return cls(algebra, delta=math.sin(2 * r), epsilon=0.5 * (math.cos(2 * r) - 1.0))

    def identity_residual(self):
        if self.algebra == SU11:
            return abs((2 * self.beta + 1) ** 2 - self.alpha**2 - 1.0)
        return abs((2 * self.epsilon + 1) ** 2 + self.delta**2 - 1.0)


def displacement_operator(gens, params):
    """D(xi) = exp(xi X+ - xi* X-)."""
    xi = params.xi
    if xi == 0:
        return np.eye(gens.dim, dtype=np.complex128)
    return expm(xi * gens.xplus - np.conj(xi) * gens.xminus)


def transform_matrix(algebra, params):
    """3x3 table M with D^dag X_r D = sum_c M[r, c] X_c, order (X0, X+, X-)."""
    xi = params.xi
    if xi == 0:
        return np.eye(3, dtype=np.complex128)
    u = xi / abs(xi)
    tc = TransformCoeffs.from_params(algebra, params)
    if algebra == SU11:
        a, b, sign = tc.alpha, tc.beta, 1.0
    else:
        a, b, sign = tc.delta, tc.epsilon, -1.0
    ratio = np.conj(xi) / xi
    return np.array(
        [
            [2 * b + 1, a * u / 2, a * np.conj(u) / 2],
            [sign * np.conj(u) * a, b + 1, b * ratio],
            [sign * u * a, b * np.conj(ratio), b + 1],
        ],
        dtype=np.complex128,
    )


def transform_coefficients(algebra, params, coeffs):
    """Coefficients (c0', c+', c-') of D^dag (c0 X0 + c+ X+ + c- X-) D."""
    return np.asarray(coeffs, dtype=np.complex128) @ transform_matrix(algebra, params)


def transformed_generators_closed_form(gens, params):
    if params.xi == 0:
        return gens
    m = transform_matrix(gens.algebra, params)
    basis = (gens.x0, gens.xplus, gens.xminus)
    new = [sum(m[r, c] * basis[c] for c in range(3)) for r in range(3)]
    return gens.with_matrices(*new)


def _su11_padded_dim(k, kept_levels, tau):
    spread = 1.5 * (kept_levels + 2 * k) * math.exp(abs(tau))
    decay = math.tanh(abs(tau) / 2.0)
    return int(math.ceil(spread + 60.0 / -math.log(decay))) + 16


def _su11_conjugation_gap(gens, params, max_dim=16384):
    """Conjugation gap for a truncated su(1,1) irrep, free of edge effects.

    Only the columns D|n> for the compared levels are needed; they are
    obtained by acting with the exponential on a long sparse ladder, and the
    ladder is lengthened until the columns carry no weight near its end.
    """
    k = gens.spec.index
    idx = np.flatnonzero(gens.kept)
    n_cols = int(idx.max()) + 1
    dim = max(gens.dim, _su11_padded_dim(k, n_cols, params.tau))
    xi = params.xi
    while True:
        lvl = np.arange(dim, dtype=float)
        xp = sp.diags(np.sqrt((lvl[:-1] + 1) * (2 * k + lvl[:-1])), -1, format="csr", dtype=np.complex128)
        xm = xp.conj().T.tocsr()
        x0 = sp.diags(k + lvl, 0, format="csr", dtype=np.complex128)
        cols = np.zeros((dim, n_cols), dtype=np.complex128)
        cols[np.arange(n_cols), np.arange(n_cols)] = 1.0
        w = expm_multiply((xi * xp - np.conj(xi) * xm).tocsc(), cols)
        if np.linalg.norm(w[int(0.9 * dim):]) < 1e-13 or dim >= max_dim:
            break
        dim *= 2
    w = w[:, idx]
    m = transform_matrix(SU11, params)
    ops = (x0, xp, xm)
    small = [restrict(op[:n_cols, :n_cols].toarray(), idx) for op in ops]
    worst = 0.0
    for r in range(3):
        lhs = adjoint(w) @ (ops[r] @ w)
        rhs = sum(m[r, c] * small[c] for c in range(3))
        worst = max(worst, frobenius(lhs - rhs))
    return worst


def verify_similarity(gens, params):
    """Largest guarded Frobenius gap between D^dag X D and the closed form."""
    if params.xi == 0:
        return 0.0
    if gens.algebra == SU11 and gens.spec.realization == "irrep":
        return _su11_conjugation_gap(gens, params)
    d = displacement_operator(gens, params)
    dh = adjoint(d)
    closed = transformed_generators_closed_form(gens, params)
    worst = 0.0
    for x, xc in zip((gens.x0, gens.xplus, gens.xminus), (closed.x0, closed.xplus, closed.xminus)):
        worst = max(worst, frobenius(gens.guarded(dh @ x @ d - xc)))
    return worst
