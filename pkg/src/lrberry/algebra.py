"""
Finite matrix representations of su(2), su(1,1) and bosonic modes.

Basis conventions used everywhere downstream:

* bosons and su(1,1) irreps: number basis ascending, ``n = 0`` first;
* su(2) irreps: weight basis with ``mu`` descending, ``mu = j`` first;
* tensor products: row-major over the factors, so for two modes the state
  ``|n_b, n_c>`` sits at index ``n_b * d_c + n_c``.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidBargmannIndex, InvalidDimension, InvalidSpin
from .linalg import adjoint, commutator, frobenius, restrict

SU11 = "su11"
SU2 = "su2"
ALGEBRAS = (SU11, SU2)

MAX_COMPOSITE_DIM = 4096


@dataclass(frozen=True)
class RepSpec:
    """Which algebra, which irrep label, and how many basis states.

    ``index`` is the Bargmann index k for su(1,1) and the spin j for su(2).
    ``realization`` is ``"irrep"`` for the ladder matrices built directly and
    ``"two-mode"`` / ``"schwinger"`` for the bosonic composites, which are
    reducible and carry ``index=None``.
    """

    algebra: str
    index: float | None
    trunc_dim: int
    realization: str = "irrep"

    def __post_init__(self):
        if self.algebra not in ALGEBRAS:
            raise ValueError(f"unknown algebra {self.algebra!r}")
        if self.realization != "irrep":
            return
        if self.algebra == SU2:
            if self.trunc_dim != int(round(2 * self.index)) + 1:
                raise InvalidSpin("su2 dimension must equal 2j+1")
        else:
            if not self.index > 0:
                raise InvalidBargmannIndex(f"Bargmann index must be positive, got {self.index}")
            if self.trunc_dim < 2:
                raise InvalidDimension("su11 truncation needs at least two levels")


@dataclass(frozen=True)
class GeneratorSet:
    """Three matrices (X0, X+, X-) realizing one algebra.

    ``kept`` marks the basis states on which the algebra relations are
    trusted; for a truncated su(1,1) irrep that is everything below the top
    ``guard_band`` levels.
    """

    spec: RepSpec
    x0: np.ndarray
    xplus: np.ndarray
    xminus: np.ndarray
    guard_band: int = 0
    kept: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.kept is None:
            mask = np.zeros(self.dim, dtype=bool)
            mask[: self.dim - self.guard_band] = True
            object.__setattr__(self, "kept", mask)

    @property
    def algebra(self):
        return self.spec.algebra

    @property
    def dim(self):
        return self.x0.shape[0]

    def guarded(self, a):
        return restrict(a, self.kept)

    def commutator_residuals(self):
        """Guarded Frobenius residuals of the three defining relations."""
        x0, xp, xm = self.x0, self.xplus, self.xminus
        if self.algebra == SU2:
            lowering = commutator(xp, xm) - 2 * x0
        else:
            lowering = commutator(xm, xp) - 2 * x0
        return {
            "[X0,X+]-X+": frobenius(self.guarded(commutator(x0, xp) - xp)),
            "[X0,X-]+X-": frobenius(self.guarded(commutator(x0, xm) + xm)),
            "ladder": frobenius(self.guarded(lowering)),
        }

    def weights(self):
        """Diagonal of X0 as real numbers (k+n or mu)."""
        return np.real(np.diag(self.x0)).copy()

    def with_matrices(self, x0, xplus, xminus):
        return replace(self, x0=x0, xplus=xplus, xminus=xminus)


@dataclass(frozen=True)
class ModeOperators:
    """Truncated annihilation/creation pair for one bosonic mode."""

    dim: int
    lower: np.ndarray
    raise_: np.ndarray

    @property
    def number(self):
        return np.diag(np.arange(self.dim, dtype=np.complex128))

    @property
    def identity(self):
        return np.eye(self.dim, dtype=np.complex128)


def _half_integer(j):
    two_j = 2.0 * float(j)
    if not math.isfinite(two_j) or abs(two_j - round(two_j)) > 1e-12 or round(two_j) < 1:
        raise InvalidSpin(f"spin must be a positive half-integer, got {j!r}")
    return round(two_j) / 2.0


def build_su2_rep(j):
    j = _half_integer(j)
    dim = int(round(2 * j)) + 1
    mu = j - np.arange(dim)
    x0 = np.diag(mu).astype(np.complex128)
    # raising takes index i (weight mu_i) to index i-1
    lower_mu = mu[1:]
    xplus = np.diag(np.sqrt((j - lower_mu) * (j + lower_mu + 1)), 1).astype(np.complex128)
    return GeneratorSet(RepSpec(SU2, j, dim), x0, xplus, adjoint(xplus).copy())


def default_guard_band(trunc_dim):
    return math.ceil(trunc_dim / 8)


def build_su11_rep(k, trunc_dim, guard_band=None):
    k = float(k)
    if not k > 0:
        raise InvalidBargmannIndex(f"Bargmann index must be positive, got {k}")
    trunc_dim = int(trunc_dim)
    spec = RepSpec(SU11, k, trunc_dim)
    n = np.arange(trunc_dim, dtype=float)
    x0 = np.diag(k + n).astype(np.complex128)
    xplus = np.diag(np.sqrt((n[:-1] + 1) * (2 * k + n[:-1])), -1).astype(np.complex128)
    if guard_band is None:
        guard_band = default_guard_band(trunc_dim)
    return GeneratorSet(spec, x0, xplus, adjoint(xplus).copy(), guard_band=int(guard_band))


def build_boson_mode(dim):
    dim = int(dim)
    if dim < 2:
        raise InvalidDimension(f"a bosonic mode needs dim >= 2, got {dim}")
    lower = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(np.complex128)
    return ModeOperators(dim, lower, adjoint(lower).copy())


def _check_product_dim(*dims):
    total = int(np.prod(dims))
    if total > MAX_COMPOSITE_DIM:
        raise InvalidDimension(f"tensor product dimension {total} exceeds {MAX_COMPOSITE_DIM}")
    return total


def compose_two_mode_su11(mode_b, mode_c, guard=1):
    """su(1,1) on two modes: K+ = b^dag c^dag, K0 = (n_b + n_c + 1)/2.

    Returns the generator set together with N_d = n_b - n_c.  States with
    either occupation in the top ``guard`` levels are excluded from ``kept``.
    """
    db, dc = mode_b.dim, mode_c.dim
    total = _check_product_dim(db, dc)
    ib, ic = mode_b.identity, mode_c.identity
    nb, nc = mode_b.number, mode_c.number
    kplus = np.kron(mode_b.raise_, mode_c.raise_)
    kminus = np.kron(mode_b.lower, mode_c.lower)
    k0 = 0.5 * (np.kron(nb, ic) + np.kron(ib, nc) + np.eye(total))
    n_d = np.kron(nb, ic) - np.kron(ib, nc)
    occ_b, occ_c = np.divmod(np.arange(total), dc)
    kept = (occ_b < db - guard) & (occ_c < dc - guard)
    gens = GeneratorSet(RepSpec(SU11, None, total, "two-mode"), k0, kplus, kminus, guard_band=0, kept=kept)
    return gens, n_d


def compose_schwinger_su2(mode_a, mode_b):
    """Schwinger su(2): J+ = a^dag b, J0 = (n_a - n_b)/2, with N_s = n_a + n_b.

    Every block of fixed N_s below min(d_a, d_b) is an exact spin-N_s/2
    irrep, so ``kept`` marks exactly those states.
    """
    da, db = mode_a.dim, mode_b.dim
    total = _check_product_dim(da, db)
    ia, ib = mode_a.identity, mode_b.identity
    na, nb = mode_a.number, mode_b.number
    jplus = np.kron(mode_a.raise_, mode_b.lower)
    jminus = np.kron(mode_a.lower, mode_b.raise_)
    j0 = 0.5 * (np.kron(na, ib) - np.kron(ia, nb))
    n_s = np.kron(na, ib) + np.kron(ia, nb)
    occ_a, occ_b = np.divmod(np.arange(total), db)
    kept = (occ_a + occ_b) <= min(da, db) - 1
    gens = GeneratorSet(RepSpec(SU2, None, total, "schwinger"), j0, jplus, jminus, guard_band=0, kept=kept)
    return gens, n_s


def block_indices(conserved, value, order_by=None, descending=False):
    """Basis indices where the diagonal operator ``conserved`` equals ``value``.

    ``order_by`` is an optional diagonal operator used to sort the block.
    """
    diag = np.real(np.diag(conserved))
    idx = np.flatnonzero(np.abs(diag - value) < 1e-9)
    if order_by is not None:
        key = np.real(np.diag(order_by))[idx]
        perm = np.argsort(-key if descending else key, kind="stable")
        idx = idx[perm]
    return idx


def extract_block(gens, idx):
    """Restrict a composite generator set to the basis states ``idx``."""
    sub = [restrict(m, idx) for m in (gens.x0, gens.xplus, gens.xminus)]
    spec = RepSpec(gens.algebra, None, len(idx), gens.spec.realization)
    return GeneratorSet(spec, *sub, guard_band=0, kept=np.asarray(gens.kept)[idx])
