"""Dense complex-matrix substrate: products, commutators, norms, exponential."""

import math

import numpy as np

from .errors import ExpNotConverged, InvalidDimension

# scaled-matrix 1-norm bound for the Taylor kernel
_TAYLOR_RADIUS = 0.5
_MAX_TERMS = 60


def as_complex_matrix(a):
    """Return ``a`` as a square, finite complex128 array or raise."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidDimension(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def adjoint(a):
    return np.conj(np.asarray(a)).T


def commutator(a, b):
    return a @ b - b @ a


def frobenius(a):
    return float(np.linalg.norm(a, "fro"))


def norm1(a):
    return float(np.max(np.sum(np.abs(a), axis=0))) if a.size else 0.0


def restrict(a, kept):
    """Sub-block of ``a`` on the basis states selected by ``kept``.

    ``kept`` is either a boolean mask or an integer count of leading levels.
    """
    if isinstance(kept, (int, np.integer)):
        return a[:kept, :kept]
    kept = np.asarray(kept)
    if kept.dtype == bool:
        idx = np.flatnonzero(kept)
    else:
        idx = kept
    return a[np.ix_(idx, idx)]


def is_hermitian(a, atol=1e-12):
    return bool(np.allclose(a, adjoint(a), atol=atol, rtol=0.0))


# Pade degrees and the 1-norm bounds below which each is accurate to
# double precision
_PADE_THETA = ((3, 1.495585217958292e-2), (5, 2.539398330063230e-1), (7, 9.504178996162932e-1),
               (9, 2.097847961257068e0), (13, 5.371920351148152e0))
_PADE_B = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0,
        90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
         129060195264000.0, 10559470521600.0, 670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
         960960.0, 16380.0, 182.0, 1.0),
}


def _pade(a, m, ident):
    b = _PADE_B[m]
    a2 = a @ a
    if m == 13:
        a4 = a2 @ a2
        a6 = a4 @ a2
        u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
        v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    else:
        powers = [ident, a2]
        for _ in range(2, (m + 1) // 2):
            powers.append(powers[-1] @ a2)
        u = a @ sum(b[2 * i + 1] * powers[i] for i in range(len(powers)))
        v = sum(b[2 * i] * powers[i] for i in range(len(powers)))
    return np.linalg.solve(v - u, v + u)


def _expm_taylor(a, tol, max_squarings, ident, nrm):
    s = max(0, math.ceil(math.log2(nrm / _TAYLOR_RADIUS)))
    if s > max_squarings:
        raise ExpNotConverged(f"needs {s} squarings, limit is {max_squarings}")
    b = a / (2.0**s)
    result = ident.copy()
    term = ident
    for m in range(1, _MAX_TERMS + 1):
        term = term @ b
        term /= m
        result += term
        if norm1(term) <= tol * norm1(result):
            break
    else:
        raise ExpNotConverged(f"Taylor kernel did not reach tol={tol:g} in {_MAX_TERMS} terms")
    for _ in range(s):
        result = result @ result
    return result


def expm(a, tol=1e-13, max_squarings=64, method="pade"):
    """Matrix exponential by scaling and squaring.

    ``method="pade"`` uses diagonal Pade approximants of degree 3..13 with
    the usual backward-error bounds (accurate to roughly unit roundoff);
    ``method="taylor"`` sums the Taylor series of the scaled matrix until the
    newest term falls below ``tol`` relative to the partial sum.  Neither
    path diagonalizes, so non-normal input is fine.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidDimension(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    nrm = norm1(a)
    if nrm == 0.0:
        return ident
    if not math.isfinite(nrm):
        raise ExpNotConverged("matrix has non-finite entries")
    if method == "taylor":
        return _expm_taylor(a, tol, max_squarings, ident, nrm)
    if method != "pade":
        raise ValueError(f"unknown method {method!r}")
    for m, theta in _PADE_THETA[:-1]:
        if nrm <= theta:
            return _pade(a, m, ident)
    theta13 = _PADE_THETA[-1][1]
    s = max(0, math.ceil(math.log2(nrm / theta13)))
    if s > max_squarings:
        raise ExpNotConverged(f"needs {s} squarings, limit is {max_squarings}")
    result = _pade(a / (2.0**s), 13, ident)
    for _ in range(s):
        result = result @ result
    return result


def eigh(h):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    return np.linalg.eigh(np.asarray(h, dtype=np.complex128))
