"""
Hot inner loops, compiled with numba when available.

Every kernel exists twice: a plain Python/NumPy reference version (suffix
``_py``) and, when numba imports cleanly, an ``@njit`` compiled twin (suffix
``_nb``).  The public names pick one of the two at import time.  Set the
environment variable ``LRBERRY_DISABLE_NUMBA=1`` to force the NumPy path.
"""

import math
import os

import numpy as np
from scipy.special import gammaln

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

NUMBA_ENABLED = numba is not None and os.environ.get("LRBERRY_DISABLE_NUMBA", "0") not in (
    "1",
    "true",
    "yes",
)

# |sinh(theta)| or |sin(theta)| below this is treated as a zero of the
# auxiliary equation's divisor
SINGULAR_EPS = 1e-12
# amplitude-squared threshold for the level stopping rule
LEVEL_EPS = 1e-14


def _aux_rhs(c0, lam, phi, theta, gamma, hyperbolic):
    arg = phi + gamma
    dtheta = -2.0 * lam * math.sin(arg)
    coupling = lam * math.cos(arg)
    if hyperbolic:
        denom = math.sinh(theta)
        num = math.cosh(theta)
    else:
        denom = math.sin(theta)
        num = math.cos(theta)
    if abs(denom) < SINGULAR_EPS:
        if abs(coupling) > SINGULAR_EPS:
            return dtheta, 0.0, False
        return dtheta, c0, True
    return dtheta, c0 - 2.0 * coupling * num / denom, True


def _rk4_auxiliary_py(c0, lam, phi, theta0, gamma0, h, hyperbolic):
    """Fixed-step RK4 for the (theta, gamma) auxiliary equations.

    The schedules are tabulated on the half-step grid, so ``c0[2*i]`` is the
    value at step ``i`` and ``c0[2*i + 1]`` the value at its midpoint.
    Returns ``(theta, gamma, fail)`` where ``fail`` is the first step index at
    which the divisor vanished with nonzero coupling, or -1.
    """
    steps = (c0.shape[0] - 1) // 2
    theta = np.empty(steps + 1)
    gamma = np.empty(steps + 1)
    theta[0] = theta0
    gamma[0] = gamma0
    for i in range(steps):
        a, b, c = 2 * i, 2 * i + 1, 2 * i + 2
        th = theta[i]
        ga = gamma[i]
        k1t, k1g, ok1 = _aux_rhs(c0[a], lam[a], phi[a], th, ga, hyperbolic)
        k2t, k2g, ok2 = _aux_rhs(c0[b], lam[b], phi[b], th + 0.5 * h * k1t, ga + 0.5 * h * k1g, hyperbolic)
        k3t, k3g, ok3 = _aux_rhs(c0[b], lam[b], phi[b], th + 0.5 * h * k2t, ga + 0.5 * h * k2g, hyperbolic)
        k4t, k4g, ok4 = _aux_rhs(c0[c], lam[c], phi[c], th + h * k3t, ga + h * k3g, hyperbolic)
        if not (ok1 and ok2 and ok3 and ok4):
            theta[i + 1:] = np.nan
            gamma[i + 1:] = np.nan
            return theta, gamma, i
        theta[i + 1] = th + h * (k1t + 2.0 * k2t + 2.0 * k3t + k4t) / 6.0
        gamma[i + 1] = ga + h * (k1g + 2.0 * k2g + 2.0 * k3g + k4g) / 6.0
    return theta, gamma, -1


def _laguerre_py(n, alpha, x):
    """Generalized Laguerre polynomial L_n^alpha(x) by upward recurrence.

    Valid for any real alpha, including negative values.
    """
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def _laguerre_loop(n, alpha, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        xi = x[i]
        prev = 1.0
        if n == 0:
            out[i] = 1.0
            continue
        cur = 1.0 + alpha - xi
        for k in range(1, n):
            nxt = ((2 * k + 1 + alpha - xi) * cur - (k + alpha) * prev) / (k + 1)
            prev = cur
            cur = nxt
        out[i] = cur
    return out


def _apply_stop_rule(amps, n):
    small = 0
    for m in range(amps.shape[0]):
        if m > n and abs(amps[m]) ** 2 < LEVEL_EPS:
            small += 1
            if small >= 3:
                amps[m + 1:] = 0.0
                return m + 1
        else:
            small = 0
    return amps.shape[0]


def _pncs_su11_py(k, n, abs_z, arg_z, eta, n_levels):
    """Amplitudes of the su(1,1) number coherent state by the double series.

    Level ``m`` collects the terms with ``m = n - j + s``.  Magnitudes are
    built from log-gamma differences so that large ``n`` does not overflow.
    """
    log_z = math.log(abs_z)
    lvl = np.arange(n_levels)[:, None]
    j = np.arange(n + 1)[None, :]
    s = lvl - n + j
    valid = s >= 0
    s = np.where(valid, s, 0)
    log_mag = (
        (s + j) * log_z
        + eta * (k + n - j)
        + 0.5 * (gammaln(2 * k + n) + gammaln(2 * k + n - j + s))
        - gammaln(2 * k + n - j)
        + 0.5 * (gammaln(n + 1) + gammaln(n - j + s + 1))
        - gammaln(n - j + 1)
        - gammaln(s + 1)
        - gammaln(j + 1)
    )
    phase = s * arg_z + j * (math.pi - arg_z)
    terms = np.where(valid, np.exp(log_mag + 1j * phase), 0.0)
    amps = terms.sum(axis=1)
    stop = _apply_stop_rule(amps, n)
    return amps, stop


def _pncs_su11_loop(k, n, abs_z, arg_z, eta, n_levels):
    log_z = math.log(abs_z)
    amps = np.zeros(n_levels, dtype=np.complex128)
    base = 0.5 * (math.lgamma(2 * k + n) + math.lgamma(n + 1))
    small = 0
    for m in range(n_levels):
        re = 0.0
        im = 0.0
        for j in range(max(0, n - m), n + 1):
            s = m - n + j
            lm = (
                (s + j) * log_z
                + eta * (k + n - j)
                + base
                + 0.5 * (math.lgamma(2 * k + n - j + s) + math.lgamma(n - j + s + 1))
                - math.lgamma(2 * k + n - j)
                - math.lgamma(n - j + 1)
                - math.lgamma(s + 1)
                - math.lgamma(j + 1)
            )
            ph = s * arg_z + j * (math.pi - arg_z)
            mag = math.exp(lm)
            re += mag * math.cos(ph)
            im += mag * math.sin(ph)
        amps[m] = complex(re, im)
        if m > n and re * re + im * im < LEVEL_EPS:
            small += 1
            if small >= 3:
                return amps, m + 1
        else:
            small = 0
    return amps, n_levels


def _pncs_su2_py(j, mu, abs_z, arg_z, eta):
    dim = int(round(2 * j)) + 1
    amps = np.zeros(dim, dtype=np.complex128)
    log_z = math.log(abs_z)
    n_max = int(round(j + mu))
    for n in range(n_max + 1):
        s = np.arange(int(round(j - mu)) + n + 1)
        log_mag = (
            (s + n) * log_z
            + eta * (mu - n)
            + gammaln(j - mu + n + 1)
            - gammaln(j + mu - n + 1)
            + 0.5 * (gammaln(j + mu + 1) + gammaln(j + mu - n + s + 1) - gammaln(j - mu + 1) - gammaln(j - mu + n - s + 1))
            - gammaln(s + 1)
            - gammaln(n + 1)
        )
        phase = s * arg_z + n * (math.pi - arg_z)
        idx = np.rint(j - mu + n - s).astype(np.int64)
        np.add.at(amps, idx, np.exp(log_mag + 1j * phase))
    return amps


def _pncs_su2_loop(j, mu, abs_z, arg_z, eta):
    dim = int(round(2 * j)) + 1
    amps = np.zeros(dim, dtype=np.complex128)
    log_z = math.log(abs_z)
    n_max = int(round(j + mu))
    for n in range(n_max + 1):
        for s in range(int(round(j - mu)) + n + 1):
            lm = (
                (s + n) * log_z
                + eta * (mu - n)
                + math.lgamma(j - mu + n + 1)
                - math.lgamma(j + mu - n + 1)
                + 0.5
                * (
                    math.lgamma(j + mu + 1)
                    + math.lgamma(j + mu - n + s + 1)
                    - math.lgamma(j - mu + 1)
                    - math.lgamma(j - mu + n - s + 1)
                )
                - math.lgamma(s + 1)
                - math.lgamma(n + 1)
            )
            ph = s * arg_z + n * (math.pi - arg_z)
            idx = int(round(j - mu + n - s))
            amps[idx] += math.exp(lm) * complex(math.cos(ph), math.sin(ph))
    return amps


rk4_auxiliary_py = _rk4_auxiliary_py
laguerre_py = _laguerre_py
pncs_su11_py = _pncs_su11_py
pncs_su2_py = _pncs_su2_py

if numba is not None:
    _aux_rhs_nb = numba.njit(cache=True)(_aux_rhs)

    @numba.njit(cache=True)
    def rk4_auxiliary_nb(c0, lam, phi, theta0, gamma0, h, hyperbolic):
        steps = (c0.shape[0] - 1) // 2
        theta = np.empty(steps + 1)
        gamma = np.empty(steps + 1)
        theta[0] = theta0
        gamma[0] = gamma0
        for i in range(steps):
            a, b, c = 2 * i, 2 * i + 1, 2 * i + 2
            th = theta[i]
            ga = gamma[i]
            k1t, k1g, ok1 = _aux_rhs_nb(c0[a], lam[a], phi[a], th, ga, hyperbolic)
            k2t, k2g, ok2 = _aux_rhs_nb(c0[b], lam[b], phi[b], th + 0.5 * h * k1t, ga + 0.5 * h * k1g, hyperbolic)
            k3t, k3g, ok3 = _aux_rhs_nb(c0[b], lam[b], phi[b], th + 0.5 * h * k2t, ga + 0.5 * h * k2g, hyperbolic)
            k4t, k4g, ok4 = _aux_rhs_nb(c0[c], lam[c], phi[c], th + h * k3t, ga + h * k3g, hyperbolic)
            if not (ok1 and ok2 and ok3 and ok4):
                theta[i + 1:] = np.nan
                gamma[i + 1:] = np.nan
                return theta, gamma, i
            theta[i + 1] = th + h * (k1t + 2.0 * k2t + 2.0 * k3t + k4t) / 6.0
            gamma[i + 1] = ga + h * (k1g + 2.0 * k2g + 2.0 * k3g + k4g) / 6.0
        return theta, gamma, -1

    laguerre_nb = numba.njit(cache=True)(_laguerre_loop)
    pncs_su11_nb = numba.njit(cache=True)(_pncs_su11_loop)
    pncs_su2_nb = numba.njit(cache=True)(_pncs_su2_loop)
else:  # pragma: no cover
    rk4_auxiliary_nb = laguerre_nb = pncs_su11_nb = pncs_su2_nb = None


def rk4_auxiliary(c0, lam, phi, theta0, gamma0, h, hyperbolic):
    args = (
        np.ascontiguousarray(c0, dtype=np.float64),
        np.ascontiguousarray(lam, dtype=np.float64),
        np.ascontiguousarray(phi, dtype=np.float64),
        float(theta0),
        float(gamma0),
        float(h),
        bool(hyperbolic),
    )
    if NUMBA_ENABLED:
        return rk4_auxiliary_nb(*args)
    return rk4_auxiliary_py(*args)


def laguerre(n, alpha, x):
    x = np.asarray(x, dtype=np.float64)
    if NUMBA_ENABLED:
        flat = np.ascontiguousarray(x.ravel())
        return laguerre_nb(int(n), float(alpha), flat).reshape(x.shape)
    return laguerre_py(int(n), float(alpha), x)


def pncs_su11(k, n, abs_z, arg_z, eta, n_levels):
    if NUMBA_ENABLED:
        return pncs_su11_nb(float(k), int(n), float(abs_z), float(arg_z), float(eta), int(n_levels))
    return pncs_su11_py(float(k), int(n), float(abs_z), float(arg_z), float(eta), int(n_levels))


def pncs_su2(j, mu, abs_z, arg_z, eta):
    if NUMBA_ENABLED:
        return pncs_su2_nb(float(j), float(mu), float(abs_z), float(arg_z), float(eta))
    return pncs_su2_py(float(j), float(mu), float(abs_z), float(arg_z), float(eta))
