"""Exact random-variate generators used by the Gibbs sweeps.

The Polya-Gamma generator implements the alternating-series accept/reject
scheme on the tilted Jacobi density (Devroye-style), vectorized over a batch
of tilts; all other generators are thin, deterministic layers over numpy and
scipy primitives. Every function is stateless apart from the generator it is
handed, so samplers can be shared freely across chains as long as each chain
owns its own stream.
"""

from __future__ import annotations

import re

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded, solve_banded
from scipy.special import expit, log_ndtr, ndtr, ndtri
from scipy.stats import geninvgauss

from .errors import ConditioningError, DomainError
from .grid import BandedSpd
from .rng import as_generator

# truncation point splitting the two proposal pieces of the Jacobi sampler
_PG_T = 0.64
_TN_SWITCH = 5.0  # standardized truncation beyond which rejection beats the inverse CDF


# ---------------------------------------------------------------------------
# Polya-Gamma PG(1, c)
# ---------------------------------------------------------------------------

def _jacobi_coef(n: int, x: np.ndarray) -> np.ndarray:
    """n-th coefficient of the alternating series bounding the Jacobi density."""
    np12 = n + 0.5
    out = np.empty_like(x)
    small = x <= _PG_T
    xs = x[small]
    with np.errstate(under="ignore", over="ignore", divide="ignore"):
        # log form: (2/(pi x))^{3/2} underflows/overflows badly for tiny x
        out[small] = np.exp(
            np.log(np.pi * np12) + 1.5 * np.log(2.0 / (np.pi * xs)) - 2.0 * np12**2 / xs
        )
        out[~small] = np.pi * np12 * np.exp(-0.5 * np12**2 * np.pi**2 * x[~small])
    return out


def _right_piece_prob(z: np.ndarray) -> np.ndarray:
    """Probability of proposing from the exponential tail piece (x > t)."""
    t = _PG_T
    K = np.pi**2 / 8 + 0.5 * z * z
    logp = np.log(np.pi) - np.log(2.0 * K) - K * t
    rt = np.sqrt(t)
    # inverse-Gaussian(mean 1/z, shape 1) CDF at t, stable for all z >= 0
    cdf = ndtr((z * t - 1.0) / rt) + np.exp(2.0 * z + log_ndtr(-(z * t + 1.0) / rt))
    logq = np.log(2.0) - z + np.log(cdf)
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(logq - logp))


def _trunc_inv_gauss(z: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Inverse-Gaussian(1/z, 1) draws conditioned on the interval (0, t]."""
    t = _PG_T
    out = np.empty_like(z)
    heavy = z * t > 1.0  # mean below t: plain draws, retry on overshoot

    idx = np.flatnonzero(heavy)
    while idx.size:
        cand = rng.wald(1.0 / z[idx], 1.0)
        ok = cand <= t
        out[idx[ok]] = cand[ok]
        idx = idx[~ok]

    idx = np.flatnonzero(~heavy)
    while idx.size:
        m = idx.size
        e1 = rng.standard_exponential(m)
        e2 = rng.standard_exponential(m)
        redo = np.flatnonzero(e1 * e1 > 2.0 * e2 / t)
        while redo.size:
            e1[redo] = rng.standard_exponential(redo.size)
            e2[redo] = rng.standard_exponential(redo.size)
            redo = redo[e1[redo] ** 2 > 2.0 * e2[redo] / t]
        cand = t / (1.0 + t * e1) ** 2
        zi = z[idx]
        acc = rng.random(m) <= np.exp(-0.5 * zi * zi * cand)
        out[idx[acc]] = cand[acc]
        idx = idx[~acc]
    return out


def _series_accept(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Alternating-series accept/reject decision for each proposal."""
    a0 = _jacobi_coef(0, x)
    y = rng.random(x.size) * a0
    s = a0.copy()
    accept = np.zeros(x.size, dtype=bool)
    undecided = np.arange(x.size)
    n = 0
    while undecided.size:
        n += 1
        an = _jacobi_coef(n, x[undecided])
        if n & 1:
            s[undecided] -= an
            dec = y[undecided] <= s[undecided]
            accept[undecided[dec]] = True
        else:
            s[undecided] += an
            dec = y[undecided] > s[undecided]
        undecided = undecided[~dec]
    return accept


def polya_gamma(c, rng) -> np.ndarray:
    """Independent PG(1, c_i) draws for a vector of tilts c.

    PG(1, c) is realized as J*(1, c/2) / 4, where J* follows the tilted
    Jacobi law; the two-piece proposal (truncated inverse-Gaussian below t,
    exponential above) is accepted via the alternating partial sums of the
    Jacobi series, which is exact.
    """
    gen = as_generator(rng)
    c = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(c)):
        raise DomainError("Polya-Gamma tilt must be finite")
    z = 0.5 * np.abs(np.atleast_1d(c))
    K = np.pi**2 / 8 + 0.5 * z * z
    p_right = _right_piece_prob(z)
    out = np.empty_like(z)
    pending = np.arange(z.size)
    while pending.size:
        m = pending.size
        right = gen.random(m) < p_right[pending]
        cand = np.empty(m)
        nr = int(right.sum())
        if nr:
            cand[right] = _PG_T + gen.standard_exponential(nr) / K[pending[right]]
        if m - nr:
            cand[~right] = _trunc_inv_gauss(z[pending[~right]], gen)
        acc = _series_accept(cand, gen)
        out[pending[acc]] = 0.25 * cand[acc]
        pending = pending[~acc]
    return out.reshape(np.shape(c)) if np.ndim(c) else out


def sample_polya_gamma(c: float, rng) -> float:
    """One exact PG(1, c) draw."""
    return float(polya_gamma(np.asarray([c]), rng)[0])


# ---------------------------------------------------------------------------
# generalized inverse Gaussian
# ---------------------------------------------------------------------------

def sample_gig(p: float, chi, psi: float, rng):
    """Draw from the density proportional to x^{p-1} exp(-(chi/x + psi*x)/2).

    chi and psi must be strictly positive (interior case); callers with a
    vanishing parameter should use the gamma / inverse-gamma limit directly.
    Half-integer |p| = 1/2 maps exactly onto the inverse-Gaussian law and is
    drawn via numpy's wald generator (this is the hot path, and chi may be a
    vector there); other orders go through scipy's ratio-of-uniforms
    generator. Returns a scalar for scalar chi.
    """
    gen = as_generator(rng)
    chi_arr = np.asarray(chi, dtype=float)
    if np.any(chi_arr <= 0) or not np.all(np.isfinite(chi_arr)):
        raise DomainError("GIG chi must be strictly positive and finite")
    if not (np.isfinite(psi) and psi > 0):
        raise DomainError("GIG psi must be strictly positive and finite")
    scalar = chi_arr.ndim == 0
    chi_arr = np.atleast_1d(chi_arr)
    if p == 0.5:
        out = 1.0 / gen.wald(np.sqrt(psi / chi_arr), psi)
    elif p == -0.5:
        out = gen.wald(np.sqrt(chi_arr / psi), chi_arr)
    else:
        b = np.sqrt(chi_arr * psi)
        out = geninvgauss.rvs(p, b, random_state=gen) * np.sqrt(chi_arr / psi)
        out = np.atleast_1d(out)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# inverse gamma
# ---------------------------------------------------------------------------

def sample_inverse_gamma(shape, rate, rng, size=None):
    """Inverse-gamma draw(s) with the stated shape and rate (mean rate/(shape-1))."""
    shape_arr = np.asarray(shape, dtype=float)
    rate_arr = np.asarray(rate, dtype=float)
    if np.any(shape_arr <= 0) or np.any(rate_arr <= 0):
        raise DomainError("inverse-gamma shape and rate must be positive")
    gen = as_generator(rng)
    g = gen.standard_gamma(shape_arr, size=size)
    out = rate_arr / np.maximum(g, np.finfo(float).tiny)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# one-sided truncated normal
# ---------------------------------------------------------------------------

def sample_truncnorm_lower(mu, var, lower, rng, size=None):
    """Exact N(mu, var) draw(s) conditioned on the result being >= lower.

    Mild truncation uses the complementary inverse CDF; deep truncation
    (standardized bound above 5) uses the shifted-exponential rejection
    scheme, whose acceptance rate stays near 1 however far out the bound is.
    """
    if not (np.isfinite(var) and var > 0):
        raise DomainError("variance must be strictly positive")
    gen = as_generator(rng)
    sd = np.sqrt(var)
    alpha = (lower - mu) / sd
    m = 1 if size is None else int(size)
    if alpha <= _TN_SWITCH:
        tail = ndtr(-alpha)
        w = tail * (1.0 - gen.random(m))  # in (0, tail]: keeps ndtri finite
        z = -ndtri(w)
    else:
        lam = 0.5 * (alpha + np.sqrt(alpha * alpha + 4.0))
        z = np.empty(m)
        idx = np.arange(m)
        while idx.size:
            cand = alpha + gen.standard_exponential(idx.size) / lam
            acc = gen.random(idx.size) <= np.exp(-0.5 * (cand - lam) ** 2)
            z[idx[acc]] = cand[acc]
            idx = idx[~acc]
    out = mu + sd * z
    return float(out[0]) if size is None else out


# ---------------------------------------------------------------------------
# Gaussian with banded precision
# ---------------------------------------------------------------------------

def cholesky_banded_spd(a: BandedSpd) -> np.ndarray:
    """Upper-banded Cholesky factor U with A = U^T U; raises ConditioningError."""
    try:
        return cholesky_banded(a.ab, lower=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - message parse only
        match = re.search(r"(\d+)", str(exc))
        pivot = int(match.group(1)) if match else -1
        raise ConditioningError(f"banded Cholesky failed: {exc}", pivot=pivot) from exc


def sample_gaussian_banded_precision(a: BandedSpd, b: np.ndarray, rng) -> np.ndarray:
    """Exact draw from N(A^{-1} b, A^{-1}) for banded SPD precision A.

    Cost is O(n * bandwidth^2): one banded Cholesky, one solve for the mean,
    and one triangular solve to color the standard normal vector.
    """
    gen = as_generator(rng)
    cb = cholesky_banded_spd(a)
    mean = cho_solve_banded((cb, False), b)
    z = gen.standard_normal(a.n)
    u = a.half_bandwidth
    if u == 0:
        return mean + z / cb[0]
    return mean + solve_banded((0, u), cb, z)


# ---------------------------------------------------------------------------
# soft one-sided response and half-normal noise
# ---------------------------------------------------------------------------

def soft_truncated_response_batch(theta, sigma2, eta, rng):
    """Vector of draws y_i with density 2 phi(y; theta_i, sigma2) sigmoid(eta (theta_i - y)).

    Rejection with the untruncated Gaussian proposal accepts with probability
    sigmoid(eta (theta_i - y*)) <= 1; by symmetry the overall acceptance rate
    is exactly one half. Returns (draws, proposals_used).
    """
    if not (np.isfinite(sigma2) and sigma2 > 0):
        raise DomainError("sigma2 must be strictly positive")
    if not (np.isfinite(eta) and eta > 0):
        raise DomainError("eta must be strictly positive")
    gen = as_generator(rng)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    sd = np.sqrt(sigma2)
    out = np.empty_like(theta)
    pending = np.arange(theta.size)
    proposals = 0
    while pending.size:
        cand = theta[pending] + sd * gen.standard_normal(pending.size)
        proposals += pending.size
        acc = gen.random(pending.size) <= expit(eta * (theta[pending] - cand))
        out[pending[acc]] = cand[acc]
        pending = pending[~acc]
    return out, proposals


def sample_soft_truncated_response(theta_i: float, sigma2: float, eta: float, rng) -> float:
    """One draw from the softened one-sided response law at a single site."""
    out, _ = soft_truncated_response_batch(np.asarray([theta_i]), sigma2, eta, rng)
    return float(out[0])


def sample_half_normal_noise(sigma, rng, size=None):
    """Non-positive noise -|N(0, sigma^2)| (upper-boundary errors)."""
    sigma_arr = np.asarray(sigma, dtype=float)
    if np.any(sigma_arr <= 0) or not np.all(np.isfinite(sigma_arr)):
        raise DomainError("sigma must be strictly positive")
    gen = as_generator(rng)
    out = -np.abs(gen.normal(0.0, sigma_arr, size=size))
    return float(out) if out.ndim == 0 else out
