"""Grids, discrete difference operators, and banded Gram matrices.

Difference operators are stored row-compactly: a reduced operator of order
k+1 on n points is an (n-k-1, k+2) coefficient array whose row j holds the
nonzero entries of matrix row j, starting at column j. The square operator
stacks an identity block for the first k+1 coordinates on top of the reduced
block, which makes it non-singular, so a Gaussian prior on the stacked
differences induces a proper Gaussian prior on the curve values themselves.

Everything here is immutable after construction and safe to share between
concurrent chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, OrderingError

MAX_ORDER = 3  # higher orders make the Gram matrix hopelessly ill-conditioned


def _check_grid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError("grid x must be a 1-d array")
    if not np.all(np.isfinite(x)):
        raise DomainError("grid x contains non-finite values")
    if np.any(np.diff(x) <= 0):
        raise OrderingError("grid x must be strictly increasing (no duplicates)")
    return x


@dataclass(frozen=True)
class Dataset:
    """Ordered input locations x and responses y."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _check_grid(self.x)
        y = np.asarray(self.y, dtype=float)
        if y.shape != x.shape:
            raise DimensionError(f"x and y lengths differ: {x.shape} vs {y.shape}")
        if not np.all(np.isfinite(y)):
            raise DomainError("y contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size

    def with_y(self, y: np.ndarray) -> "Dataset":
        return Dataset(self.x, y)


# ---------------------------------------------------------------------------
# row-compact banded helpers
# ---------------------------------------------------------------------------

def apply_rows(coeffs: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply a row-compact operator: out[j] = sum_a coeffs[j, a] * v[j + a]."""
    m, w = coeffs.shape
    out = np.zeros(m)
    for a in range(w):
        out += coeffs[:, a] * v[a : a + m]
    return out


def apply_rows_t(coeffs: np.ndarray, z: np.ndarray, n: int) -> np.ndarray:
    """Apply the transpose of a row-compact operator to z (length m)."""
    m, w = coeffs.shape
    out = np.zeros(n)
    for a in range(w):
        out[a : a + m] += coeffs[:, a] * z
    return out


def accumulate_gram(ab: np.ndarray, coeffs: np.ndarray, weights: np.ndarray) -> None:
    """Add rows' weighted Gram (C^T diag(weights) C) into upper-banded ab in place.

    ab uses the scipy convention ab[u + i - j, j] = A[i, j]; its bandwidth u
    must be at least coeffs.shape[1] - 1.
    """
    m, w = coeffs.shape
    u = ab.shape[0] - 1
    for a in range(w):
        wa = weights * coeffs[:, a]
        for b in range(a, w):
            d = b - a
            ab[u - d, a + d : a + d + m] += wa * coeffs[:, b]


def rows_to_dense(coeffs: np.ndarray, n: int) -> np.ndarray:
    m, w = coeffs.shape
    out = np.zeros((m, n))
    for j in range(m):
        out[j, j : j + w] = coeffs[j]
    return out


# ---------------------------------------------------------------------------
# difference operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DifferenceOperator:
    """Order-(k+1) difference operator on an n-point grid.

    ``coeffs`` holds the reduced (n-k-1) x n block row-compactly; the square
    operator prepends the identity on the first k+1 coordinates.
    """

    n: int
    k: int
    coeffs: np.ndarray = field(repr=False)

    @property
    def n_reduced(self) -> int:
        return self.n - self.k - 1

    def apply_reduced(self, v: np.ndarray) -> np.ndarray:
        return apply_rows(self.coeffs, v)

    def apply_full(self, v: np.ndarray) -> np.ndarray:
        """Square-operator product: identity block then the reduced rows."""
        return np.concatenate([v[: self.k + 1], apply_rows(self.coeffs, v)])

    def apply_full_t(self, z: np.ndarray) -> np.ndarray:
        out = apply_rows_t(self.coeffs, z[self.k + 1 :], self.n)
        out[: self.k + 1] += z[: self.k + 1]
        return out

    def reduced_dense(self) -> np.ndarray:
        return rows_to_dense(self.coeffs, self.n)

    def full_dense(self) -> np.ndarray:
        top = np.zeros((self.k + 1, self.n))
        top[np.arange(self.k + 1), np.arange(self.k + 1)] = 1.0
        return np.vstack([top, self.reduced_dense()])


def _difference_coeffs(n: int, k: int, x: np.ndarray | None) -> np.ndarray:
    """Reduced coefficients of the (adjusted) order-(k+1) operator.

    Built by the recursion: order m+1 rows are first differences of the
    order-m rows, scaled for irregular spacing by m / (x[i+m] - x[i]). With
    x = (1, ..., n) the scale factors are 1 and the plain operator results.
    """
    coeffs = np.tile([1.0, -1.0], (n - 1, 1))
    for m in range(1, k + 1):
        if x is None:
            scaled = coeffs
        else:
            weights = m / (x[m : n] - x[: n - m])
            scaled = weights[:, None] * coeffs
        nxt = np.zeros((n - m - 1, m + 2))
        nxt[:, : m + 1] += scaled[: n - m - 1]
        nxt[:, 1 : m + 2] -= scaled[1 : n - m]
        coeffs = nxt
    return coeffs


def _check_order(n: int, k: int) -> None:
    if k < 0 or k > MAX_ORDER:
        raise DomainError(f"order k must be in [0, {MAX_ORDER}], got {k}")
    if n < k + 2:
        raise DimensionError(f"need n >= k + 2 points, got n={n} for k={k}")


def build_difference_matrix(n: int, k: int) -> DifferenceOperator:
    """Order-(k+1) difference operator for the unit grid 1..n."""
    _check_order(n, k)
    return DifferenceOperator(n=n, k=k, coeffs=_difference_coeffs(n, k, None))


def build_adjusted_difference_matrix(x: np.ndarray, k: int) -> DifferenceOperator:
    """Spacing-adjusted operator for a strictly increasing grid x.

    Reduces to ``build_difference_matrix`` when x = (1, ..., n). The k = 0
    operator is the plain first difference (the recursion base carries no
    spacing weights).
    """
    x = _check_grid(x)
    n = x.size
    _check_order(n, k)
    return DifferenceOperator(n=n, k=k, coeffs=_difference_coeffs(n, k, x))


# ---------------------------------------------------------------------------
# banded SPD matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandedSpd:
    """Symmetric positive-definite matrix in scipy upper-banded storage.

    ab[u + i - j, j] = A[i, j] for j - u <= i <= j, so the main diagonal sits
    in the last row of ab.
    """

    ab: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.ab.shape[1]

    @property
    def half_bandwidth(self) -> int:
        return self.ab.shape[0] - 1

    @property
    def diagonal(self) -> np.ndarray:
        return self.ab[-1]

    def to_dense(self) -> np.ndarray:
        u, n = self.half_bandwidth, self.n
        out = np.zeros((n, n))
        for d in range(u + 1):
            vals = self.ab[u - d, d:]
            out[np.arange(n - d), np.arange(d, n)] = vals
            out[np.arange(d, n), np.arange(n - d)] = vals
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        u, n = self.half_bandwidth, self.n
        out = self.ab[-1] * v
        for d in range(1, u + 1):
            vals = self.ab[u - d, d:]
            out[: n - d] += vals * v[d:]
            out[d:] += vals * v[: n - d]
        return out


def weighted_gram(op: DifferenceOperator, w: np.ndarray) -> BandedSpd:
    """Banded D^T diag(w) D for the square operator D; w are the inverse
    prior scales, one per stacked difference, and must be positive."""
    w = np.asarray(w, dtype=float)
    if w.shape != (op.n,):
        raise DimensionError(f"weight vector must have length n={op.n}")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise DomainError("weights must be strictly positive and finite")
    u = op.k + 1
    ab = np.zeros((u + 1, op.n))
    ab[-1, : op.k + 1] += w[: op.k + 1]
    accumulate_gram(ab, op.coeffs, w[op.k + 1 :])
    return BandedSpd(ab=ab)
