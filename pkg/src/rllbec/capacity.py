"""Capacity formulas and optimizers for erasure channels with run-length
limited inputs.

The central object is a k-vector of '0'-probabilities (delta_0, ...,
delta_{k-1}): delta_j is the chance of transmitting another '0' after j
consecutive '0's. rate() scores such a vector in bits per channel use,
delta_chain() generates the unique vector satisfying the stationarity
identities given its last entry, and feedback_capacity() maximizes over
that single remaining degree of freedom. grid_max_rate() brute-forces
the full cube as an independent oracle. Separate entry points cover the
minimum-run-length family (nc_capacity_d_inf, fb_upper_2inf) and the
(1,2) constraint (capacity_12, ub_12_two_param).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Argument outside the mathematical domain of a formula."""


class BudgetExceeded(RuntimeError):
    """A grid search was asked for more evaluations than allowed."""


_SCAN_POINTS = 2001
_GRID_BUDGET = 10 ** 8
_CHUNK_ROWS = 1_000_000
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def h2(p):
    """Binary entropy in bits; accepts a scalar or an array over [0, 1]."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"entropy argument outside [0, 1]: {p!r}")
    out = np.zeros_like(arr)
    mask = (arr > 0.0) & (arr < 1.0)
    q = arr[mask]
    out[mask] = -(q * np.log2(q) + (1.0 - q) * np.log2(1.0 - q))
    return float(out) if arr.ndim == 0 else out


def _check_eps(epsilon):
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"erasure probability must lie in [0, 1], got {epsilon!r}")


def _check_k(k):
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")


@dataclass(frozen=True)
class SchemeParams:
    """Erasure probability plus the '0'-probability used after each run length."""

    epsilon: float
    k: int
    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(float(d) for d in self.delta))
        _check_eps(self.epsilon)
        _check_k(self.k)
        if self.k != len(self.delta):
            raise DomainError(f"k={self.k} but {len(self.delta)} parameters given")
        if any(not 0.0 <= d <= 1.0 for d in self.delta):
            raise DomainError(f"parameters must lie in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class CapacityResult:
    """A maximized rate, its maximizer, and the stationarity residual there."""

    value: float
    argmax: SchemeParams
    residual: float


def _rate_rows(epsilon, deltas):
    """Rate of each row of an (n, k) array of parameter vectors."""
    deltas = np.asarray(deltas, dtype=float)
    eb = 1.0 - epsilon
    n, k = deltas.shape
    powers = eb ** np.arange(1, k + 1)
    running = np.cumprod(deltas, axis=1)  # prod_{m<=i} delta_m
    before = np.hstack([np.ones((n, 1)), running[:, :-1]])  # prod_{m<i}
    num = (powers * h2(deltas) * before).sum(axis=1)
    den = 1.0 + (powers * running).sum(axis=1)
    return num / den


def rate(params: SchemeParams) -> float:
    """Bits per channel use achieved by a parameter vector.

    Each term of the numerator weighs the entropy of delta_i by the
    probability that a session reaches run length i without an erasure;
    the denominator is the expected renewal time back to run length 0.
    """
    return float(_rate_rows(params.epsilon, np.asarray(params.delta)[None, :])[0])


def delta_chain(delta_last, epsilon, k):
    """Backward recursion filling delta_{k-2}, ..., delta_0 from delta_{k-1}.

    Each step solves the stationarity identity

        log2(db_j/d_j) = log2(db_{j+1}/d_{j+1}) + (1-eps)*log2(db_{j+1}/db_{j+2})

    for d_j, where db is shorthand for 1-delta and db_k is defined as 1.
    The degenerate input delta_last = 1 maps to the all-ones vector (the
    limit of the recursion).

    Returns:
        Tuple (delta_0, ..., delta_{k-1}).
    """
    _check_eps(epsilon)
    _check_k(k)
    if not 0.0 <= delta_last <= 1.0:
        raise DomainError(f"delta_last must lie in [0, 1], got {delta_last!r}")
    if delta_last == 1.0:
        return (1.0,) * k
    eb = 1.0 - epsilon
    out = [0.0] * k
    out[-1] = float(delta_last)
    dbar_after = 1.0  # db_{j+2}, seeded with db_k := 1
    for j in range(k - 2, -1, -1):
        d_next = out[j + 1]
        dbar_next = 1.0 - d_next
        out[j] = d_next / (d_next + dbar_next * (dbar_next / dbar_after) ** eb)
        dbar_after = dbar_next
    return tuple(out)


def _delta_chain_rows(delta_last, epsilon, k):
    """Vectorized delta_chain for an array of last entries in [0, 1)."""
    last = np.asarray(delta_last, dtype=float)
    eb = 1.0 - epsilon
    out = np.empty((last.size, k))
    out[:, -1] = last
    dbar_after = np.ones(last.size)
    for j in range(k - 2, -1, -1):
        d_next = out[:, j + 1]
        dbar_next = 1.0 - d_next
        out[:, j] = d_next / (d_next + dbar_next * (dbar_next / dbar_after) ** eb)
        dbar_after = dbar_next
    return out


def stationarity_residual(params: SchemeParams) -> float:
    """Largest violation of the adjacent-parameter identity, in base-2 logs.

    Zero for k = 1 (there are no adjacent pairs).

    Raises:
        DomainError: some parameter sits on the boundary {0, 1}, where
            the log-odds are undefined.
    """
    k = params.k
    if k == 1:
        return 0.0
    d = params.delta
    if any(x <= 0.0 or x >= 1.0 for x in d):
        raise DomainError(f"residual needs interior parameters, got {d}")
    eb = 1.0 - params.epsilon
    worst = 0.0
    for j in range(k - 1):
        dbar2 = 1.0 if j + 2 == k else 1.0 - d[j + 2]
        lhs = math.log2((1.0 - d[j]) / d[j])
        rhs = math.log2((1.0 - d[j + 1]) / d[j + 1]) + eb * math.log2((1.0 - d[j + 1]) / dbar2)
        worst = max(worst, abs(lhs - rhs))
    return worst


def _golden_max(f, lo, hi, tol):
    """Golden-section maximization of f on [lo, hi]; returns the midpoint."""
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _scan_then_golden(f, f_rows, lo, hi, tol):
    """Dense scan over [lo, hi] followed by golden-section refinement.

    Unimodality is not assumed; the scan brackets the global maximum at
    the grid resolution and golden section only polishes inside the
    winning bracket. Returns the better of the scan point and the
    polished point.
    """
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    vals = f_rows(grid)
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    x = _golden_max(f, a, b, tol) if b > a else float(grid[i])
    return x if f(x) >= vals[i] else float(grid[i])


def feedback_capacity(epsilon: float, k: int, tol: float = 1e-10) -> CapacityResult:
    """Largest achievable rate with output feedback, zero-runs capped at k.

    The k-dimensional maximization collapses onto the delta_chain
    manifold (the interior optimum must satisfy the stationarity
    identities), leaving one degree of freedom: the last parameter,
    scanned over [0, 1/2] and refined by golden section to bracket
    width tol.
    """
    _check_eps(epsilon)
    _check_k(k)

    def f(dl):
        return float(_rate_rows(epsilon, _delta_chain_rows(np.array([dl]), epsilon, k))[0])

    def f_rows(arr):
        return _rate_rows(epsilon, _delta_chain_rows(arr, epsilon, k))

    best = _scan_then_golden(f, f_rows, 0.0, 0.5, tol)
    delta = delta_chain(best, epsilon, k)
    params = SchemeParams(epsilon, k, delta)
    value = rate(params)
    interior = all(0.0 < x < 1.0 for x in delta)
    residual = stationarity_residual(params) if (k > 1 and interior) else 0.0
    return CapacityResult(value, params, residual)


def grid_argmax_rate(epsilon: float, k: int, grid_n: int):
    """Brute-force maximum of rate() over the full [0, 1]^k cube.

    A uniform grid with grid_n points per axis, evaluated in bounded
    chunks, followed by one round of coordinate-wise refinement around
    the winning cell. This is the independent oracle confirming that
    the one-dimensional reduction misses nothing in the interior.

    Returns:
        (value, point) with point a length-k array.

    Raises:
        BudgetExceeded: grid_n ** k would exceed 1e8 evaluations.
    """
    _check_eps(epsilon)
    _check_k(k)
    if grid_n < 2:
        raise DomainError(f"need at least 2 grid points per axis, got {grid_n}")
    total = grid_n ** k
    if total > _GRID_BUDGET:
        raise BudgetExceeded(f"{grid_n}^{k} = {total} points exceeds the {_GRID_BUDGET} budget")
    axis = np.linspace(0.0, 1.0, grid_n)
    best_val = -1.0
    best_pt = None
    for lo in range(0, total, _CHUNK_ROWS):
        idx = np.arange(lo, min(lo + _CHUNK_ROWS, total))
        pts = np.empty((idx.size, k))
        rem = idx
        for j in range(k - 1, -1, -1):
            pts[:, j] = axis[rem % grid_n]
            rem = rem // grid_n
        vals = _rate_rows(epsilon, pts)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_pt = pts[i].copy()
    h = 1.0 / (grid_n - 1)
    for j in range(k):
        cand = np.clip(np.linspace(best_pt[j] - h, best_pt[j] + h, 201), 0.0, 1.0)
        pts = np.tile(best_pt, (cand.size, 1))
        pts[:, j] = cand
        vals = _rate_rows(epsilon, pts)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_pt = pts[i].copy()
    return best_val, best_pt


def grid_max_rate(epsilon: float, k: int, grid_n: int) -> float:
    """Value-only wrapper around grid_argmax_rate."""
    return grid_argmax_rate(epsilon, k, grid_n)[0]


def nc_capacity_d_inf(epsilon: float, d: int, tol: float = 1e-12) -> CapacityResult:
    """Capacity with at least d '0's after every '1' and erasure positions
    known ahead of time.

    Renewal form: each information symbol costs a geometric(1-eps)
    number of uses until one is delivered, plus d forced '0's whenever
    the symbol is a '1'. Maximizing entropy per expected cost over the
    '1'-bias x in [0, 1/2] gives

        max_x H2(x) / (1/(1-eps) + d*x).

    epsilon = 1 returns 0 (the limit value; the cost diverges).
    """
    _check_eps(epsilon)
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    if epsilon == 1.0:
        return CapacityResult(0.0, SchemeParams(1.0, 1, (0.0,)), 0.0)
    cost0 = 1.0 / (1.0 - epsilon)

    def f(x):
        return h2(x) / (cost0 + d * x)

    best = _scan_then_golden(f, f, 0.0, 0.5, tol)
    return CapacityResult(float(f(best)), SchemeParams(epsilon, 1, (float(best),)), 0.0)


def fb_upper_2inf(epsilon: float, grid_n: int = 101) -> float:
    """Feedback upper bound for the 'at least two 0s after every 1' family.

    Maximizes, over x in [0,1]^3 with x0 + x1 + x2 <= 1,

        (1-eps) * (H2(x0) + eps*H2(x1) + eps^2*H2(x2))
        -----------------------------------------------------
        1 + eps + eps^2 + 2*(1-eps)*(x0 + eps*x1 + eps^2*x2)

    by grid scan plus one round of coordinate refinement inside the
    simplex. The three parameters are the '1'-biases of the output
    graph nodes that still have an input choice.
    """
    _check_eps(epsilon)
    if grid_n < 2:
        raise DomainError(f"need at least 2 grid points per axis, got {grid_n}")
    if epsilon == 1.0:
        return 0.0
    eb = 1.0 - epsilon

    def f(x0, x1, x2):
        num = eb * (h2(x0) + epsilon * h2(x1) + epsilon ** 2 * h2(x2))
        den = 1.0 + epsilon + epsilon ** 2 + 2.0 * eb * (x0 + epsilon * x1 + epsilon ** 2 * x2)
        return num / den

    axis = np.linspace(0.0, 1.0, grid_n)
    g0, g1, g2 = np.meshgrid(axis, axis, axis, indexing="ij")
    feas = g0 + g1 + g2 <= 1.0 + 1e-12
    vals = np.where(feas, f(g0, g1, g2), -1.0)
    flat = int(np.argmax(vals))
    i, j, l = np.unravel_index(flat, vals.shape)
    pt = np.array([axis[i], axis[j], axis[l]])
    best = float(vals[i, j, l])
    h = 1.0 / (grid_n - 1)
    for c in range(3):
        room = 1.0 - (pt.sum() - pt[c])  # simplex headroom for this coordinate
        cand = np.clip(np.linspace(pt[c] - h, pt[c] + h, 401), 0.0, min(1.0, room))
        cols = [np.full_like(cand, pt[m]) for m in range(3)]
        cols[c] = cand
        v = f(*cols)
        i = int(np.argmax(v))
        if v[i] > best:
            best = float(v[i])
            pt[c] = cand[i]
    return best


def capacity_12(epsilon: float, tol: float = 1e-12) -> CapacityResult:
    """Capacity with both run bounds active: one or two '0's between '1's.

    The value is max over x in [1/3, 1/2] of

        H2(x) / (c + x),   c = 1/(1-eps) + (1-eps).

    After a scan plus golden-section pass, the first-order condition
    (c+1)*ln(1-x) = c*ln(x) is solved by bisection; it has exactly one
    root on [1/3, 1/2] because its left-minus-right side is strictly
    decreasing with a sign change there (c >= 2 for every eps). That
    pins the interior maximizer to machine precision, which golden
    section alone cannot do near a flat maximum.

    epsilon = 1 returns 0 (the limit value).
    """
    _check_eps(epsilon)
    if epsilon == 1.0:
        return CapacityResult(0.0, SchemeParams(1.0, 1, (0.0,)), 0.0)
    eb = 1.0 - epsilon
    c = 1.0 / eb + eb

    def f(x):
        return h2(x) / (c + x)

    x0 = _scan_then_golden(f, f, 1.0 / 3.0, 0.5, tol)

    def g(x):
        return (c + 1.0) * math.log1p(-x) - c * math.log(x)

    lo, hi = 1.0 / 3.0, 0.5
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    xstar = 0.5 * (lo + hi)
    # defensive; the two agree to ~1e-8 in x, so only a beyond-noise win
    # may override the root (ties would otherwise trade away its precision)
    if f(x0) > f(xstar) + 1e-12:
        xstar = x0
    return CapacityResult(float(f(xstar)), SchemeParams(epsilon, 1, (float(xstar),)), 0.0)


def ub_12_two_param(epsilon: float, grid_n: int = 201) -> float:
    """Two-parameter cross-check of capacity_12.

    Maximizes, over (x1, x2) in [0, 1]^2 with eb = 1 - eps,

        (eb^2 * H2(x1) + eps*eb * H2(x2)) / (1 + eb^2 + eb^2*x1 + eps*eb*x2).

    The four-node output-driven graph behind the single-parameter
    formula leaves exactly two nodes an input choice; this is the
    resulting entropy per expected cost. Its maximum sits on the
    diagonal x2 = x1 and collapses to the capacity_12 objective, an
    equality the tests exercise numerically.
    """
    _check_eps(epsilon)
    if grid_n < 2:
        raise DomainError(f"need at least 2 grid points per axis, got {grid_n}")
    if epsilon == 1.0:
        return 0.0
    eb = 1.0 - epsilon

    def f(x1, x2):
        num = eb * eb * h2(x1) + epsilon * eb * h2(x2)
        den = 1.0 + eb * eb + eb * eb * x1 + epsilon * eb * x2
        return num / den

    axis = np.linspace(0.0, 1.0, grid_n)
    g1, g2 = np.meshgrid(axis, axis, indexing="ij")
    vals = f(g1, g2)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    pt = np.array([axis[i], axis[j]])
    best = float(vals[i, j])
    h = 1.0 / (grid_n - 1)
    for c in range(2):
        cand = np.clip(np.linspace(pt[c] - h, pt[c] + h, 401), 0.0, 1.0)
        cols = [np.full_like(cand, pt[m]) for m in range(2)]
        cols[c] = cand
        v = f(*cols)
        i = int(np.argmax(v))
        if v[i] > best:
            best = float(v[i])
            pt[c] = cand[i]
    return best
