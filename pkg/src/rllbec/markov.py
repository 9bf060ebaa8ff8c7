"""Finite Markov chains and the two chains induced by the coding scheme.

The labeling chain tracks which labeling rule the transmitter applies at
each channel use; the zero-run chain tracks how many '0's went through
since the last delivered '1'. Both have closed-form stationary laws that
the rest of the package checks against power iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NoConvergence(RuntimeError):
    """Power iteration ran out of sweeps without reaching a fixed point."""


@dataclass(frozen=True)
class FiniteChain:
    """A row-stochastic transition matrix over states 0..n-1."""

    n: int
    P: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        object.__setattr__(self, "P", P)
        if P.shape != (self.n, self.n):
            raise ValueError(f"matrix shape {P.shape} does not match n={self.n}")
        if np.any(P < -1e-15):
            raise ValueError("negative transition probability")
        rows = P.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > 1e-12:
            raise ValueError(f"rows must sum to 1, worst deviation {np.max(np.abs(rows - 1.0)):.3e}")


def stationary(chain: FiniteChain, start: int = 0, tol: float = 1e-12,
               max_iter: int = 1_000_000) -> np.ndarray:
    """Stationary distribution by forward iteration.

    The iteration starts uniform on the states reachable from `start`,
    so states that the process cannot visit carry exactly zero mass.

    Raises:
        NoConvergence: the sup-norm change never dropped below tol.
            The chains built in this module mix geometrically for
            interior parameters; degenerate corners (erasure
            probability exactly 1) can cycle and will trip this.
    """
    P = chain.P
    n = chain.n
    if not 0 <= start < n:
        raise ValueError(f"start state {start} out of range")
    reach = np.zeros(n, dtype=bool)
    reach[start] = True
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for t in np.nonzero(P[s] > 0.0)[0]:
                if not reach[t]:
                    reach[t] = True
                    nxt.append(int(t))
        frontier = nxt
    v = reach.astype(float)
    v /= v.sum()
    for _ in range(max_iter):
        w = v @ P
        if float(np.max(np.abs(w - v))) <= tol:
            return w / w.sum()
        v = w
    raise NoConvergence(f"no fixed point after {max_iter} sweeps (tol={tol})")


def _check_eps_delta(epsilon, delta):
    delta = tuple(float(d) for d in delta)
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {epsilon}")
    if len(delta) < 1:
        raise ValueError("need at least one parameter")
    if any(not 0.0 <= d <= 1.0 for d in delta):
        raise ValueError(f"parameters must lie in [0, 1], got {delta}")
    return delta


def build_labeling_chain(epsilon: float, delta) -> FiniteChain:
    """Output-driven chain over the labeling rules of a coding session.

    State order is [~l0, l0, l1, ..., lk]: index 0 is the labeling used
    right after an erasure, index j+1 is the labeling after j delivered
    '0's. With eb = 1 - epsilon the rows are:

        l_j (j < k): eb*delta_j to l_{j+1}, eb*(1-delta_j) to l0, eps to ~l0
        ~l0:         eb*delta_0 to l1, everything else to l0
        l_k:         1 to l0 (the input is forced, any output resets)
    """
    delta = _check_eps_delta(epsilon, delta)
    k = len(delta)
    eb = 1.0 - epsilon
    P = np.zeros((k + 2, k + 2))
    P[0, 2] = eb * delta[0]
    P[0, 1] = eb * (1.0 - delta[0]) + epsilon
    for j in range(k):
        row = j + 1
        P[row, j + 2] = eb * delta[j]
        P[row, 1] = eb * (1.0 - delta[j])
        P[row, 0] = epsilon
    P[k + 1, 1] = 1.0
    return FiniteChain(k + 2, P)


def build_s_chain(epsilon: float, delta) -> FiniteChain:
    """Chain counting consecutive '0's that made it through the channel.

    State j in 0..k is the current zero-run length. An erased slot
    carries a forced '1' (the separation rule of the restricted code),
    so the run advances only when a '0' goes through un-erased:

        row j < k: (1-eps)*delta_j forward to j+1, the rest back to 0
        row k:     back to 0 surely
    """
    delta = _check_eps_delta(epsilon, delta)
    k = len(delta)
    eb = 1.0 - epsilon
    P = np.zeros((k + 1, k + 1))
    for j in range(k):
        fwd = eb * delta[j]
        P[j, j + 1] = fwd
        P[j, 0] = 1.0 - fwd
    P[k, 0] = 1.0
    return FiniteChain(k + 1, P)


def s_chain_stationary_exact(epsilon: float, delta) -> np.ndarray:
    """Closed form for stationary(build_s_chain(epsilon, delta)).

    pi_j is proportional to (1-eps)^j * prod_{m<j} delta_m for j = 0..k.
    """
    delta = _check_eps_delta(epsilon, delta)
    k = len(delta)
    eb = 1.0 - epsilon
    w = np.empty(k + 1)
    w[0] = 1.0
    for j in range(1, k + 1):
        w[j] = w[j - 1] * eb * delta[j - 1]
    return w / w.sum()
