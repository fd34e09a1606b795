"""Markov measures determined by a stationary pair (p, P).

Cylinder mass is the product p[w0] * P[w0,w1] * ... ; entropy is
-sum p_i P_ij log P_ij.  The Parry measure (built from Perron eigendata)
is the unique measure of maximal entropy log(lambda) on an irreducible
shift, and stationary_of solves p P = p directly or by iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotIrreducible,
    NotStationary,
    NotStochastic,
    SupportViolation,
)
from .perron import perron_data
from .sft import Cylinder, Sft, Word, check_symbols

PROB_TOL = 1e-12        # sums to one
STATIONARY_TOL = 1e-10  # |pP - p| per coordinate
ENTROPY_FLOOR = 1e-300  # below this a transition counts as exactly zero
DIRECT_SOLVE_MAX = 64   # direct elimination up to here, power iteration above


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """A stationary pair (p, P) supported inside an ambient shift."""

    sft: Sft
    p: np.ndarray  # stationary probability vector, length k
    P: np.ndarray  # stochastic matrix, k x k

    @property
    def k(self) -> int:
        return self.sft.k


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def normalize_exact(p: np.ndarray) -> np.ndarray:
    """Scale a non-negative vector so that fsum(p) == 1.0, compensating the
    residual into the largest entry."""
    p = np.asarray(p, dtype=np.float64) / math.fsum(p)
    for _ in range(2):
        r = 1.0 - math.fsum(p)
        if r == 0.0:
            break
        p[int(np.argmax(p))] += r
    return p


def validate_chain(p, P, s: Sft, *, check_stationary: bool = True) -> MarkovChain:
    """Check (p, P) against all chain invariants and wrap it.

    Raises NotStochastic, NotStationary or SupportViolation.  The private
    ``check_stationary`` escape hatch exists for the t=0 endpoint of the
    entropy path, whose vector is a continuity limit rather than exactly
    stationary.
    """
    p = np.asarray(p, dtype=np.float64)
    P = np.asarray(P, dtype=np.float64)
    if p.shape != (s.k,) or P.shape != (s.k, s.k):
        raise DimensionMismatch(
            f"need p of length {s.k} and P of shape {(s.k, s.k)}, "
            f"got {p.shape} and {P.shape}"
        )
    if (p < 0).any() or abs(p.sum() - 1.0) > PROB_TOL:
        raise NotStochastic("p must be a probability vector")
    if (P < 0).any():
        raise NotStochastic("P has a negative entry")
    rows = P.sum(axis=1)
    if np.abs(rows - 1.0).max() > PROB_TOL:
        raise NotStochastic(f"row sums deviate from 1 by {np.abs(rows - 1.0).max():.3e}")
    if ((P > 0) & (s.matrix == 0)).any():
        i, j = np.argwhere((P > 0) & (s.matrix == 0))[0]
        raise SupportViolation(f"P[{i},{j}] > 0 but the shift forbids {i}->{j}")
    if check_stationary:
        resid = np.abs(p @ P - p).max()
        if resid > STATIONARY_TOL:
            raise NotStationary(f"|pP - p| = {resid:.3e} exceeds {STATIONARY_TOL:.0e}")
    return MarkovChain(sft=s, p=_freeze(p), P=_freeze(P))


def cylinder_measure(mc: MarkovChain, c: Cylinder | Word) -> float:
    """Mass of a cylinder: p[w0] * prod P[w_i, w_{i+1}].

    The offset is irrelevant by stationarity.  Words leaving the chain's
    support come out exactly 0 through the product.
    """
    word = c.word if isinstance(c, Cylinder) else tuple(c)
    check_symbols(mc.sft, word)
    value = float(mc.p[word[0]])
    for a, b in zip(word, word[1:]):
        if value == 0.0:
            return 0.0
        value *= float(mc.P[a, b])
    return value


def entropy(mc: MarkovChain) -> float:
    """Entropy -sum p_i P_ij log P_ij with the 0 log 0 = 0 convention."""
    terms = []
    for i in range(mc.k):
        pi = float(mc.p[i])
        if pi <= ENTROPY_FLOOR:
            continue
        for j in range(mc.k):
            q = float(mc.P[i, j])
            if q > ENTROPY_FLOOR:
                terms.append(-pi * q * math.log(q))
    return math.fsum(terms)


def parry_measure(s: Sft) -> MarkovChain:
    """The maximal-entropy chain: p_i = u_i v_i, P_ij = a_ij v_j / (lam v_i)."""
    if s.k == 0:
        raise DimensionMismatch("empty shift")
    pd = perron_data(s)
    p = normalize_exact(pd.u * pd.v)
    P = s.matrix * pd.v[None, :] / (pd.lam * pd.v[:, None])
    P = P / P.sum(axis=1, keepdims=True)
    return validate_chain(p, P, s)


def is_ergodic(mc: MarkovChain) -> bool:
    """True iff P restricted to the support {i : p_i > 0} is irreducible."""
    support = np.flatnonzero(mc.p > 0)
    if len(support) == 0:
        return False
    sub = mc.P[np.ix_(support, support)] > 0
    return _strongly_connected(sub)


def _strongly_connected(adj: np.ndarray) -> bool:
    def reaches_all(a):
        n = a.shape[0]
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(a[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        return bool(seen.all())

    return reaches_all(adj) and reaches_all(adj.T)


def stationary_of(P) -> np.ndarray:
    """The unique probability vector with pP = p, for irreducible stochastic P.

    Direct elimination for k <= 64 (replace one balance equation with the
    normalization), power iteration on (P + I)/2 above.  Residual is
    guaranteed <= 1e-12 or NoConvergence is raised.
    """
    P = np.asarray(P, dtype=np.float64)
    k = P.shape[0]
    if P.shape != (k, k):
        raise DimensionMismatch(f"square matrix required, got {P.shape}")
    if (P < 0).any() or np.abs(P.sum(axis=1) - 1.0).max() > PROB_TOL:
        raise NotStochastic("stationary_of needs a stochastic matrix")
    if not _strongly_connected(P > 0):
        raise NotIrreducible("P is not irreducible on its index set")
    if k <= DIRECT_SOLVE_MAX:
        m = P.T - np.eye(k)
        m[-1, :] = 1.0
        rhs = np.zeros(k)
        rhs[-1] = 1.0
        p = np.linalg.solve(m, rhs)
        # one step of iterative refinement keeps the residual at solver noise
        r = rhs - m @ p
        p = p + np.linalg.solve(m, r)
        p = normalize_exact(np.maximum(p, 0.0))
    else:
        p = np.full(k, 1.0 / k)
        half = 0.5 * (P + np.eye(k))  # same fixed vector, never periodic
        for _ in range(10**6):
            nxt = p @ half
            nxt /= nxt.sum()
            delta = np.abs(nxt - p).max()
            p = nxt
            if delta <= 1e-15 and np.abs(p @ P - p).max() <= 5e-13:
                break
        else:
            raise NoConvergence("stationary vector iteration exhausted its budget")
        p = normalize_exact(p)
    resid = np.abs(p @ P - p).max()
    if resid > 1e-12:
        raise NoConvergence(f"stationary residual {resid:.3e} above 1e-12")
    return p
