"""Continuous family of Markov chains from zero entropy up to the Parry chain.

Starting from the Parry pair (p, P) of an irreducible shift, each symbol i
designates one allowed successor drain(i); at parameter t the off-drain
transition mass is scaled by t and the remainder is poured into the drain
column:

    P(t)[i, j]        = t * P[i, j]          for j != drain(i)
    P(t)[i, drain(i)] = t * P[i, drain(i)] + (1 - t)

P(1) = P, P(0) is a 0-1 matrix (entropy 0), the support is constant for
t in (0, 1] so every such chain is ergodic, and the entropy of the family
moves continuously from 0 to log(lambda).  solve_entropy inverts it by a
bracketing grid scan plus bisection; continuity is all that is assumed
(no monotonicity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BracketNotFound,
    NoConvergence,
    ParameterOutOfRange,
    SupportViolation,
    TargetOutOfRange,
)
from .markov import MarkovChain, entropy, parry_measure, stationary_of, validate_chain
from .perron import perron_data
from .sft import Sft

# p(0) is defined as the stationary vector just inside the ergodic regime;
# the entropy at t=0 is exactly 0 whatever vector is attached to P(0).
ZERO_LIMIT_T = 1e-9
GRID_START = 64
GRID_MAX = 4096
BISECT_WIDTH = 1e-12


@dataclass(frozen=True, eq=False)
class EntropyPath:
    """Parry chain plus the drain column used to deflate it."""

    sft: Sft
    base: MarkovChain   # the Parry measure of sft
    drain: np.ndarray   # drain[i] = column receiving the removed mass
    log_lam: float      # top entropy of the ambient shift


def build_path(s: Sft, drain=None) -> EntropyPath:
    """Build the interpolation family on an irreducible shift.

    ``drain`` defaults to the smallest allowed successor of each symbol;
    a custom choice must satisfy A[i, drain[i]] = 1.
    """
    base = parry_measure(s)
    if drain is None:
        drain = np.array([int(np.flatnonzero(s.matrix[i])[0]) for i in range(s.k)])
    else:
        drain = np.asarray(drain, dtype=np.int64)
        if drain.shape != (s.k,):
            raise ParameterOutOfRange(f"drain must have length {s.k}")
        for i in range(s.k):
            if not s.allows(i, int(drain[i])):
                raise SupportViolation(f"drain[{i}]={int(drain[i])} is not an allowed successor")
    drain.setflags(write=False)
    lam = perron_data(s).lam
    return EntropyPath(sft=s, base=base, drain=drain, log_lam=float(np.log(lam)))


def path_matrix(path: EntropyPath, t: float) -> np.ndarray:
    """The stochastic matrix P(t); exact 0-1 matrix at t=0, exactly P at t=1."""
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"t must lie in [0, 1], got {t}")
    rows = np.arange(path.sft.k)
    q = t * path.base.P
    q[rows, path.drain] = t * path.base.P[rows, path.drain] + (1.0 - t)
    return q


def path_measure(path: EntropyPath, t: float) -> MarkovChain:
    """The chain (p(t), P(t)); ergodic for every t in (0, 1].

    At t=0 the matrix has several closed classes in general, so the vector
    is taken as the stationary vector at t=1e-9 (the continuity limit) and
    the strict stationarity check is waived for this single endpoint.
    """
    q = path_matrix(path, t)
    if t == 0.0:
        p = stationary_of(path_matrix(path, ZERO_LIMIT_T))
        return validate_chain(p, q, path.sft, check_stationary=False)
    p = stationary_of(q)
    return validate_chain(p, q, path.sft)


def path_entropy(path: EntropyPath, t: float) -> float:
    """Entropy of the chain at parameter t; 0 at t=0, log(lambda) at t=1."""
    return entropy(path_measure(path, t))


def ivt_root(g, lo: float, hi: float, tol: float) -> float:
    """Root of a continuous g with |g(root)| <= tol, by grid scan + bisection.

    Scans uniform grids (64 points, doubling to 4096) for a sign change,
    keeps the bracket with the largest left endpoint, then bisects.  The
    caller guarantees g(lo) and g(hi) have opposite signs, so a missing
    sign change is an internal failure (BracketNotFound).
    """
    bracket = None
    res = GRID_START
    while res <= GRID_MAX:
        ts = np.linspace(lo, hi, res + 1)
        vals = [g(float(t)) for t in ts]
        for i in range(res - 1, 0, -1):
            if vals[i] == 0.0:
                return float(ts[i])
            if vals[i] * vals[i + 1] < 0.0:
                bracket = (float(ts[i]), float(ts[i + 1]), vals[i])
                break
        if bracket is None and vals[0] * vals[1] < 0.0:
            bracket = (float(ts[0]), float(ts[1]), vals[0])
        if bracket is not None:
            break
        res *= 2
    if bracket is None:
        raise BracketNotFound("no sign change found on the scan grid")

    a, b, ga = bracket
    for _ in range(200):
        mid = 0.5 * (a + b)
        gm = g(mid)
        if abs(gm) <= tol:
            return mid
        if (ga < 0.0) == (gm < 0.0):
            a, ga = mid, gm
        else:
            b = mid
        if b - a <= BISECT_WIDTH:
            mid = 0.5 * (a + b)
            if abs(g(mid)) <= tol:
                return mid
            raise NoConvergence("bisection interval collapsed before reaching tol")
    raise NoConvergence("bisection exhausted its iteration budget")


def solve_entropy(path: EntropyPath, h: float, tol: float) -> float:
    """Find t in (0, 1] with |entropy(t) - h| <= tol.

    Continuity plus the endpoint values 0 and log(lambda) guarantee a root;
    monotonicity is not assumed.  The largest-left-endpoint bracket rule
    keeps the returned t away from 0, where the chain is ergodic.
    """
    if tol <= 0:
        raise ParameterOutOfRange(f"tol must be positive, got {tol}")
    if not 0.0 < h < path.log_lam - tol:
        raise TargetOutOfRange(
            f"target {h} outside the attainable interval (0, {path.log_lam:.12g} - tol)"
        )
    return ivt_root(lambda t: path_entropy(path, t) - h, 0.0, 1.0, tol)
