"""Perron-Frobenius eigendata of irreducible 0-1 matrices.

The dominant eigenvalue lambda of the transition matrix carries the
topological entropy (log lambda) and, with its positive left/right
eigenvectors, the maximal-entropy Markov chain.  Computation is a shifted
power iteration on A + I, which converges even for periodic irreducible
matrices because the shift kills the rotation on the peripheral spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import NoConvergence, NotIrreducible
from .sft import Sft, is_irreducible

# Stop once the Collatz-Wielandt enclosure of lambda is this tight and the
# eigen-residuals are below RESIDUAL_TOL; the type contract is 1e-12 relative.
RAYLEIGH_TOL = 1e-14
RESIDUAL_TOL = 1e-13
MAX_ITER = 10**6
SPARSE_CUTOFF = 512  # above this many states, matvecs go through CSR


@dataclass(frozen=True, eq=False)
class PerronData:
    """Dominant eigenvalue with positive left/right eigenvectors.

    Normalization: sum(v) == 1, then u scaled so that sum(u*v) == 1.
    """

    lam: float
    u: np.ndarray  # left (row) eigenvector, u A = lam u
    v: np.ndarray  # right (column) eigenvector, A v = lam v


def dominant_pair(apply, k: int, max_iter: int = MAX_ITER) -> tuple[float, np.ndarray]:
    """Power-iterate I + (matrix given as a matvec callable) from uniform.

    Returns (lambda, positive vector).  The Collatz-Wielandt ratios of the
    shifted matrix enclose lambda + 1, so the stopping test is a rigorous
    relative width, backed by an explicit eigen-residual check.
    """
    x = np.full(k, 1.0 / k)
    for _ in range(max_iter):
        ax = apply(x)
        y = ax + x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        lam_shift = 0.5 * (lo + hi)
        x = y / y.sum()
        if hi - lo <= RAYLEIGH_TOL * lam_shift:
            resid = np.abs(apply(x) - (lam_shift - 1.0) * x).max()
            if resid <= RESIDUAL_TOL * lam_shift * np.abs(x).max():
                return lam_shift - 1.0, x
    raise NoConvergence(f"power iteration did not converge in {max_iter} steps")


def perron_data(s: Sft) -> PerronData:
    """Perron eigendata of an irreducible Sft; deterministic across runs."""
    if not is_irreducible(s):
        raise NotIrreducible("Perron eigendata requires an irreducible matrix")
    if s.k >= SPARSE_CUTOFF:
        a = scipy.sparse.csr_matrix(s.matrix.astype(np.float64))
        at = a.T.tocsr()
    else:
        a = s.matrix.astype(np.float64)
        at = a.T.copy()
    lam_r, v = dominant_pair(lambda x: a @ x, s.k)
    lam_l, u = dominant_pair(lambda x: at @ x, s.k)
    lam = 0.5 * (lam_r + lam_l)
    v = v / v.sum()
    u = u / float(u @ v)
    return PerronData(lam=lam, u=u, v=v)


def top_entropy(s: Sft) -> float:
    """Topological entropy of the shift: log of the Perron eigenvalue."""
    return math.log(perron_data(s).lam)
