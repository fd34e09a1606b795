"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: word
enumeration goes through itertools, spectral radii through numpy's dense
eigensolver, and the flow-entropy ground truth through bisection on the
one-symbol Bowen equation.
"""

import itertools
import math

import numpy as np
import pytest

import sftflow as sf

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


@pytest.fixture
def golden_mean():
    return sf.new_sft(2, [[1, 1], [1, 0]])


@pytest.fixture
def full2():
    return sf.full_shift(2)


@pytest.fixture
def full3():
    return sf.full_shift(3)


@pytest.fixture
def cycle2():
    return sf.new_sft(2, [[0, 1], [1, 0]])


def brute_words(matrix, n):
    """Independent enumeration of admissible words via itertools."""
    k = len(matrix)
    return [
        w
        for w in itertools.product(range(k), repeat=n)
        if all(matrix[w[i]][w[i + 1]] for i in range(n - 1))
    ]


def random_irreducible(rng, k, density=0.55):
    """Seeded random irreducible Sft with no stranded symbols."""
    while True:
        m = (rng.random((k, k)) < density).astype(int)
        for i in range(k):
            if m[i].sum() == 0:
                m[i, rng.integers(k)] = 1
            if m[:, i].sum() == 0:
                m[rng.integers(k), i] = 1
        s = sf.new_sft(k, m)
        if sf.is_irreducible(s):
            return s


def random_chain_on(rng, s):
    """Seeded random ergodic chain fully supported on s."""
    w = (0.05 + rng.random((s.k, s.k))) * s.matrix
    P = w / w.sum(axis=1, keepdims=True)
    p = sf.stationary_of(P)
    return sf.validate_chain(p, P, s)


def bowen_root(matrix, values, tol=1e-13):
    """Flow top entropy for a roof depending on the current symbol only.

    Bisects for the s with spectral radius of [a_ij * exp(-s*v_i)] equal
    to 1, using numpy's dense eigensolver; independent of the library's
    flattening machinery.
    """
    a = np.asarray(matrix, dtype=float)
    v = np.asarray(values, dtype=float)

    def spr(sv):
        return float(np.abs(np.linalg.eigvals(a * np.exp(-sv * v)[:, None])).max())

    lo, hi = 0.0, 1.0
    while spr(hi) > 1.0:
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if spr(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
