"""Independent verification: sampling, empirical estimates, exhaustive diffs.

Trajectories are drawn with numpy's Philox counter-based generator (fixed
algorithm, reproducible across platforms for a given seed); the bootstrap
stream is split off with Philox.jumped(1) so estimates never share randomness
with the trajectory.  Entropy uses the conditional plug-in H_b - H_{b-1},
which is exact in expectation for Markov chains once b >= 2.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, NotErgodic
from .markov import MarkovChain, is_ergodic
from .sft import admissible_words
from .suspension import RoofFn

BOOTSTRAP_SEGMENTS = 100
BOOTSTRAP_REPLICATES = 200


@dataclass(frozen=True, eq=False)
class SampleRun:
    """A seeded trajectory of a Markov chain."""

    seed: int
    length: int
    trajectory: np.ndarray  # int64 symbols
    source: MarkovChain


def sample_path(mc: MarkovChain, seed: int, length: int) -> SampleRun:
    """Draw a trajectory: first symbol from p, then rows of P; Philox(seed)."""
    if length < 1:
        raise InsufficientData(f"length must be >= 1, got {length}")
    if not is_ergodic(mc):
        raise NotErgodic("sampling is only meaningful for ergodic chains")
    rng = np.random.Generator(np.random.Philox(key=seed))
    cum_p = np.cumsum(mc.p).tolist()
    cum_rows = [np.cumsum(mc.P[i]).tolist() for i in range(mc.k)]
    us = rng.random(length)
    out = np.empty(length, dtype=np.int64)
    state = min(bisect_right(cum_p, us[0]), mc.k - 1)
    out[0] = state
    for i in range(1, length):
        state = min(bisect_right(cum_rows[state], us[i]), mc.k - 1)
        out[i] = state
    out.setflags(write=False)
    return SampleRun(seed=int(seed), length=int(length), trajectory=out, source=mc)


def _block_codes(traj: np.ndarray, k: int, b: int) -> np.ndarray:
    """Encode each length-b window as an integer base k."""
    codes = traj[: len(traj) - b + 1].astype(np.int64).copy()
    for i in range(1, b):
        codes = codes * k + traj[i : len(traj) - b + 1 + i]
    return codes


def _plugin_conditional(counts_b: np.ndarray, counts_bm1: np.ndarray) -> float:
    """H_b - H_{b-1} from raw block counts."""

    def shannon(counts: np.ndarray) -> float:
        total = counts.sum()
        freqs = counts[counts > 0] / total
        return float(-(freqs * np.log(freqs)).sum())

    return shannon(counts_b) - shannon(counts_bm1)


def _segment_counts(traj: np.ndarray, k: int, b: int, n_seg: int) -> np.ndarray:
    """Block counts per contiguous segment (windows do not cross segments)."""
    bounds = np.linspace(0, len(traj), n_seg + 1).astype(np.int64)
    out = np.zeros((n_seg, k**b), dtype=np.int64)
    for s in range(n_seg):
        seg = traj[bounds[s] : bounds[s + 1]]
        if len(seg) >= b:
            out[s] = np.bincount(_block_codes(seg, k, b), minlength=k**b)
    return out


def empirical_entropy(run: SampleRun, block: int) -> tuple[float, float]:
    """Conditional plug-in entropy estimate with a segment-bootstrap stderr.

    Requires run.length >= 100 * k**block.
    """
    k = run.source.k
    if block < 2:
        raise InsufficientData("conditional plug-in needs block length >= 2")
    if run.length < 100 * k**block:
        raise InsufficientData(
            f"need at least {100 * k ** block} steps for block length {block}, "
            f"got {run.length}"
        )
    seg_b = _segment_counts(run.trajectory, k, block, BOOTSTRAP_SEGMENTS)
    seg_bm1 = _segment_counts(run.trajectory, k, block - 1, BOOTSTRAP_SEGMENTS)
    estimate = _plugin_conditional(seg_b.sum(axis=0), seg_bm1.sum(axis=0))

    rng = np.random.Generator(np.random.Philox(key=run.seed).jumped(1))
    reps = np.empty(BOOTSTRAP_REPLICATES)
    for r in range(BOOTSTRAP_REPLICATES):
        pick = rng.integers(0, BOOTSTRAP_SEGMENTS, size=BOOTSTRAP_SEGMENTS)
        reps[r] = _plugin_conditional(seg_b[pick].sum(axis=0), seg_bm1[pick].sum(axis=0))
    return estimate, float(reps.std(ddof=1))


def empirical_roof_integral(run: SampleRun, roof: RoofFn) -> tuple[float, float]:
    """Birkhoff average of the roof over the trajectory, with bootstrap stderr."""
    ml, mr = roof.window
    width = roof.width
    if run.length < width:
        raise InsufficientData(f"trajectory shorter than the roof window ({width})")
    k = run.source.k
    lookup = np.full(k**width, np.nan)
    for w, v in roof.table.items():
        code = 0
        for c in w:
            code = code * k + c
        lookup[code] = v
    samples = lookup[_block_codes(run.trajectory, k, width)]
    estimate = float(samples.mean())

    rng = np.random.Generator(np.random.Philox(key=run.seed).jumped(2))
    bounds = np.linspace(0, len(samples), BOOTSTRAP_SEGMENTS + 1).astype(np.int64)
    seg_sums = np.array(
        [samples[bounds[s] : bounds[s + 1]].sum() for s in range(BOOTSTRAP_SEGMENTS)]
    )
    seg_lens = np.diff(bounds)
    reps = np.empty(BOOTSTRAP_REPLICATES)
    for r in range(BOOTSTRAP_REPLICATES):
        pick = rng.integers(0, BOOTSTRAP_SEGMENTS, size=BOOTSTRAP_SEGMENTS)
        reps[r] = seg_sums[pick].sum() / seg_lens[pick].sum()
    return estimate, float(reps.std(ddof=1))


def brute_force_cylinder_diff(eval_a, eval_b, sft, depth: int) -> float:
    """Max |a(w) - b(w)| over every admissible word of length 1..depth.

    Exhaustive, no sampling; exact up to arithmetic rounding.
    """
    worst = 0.0
    for n in range(1, depth + 1):
        for w in admissible_words(sft, n):
            worst = max(worst, abs(eval_a(w) - eval_b(w)))
    return worst
