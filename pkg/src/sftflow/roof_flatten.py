"""Constant-roof model for a 0-window roof: rationalize and chain-split.

Given a roof taking one positive value per symbol, pick tau > 0 and integers
l_i with  value_i <= l_i * tau <= value_i + delta/4  (so the flattened roof
dominates the true one), then replace each symbol i by a chain of l_i states

    i_0 -> i_1 -> ... -> i_{l_i - 1} -> j_0   whenever i -> j is allowed.

The suspension with roof l_i * tau over the source is conjugate to the
suspension with constant roof tau over the split shift, so its flow top
entropy is log(lam_split) / tau exactly.  delta is sized from the requested
entropy accuracy eta as  delta = eta * a^2 / h_top(source)  with
a = min(roof), which caps the Abramov-ratio shift of every invariant
measure by eta.

descend_measure inverts the conjugacy on chains: an ergodic chain on the
split shift induces, on the section of chain-start states, the chain it
descends from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotAdmissible,
    NotErgodic,
    NotIrreducible,
    ParameterOutOfRange,
    PhaseOutOfRange,
    WindowTooWide,
)
from .markov import MarkovChain, is_ergodic, normalize_exact, validate_chain
from .perron import dominant_pair, perron_data
from .sft import Sft, Word, is_admissible, is_irreducible, new_sft
from .suspension import RoofFn

RATIONAL_SCAN_DENOM = 64   # try tau = min(values)/q for q up to here
RATIONAL_SCAN_RTOL = 1e-9  # how close value/tau must be to an integer
DENSE_SPLIT_MAX = 2048     # materialize the split shift as a matrix up to here


@dataclass(frozen=True, eq=False)
class FlattenModel:
    """Chain-split data tying a 0-window roof to a constant-roof shift.

    The split shift is fully determined by (lengths, start and the source
    matrix); the dense matrix form is materialized only up to
    DENSE_SPLIT_MAX states (the entropy-path stage needs it, the growth
    rate does not).
    """

    source: Sft
    roof: RoofFn                     # the input 0-window roof
    tau: float
    lengths: np.ndarray              # l_i >= 1, one per source symbol
    total_states: int                # L = sum(l_i)
    split_sft: Sft | None            # the L-state shift, if small enough
    state_map: tuple[tuple[int, int], ...]  # split state -> (symbol, phase)
    start: np.ndarray                # start[i] = split index of state i_0
    delta_used: float
    split_log_lam: float             # log of the split shift's Perron root

    def flat_value(self, i: int) -> float:
        """Flattened roof value l_i * tau at symbol i."""
        return float(self.lengths[i]) * self.tau

    @property
    def end(self) -> np.ndarray:
        """end[i] = split index of the last chain state of symbol i."""
        return self.start + self.lengths - 1

    def is_split_edge(self, s1: int, s2: int) -> bool:
        """Edge rule of the split shift, independent of materialization."""
        sym1, ph1 = self.state_map[s1]
        sym2, ph2 = self.state_map[s2]
        if sym1 == sym2 and ph2 == ph1 + 1:
            return True
        return (
            ph1 == int(self.lengths[sym1]) - 1
            and ph2 == 0
            and bool(self.source.matrix[sym1, sym2])
        )


def rationalize_roof(values, delta: float) -> tuple[float, np.ndarray]:
    """Pick tau and integers l with value_i <= l_i*tau <= value_i + delta/4.

    Prefers the coarsest tau = min(values)/q (q <= 64) that divides every
    value exactly, provided tau >= delta/8; this keeps the split shift small
    and reproduces already-rational roofs exactly.  Otherwise falls back to
    tau = delta/8 with l_i = ceil(value_i / tau).
    """
    if delta <= 0:
        raise ParameterOutOfRange(f"delta must be positive, got {delta}")
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or len(vals) == 0:
        raise ParameterOutOfRange("values must be a non-empty vector")
    if not (vals > 0).all():
        raise ParameterOutOfRange("roof values must be strictly positive")
    vmin = float(vals.min())
    floor = delta / 8.0

    for q in range(1, RATIONAL_SCAN_DENOM + 1):
        tau = vmin / q
        if tau < floor:
            break
        ratios = vals / tau
        ls = np.rint(ratios)
        if (np.abs(ratios - ls) > RATIONAL_SCAN_RTOL * np.maximum(1.0, ratios)).any():
            continue
        if (ls < 1).any():
            continue
        got = _verified(vals, tau, ls.astype(np.int64), delta)
        if got is not None:
            return got

    tau = floor
    ls = np.ceil(vals / tau).astype(np.int64)
    ls = np.maximum(ls, 1)
    for i in range(len(vals)):
        while ls[i] * tau < vals[i]:  # ulp guard; adds at most one tau = delta/8
            ls[i] += 1
    return tau, ls


def _verified(vals, tau: float, ls: np.ndarray, delta: float):
    """Nudge tau up a few ulps if needed so l*tau >= value holds in floats."""
    for _ in range(4):
        prods = ls * tau
        if (prods >= vals).all() and (prods <= vals + delta / 4.0).all():
            return tau, ls
        tau = math.nextafter(tau, math.inf)
    return None


def build_flatten(s: Sft, roof0: RoofFn, eta: float) -> FlattenModel:
    """Flatten a 0-window roof on an irreducible shift at accuracy eta."""
    if eta <= 0:
        raise ParameterOutOfRange(f"eta must be positive, got {eta}")
    if roof0.window != (0, 0):
        raise WindowTooWide("flattening needs a 0-window roof; block-recode first")
    if roof0.ambient.k != s.k:
        raise DimensionMismatch("roof does not live on the given shift")
    if not is_irreducible(s):
        raise NotIrreducible("chain-splitting requires an irreducible shift")

    values = np.array([roof0.table[(i,)] for i in range(s.k)])
    a = float(values.min())
    if int(s.matrix.sum()) == s.k:
        # single cycle: lam = 1, every measure has entropy 0, any delta works
        delta = a
    else:
        delta = eta * a * a / math.log(perron_data(s).lam)
    tau, lengths = rationalize_roof(values, delta)

    start = np.zeros(s.k, dtype=np.int64)
    state_map: list[tuple[int, int]] = []
    for i in range(s.k):
        start[i] = len(state_map)
        state_map.extend((i, alpha) for alpha in range(int(lengths[i])))
    total = len(state_map)
    ends = start + lengths - 1

    if total <= DENSE_SPLIT_MAX:
        mat = np.zeros((total, total), dtype=np.int64)
        for i in range(s.k):
            for alpha in range(int(lengths[i]) - 1):
                mat[start[i] + alpha, start[i] + alpha + 1] = 1
            for j in s.out_symbols(i):
                mat[ends[i], start[j]] = 1
        split = new_sft(total, mat)
        if not is_irreducible(split):
            raise NotIrreducible("internal: split shift lost irreducibility")
    else:
        # the construction preserves strong connectivity; only the growth
        # rate is needed at this scale
        split = None

    log_lam = math.log(_split_perron_root(s, lengths, start, ends, total))
    start.setflags(write=False)
    lengths = np.asarray(lengths, dtype=np.int64)
    lengths.setflags(write=False)
    return FlattenModel(
        source=s,
        roof=roof0,
        tau=float(tau),
        lengths=lengths,
        total_states=total,
        split_sft=split,
        state_map=tuple(state_map),
        start=start,
        delta_used=float(delta),
        split_log_lam=log_lam,
    )


def _split_perron_root(s: Sft, lengths, start, ends, total: int) -> float:
    """Perron root of the split shift through its implicit matvec.

    Chain states feed the next phase; end states fan out to the chain
    starts the source matrix allows.  Works at any L without materializing
    the L x L matrix.  Long chains push the subdominant eigenvalues within
    O(1/L^2) of the dominant one, where plain power iteration stalls; the
    Arnoldi fallback handles that regime on the same implicit operator.
    """
    chain_src = np.concatenate(
        [np.arange(start[i], ends[i]) for i in range(s.k)]
    ).astype(np.int64)
    chain_dst = chain_src + 1
    a = s.matrix.astype(np.float64)

    def apply(x: np.ndarray) -> np.ndarray:
        y = np.zeros(total)
        y[chain_src] = x[chain_dst]
        y[ends] += a @ x[start]
        return y

    # power iteration is hopeless once the peripheral cluster tightens (the
    # subdominant moduli close in as 1 - O(1/l_max^2)), so only attempt it
    # in the benign regime and cap the attempt
    if total <= 512 and int(lengths.max()) <= 64:
        try:
            lam, _vec = dominant_pair(apply, total, max_iter=2 * 10**5)
            return lam
        except NoConvergence:
            pass

    # Shift-invert Arnoldi: for real sigma > lambda the Perron root is the
    # strictly nearest eigenvalue (|sigma - lam e^{i theta}| > sigma - lam
    # for theta != 0), and a short Collatz-Wielandt run gives a rigorous
    # upper bound to use as sigma.  The split matrix is sparse (one edge per
    # chain state plus the jumps), so the factorization is cheap at any L.
    x = np.full(total, 1.0 / total)
    hi_cw = float("inf")
    for _ in range(300):
        y = apply(x) + x
        hi_cw = min(hi_cw, float((y / x).max()))
        x = y / y.sum()
    sigma = (hi_cw - 1.0) * (1.0 + 1e-9) + 1e-12

    jump_rows = np.concatenate([np.full(len(s.out_symbols(i)), ends[i]) for i in range(s.k)])
    jump_cols = np.concatenate([start[s.out_symbols(i)] for i in range(s.k)])
    rows = np.concatenate([chain_src, jump_rows])
    cols = np.concatenate([chain_dst, jump_cols])
    mat = scipy.sparse.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(total, total)
    )
    vals, vecs = scipy.sparse.linalg.eigs(
        mat, k=1, sigma=sigma, which="LM", tol=0,
        v0=np.full(total, 1.0 / total),
    )
    lam = float(vals[0].real)
    vec = np.abs(vecs[:, 0].real)
    resid = float(np.abs(apply(vec) - lam * vec).max())
    if lam <= 0 or resid > 1e-11 * max(lam, 1.0) * vec.max():
        raise NoConvergence(
            f"Arnoldi fallback residual {resid:.3e} too large for lambda {lam}"
        )
    return lam


def flatten_encode(model: FlattenModel, word: Word, phase: int = 0) -> Word:
    """Expand a source word into split states, starting at the given phase.

    The first symbol contributes states phase .. l-1 of its chain; later
    symbols contribute whole chains.
    """
    word = tuple(word)
    if len(word) == 0:
        raise NotAdmissible("empty word")
    if not is_admissible(model.source, word):
        raise NotAdmissible(f"{word} is not admissible in the source shift")
    l0 = int(model.lengths[word[0]])
    if not 0 <= phase < l0:
        raise PhaseOutOfRange(f"phase {phase} outside [0, {l0}) for symbol {word[0]}")
    out: list[int] = []
    for pos, c in enumerate(word):
        lo = phase if pos == 0 else 0
        for alpha in range(lo, int(model.lengths[c])):
            out.append(int(model.start[c]) + alpha)
    return tuple(out)


def flatten_decode(model: FlattenModel, word: Word) -> tuple[Word, int]:
    """Collapse a split word to (source word, starting phase).

    Chain runs collapse to their base symbol; the first (possibly partial)
    run reports its starting phase, and a trailing partial run still
    contributes its symbol.  encode(decode(w)) extends w to the end of its
    last chain; decode(encode(w, p)) == (w, p).
    """
    word = tuple(word)
    if len(word) == 0:
        raise NotAdmissible("empty word")
    for c in word:
        if not 0 <= c < model.total_states:
            raise NotAdmissible(f"state {c} outside 0..{model.total_states - 1}")
    for s1, s2 in zip(word, word[1:]):
        if not model.is_split_edge(s1, s2):
            raise NotAdmissible(f"split shift forbids {s1}->{s2}")
    syms: list[int] = []
    first_phase = model.state_map[word[0]][1]
    prev_sym = None
    prev_phase = None
    for state in word:
        sym, phase = model.state_map[state]
        if prev_sym is None or not (sym == prev_sym and phase == prev_phase + 1):
            syms.append(sym)
        prev_sym, prev_phase = sym, phase
    return tuple(syms), int(first_phase)


def descend_measure(model: FlattenModel, nu: MarkovChain) -> MarkovChain:
    """Induce the source chain from an ergodic chain on the split shift.

    Restrict to the section of chain-start states: masses are the start
    masses renormalized, transitions are the chain-end to chain-start
    probabilities.  Entropies satisfy the Abramov/Kac identity
    entropy(descended) / sum(p_i l_i tau) = entropy(nu) / tau.
    """
    if nu.k != model.total_states:
        raise DimensionMismatch(
            f"chain on {nu.k} states does not match the {model.total_states}-state split"
        )
    if not is_ergodic(nu):
        raise NotErgodic("descending is only defined for ergodic chains")
    k = model.source.k
    starts = model.start
    ends = model.end
    p = normalize_exact(np.array([nu.p[starts[m]] for m in range(k)]))
    P = np.zeros((k, k))
    for m in range(k):
        for n in model.source.out_symbols(m):
            P[m, n] = nu.P[ends[m], starts[n]]
    P = P / P.sum(axis=1, keepdims=True)
    return validate_chain(p, P, model.source)
