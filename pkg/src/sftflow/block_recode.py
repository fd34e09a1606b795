"""Higher-block recoding: replace symbols by overlapping n-blocks.

The target shift lives on the admissible n-words of the source; block i may
be followed by block j exactly when j is i shifted one step left (the last
n-1 symbols of i equal the first n-1 of j).  This is a conjugacy, so the
growth rate is preserved, chains push forward with the same entropy, and a
roof whose window fits inside the block becomes constant on 0-cylinders.

Word-level convention: the l-th target symbol indexes the source n-word
starting at position l; the anchor offset floor((n-1)/2) records where
coordinate 0 of the block sits relative to the bi-infinite alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InconsistentOverlap,
    NotAdmissible,
    ParameterOutOfRange,
    SymbolOutOfRange,
    WindowTooWide,
)
from .markov import MarkovChain, cylinder_measure, normalize_exact, validate_chain
from .sft import Sft, Word, admissible_words, is_admissible, new_sft
from .suspension import RoofFn, new_roof


@dataclass(frozen=True, eq=False)
class BlockRecode:
    """Conjugacy data between a shift and its n-block presentation."""

    source: Sft
    n: int
    target: Sft
    gamma: tuple[Word, ...]   # lex-sorted admissible n-words; index = target symbol
    anchor: int               # floor((n-1)/2)
    index: dict[Word, int]    # inverse of gamma


def build_recode(s: Sft, n: int) -> BlockRecode:
    """Construct the n-block shift of s (n >= 2)."""
    if n < 2:
        raise ParameterOutOfRange(f"block length must be >= 2, got {n}")
    gamma = tuple(admissible_words(s, n))
    index = {w: i for i, w in enumerate(gamma)}
    kn = len(gamma)
    by_prefix: dict[Word, list[int]] = {}
    for j, w in enumerate(gamma):
        by_prefix.setdefault(w[:-1], []).append(j)
    mat = np.zeros((kn, kn), dtype=np.int64)
    for i, w in enumerate(gamma):
        for j in by_prefix.get(w[1:], ()):
            mat[i, j] = 1
    return BlockRecode(
        source=s,
        n=n,
        target=new_sft(kn, mat),
        gamma=gamma,
        anchor=(n - 1) // 2,
        index=index,
    )


def encode_word(r: BlockRecode, word: Word) -> Word:
    """Slide an n-window over a source word of length >= n.

    Output length is len(word) - n + 1; symbol l indexes the n-sub-word
    starting at position l.
    """
    word = tuple(word)
    if len(word) < r.n:
        raise NotAdmissible(f"need length >= {r.n} to form one block, got {len(word)}")
    if not is_admissible(r.source, word):
        raise NotAdmissible(f"{word} is not admissible in the source shift")
    return tuple(r.index[word[l : l + r.n]] for l in range(len(word) - r.n + 1))


def decode_word(r: BlockRecode, word: Word) -> Word:
    """Collapse a target word back to its source word (length + n - 1).

    Adjacent blocks must overlap in n-1 symbols; admissible target words
    always do, anything else raises InconsistentOverlap.
    """
    word = tuple(word)
    if len(word) == 0:
        raise NotAdmissible("empty word")
    for c in word:
        if not 0 <= c < r.target.k:
            raise SymbolOutOfRange(f"block symbol {c} outside 0..{r.target.k - 1}")
    out = list(r.gamma[word[0]])
    prev = r.gamma[word[0]]
    for c in word[1:]:
        cur = r.gamma[c]
        if prev[1:] != cur[:-1]:
            raise InconsistentOverlap(f"blocks {prev} and {cur} do not overlap")
        out.append(cur[-1])
        prev = cur
    return tuple(out)


def pushforward_chain(r: BlockRecode, mc: MarkovChain) -> MarkovChain:
    """Transport a chain to the block shift; entropy is preserved.

    Block masses are the source cylinder masses; a transition between
    overlapping blocks keeps the probability of its last source step.
    """
    if mc.k != r.source.k:
        raise DimensionMismatch(
            f"chain on {mc.k} symbols does not live on the {r.source.k}-symbol source"
        )
    kn = r.target.k
    p = normalize_exact(np.array([cylinder_measure(mc, w) for w in r.gamma]))
    P = np.zeros((kn, kn))
    for i, w in enumerate(r.gamma):
        for j in r.target.out_symbols(i):
            P[i, j] = mc.P[w[-1], r.gamma[j][-1]]
    # absorb 1e-16-scale drift; rows already sum to 1 in exact arithmetic
    P = P / P.sum(axis=1, keepdims=True)
    return validate_chain(p, P, r.target)


def lift_roof(r: BlockRecode, roof: RoofFn) -> RoofFn:
    """Rewrite a roof whose window fits in the block as a 0-window roof.

    Block symbol i covers source offsets -anchor ... n-1-anchor, so the roof
    window must satisfy m_left <= anchor and m_right <= n-1-anchor.
    """
    if roof.ambient.k != r.source.k:
        raise DimensionMismatch("roof does not live on the recode's source shift")
    ml, mr = roof.window
    if ml > r.anchor or mr > r.n - 1 - r.anchor:
        raise WindowTooWide(
            f"window {roof.window} does not fit in a {r.n}-block anchored at "
            f"{r.anchor}; choose a larger block length"
        )
    lo = r.anchor - ml
    table = {(i,): roof.table[w[lo : lo + roof.width]] for i, w in enumerate(r.gamma)}
    return new_roof(r.target, (0, 0), table)
