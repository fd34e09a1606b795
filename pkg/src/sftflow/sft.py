"""Subshifts of finite type: transition matrices and word combinatorics.

A shift is described by a k x k 0-1 matrix A; a bi-infinite sequence is in
the shift space iff every consecutive pair (x_i, x_{i+1}) has A entry 1.
Everything downstream (measures, recodings, suspension flows) only ever
needs finite-word combinatorics, which is what lives here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NonBinaryEntry,
    NotAdmissible,
    NotIrreducible,
    ParameterOutOfRange,
    StrandedSymbol,
    SymbolOutOfRange,
)

Word = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Sft:
    """A subshift of finite type on symbols {0, ..., k-1}.

    Immutable after construction; build via :func:`new_sft` so the
    invariants (0-1 entries, no stranded symbols) are enforced.
    """

    k: int
    matrix: np.ndarray  # (k, k) int array with entries in {0, 1}

    def out_symbols(self, i: int) -> np.ndarray:
        """Columns j with a one in row i, ascending."""
        return np.flatnonzero(self.matrix[i])

    def allows(self, i: int, j: int) -> bool:
        return bool(self.matrix[i, j])


@dataclass(frozen=True)
class Cylinder:
    """The set of sequences showing ``word`` starting at coordinate ``offset``.

    Shift-invariant measures give it the same mass for every offset, so most
    code only looks at the word.
    """

    word: Word
    offset: int = 0


def new_sft(k: int, rows) -> Sft:
    """Validate a k x k 0-1 transition matrix and wrap it as an Sft.

    Raises NonBinaryEntry for entries outside {0, 1} and StrandedSymbol if
    some row or column is all zero (such a symbol appears in no bi-infinite
    sequence and would poison the eigenproblems downstream).
    """
    if k < 1:
        raise ParameterOutOfRange(f"symbol count must be >= 1, got {k}")
    a = np.asarray(rows)
    if a.shape != (k, k):
        raise NonBinaryEntry(f"expected a {k}x{k} matrix, got shape {a.shape}")
    if not np.isin(a, (0, 1)).all():
        raise NonBinaryEntry("matrix entries must be 0 or 1")
    a = a.astype(np.int64)
    if (a.sum(axis=1) == 0).any():
        dead = int(np.flatnonzero(a.sum(axis=1) == 0)[0])
        raise StrandedSymbol(f"symbol {dead} has no outgoing transition")
    if (a.sum(axis=0) == 0).any():
        dead = int(np.flatnonzero(a.sum(axis=0) == 0)[0])
        raise StrandedSymbol(f"symbol {dead} has no incoming transition")
    a.setflags(write=False)
    return Sft(k=k, matrix=a)


def full_shift(k: int) -> Sft:
    """The full k-shift (all transitions allowed)."""
    return new_sft(k, np.ones((k, k), dtype=np.int64))


def check_symbols(s: Sft, word: Word) -> None:
    for c in word:
        if not 0 <= c < s.k:
            raise SymbolOutOfRange(f"symbol {c} outside 0..{s.k - 1}")


def is_admissible(s: Sft, word: Word) -> bool:
    """True iff every consecutive pair of ``word`` is an allowed transition.

    Length-1 words are admissible by convention (every symbol occurs in some
    sequence because stranded symbols are rejected at construction).
    """
    if len(word) == 0:
        raise NotAdmissible("empty word")
    check_symbols(s, word)
    return all(s.matrix[word[i], word[i + 1]] for i in range(len(word) - 1))


def admissible_words(s: Sft, n: int) -> list[Word]:
    """All admissible words of length n, lexicographically sorted.

    For n >= 2 the count equals the sum of entries of A^(n-1): words of n
    symbols are paths of n-1 edges.
    """
    if n < 1:
        raise NotAdmissible(f"word length must be >= 1, got {n}")
    words: list[Word] = [(i,) for i in range(s.k)]
    for _ in range(n - 1):
        words = [w + (j,) for w in words for j in s.out_symbols(w[-1])]
    return words


def word_count(s: Sft, n: int) -> int:
    """Number of admissible n-words, via matrix powers (no enumeration)."""
    if n < 1:
        raise NotAdmissible(f"word length must be >= 1, got {n}")
    if n == 1:
        return s.k
    return int(np.linalg.matrix_power(s.matrix, n - 1).sum())


def is_irreducible(s: Sft) -> bool:
    """True iff the transition graph is strongly connected."""
    return _reaches_all(s.matrix, 0) and _reaches_all(s.matrix.T, 0)


def _reaches_all(a: np.ndarray, root: int) -> bool:
    k = a.shape[0]
    seen = np.zeros(k, dtype=bool)
    seen[root] = True
    stack = [root]
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(a[i]):
            if not seen[j]:
                seen[j] = True
                stack.append(int(j))
    return bool(seen.all())


def is_aperiodic(s: Sft) -> bool:
    """True iff the gcd of directed cycle lengths is 1.

    Requires irreducibility; uses the BFS-depth criterion
    gcd{ d(u) + 1 - d(v) : edge u -> v } for strongly connected graphs.
    """
    if not is_irreducible(s):
        raise NotIrreducible("aperiodicity is only defined here for irreducible shifts")
    depth = np.full(s.k, -1, dtype=np.int64)
    depth[0] = 0
    queue = [0]
    while queue:
        i = queue.pop(0)
        for j in s.out_symbols(i):
            if depth[j] < 0:
                depth[j] = depth[i] + 1
                queue.append(int(j))
    g = 0
    for i in range(s.k):
        for j in s.out_symbols(i):
            g = math.gcd(g, int(depth[i] + 1 - depth[j]))
    return g == 1
