"""Suspension flows over SFTs: roof functions and entropy functionals.

A roof here is locally constant with a finite coordinate window
(m_left, m_right): its value at a sequence x depends only on
x_{-m_left} ... x_{m_right}, stored as a table over the admissible words of
that width.  Any continuous roof is a uniform limit of these, and the class
makes every integral a finite sum.

Entropy of a lifted measure follows Abramov: base entropy divided by the
roof integral.  Flow topological entropy is enclosed in an interval of
requested width by flattening the roof to integer multiples of a common
tau (see roof_flatten) and reading off the split shift's growth rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    NotIrreducible,
    ParameterOutOfRange,
    RoofTableError,
    WindowTooWide,
)
from .markov import MarkovChain, cylinder_measure, entropy
from .sft import Sft, Word, admissible_words, is_irreducible


@dataclass(frozen=True, eq=False)
class RoofFn:
    """Strictly positive, finite-window locally constant roof function."""

    ambient: Sft
    window: tuple[int, int]       # (m_left, m_right), both >= 0
    table: dict[Word, float]      # admissible words of the window width -> value
    min_value: float

    @property
    def width(self) -> int:
        return self.window[0] + self.window[1] + 1

    def value(self, word: Word) -> float:
        return self.table[tuple(word)]


@dataclass(frozen=True, eq=False)
class Suspension:
    """A base shift together with its roof."""

    base: Sft
    roof: RoofFn


def new_roof(ambient: Sft, window: tuple[int, int], table: dict) -> RoofFn:
    """Validate window/table and wrap them as a RoofFn.

    The table must assign a positive value to exactly the admissible words
    of length m_left + m_right + 1.
    """
    m_left, m_right = int(window[0]), int(window[1])
    if m_left < 0 or m_right < 0:
        raise ParameterOutOfRange(f"window offsets must be >= 0, got {window}")
    width = m_left + m_right + 1
    wanted = admissible_words(ambient, width)
    norm = {tuple(int(c) for c in w): float(v) for w, v in table.items()}
    if set(norm) != set(wanted):
        missing = [w for w in wanted if w not in norm][:3]
        extra = [w for w in norm if w not in set(wanted)][:3]
        raise RoofTableError(
            f"table keys must be the admissible words of length {width}; "
            f"missing {missing}, extraneous {extra}"
        )
    bad = [w for w, v in norm.items() if not v > 0 or not math.isfinite(v)]
    if bad:
        raise RoofTableError(f"non-positive roof value at {bad[0]}")
    ordered = {w: norm[w] for w in wanted}
    return RoofFn(
        ambient=ambient,
        window=(m_left, m_right),
        table=ordered,
        min_value=min(ordered.values()),
    )


def constant_roof(ambient: Sft, c: float) -> RoofFn:
    """Roof identically equal to c (window (0, 0))."""
    return new_roof(ambient, (0, 0), {(i,): c for i in range(ambient.k)})


def roof_from_values(ambient: Sft, values) -> RoofFn:
    """Window-(0,0) roof from one value per symbol."""
    return new_roof(ambient, (0, 0), {(i,): v for i, v in enumerate(values)})


def pad_roof(roof: RoofFn, window: tuple[int, int]) -> RoofFn:
    """Rewrite the roof on a wider window by replicating values.

    The value of a wide word is the value of its sub-word at the original
    offsets, so integrals are unchanged.
    """
    ml, mr = int(window[0]), int(window[1])
    if ml < roof.window[0] or mr < roof.window[1]:
        raise WindowTooWide(f"{window} does not contain {roof.window}")
    lo = ml - roof.window[0]
    hi = lo + roof.width
    table = {
        w: roof.table[w[lo:hi]]
        for w in admissible_words(roof.ambient, ml + mr + 1)
    }
    return new_roof(roof.ambient, (ml, mr), table)


def roof_integral(roof: RoofFn, mc: MarkovChain) -> float:
    """Integral of the roof against the chain: sum over window-width words."""
    if mc.k != roof.ambient.k:
        raise DimensionMismatch(
            f"chain on {mc.k} symbols cannot integrate a roof on {roof.ambient.k}"
        )
    return math.fsum(cylinder_measure(mc, w) * v for w, v in roof.table.items())


def abramov_entropy(mc: MarkovChain, roof: RoofFn) -> float:
    """Flow entropy of the lifted measure: base entropy / roof integral."""
    return entropy(mc) / roof_integral(roof, mc)


def block_length_for_window(window: tuple[int, int]) -> int:
    """Smallest block length n >= 2 whose anchored window covers the roof's.

    A block at position l covers source offsets -floor((n-1)/2) ... floor(n/2)
    relative to l, so n must satisfy floor((n-1)/2) >= m_left and
    floor(n/2) >= m_right.
    """
    ml, mr = window
    return max(2, 2 * ml + 1, 2 * mr)


def flow_top_entropy_bounds(s: Sft, roof: RoofFn, eta: float) -> tuple[float, float]:
    """Interval [log lam_B / tau, + eta] containing the flow's top entropy.

    The flattened roof dominates the true one, so its constant-roof model
    can only lose entropy; the flattening guarantee bounds the loss by eta.
    Collapses to an exact value for roofs already of the form l*tau.
    """
    from .block_recode import build_recode, lift_roof
    from .roof_flatten import build_flatten

    if eta <= 0:
        raise ParameterOutOfRange(f"eta must be positive, got {eta}")
    if not is_irreducible(s):
        raise NotIrreducible("flow entropy bounds need an irreducible base shift")
    if roof.window == (0, 0):
        base, roof0 = s, roof
    else:
        rec = build_recode(s, block_length_for_window(roof.window))
        base, roof0 = rec.target, lift_roof(rec, roof)
    model = build_flatten(base, roof0, eta)
    lo = model.split_log_lam / model.tau
    return lo, lo + eta
