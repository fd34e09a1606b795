"""End-to-end construction of an ergodic chain with prescribed flow entropy.

Given an irreducible shift, a finite-window roof and a target h strictly
between 0 and the flow's top entropy, the pipeline is:

1. enclose the flow top entropy, take eta = min((H - h)/4, h/4);
2. recode to the smallest block length making the roof 0-window;
3. flatten the lifted roof at accuracy eta into a constant-roof split shift;
4. run the entropy-interpolation family on the split shift;
5. descend each family member to the recoded shift and evaluate its Abramov
   ratio against the TRUE lifted roof (so the answer needs no eta slack);
6. the endpoints straddle h, bisect to |achieved - h| <= tol.

The measure on the original shift is the pair (chain, recode): an N-step
Markov measure, evaluated on source cylinders via the block conjugacy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .block_recode import BlockRecode, build_recode, encode_word, lift_roof
from .entropy_path import build_path, ivt_root, path_measure
from .errors import (
    BracketFailure,
    NotIrreducible,
    ParameterOutOfRange,
    TargetOutOfRange,
)
from .markov import MarkovChain, cylinder_measure, is_ergodic
from .roof_flatten import FlattenModel, build_flatten, descend_measure
from .sft import Cylinder, Sft, Word, check_symbols, is_admissible, is_irreducible
from .suspension import (
    RoofFn,
    abramov_entropy,
    block_length_for_window,
    flow_top_entropy_bounds,
)

BOUNDS_ETA = 1e-3   # precision of the top-entropy enclosure used for guards
S_LOW = 1e-9        # low evaluation point: inside the ergodic regime, entropy ~ 0
MAX_ETA_RETRIES = 6


@dataclass(frozen=True, eq=False)
class SynthesisReport:
    """Everything produced by one synthesis run."""

    n_used: int
    recode: BlockRecode
    model: FlattenModel
    source_roof: RoofFn         # the roof as given, on the original shift
    lifted_roof: RoofFn         # its 0-window form on the recoded shift
    t_star: float
    chain: MarkovChain          # on the recoded shift
    achieved: float
    target: float
    tol: float
    eta_used: float
    delta_used: float
    bracket: tuple[float, float]
    ergodic: bool
    bounds: tuple[float, float]  # flow top entropy enclosure used for guards


def synthesize(s: Sft, roof: RoofFn, h: float, tol: float, eta: float | None = None) -> SynthesisReport:
    """Produce an ergodic chain whose flow entropy is h within tol.

    Raises TargetOutOfRange when h is not strictly inside the attainable
    interval (judged against the computed enclosure), and BracketFailure if
    the endpoint entropies fail to straddle h even after halving eta six
    times (which cannot happen for targets safely inside the interval).
    """
    if tol <= 0:
        raise ParameterOutOfRange(f"tol must be positive, got {tol}")
    if not is_irreducible(s):
        raise NotIrreducible("synthesis requires an irreducible shift")
    if roof.ambient.k != s.k:
        raise ParameterOutOfRange("roof does not live on the given shift")

    lo, hi = flow_top_entropy_bounds(s, roof, BOUNDS_ETA)
    if h <= 0.0 or h >= lo - tol:
        raise TargetOutOfRange(
            f"target {h} outside (0, {lo:.12g} - tol); flow top entropy lies in "
            f"[{lo:.12g}, {hi:.12g}]"
        )
    if eta is not None and eta <= 0:
        raise ParameterOutOfRange(f"eta must be positive, got {eta}")
    eta0 = float(eta) if eta is not None else min((hi - h) / 4.0, h / 4.0)

    n_used = block_length_for_window(roof.window)
    recode = build_recode(s, n_used)
    roof_n = lift_roof(recode, roof)

    model = None
    for attempt in range(MAX_ETA_RETRIES + 1):
        eta_used = eta0 / 2.0**attempt
        candidate = build_flatten(recode.target, roof_n, eta_used)
        if candidate.split_sft is None:
            raise ParameterOutOfRange(
                f"flattening at eta={eta_used:.3g} needs {candidate.total_states} "
                "states; raise eta/tolerance or use rationally related roof values"
            )
        path = build_path(candidate.split_sft)

        def ratio(t: float, _m=candidate, _p=path) -> float:
            return abramov_entropy(descend_measure(_m, path_measure(_p, t)), roof_n)

        f_lo, f_hi = ratio(S_LOW), ratio(1.0)
        if f_lo < h < f_hi:
            model = candidate
            break
    if model is None:
        raise BracketFailure(
            f"endpoint entropies ({f_lo:.6g}, {f_hi:.6g}) never straddled {h} "
            f"after {MAX_ETA_RETRIES} eta halvings"
        )

    t_star = ivt_root(lambda t: ratio(t) - h, S_LOW, 1.0, tol)
    chain = descend_measure(model, path_measure(path, t_star))
    achieved = abramov_entropy(chain, roof_n)
    return SynthesisReport(
        n_used=n_used,
        recode=recode,
        model=model,
        source_roof=roof,
        lifted_roof=roof_n,
        t_star=float(t_star),
        chain=chain,
        achieved=float(achieved),
        target=float(h),
        tol=float(tol),
        eta_used=float(eta_used),
        delta_used=float(model.delta_used),
        bracket=(float(f_lo), float(f_hi)),
        ergodic=bool(is_ergodic(chain)),
        bounds=(float(lo), float(hi)),
    )


def evaluate_cylinder_on_source(report: SynthesisReport, c: Cylinder | Word) -> float:
    """Mass of a cylinder of the ORIGINAL shift under the synthesized measure.

    Words of at least the block length encode to a single recoded cylinder;
    shorter ones sum the masses of the blocks extending them (boundary-block
    completions).  Non-admissible words get 0.
    """
    word = c.word if isinstance(c, Cylinder) else tuple(c)
    check_symbols(report.recode.source, word)
    if not is_admissible(report.recode.source, word):
        return 0.0
    n = report.recode.n
    if len(word) >= n:
        return cylinder_measure(report.chain, encode_word(report.recode, word))
    m = len(word)
    return math.fsum(
        float(report.chain.p[j])
        for j, g in enumerate(report.recode.gamma)
        if g[:m] == word
    )
