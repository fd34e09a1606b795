"""Re-verification of synthesis reports.

A report embeds its inputs, so verification is self-contained: re-parse,
re-derive the deterministic pipeline stages and compare them field by field,
re-check the chain invariants, and (optionally) cross-check entropy and roof
integral against seeded Monte Carlo estimates at 3 bootstrap standard errors.
"""

from __future__ import annotations

import numpy as np

from . import formats
from .block_recode import build_recode, lift_roof
from .entropy_path import build_path, path_measure
from .errors import InsufficientData, ParseError, SftFlowError
from .markov import entropy, is_ergodic
from .oracle import empirical_entropy, empirical_roof_integral, sample_path
from .roof_flatten import build_flatten, descend_measure
from .suspension import abramov_entropy, block_length_for_window, roof_integral

REPRO_TOL = 1e-12
MC_SIGMAS = 3.0

REQUIRED_FIELDS = (
    "format_version",
    "inputs_hash",
    "inputs",
    "n_used",
    "tau",
    "l",
    "L",
    "t_star",
    "chain",
    "achieved",
    "target",
    "eta_used",
    "delta_used",
    "bracket",
    "ergodic",
)


def verify_report(report: dict, samples: int = 0, seed: int = 0) -> dict:
    """Run every check on a parsed report; returns pass/fail per check."""
    checks: list[dict] = []

    def add(name: str, passed: bool, detail: str) -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    missing = [f for f in REQUIRED_FIELDS if f not in report]
    add("fields_present", not missing, f"missing: {missing}" if missing else "all present")
    if missing:
        return _summary(checks)
    add(
        "format_version",
        report["format_version"] == formats.FORMAT_VERSION,
        f"found {report['format_version']}",
    )

    inputs = report["inputs"]
    recomputed = formats.inputs_hash(
        inputs["matrix"], inputs["roof"], inputs["target"], inputs["tol"], inputs.get("eta")
    )
    add(
        "inputs_hash",
        recomputed == report["inputs_hash"],
        "hash matches" if recomputed == report["inputs_hash"] else "inputs were altered",
    )

    try:
        s = formats.matrix_from_dict(inputs["matrix"])
        roof = formats.roof_from_dict(inputs["roof"], s)
    except ParseError as e:
        add("inputs_parse", False, str(e))
        return _summary(checks)
    add("inputs_parse", True, "matrix and roof parse")

    n_expected = block_length_for_window(roof.window)
    add("block_length", report["n_used"] == n_expected, f"expected {n_expected}")

    try:
        rec = build_recode(s, int(report["n_used"]))
        roof_n = lift_roof(rec, roof)
        chain = formats.parse_chain_fields(report, rec.target)
    except (ParseError, SftFlowError) as e:
        add("chain_valid", False, str(e))
        return _summary(checks)
    add("chain_valid", True, "stochastic, stationary, supported by the recoded shift")

    ergodic = is_ergodic(chain)
    add(
        "ergodic",
        ergodic and bool(report["ergodic"]),
        f"recomputed {ergodic}, reported {report['ergodic']}",
    )

    model = build_flatten(rec.target, roof_n, float(report["eta_used"]))
    flatten_ok = (
        abs(model.tau - float(report["tau"])) <= REPRO_TOL
        and [int(x) for x in model.lengths] == [int(x) for x in report["l"]]
        and model.total_states == int(report["L"])
    )
    add(
        "flatten_reproduces",
        flatten_ok,
        f"tau={model.tau}, l={[int(x) for x in model.lengths]}, L={model.total_states}",
    )

    path = build_path(model.split_sft)
    rebuilt = descend_measure(model, path_measure(path, float(report["t_star"])))
    drift = max(
        float(np.abs(rebuilt.p - chain.p).max()),
        float(np.abs(rebuilt.P - chain.P).max()),
    )
    add("t_star_reproduces", drift <= REPRO_TOL, f"max chain drift {drift:.3e}")

    achieved = abramov_entropy(chain, roof_n)
    add(
        "achieved_recomputed",
        abs(achieved - float(report["achieved"])) <= REPRO_TOL,
        f"recomputed {achieved!r}, reported {report['achieved']!r}",
    )
    add(
        "achieved_within_tol",
        abs(float(report["achieved"]) - float(report["target"])) <= float(inputs["tol"]),
        f"|achieved - target| = {abs(float(report['achieved']) - float(report['target'])):.3e}",
    )
    lo, hi = float(report["bracket"][0]), float(report["bracket"][1])
    add(
        "bracket_straddles",
        lo < float(report["target"]) < hi,
        f"bracket ({lo:.6g}, {hi:.6g})",
    )

    if samples > 0:
        run = sample_path(chain, seed=seed, length=int(samples))
        block = 3 if samples >= 100 * chain.k**3 else 2
        try:
            est, err = empirical_entropy(run, block)
            target = entropy(chain)
            add(
                "mc_entropy",
                abs(est - target) <= MC_SIGMAS * err,
                f"estimate {est:.6f} vs {target:.6f}, stderr {err:.2e} (b={block})",
            )
        except InsufficientData as e:
            add("mc_entropy", False, str(e))
        est, err = empirical_roof_integral(run, roof_n)
        target = roof_integral(roof_n, chain)
        band = MC_SIGMAS * err if err > 0 else 1e-12
        add(
            "mc_roof_integral",
            abs(est - target) <= band,
            f"estimate {est:.6f} vs {target:.6f}, stderr {err:.2e}",
        )

    return _summary(checks)


def _summary(checks: list[dict]) -> dict:
    return {
        "format_version": formats.FORMAT_VERSION,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
