"""File formats: matrix files, roof files, and synthesis reports.

Everything is JSON with an explicit format_version.  Words are serialized
as digit strings for k <= 10 and comma-separated integers above; floats go
through Python's shortest round-trip repr, so parsing a report reproduces
the written values bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np

from .errors import ParseError
from .markov import MarkovChain, entropy, is_ergodic, validate_chain
from .sft import Sft, Word, new_sft
from .suspension import RoofFn, new_roof
from .synthesis import SynthesisReport

FORMAT_VERSION = 1


def word_to_str(word: Word, k: int) -> str:
    if k <= 10:
        return "".join(str(c) for c in word)
    return ",".join(str(c) for c in word)


def str_to_word(text: str, k: int) -> Word:
    try:
        if k <= 10:
            return tuple(int(c) for c in text.strip())
        return tuple(int(c) for c in text.strip().split(","))
    except ValueError as e:
        raise ParseError(f"bad word {text!r}: {e}") from e


def load_json(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(obj, dict):
        raise ParseError("top-level value must be an object")
    return obj


def _require(obj: dict, key: str) -> Any:
    if key not in obj:
        raise ParseError(f"missing required field {key!r}")
    return obj[key]


def matrix_to_dict(s: Sft) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "k": s.k,
        "rows": [[int(x) for x in row] for row in s.matrix],
    }


def matrix_from_dict(obj: dict) -> Sft:
    k = _require(obj, "k")
    rows = _require(obj, "rows")
    if not isinstance(k, int):
        raise ParseError("field 'k' must be an integer")
    try:
        return new_sft(k, rows)
    except Exception as e:
        raise ParseError(f"bad matrix: {e}") from e


def roof_to_dict(roof: RoofFn) -> dict:
    k = roof.ambient.k
    return {
        "format_version": FORMAT_VERSION,
        "window": [roof.window[0], roof.window[1]],
        "table": {word_to_str(w, k): v for w, v in roof.table.items()},
    }


def roof_from_dict(obj: dict, ambient: Sft) -> RoofFn:
    window = _require(obj, "window")
    table = _require(obj, "table")
    if not (isinstance(window, list) and len(window) == 2):
        raise ParseError("field 'window' must be a pair [m_left, m_right]")
    if not isinstance(table, dict):
        raise ParseError("field 'table' must map words to positive numbers")
    try:
        parsed = {str_to_word(t, ambient.k): float(v) for t, v in table.items()}
        return new_roof(ambient, (int(window[0]), int(window[1])), parsed)
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(f"bad roof: {e}") from e


def chain_to_dict(mc: MarkovChain) -> dict:
    return {
        "p": [float(x) for x in mc.p],
        "P": [[float(x) for x in row] for row in mc.P],
        "entropy": entropy(mc),
        "ergodic": is_ergodic(mc),
    }


def inputs_hash(matrix: dict, roof: dict, target: float, tol: float, eta) -> str:
    payload = json.dumps(
        {"matrix": matrix, "roof": roof, "target": target, "tol": tol, "eta": eta},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def report_to_dict(report: SynthesisReport, version: str, eta_arg=None) -> dict:
    """Serialize a synthesis report, embedding the inputs so a later verify
    run is self-contained."""
    matrix = matrix_to_dict(report.recode.source)
    roof = roof_to_dict(report.source_roof)
    return {
        "format_version": FORMAT_VERSION,
        "library_version": version,
        "inputs_hash": inputs_hash(matrix, roof, report.target, report.tol, eta_arg),
        "inputs": {
            "matrix": matrix,
            "roof": roof,
            "target": report.target,
            "tol": report.tol,
            "eta": eta_arg,
        },
        "n_used": report.n_used,
        "tau": report.model.tau,
        "l": [int(x) for x in report.model.lengths],
        "L": report.model.total_states,
        "t_star": report.t_star,
        "chain": {
            "p": [float(x) for x in report.chain.p],
            "P": [[float(x) for x in row] for row in report.chain.P],
        },
        "achieved": report.achieved,
        "target": report.target,
        "eta_used": report.eta_used,
        "delta_used": report.delta_used,
        "bracket": [report.bracket[0], report.bracket[1]],
        "ergodic": report.ergodic,
        "bounds": [report.bounds[0], report.bounds[1]],
    }


def dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_chain_fields(obj: dict, s: Sft) -> MarkovChain:
    chain = _require(obj, "chain")
    try:
        p = np.asarray(_require(chain, "p"), dtype=np.float64)
        P = np.asarray(_require(chain, "P"), dtype=np.float64)
        return validate_chain(p, P, s)
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(f"bad chain in report: {e}") from e
