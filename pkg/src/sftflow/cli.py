"""Command line front end: a thin client of the service.

By default requests go to the FastAPI app in-process through an ASGI
transport (no socket, fully offline); --server redirects them to a running
instance.  stdout carries only the report, diagnostics go to stderr.

Exit codes: 0 success, 2 ParseError, 3 TargetOutOfRange, 4 BracketFailure,
5 NotIrreducible, 1 anything else.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

EXIT_CODES = {
    "ParseError": 2,
    "TargetOutOfRange": 3,
    "BracketFailure": 4,
    "NotIrreducible": 5,
}


class ClientError(Exception):
    def __init__(self, error: str, message: str):
        super().__init__(message)
        self.error = error
        self.exit_code = EXIT_CODES.get(error, 1)


def _post(path: str, payload: dict, server: str | None) -> dict:
    if server:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    else:
        resp = asyncio.run(_post_asgi(path, payload))
    if resp.status_code != 200:
        try:
            body = resp.json()
        except Exception:
            raise ClientError("InternalError", resp.text)
        if "error" in body:
            raise ClientError(body["error"], body.get("message", ""))
        raise ClientError("RequestError", json.dumps(body))
    return resp.json()


async def _post_asgi(path: str, payload: dict) -> httpx.Response:
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://sftflow") as client:
        return await client.post(path, json=payload, timeout=600.0)


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ClientError("ParseError", f"cannot read {path}: {e}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ClientError(
            "ParseError", f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        )
    if not isinstance(obj, dict):
        raise ClientError("ParseError", f"{path}: top-level value must be an object")
    return obj


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
        print(f"report written to {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sftflow",
        description="Ergodic Markov measures of prescribed entropy for suspension flows over SFTs",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="spectral data and Parry measure of a matrix file")
    p.add_argument("matrix")

    p = sub.add_parser("parry", help="maximal-entropy chain of a matrix file")
    p.add_argument("matrix")

    p = sub.add_parser("path", help="tabulate the entropy-interpolation family")
    p.add_argument("matrix")
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--target-h", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("recode", help="higher-block presentation report")
    p.add_argument("matrix")
    p.add_argument("-n", type=int, required=True, help="block length (>= 2)")

    p = sub.add_parser("flatten", help="constant-roof chain-split report")
    p.add_argument("matrix")
    p.add_argument("roof")
    p.add_argument("--eta", type=float, required=True)

    p = sub.add_parser("synthesize", help="build a chain with prescribed flow entropy")
    p.add_argument("matrix")
    p.add_argument("roof")
    p.add_argument("--target-h", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="re-check a synthesis report")
    p.add_argument("report")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("sample", help="draw a seeded trajectory (Parry by default)")
    p.add_argument("matrix")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=1000)
    p.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    try:
        result = _dispatch(args)
    except ClientError as e:
        print(f"error[{e.error}]: {e}", file=sys.stderr)
        return e.exit_code
    _emit(result, getattr(args, "out", None))
    if args.command == "verify" and not result.get("passed", False):
        return 1
    return 0


def _dispatch(args) -> dict:
    server = args.server
    if args.command == "info":
        return _post("/info", {"matrix": _read_json(args.matrix)}, server)
    if args.command == "parry":
        return _post("/parry", {"matrix": _read_json(args.matrix)}, server)
    if args.command == "path":
        payload = {"matrix": _read_json(args.matrix), "points": args.points, "tol": args.tol}
        if args.target_h is not None:
            payload["target_h"] = args.target_h
        return _post("/path", payload, server)
    if args.command == "recode":
        return _post("/recode", {"matrix": _read_json(args.matrix), "n": args.n}, server)
    if args.command == "flatten":
        payload = {
            "matrix": _read_json(args.matrix),
            "roof": _read_json(args.roof),
            "eta": args.eta,
        }
        return _post("/flatten", payload, server)
    if args.command == "synthesize":
        payload = {
            "matrix": _read_json(args.matrix),
            "roof": _read_json(args.roof),
            "target_h": args.target_h,
            "tol": args.tol,
        }
        if args.eta is not None:
            payload["eta"] = args.eta
        return _post("/synthesize", payload, server)
    if args.command == "verify":
        payload = {
            "report": _read_json(args.report),
            "samples": args.samples,
            "seed": args.seed,
        }
        return _post("/verify", payload, server)
    if args.command == "sample":
        payload = {
            "matrix": _read_json(args.matrix),
            "seed": args.seed,
            "length": args.length,
        }
        return _post("/sample", payload, server)
    raise ClientError("InternalError", f"unknown command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
