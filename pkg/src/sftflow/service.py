"""FastAPI service exposing the library, one endpoint per subcommand.

Requests carry the matrix/roof payloads inline (same schema as the files the
CLI reads), so the service is stateless and every response is reproducible
from its request.  Domain errors map to HTTP 422 with the error class name
in the body; malformed inputs map to 400.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__, formats
from .block_recode import build_recode, pushforward_chain
from .entropy_path import build_path, path_entropy, solve_entropy
from .errors import ParseError, SftFlowError
from .markov import entropy, parry_measure
from .oracle import sample_path
from .perron import perron_data
from .roof_flatten import build_flatten
from .sft import Sft, is_aperiodic, is_irreducible
from .suspension import RoofFn
from .synthesis import synthesize
from .verify import verify_report

app = FastAPI(
    title="sftflow",
    version=__version__,
    description="Markov measures of prescribed entropy for suspension flows over SFTs",
)


class MatrixIn(BaseModel):
    format_version: int = 1
    k: int
    rows: list[list[int]]


class RoofIn(BaseModel):
    format_version: int = 1
    window: tuple[int, int] = (0, 0)
    table: dict[str, float]


class ChainOut(BaseModel):
    p: list[float]
    P: list[list[float]]
    entropy: float
    ergodic: bool


class InfoRequest(BaseModel):
    matrix: MatrixIn


class InfoOut(BaseModel):
    k: int
    irreducible: bool
    aperiodic: bool | None = None
    lam: float | None = None
    h_top: float | None = None
    parry: ChainOut | None = None
    warning: str | None = None


class PathRequest(BaseModel):
    matrix: MatrixIn
    points: int = Field(default=11, ge=2)
    target_h: float | None = None
    tol: float = 1e-10


class PathOut(BaseModel):
    ts: list[float]
    entropies: list[float]
    t_star: float | None = None
    entropy_at_t_star: float | None = None


class RecodeRequest(BaseModel):
    matrix: MatrixIn
    n: int = Field(ge=2)


class RecodeOut(BaseModel):
    n: int
    k_n: int
    gamma: list[str]
    log_lam_source: float
    log_lam_target: float
    entropy_residual: float


class FlattenRequest(BaseModel):
    matrix: MatrixIn
    roof: RoofIn
    eta: float = Field(gt=0)


class FlattenOut(BaseModel):
    tau: float
    l: list[int]
    L: int
    delta_used: float
    log_lam_split: float
    flow_entropy_lower: float
    flow_entropy_upper: float
    max_roof_distortion: float


class SynthesizeRequest(BaseModel):
    matrix: MatrixIn
    roof: RoofIn
    target_h: float
    tol: float = Field(default=1e-8, gt=0)
    eta: float | None = None


class SampleRequest(BaseModel):
    matrix: MatrixIn
    chain: ChainOut | None = None  # defaults to the Parry measure
    seed: int = 0
    length: int = Field(default=1000, ge=1)


class SampleOut(BaseModel):
    seed: int
    length: int
    trajectory: str


class VerifyRequest(BaseModel):
    report: dict
    samples: int = Field(default=0, ge=0)
    seed: int = 0


class CheckOut(BaseModel):
    name: str
    passed: bool
    detail: str


class VerifyOut(BaseModel):
    format_version: int
    passed: bool
    checks: list[CheckOut]


@app.exception_handler(SftFlowError)
async def domain_error_handler(request: Request, exc: SftFlowError):
    status = 400 if isinstance(exc, ParseError) else 422
    return JSONResponse(
        status_code=status,
        content={"error": type(exc).__name__, "message": str(exc)},
    )


def _sft(m: MatrixIn) -> Sft:
    return formats.matrix_from_dict(m.model_dump())


def _roof(r: RoofIn, s: Sft) -> RoofFn:
    return formats.roof_from_dict(r.model_dump(), s)


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/info", response_model=InfoOut, response_model_exclude_none=True)
def info(req: InfoRequest):
    s = _sft(req.matrix)
    if not is_irreducible(s):
        return InfoOut(
            k=s.k,
            irreducible=False,
            warning="matrix is not irreducible; spectral data omitted",
        )
    pd = perron_data(s)
    mc = parry_measure(s)
    return InfoOut(
        k=s.k,
        irreducible=True,
        aperiodic=is_aperiodic(s),
        lam=pd.lam,
        h_top=math.log(pd.lam),
        parry=ChainOut(**formats.chain_to_dict(mc)),
    )


@app.post("/parry", response_model=ChainOut)
def parry(req: InfoRequest):
    s = _sft(req.matrix)
    return ChainOut(**formats.chain_to_dict(parry_measure(s)))


@app.post("/path", response_model=PathOut, response_model_exclude_none=True)
def path_table(req: PathRequest):
    s = _sft(req.matrix)
    path = build_path(s)
    ts = [i / (req.points - 1) for i in range(req.points)]
    hs = [path_entropy(path, t) for t in ts]
    out = PathOut(ts=ts, entropies=hs)
    if req.target_h is not None:
        t_star = solve_entropy(path, req.target_h, req.tol)
        out.t_star = t_star
        out.entropy_at_t_star = path_entropy(path, t_star)
    return out


@app.post("/recode", response_model=RecodeOut)
def recode(req: RecodeRequest):
    s = _sft(req.matrix)
    rec = build_recode(s, req.n)
    log_src = math.log(perron_data(s).lam) if is_irreducible(s) else float("nan")
    log_tgt = (
        math.log(perron_data(rec.target).lam) if is_irreducible(rec.target) else float("nan")
    )
    residual = abs(log_src - log_tgt)
    if is_irreducible(s):
        residual = max(
            residual,
            abs(entropy(pushforward_chain(rec, parry_measure(s))) - log_src),
        )
    return RecodeOut(
        n=rec.n,
        k_n=rec.target.k,
        gamma=[formats.word_to_str(w, s.k) for w in rec.gamma],
        log_lam_source=log_src,
        log_lam_target=log_tgt,
        entropy_residual=residual,
    )


@app.post("/flatten", response_model=FlattenOut)
def flatten(req: FlattenRequest):
    s = _sft(req.matrix)
    roof = _roof(req.roof, s)
    model = build_flatten(s, roof, req.eta)
    lo = model.split_log_lam / model.tau
    distortion = max(
        model.flat_value(i) - model.roof.table[(i,)] for i in range(s.k)
    )
    return FlattenOut(
        tau=model.tau,
        l=[int(x) for x in model.lengths],
        L=model.total_states,
        delta_used=model.delta_used,
        log_lam_split=model.split_log_lam,
        flow_entropy_lower=lo,
        flow_entropy_upper=lo + req.eta,
        max_roof_distortion=distortion,
    )


@app.post("/synthesize")
def synthesize_endpoint(req: SynthesizeRequest) -> dict:
    s = _sft(req.matrix)
    roof = _roof(req.roof, s)
    report = synthesize(s, roof, req.target_h, req.tol, eta=req.eta)
    return formats.report_to_dict(report, __version__, eta_arg=req.eta)


@app.post("/sample", response_model=SampleOut)
def sample(req: SampleRequest):
    s = _sft(req.matrix)
    if req.chain is None:
        mc = parry_measure(s)
    else:
        mc = formats.parse_chain_fields({"chain": req.chain.model_dump()}, s)
    run = sample_path(mc, seed=req.seed, length=req.length)
    return SampleOut(
        seed=run.seed,
        length=run.length,
        trajectory=formats.word_to_str(tuple(run.trajectory), s.k),
    )


@app.post("/verify", response_model=VerifyOut)
def verify(req: VerifyRequest):
    result = verify_report(req.report, samples=req.samples, seed=req.seed)
    return VerifyOut(**result)
