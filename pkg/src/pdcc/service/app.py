"""HTTP front end over the core library.

Every endpoint takes a JSON body naming an operator (catalog system, fixture
or inline OpMatrix JSON text) and returns plain JSON.  Malformed input maps to
400 with the location of the first problem.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .. import __version__
from ..diffop import MatrixFormatError, OpMatrix, adjoint, compatibility_conditions
from ..duality import adjoint_sequence, double_duality_test
from ..resolution import ResolutionError, euler_characteristic, resolve
from ..spencer import cohomology, janet_board, janet_sequence_ranks, symbol_of
from ..systems import FIXTURE_NAMES, SYSTEM_NAMES, builtin_system, load_fixture
from ..verify import SUITES, run_suite


class OperatorSpec(BaseModel):
    system: Optional[str] = Field(None, description="catalog name or fixture name")
    dim: Optional[int] = Field(None, ge=1)
    metric: Literal["euclidean", "minkowski"] = "euclidean"
    matrix_json: Optional[str] = Field(None, description="OpMatrix JSON text")


class ResolveRequest(OperatorSpec):
    minimize: bool = False
    max_length: Optional[int] = Field(None, ge=1)
    emit_certificates: bool = False


class AdjointRequest(OperatorSpec):
    sequence: bool = False


class CohomologyRequest(OperatorSpec):
    s: int = Field(..., ge=0)
    r: int = 0


class JanetRequest(OperatorSpec):
    seed: int = 0
    attempts: int = Field(10, ge=1)


class VerifyRequest(BaseModel):
    suite: str = "all"


class MatrixModel(BaseModel):
    n: int
    rows: int
    cols: int
    entries: list[list[list[Any]]]


class MatrixResponse(BaseModel):
    matrix: MatrixModel
    text: str
    order: int


class ResolveResponse(BaseModel):
    steps: list[MatrixModel]
    betti: list[int]
    orders: list[int]
    minimized: bool
    euler_characteristic: int
    certificates: Optional[list[dict[str, Any]]] = None
    warnings: Optional[list[str]] = None


class AdjointResponse(MatrixResponse):
    sequence: Optional[list[MatrixModel]] = None
    exact: Optional[list[bool]] = None


class CohomologyResponse(BaseModel):
    s: int
    r: int
    dim_C: int
    dim_B: int
    dim_Z: int
    dim_H: int


class JanetResponse(BaseModel):
    n: int
    m: int
    q: int
    solved_equations: list[dict[str, Any]]
    beta: list[int]
    alpha: list[int]
    coordinate_change: list[list[str]]
    involutive: bool
    attempts_used: int
    dim_g_q_plus_1: int
    board: str
    sequence_ranks: Optional[list[int]] = None


class DualityResponse(BaseModel):
    input: MatrixModel
    adjoint_cc: MatrixModel
    candidate: MatrixModel
    cc_of_candidate: MatrixModel
    exact: bool
    parametrization: Optional[MatrixModel] = None
    torsion_witnesses: list[list[Any]]


class ClaimModel(BaseModel):
    claim: str
    source: str
    passed: bool
    detail: str
    seconds: float


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    claims: list[ClaimModel]


def load_operator(spec: OperatorSpec) -> OpMatrix:
    if spec.matrix_json is not None:
        if spec.system is not None:
            raise ValueError("give either a system name or a matrix, not both")
        return OpMatrix.from_json(spec.matrix_json)
    if spec.system is None:
        raise ValueError("no operator given: pass a system name or a matrix")
    if spec.system in FIXTURE_NAMES:
        return load_fixture(spec.system)
    return builtin_system(spec.system, spec.dim, spec.metric)


def _matrix_response(A: OpMatrix) -> dict:
    return {"matrix": A.to_json_obj(), "text": A.to_text(), "order": A.order()}


app = FastAPI(title="pdcc", version=__version__)


@app.exception_handler(MatrixFormatError)
async def _format_error(request: Request, exc: MatrixFormatError):
    return JSONResponse(
        status_code=400,
        content={"error": "parse", "message": exc.message, "position": exc.path},
    )


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    # SymbolError is a ValueError too
    return JSONResponse(status_code=400, content={"error": "usage", "message": str(exc)})


@app.exception_handler(ResolutionError)
async def _resolution_error(request: Request, exc: ResolutionError):
    return JSONResponse(status_code=500, content={"error": "computation", "message": str(exc)})


@app.get("/catalog")
def catalog() -> dict:
    return {"systems": list(SYSTEM_NAMES), "fixtures": list(FIXTURE_NAMES), "suites": list(SUITES)}


@app.post("/system", response_model=MatrixResponse)
def system(req: OperatorSpec):
    return _matrix_response(load_operator(req))


@app.post("/resolve", response_model=ResolveResponse, response_model_exclude_none=True)
def resolve_endpoint(req: ResolveRequest):
    A = load_operator(req)
    res = resolve(
        A,
        minimize=req.minimize,
        max_length=req.max_length,
        certificates=req.emit_certificates,
    )
    out = res.to_json_obj(certificates=req.emit_certificates)
    out["euler_characteristic"] = euler_characteristic(res)
    return out


@app.post("/adjoint", response_model=AdjointResponse, response_model_exclude_none=True)
def adjoint_endpoint(req: AdjointRequest):
    A = load_operator(req)
    out = _matrix_response(adjoint(A))
    if req.sequence:
        seq = adjoint_sequence(resolve(A, minimize=True))
        out["sequence"] = [s.to_json_obj() for s in seq.steps]
        out["exact"] = seq.exact
    return out


@app.post("/cc", response_model=MatrixResponse)
def cc_endpoint(req: OperatorSpec):
    return _matrix_response(compatibility_conditions(load_operator(req)))


@app.post("/cohomology", response_model=CohomologyResponse)
def cohomology_endpoint(req: CohomologyRequest):
    return cohomology(symbol_of(load_operator(req)), req.s, req.r).to_json_obj()


@app.post("/janet", response_model=JanetResponse, response_model_exclude_none=True)
def janet_endpoint(req: JanetRequest):
    board = janet_board(symbol_of(load_operator(req)), attempts=req.attempts, seed=req.seed)
    out = board.to_json_obj()
    if board.involutive:
        out["sequence_ranks"] = janet_sequence_ranks(board)
    return out


@app.post("/duality", response_model=DualityResponse, response_model_exclude_none=True)
def duality_endpoint(req: OperatorSpec):
    return double_duality_test(load_operator(req)).to_json_obj()


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    results = run_suite(req.suite)
    return {
        "suite": req.suite,
        "passed": all(r.passed for r in results),
        "claims": [r.to_json_obj() for r in results],
    }

