"""FastAPI application exposing the screening core."""

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, montecarlo, phase, power, report, screen
from ..errors import InfeasibleError
from ..ingest import DataMatrix
from ..spherecap import a_n, cap_probability
from ..uscore import compute_uscores
from .models import (
    InclusionEdgeOut,
    InclusionGraphRequest,
    InclusionGraphResponse,
    EdgeOut,
    P0Request,
    P0Response,
    PhaseSolveRequest,
    PhaseSolveResponse,
    PowerCellOut,
    PowerTableRequest,
    PowerTableResponse,
    ScreenRequest,
    ScreenResponse,
    SimulateRequest,
    SimulateResponse,
    Table1Request,
    Table1Response,
    Table1Row,
    ThresholdOut,
)


def _to_matrix(payload):
    ids = payload.variable_ids
    if ids is None:
        width = len(payload.values[0]) if payload.values else 0
        ids = ["v%d" % (k + 1) for k in range(width)]
    values = np.asarray(payload.values, dtype=float)
    return DataMatrix(values=values, variable_ids=tuple(ids), treatment_id=payload.treatment_id)


def _threshold_out(rep):
    return ThresholdOut(
        mode=rep.mode, rho=rep.rho, lam=rep.lam, alpha=rep.alpha, kind=rep.kind, variant=rep.variant
    )


def _resolve_screen_thresholds(req, matrices):
    """Return (per-treatment rho list, threshold kind)."""
    m = len(matrices)
    if req.rho is not None:
        rhos = req.rho if isinstance(req.rho, list) else [req.rho] * m
        if len(rhos) != m:
            raise ValueError("rho list length %d does not match %d matrices" % (len(rhos), m))
        for r in rhos:
            if not 0.0 < r < 1.0:
                raise ValueError("rho must lie in (0, 1), got %r" % (r,))
        return rhos, "user"
    p = matrices[0].p
    if req.mode == "auto":
        rep = phase.fwer_threshold_auto(p, matrices[0].n, req.alpha, req.j)
        return [rep.rho], rep.kind
    if req.mode == "cross":
        rep = phase.fwer_threshold_cross(p, matrices[0].n, req.alpha, req.j)
        return [rep.rho] * 2, rep.kind
    reps = phase.fwer_thresholds_persistent(p, [mat.n for mat in matrices], req.alpha, [req.j] * m)
    return [rep.rho for rep in reps], reps[0].kind


def _screen_response(req: ScreenRequest) -> ScreenResponse:
    matrices = [_to_matrix(m) for m in req.matrices]
    if not matrices:
        raise ValueError("at least one matrix is required")
    expected = {"auto": (1, 1), "cross": (2, 2), "persistent": (2, None)}[req.mode]
    m = len(matrices)
    if m < expected[0] or (expected[1] is not None and m > expected[1]):
        raise ValueError("%s screening expects %s matrices, got %d" % (
            req.mode, expected[0] if expected[1] == expected[0] else "at least %d" % expected[0], m))
    base_ids = matrices[0].variable_ids
    for mat in matrices[1:]:
        if mat.variable_ids != base_ids:
            raise ValueError("all matrices must share the same variable ids in the same order")

    rhos, kind = _resolve_screen_thresholds(req, matrices)
    scores = [compute_uscores(mat) for mat in matrices]

    if req.mode == "auto":
        result = screen.auto_screen(scores[0], rhos[0], chunk_size=req.chunk_size, edge_cap=req.edge_cap)
    elif req.mode == "cross":
        result = screen.cross_screen(scores[0], scores[1], rhos[0], chunk_size=req.chunk_size, edge_cap=req.edge_cap)
    else:
        partial = [
            screen.auto_screen(scores[k], rhos[k], chunk_size=req.chunk_size, edge_cap=req.edge_cap)
            for k in range(m)
        ]
        result = screen.persistent_screen(partial)

    ids = result.variable_ids
    degrees = {ids[i]: int(result.degrees[i]) for i in result.discoveries}
    max_abs = {ids[i]: float(result.max_abs_r[i]) for i in result.discoveries}
    edges = None
    truncated = False
    if result.edges is not None:
        shown = result.edges[: req.max_edges]
        truncated = len(result.edges) > len(shown)
        edges = [
            EdgeOut(var_i=ids[i], var_j=ids[j], r=r, treatment=result.treatment)
            for i, j, r in shown
        ]
    rho_out = rhos[0] if req.mode in ("auto", "cross") else list(rhos)
    return ScreenResponse(
        mode=result.mode,
        treatment=result.treatment,
        rho=rho_out,
        threshold_kind=kind,
        p=result.p,
        n=result.n if isinstance(result.n, int) else list(result.n),
        N=result.N,
        N_e=result.N_e,
        discoveries=[ids[i] for i in result.discoveries],
        degrees=degrees,
        max_abs_r=max_abs,
        b_discoveries=(
            [ids[i] for i in result.b_discoveries] if result.b_discoveries is not None else None
        ),
        discovery_side="a" if req.mode == "cross" else None,
        edges=edges,
        edges_truncated=truncated,
        edges_path=result.edges_path,
    )


def _phase_solve(req: PhaseSolveRequest) -> PhaseSolveResponse:
    n_list = req.n if isinstance(req.n, list) else [req.n]
    j_list = req.j if isinstance(req.j, list) else [req.j] * len(n_list)
    if req.mode != "persistent" and len(n_list) != 1:
        raise ValueError("%s mode takes a single sample count" % req.mode)
    if req.critical:
        if req.mode == "auto":
            reports = [phase.critical_threshold_auto(req.p, n_list[0], j_list[0], variant=req.variant)]
        elif req.mode == "cross":
            reports = [phase.critical_threshold_cross(req.p, n_list[0], j_list[0], variant=req.variant)]
        else:
            reports = [
                phase.critical_threshold_persistent(req.p, n, H2a=req.h2a, H2b=req.h2b) for n in n_list
            ]
    elif req.alpha is not None:
        if req.mode == "auto":
            reports = [
                phase.fwer_threshold_auto(req.p, n_list[0], req.alpha, j_list[0], exact_mean=req.exact_mean)
            ]
        elif req.mode == "cross":
            reports = [phase.fwer_threshold_cross(req.p, n_list[0], req.alpha, j_list[0])]
        else:
            reports = phase.fwer_thresholds_persistent(req.p, n_list, req.alpha, j_list)
    else:
        rhos = req.rho if isinstance(req.rho, list) else [req.rho] * len(n_list)
        if len(rhos) != len(n_list):
            raise ValueError("rho list length must match the sample-count list")
        if req.mode == "persistent":
            reports = phase.user_threshold("persistent", req.p, n_list, rhos, j_list)
        else:
            reports = [phase.user_threshold(req.mode, req.p, n_list[0], rhos[0], j_list[0])]
    return PhaseSolveResponse(reports=[_threshold_out(r) for r in reports])


def create_app() -> FastAPI:
    app = FastAPI(title="corrscreen", version=__version__)

    @app.exception_handler(InfeasibleError)
    async def _infeasible(request: Request, exc: InfeasibleError):
        return JSONResponse(status_code=422, content={"detail": str(exc), "error_type": "infeasible"})

    @app.exception_handler(ValueError)
    async def _invalid(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc), "error_type": "invalid"})

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/screen", response_model=ScreenResponse)
    async def screen_endpoint(req: ScreenRequest):
        return _screen_response(req)

    @app.post("/phase/solve", response_model=PhaseSolveResponse)
    async def phase_solve(req: PhaseSolveRequest):
        return _phase_solve(req)

    @app.post("/phase/table1", response_model=Table1Response)
    async def phase_table1(req: Table1Request):
        rows = phase.critical_threshold_table(req.p, req.n_values, req.j, variant=req.variant)
        return Table1Response(p=req.p, variant=req.variant, rows=[Table1Row(n=n, rho_c=r) for n, r in rows])

    @app.post("/power-table", response_model=PowerTableResponse)
    async def power_table(req: PowerTableRequest):
        cells = power.power_table(
            req.p,
            req.n_values,
            req.alphas,
            req.beta,
            J=req.j,
            treatments=req.treatments,
            per_treatment=req.per_treatment,
        )
        return PowerTableResponse(cells=[PowerCellOut(**c.to_dict()) for c in cells])

    @app.post("/p0", response_model=P0Response)
    async def p0(req: P0Request):
        exact = cap_probability(req.rho, req.n, method="exact").p0
        asym = cap_probability(req.rho, req.n, method="asymptotic").p0
        return P0Response(rho=req.rho, n=req.n, exact=exact, asymptotic=asym, a_n=a_n(req.n))

    @app.post("/simulate", response_model=SimulateResponse)
    async def simulate(req: SimulateRequest):
        return _simulate(req)

    @app.post("/inclusion-graph", response_model=InclusionGraphResponse)
    async def inclusion_graph(req: InclusionGraphRequest):
        if len(req.subsets) < 2:
            raise ValueError("inclusion graph needs at least two subsets")
        graph = report.inclusion_graph(req.subsets, cutoff=req.cutoff)
        return InclusionGraphResponse(
            nodes=dict(graph.nodes),
            edges=[
                InclusionEdgeOut(src=s, dst=d, fraction=f, full_inclusion=full)
                for s, d, f, full in graph.edges
            ],
            cutoff=graph.cutoff,
        )

    return app


def _sim_spec(req: SimulateRequest) -> montecarlo.SimSpec:
    cov = montecarlo.CovarianceSpec(
        kind=req.covariance.kind,
        p=req.p,
        q=req.covariance.q,
        rho1=req.covariance.rho1,
        permutation_seed=req.covariance.permutation_seed,
    )
    n = tuple(req.n) if isinstance(req.n, list) else req.n
    rho = tuple(req.rho) if isinstance(req.rho, list) else req.rho
    return montecarlo.SimSpec(
        p=req.p,
        n=n,
        mode=req.mode,
        distribution=req.distribution,
        dof=req.dof,
        covariance=cov,
        rho=rho,
        alpha=req.alpha,
        J=req.j,
        replicates=req.replicates,
        master_seed=req.master_seed,
        chunk_size=req.chunk_size,
        workers=req.workers,
    )


def _simulate(req: SimulateRequest) -> SimulateResponse:
    if req.op in ("fwer", "poisson"):
        spec = _sim_spec(req)
        rep = montecarlo.poisson_check(spec) if req.op == "poisson" else montecarlo.empirical_fwer(spec)
        return SimulateResponse(op=req.op, report=rep.to_dict())
    if req.op == "phase-curve":
        if not req.rho_grid:
            raise ValueError("phase-curve needs rho_grid")
        n_list = req.n_grid or (req.n if isinstance(req.n, list) else [req.n])
        points = montecarlo.phase_curve(
            req.p,
            n_list,
            req.rho_grid,
            req.replicates,
            distribution=req.distribution,
            dof=req.dof,
            master_seed=req.master_seed,
            chunk_size=req.chunk_size,
            workers=req.workers,
        )
        return SimulateResponse(op=req.op, curve=[pt.to_dict() for pt in points])
    if not req.beta_values:
        raise ValueError("operating-points needs beta_values")
    if req.alpha is None:
        raise ValueError("operating-points needs alpha")
    n_list = req.n if isinstance(req.n, list) else [req.n]
    pts = montecarlo.operating_points(
        req.p,
        n_list,
        req.alpha,
        req.beta_values,
        req.replicates,
        master_seed=req.master_seed,
        J=req.j,
        chunk_size=req.chunk_size,
        workers=req.workers,
    )
    return SimulateResponse(op=req.op, operating_points=[pt.to_dict() for pt in pts])
