"""Request/response schemas of the screening service."""

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

NumberOrList = Union[float, List[float]]
IntOrList = Union[int, List[int]]


class MatrixPayload(BaseModel):
    """One treatment's samples: rows are samples, columns are variables."""

    values: List[List[float]]
    variable_ids: Optional[List[str]] = None
    treatment_id: str = "t0"


class ScreenRequest(BaseModel):
    mode: Literal["auto", "cross", "persistent"] = "auto"
    matrices: List[MatrixPayload]
    rho: Optional[NumberOrList] = None
    alpha: Optional[float] = Field(default=None, gt=0, lt=1)
    j: float = Field(default=1.0, ge=0)
    chunk_size: int = Field(default=2048, ge=1)
    edge_cap: int = Field(default=10_000_000, ge=1)
    max_edges: int = Field(default=200_000, ge=0, description="edge rows returned in the response")

    @model_validator(mode="after")
    def _threshold_given(self):
        if (self.rho is None) == (self.alpha is None):
            raise ValueError("exactly one of rho or alpha must be given")
        return self


class EdgeOut(BaseModel):
    var_i: str
    var_j: str
    r: float
    treatment: str


class ScreenResponse(BaseModel):
    mode: str
    treatment: str
    rho: NumberOrList
    threshold_kind: str
    p: int
    n: IntOrList
    N: int
    N_e: int
    discoveries: List[str]
    degrees: Dict[str, int]
    max_abs_r: Dict[str, float]
    b_discoveries: Optional[List[str]] = None
    discovery_side: Optional[str] = None
    edges: Optional[List[EdgeOut]] = None
    edges_truncated: bool = False
    edges_path: Optional[str] = None


class ThresholdOut(BaseModel):
    mode: str
    rho: float
    lam: float = Field(serialization_alias="lambda")
    alpha: float
    kind: str
    variant: Optional[str] = None


class PhaseSolveRequest(BaseModel):
    mode: Literal["auto", "cross", "persistent"] = "auto"
    p: int = Field(ge=2)
    n: IntOrList
    alpha: Optional[float] = Field(default=None, gt=0, lt=1)
    rho: Optional[NumberOrList] = None
    critical: bool = False
    j: NumberOrList = 1.0
    h2a: float = Field(default=1.0, ge=1)
    h2b: float = Field(default=1.0, ge=1)
    variant: Literal["unit_slope", "table_matching"] = "table_matching"
    exact_mean: bool = False

    @model_validator(mode="after")
    def _one_goal(self):
        goals = sum(x is not None for x in (self.alpha, self.rho)) + int(self.critical)
        if goals != 1:
            raise ValueError("give exactly one of alpha, rho, or critical=true")
        return self


class PhaseSolveResponse(BaseModel):
    reports: List[ThresholdOut]


class Table1Request(BaseModel):
    p: int = Field(ge=2)
    n_values: List[int] = [550, 500, 450, 150, 100, 50, 10, 8, 6]
    j: float = Field(default=1.0, gt=0)
    variant: Literal["unit_slope", "table_matching"] = "table_matching"


class Table1Row(BaseModel):
    n: int
    rho_c: float


class Table1Response(BaseModel):
    p: int
    variant: str
    rows: List[Table1Row]


class PowerTableRequest(BaseModel):
    p: int = Field(ge=2)
    n_values: List[int] = [10, 15, 20, 25, 30, 35]
    alphas: List[float] = [0.01, 0.025, 0.05, 0.075, 0.1]
    beta: float = Field(gt=0, lt=1)
    j: float = Field(default=1.0, gt=0)
    treatments: int = Field(default=2, ge=2)
    per_treatment: bool = False


class PowerCellOut(BaseModel):
    n: int
    alpha: float
    rho: float
    rho1: float
    beta: float
    p: int


class PowerTableResponse(BaseModel):
    cells: List[PowerCellOut]


class P0Request(BaseModel):
    rho: float = Field(ge=0, le=1)
    n: int = Field(ge=3)


class P0Response(BaseModel):
    rho: float
    n: int
    exact: float
    asymptotic: float
    a_n: float


class CovarianceModel(BaseModel):
    kind: Literal["diagonal", "planted_block", "q_sparse"] = "diagonal"
    q: int = 0
    rho1: float = 0.0
    permutation_seed: Optional[int] = None


class SimulateRequest(BaseModel):
    op: Literal["fwer", "poisson", "phase-curve", "operating-points"] = "fwer"
    p: int = Field(ge=2)
    n: IntOrList
    mode: Literal["auto", "cross", "persistent"] = "auto"
    distribution: Literal["gaussian", "student_t"] = "gaussian"
    dof: Optional[float] = None
    covariance: CovarianceModel = CovarianceModel()
    rho: Optional[NumberOrList] = None
    alpha: Optional[float] = Field(default=None, gt=0, lt=1)
    j: float = Field(default=1.0, gt=0)
    replicates: int = Field(default=1000, ge=1)
    master_seed: int = 0
    chunk_size: int = Field(default=4096, ge=1)
    workers: int = Field(default=1, ge=1)
    rho_grid: Optional[List[float]] = None
    n_grid: Optional[List[int]] = None
    beta_values: Optional[List[float]] = None


class SimulateResponse(BaseModel):
    op: str
    report: Optional[dict] = None
    curve: Optional[List[dict]] = None
    operating_points: Optional[List[dict]] = None


class InclusionGraphRequest(BaseModel):
    subsets: Dict[str, List[str]]
    cutoff: float = Field(default=0.9, gt=0, le=1)


class InclusionEdgeOut(BaseModel):
    src: str
    dst: str
    fraction: float
    full_inclusion: bool


class InclusionGraphResponse(BaseModel):
    nodes: Dict[str, int]
    edges: List[InclusionEdgeOut]
    cutoff: float
