from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple, TYPE_CHECKING

if TYPE_CHECKING:
    from .cfc import EdgeColoring
    from .graph import Graph


VertexPair = Tuple[int, int]


# ---- Error types ----

class InputError(ValueError):
    """Malformed input: bad vertex ids, bad probabilities, unparseable files, unmet preconditions."""


class GenerationFailure(RuntimeError):
    """A random generator ran out of its rejection budget."""


class BudgetExceeded(RuntimeError):
    """An exhaustive search refused to run or ran past its palette bound."""


class ConstructionFailure(RuntimeError):
    """The constructive 2-coloring pipeline stopped at `stage`."""

    def __init__(self, stage: str, message: str, witness: Any = None) -> None:
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.witness = witness


# ---- structure ----

@dataclass(frozen=True)
class VertexPartition:
    small: frozenset[int]
    large: frozenset[int]
    threshold: float


@dataclass(frozen=True)
class CutStructure:
    bridges: frozenset[int]
    articulation_points: frozenset[int]
    cut_edge_subgraph: "Graph"


@dataclass
class CheckReport:
    check_name: str
    passed: bool
    witnesses: List[Any] = field(default_factory=list)
    sampled: bool = False
    trials: int = 0
    applicable: bool = True
    violations: int = 0
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "check_name": self.check_name,
            "pass": self.passed,
            "witnesses": [list(w) if isinstance(w, (tuple, frozenset, set)) else w for w in self.witnesses],
            "sampled": self.sampled,
            "trials": self.trials,
        }
        if not self.applicable:
            payload["applicable"] = False
        if self.sampled:
            payload["violations"] = self.violations
            payload["evidence_only"] = self.passed
        if self.details:
            payload["details"] = dict(self.details)
        return payload


@dataclass
class SmallVertexReport:
    size_bound: CheckReport
    small_distance: CheckReport
    incident_edges: CheckReport

    @property
    def passed(self) -> bool:
        return self.size_bound.passed and self.small_distance.passed and self.incident_edges.passed

    def checks(self) -> List[CheckReport]:
        return [self.size_bound, self.small_distance, self.incident_edges]


@dataclass
class ExpansionReport:
    sparse_subsets: CheckReport
    cross_edges: CheckReport

    @property
    def passed(self) -> bool:
        return self.sparse_subsets.passed and self.cross_edges.passed

    def checks(self) -> List[CheckReport]:
        return [self.sparse_subsets, self.cross_edges]


# ---- hamilton ----

HamMethod = Literal["heuristic", "exact"]


@dataclass(frozen=True)
class HamResult:
    cycle: Optional[Tuple[int, ...]]
    method: HamMethod
    restarts_used: int = 0

    @property
    def found(self) -> bool:
        return self.cycle is not None


# ---- cfc ----

CertificateStatus = Literal["certified", "refuted"]


@dataclass
class CfcCertificate:
    status: CertificateStatus
    witnesses: Dict[VertexPair, Tuple[int, ...]] = field(default_factory=dict)
    failing_pair: Optional[VertexPair] = None
    witness_count: int = 0
    witnesses_sampled: bool = False

    @property
    def certified(self) -> bool:
        return self.status == "certified"


@dataclass(frozen=True)
class PendantMatching:
    pairs: Tuple[Tuple[int, int], ...]  # (small, large)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class ConstructionResult:
    coloring: "EdgeColoring"
    cycle: Tuple[int, ...]
    matching: PendantMatching
    partition: VertexPartition
    designated_edge: int
    spanning_edges: Tuple[int, ...]
    spanning_cjv: bool
    certificate: Optional[CfcCertificate] = None


UpperMethod = Literal["complete", "constructive", "randomized", "exact", "trivial"]


@dataclass
class UpperBound:
    bound: int
    method: UpperMethod
    coloring: Optional["EdgeColoring"] = None
    certificate: Optional[CfcCertificate] = None
    stage_reached: str = ""

    @property
    def certified(self) -> bool:
        if self.method == "complete":
            return True
        return self.certificate is not None and self.certificate.certified


@dataclass(frozen=True)
class ExactResult:
    value: int
    coloring: Optional["EdgeColoring"]
    colorings_tested: int


# ---- experiments ----

ExperimentMode = Literal["offset_a", "alpha", "hamilton_margin", "regular_r", "structure"]


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    mode: ExperimentMode
    param: float
    trials: int
    master_seed: int
    jobs: Optional[int] = None


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n: int
    p: Optional[float]
    connected: bool
    edges: int
    method: str = "none"
    bound: Optional[int] = None
    certified: Optional[bool] = None
    stage: str = ""
    hamilton_found: Optional[bool] = None
    two_edge_connected: Optional[bool] = None
    two_connected: Optional[bool] = None
    small_count: Optional[int] = None
    small_vertices_ok: Optional[bool] = None


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: List[TrialRecord]
    aggregates: Dict[str, float]
    theory: Dict[str, float] = field(default_factory=dict)
