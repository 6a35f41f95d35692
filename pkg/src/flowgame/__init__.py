"""Cooperative flow games on capacitated directed multigraphs.

Arcs are players; a coalition is worth the maximum source-sink flow it
can route on its own.  The package decides whether the induced game is
convex directly from network structure, emits a checkable certificate
(a unanimity decomposition by source-sink paths) or a counterexample
witness, and computes solution concepts — exactly, in rational
arithmetic, with an exhaustive oracle validating every fast path.
"""

from .errors import (
    DuplicateArcLabel,
    FlowGameError,
    IncompleteScheme,
    NegativeCapacity,
    NetworkValidationError,
    NotAcyclic,
    NotAPermutation,
    NotEfficient,
    NotUnique,
    ParseError,
    PathLimitExceeded,
    SelfLoop,
    SourceEqualsSink,
    TooManyPlayers,
    UnknownArcId,
    UnknownVertex,
)
from .fileformat import (
    format_rational,
    parse_network,
    parse_rational,
    serialize_network,
    to_json,
    verdict_document,
    verdict_text,
)
from .generators import BROKEN_KINDS, ConvexGenParams, gen_broken, gen_convex
from .maxflow import Cut, FlowAssignment, max_flow, min_cut
from .network import (
    Arc,
    AcyclicityResult,
    Coalition,
    FlowNetwork,
    ReductionResult,
    StPath,
    as_capacity,
    coreaches_sink,
    count_paths_through,
    enumerate_simple_paths,
    is_acyclic,
    lies_on_simple_path,
    reachable_from_source,
    reduce_network,
    trace_unique_path,
    validate,
)
from .oracle import (
    ConvexityViolation,
    GameTable,
    PmasFailure,
    bottleneck_arcs_bruteforce,
    core_membership,
    dividends,
    game_table,
    gamma,
    is_convex_bruteforce,
    marginal_vector,
    shapley_bruteforce,
    verify_pmas,
)
from .recognition import (
    BottleneckSet,
    CapacityDeficitWitness,
    Certificate,
    CycleWitness,
    DiagnosticsReport,
    DummyArcRetainedWitness,
    InvalidCertificate,
    InvalidWitness,
    SharedBottleneckWitness,
    Verdict,
    bottleneck_set,
    gamma_fast,
    pmas_construct,
    recognize,
    shapley_fast,
    structural_diagnostics,
    verify_certificate,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "AcyclicityResult",
    "BROKEN_KINDS",
    "BottleneckSet",
    "CapacityDeficitWitness",
    "Certificate",
    "Coalition",
    "ConvexGenParams",
    "ConvexityViolation",
    "Cut",
    "CycleWitness",
    "DiagnosticsReport",
    "DummyArcRetainedWitness",
    "DuplicateArcLabel",
    "FlowAssignment",
    "FlowGameError",
    "FlowNetwork",
    "GameTable",
    "IncompleteScheme",
    "InvalidCertificate",
    "InvalidWitness",
    "NegativeCapacity",
    "NetworkValidationError",
    "NotAPermutation",
    "NotAcyclic",
    "NotEfficient",
    "NotUnique",
    "ParseError",
    "PathLimitExceeded",
    "PmasFailure",
    "ReductionResult",
    "SelfLoop",
    "SharedBottleneckWitness",
    "SourceEqualsSink",
    "StPath",
    "TooManyPlayers",
    "UnknownArcId",
    "UnknownVertex",
    "Verdict",
    "as_capacity",
    "bottleneck_arcs_bruteforce",
    "bottleneck_set",
    "core_membership",
    "coreaches_sink",
    "count_paths_through",
    "dividends",
    "enumerate_simple_paths",
    "format_rational",
    "game_table",
    "gamma",
    "gamma_fast",
    "gen_broken",
    "gen_convex",
    "is_acyclic",
    "is_convex_bruteforce",
    "lies_on_simple_path",
    "marginal_vector",
    "max_flow",
    "min_cut",
    "parse_network",
    "parse_rational",
    "pmas_construct",
    "reachable_from_source",
    "recognize",
    "reduce_network",
    "serialize_network",
    "shapley_bruteforce",
    "shapley_fast",
    "structural_diagnostics",
    "to_json",
    "trace_unique_path",
    "validate",
    "verdict_document",
    "verdict_text",
    "verify_certificate",
    "verify_pmas",
    "verify_witness",
]
