"""Actual-cause identification in discrete structural causal models.

Causes are found by beam search over the intervention space, optionally
guided by the causal DAG (iterative sub-instance identification) and
robust to stochastic oracles (naive sampling or LUCB).
"""

from .beam import (
    BeamConfig,
    CauseResult,
    SearchStats,
    expand_beam,
    identify_causes,
    init_candidates,
    minimize_causes,
)
from .benchmarks import (
    BlackBoxSystem,
    demo_context,
    make_builtin,
    make_rock_throwing,
    make_smk_base,
    make_smk_blackbox,
    make_smk_noisy,
    make_smk_nonboolean,
    sample_contexts,
)
from .errors import (
    BudgetExceeded,
    CandidateTooLarge,
    CausebeamError,
    CauseTooLargeForExpansion,
    ContextInconsistent,
    CycleDetected,
    IncompatibleHeuristic,
    InvalidConfig,
    KTooLargeForSetDomains,
    SamplingExhausted,
    TargetNotActual,
    UnknownVariable,
    ValueOutsideDomain,
)
from .exact import enumerate_causes, enumerate_causes_scm
from .isi import identify_causes_isi, identify_causes_isi_scm
from .metrics import (
    ExperimentGrid,
    IdentificationMetrics,
    compute_metrics,
    missed_overshoot,
    precision_recall_f1,
    run_experiment,
    smallest_cause_accuracy,
)
from .oracles import (
    BlackBoxOracle,
    CallableOracle,
    Heuristic,
    Oracle,
    ScmOracle,
    heuristic_for_scm,
    make_heuristic,
)
from .scm import (
    Domain,
    HpVerdict,
    Scm,
    actual_values,
    check_hp_cause,
    context_from_values,
    evaluate,
    intervention,
    intervention_from_names,
    scm_from_dict,
    scm_from_json,
    scm_to_dict,
    scm_to_json,
    split_sets,
    topological_order,
)
from .stochastic import ArmState, LucbConfig, lucb_evaluate, naive_evaluate

__version__ = "0.1.0"

__all__ = [
    "ArmState",
    "BeamConfig",
    "BlackBoxOracle",
    "BlackBoxSystem",
    "BudgetExceeded",
    "CallableOracle",
    "CandidateTooLarge",
    "CausebeamError",
    "CauseResult",
    "CauseTooLargeForExpansion",
    "ContextInconsistent",
    "CycleDetected",
    "Domain",
    "ExperimentGrid",
    "Heuristic",
    "HpVerdict",
    "IdentificationMetrics",
    "IncompatibleHeuristic",
    "InvalidConfig",
    "KTooLargeForSetDomains",
    "LucbConfig",
    "Oracle",
    "SamplingExhausted",
    "Scm",
    "ScmOracle",
    "SearchStats",
    "TargetNotActual",
    "UnknownVariable",
    "ValueOutsideDomain",
    "actual_values",
    "check_hp_cause",
    "compute_metrics",
    "context_from_values",
    "demo_context",
    "enumerate_causes",
    "enumerate_causes_scm",
    "evaluate",
    "expand_beam",
    "heuristic_for_scm",
    "identify_causes",
    "identify_causes_isi",
    "identify_causes_isi_scm",
    "init_candidates",
    "intervention",
    "intervention_from_names",
    "lucb_evaluate",
    "make_builtin",
    "make_heuristic",
    "make_rock_throwing",
    "make_smk_base",
    "make_smk_blackbox",
    "make_smk_noisy",
    "make_smk_nonboolean",
    "minimize_causes",
    "missed_overshoot",
    "naive_evaluate",
    "precision_recall_f1",
    "run_experiment",
    "sample_contexts",
    "scm_from_dict",
    "scm_from_json",
    "scm_to_dict",
    "scm_to_json",
    "smallest_cause_accuracy",
    "split_sets",
    "topological_order",
]
