"""Streaming next-activity prediction for event logs.

Frequency-counting n-gram predictors, online ensembles over them (soft
voting, adaptive voting, accuracy-triggered promotion), synthetic pattern
generators with exact best-accuracy oracles, a prequential evaluation
harness, and CSV/JSONL/XES ingestion.
"""

from .base import NextActivityPredictor
from .core import (
    STOP,
    Alphabet,
    CaseTrace,
    EventRecord,
    PredictionDistribution,
    argmax_activity,
    as_case_trace,
    check_log,
    normalize,
    stop_distribution,
)
from .ensembles import (
    AdaptiveVotingEnsemble,
    PromotionEnsemble,
    PromotionState,
    RunningAccuracy,
    SoftVotingEnsemble,
    select_most_accurate,
    soft_vote,
)
from .generators import (
    BUILTIN_PATTERNS,
    GenConfig,
    PatternSpec,
    builtin_pattern,
    case_rng,
    generate_case,
    generate_log,
)
from .harness import (
    EvalReport,
    interleave,
    run_prequential,
    run_split,
    split_cases,
    stream_from_log,
)
from .ingest import (
    LogFormatError,
    LogStats,
    load_log,
    log_stats,
    read_csv,
    read_jsonl,
    read_xes,
    write_csv,
    write_jsonl,
    write_log,
)
from .ngram import NGramPredictor, history_of
from .oracle import (
    ExactEnumerationTooLarge,
    OracleEstimate,
    best_accuracy,
    ceiling_accuracy,
    empirical_best_accuracy,
    exact_best_accuracy,
    plateau_fix,
)

__version__ = "0.1.0"

__all__ = [
    "STOP",
    "Alphabet",
    "CaseTrace",
    "EventRecord",
    "PredictionDistribution",
    "argmax_activity",
    "as_case_trace",
    "check_log",
    "normalize",
    "stop_distribution",
    "NextActivityPredictor",
    "NGramPredictor",
    "history_of",
    "SoftVotingEnsemble",
    "AdaptiveVotingEnsemble",
    "PromotionEnsemble",
    "PromotionState",
    "RunningAccuracy",
    "soft_vote",
    "select_most_accurate",
    "BUILTIN_PATTERNS",
    "PatternSpec",
    "GenConfig",
    "builtin_pattern",
    "case_rng",
    "generate_case",
    "generate_log",
    "OracleEstimate",
    "ExactEnumerationTooLarge",
    "best_accuracy",
    "exact_best_accuracy",
    "empirical_best_accuracy",
    "ceiling_accuracy",
    "plateau_fix",
    "EvalReport",
    "run_prequential",
    "run_split",
    "split_cases",
    "stream_from_log",
    "interleave",
    "LogFormatError",
    "LogStats",
    "load_log",
    "log_stats",
    "read_csv",
    "read_jsonl",
    "read_xes",
    "write_csv",
    "write_jsonl",
    "write_log",
    "__version__",
]
