"""Monte Carlo engine, verification suites and the additivity pipeline."""

from .engine import (
    ExperimentConfig,
    ExperimentReport,
    TrialError,
    estimate_probability,
    intersection_bound_holds,
    probability_report,
    run_trials,
    wilson_interval,
)
from .pipeline import NO_VIOLATION_NOTE, PipelineReport, counterexample_pipeline
from .suites import (
    verify_bounds,
    verify_FG,
    verify_geometric,
    verify_hayden,
    verify_hhl,
    verify_independence,
    verify_levy,
    verify_lipschitz,
    verify_median_lemma,
    verify_optimizer,
    verify_pinching,
    verify_prop5,
    verify_structural,
)
