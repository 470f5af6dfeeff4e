"""Configuration-driven experiment runners behind the ``irep`` command."""

from .config import ExperimentConfig, load_config, parse_config
from .sample_complexity import RidgeClassifier, SampleComplexityReport, run_sample_complexity
from .suites import (RUNNERS, run_concentration_suite, run_hierarchy_suite, run_invariance_suite,
                     run_pog_suite, run_sample_complexity_suite, run_selectivity_suite)

__all__ = [
    "ExperimentConfig", "load_config", "parse_config", "RidgeClassifier",
    "SampleComplexityReport", "run_sample_complexity", "RUNNERS", "run_concentration_suite",
    "run_hierarchy_suite", "run_invariance_suite", "run_pog_suite",
    "run_sample_complexity_suite", "run_selectivity_suite",
]
