"""Adversity Index toolkit: entropy-based summarization of clinical-trial
adverse-event data, safety comparisons and benefit-risk measures."""

__version__ = "0.1.0"

from .data import (  # noqa: F401
    AeEpisode,
    HierarchyMap,
    SubjectRecord,
    TrialDataset,
    dataset_summary,
    load_trial,
)
from .entropy import (  # noqa: F401
    AdxEstimate,
    ComparisonResult,
    FrequencyProfile,
    adx,
    adx_variance,
    compare,
    eals,
    estimate,
    profile_from_episodes,
    seals,
)
