"""Benefit-risk measures: REAd (efficacy magnitude / AdX) and Re-REAd.

Efficacy enters as an external scalar per arm (e.g. median PFS, or a mean
change from baseline); the toolkit does not derive it from raw data, and
it is held fixed across bootstrap replicates, so the interval reflects
AdX sampling variability only.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import TrialDataset
from .entropy import AdxEstimate, FrequencyProfile, adx, estimate, profile_from_episodes
from .errors import (
    DivisionByZeroBenefit,
    InsufficientData,
    MalformedRow,
    ZeroAdversity,
)


@dataclass(frozen=True)
class EfficacyInput:
    arm: str
    value: float
    higher_is_better: bool = True
    label: str = ""

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("efficacy value must be finite")

    @property
    def benefit(self) -> float:
        """Magnitude used downstream; negative-is-better endpoints fold
        through absolute value."""
        return self.value if self.higher_is_better else abs(self.value)


def load_efficacy(path: str | Path) -> dict[str, EfficacyInput]:
    """Read the efficacy CSV: arm,endpoint_label,value,higher_is_better."""
    out: dict[str, EfficacyInput] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for line_no, row in enumerate(reader, start=2):
            try:
                arm = row["arm"].strip()
                value = float(row["value"])
                hib = row.get("higher_is_better", "true").strip().lower() in ("1", "true", "yes", "y")
            except (KeyError, ValueError, AttributeError) as exc:
                raise MalformedRow(path, line_no, f"bad efficacy row: {exc}")
            out[arm] = EfficacyInput(
                arm=arm, value=value, higher_is_better=hib,
                label=(row.get("endpoint_label") or "").strip(),
            )
    if not out:
        raise MalformedRow(path, 1, "efficacy file has no rows")
    return out


def read_score(efficacy: EfficacyInput, est: AdxEstimate) -> float:
    """REAd: |benefit| / adx."""
    if est.adx == 0.0:
        raise ZeroAdversity(
            f"arm {efficacy.arm!r} has a single AE type (adx 0, eals {est.eals:.0f}); "
            "the benefit/adversity ratio is ill-defined"
        )
    return abs(efficacy.benefit) / est.adx


def re_read(read_a: float, read_b: float) -> float:
    """Ratio of two REAd values, from unrounded inputs."""
    if read_b == 0.0:
        raise DivisionByZeroBenefit("denominator REAd is zero")
    return read_a / read_b


def check_sign_consistency(inputs: dict[str, EfficacyInput]) -> None:
    """Warn when higher_is_better contradicts the sign pattern: a
    lower-is-better endpoint whose values are all positive (or vice versa)
    usually means the flag is wrong."""
    values = [e.value for e in inputs.values()]
    hib = {e.higher_is_better for e in inputs.values()}
    if len(hib) == 1 and not hib.pop() and values and all(v > 0 for v in values):
        warnings.warn(
            "all efficacy values are positive but higher_is_better is false; "
            "check the endpoint direction",
            stacklevel=2,
        )


@dataclass
class BenefitRiskResult:
    read_values: dict[str, float]
    re_read_values: dict[tuple[str, str], float]
    ci: dict[tuple[str, str], tuple[float, float]] | None = None
    ci_level: float | None = None
    replicates: int | None = None
    seed: int | None = None


def benefit_risk(
    estimates: dict[str, AdxEstimate],
    efficacy: dict[str, EfficacyInput],
    pairs: list[tuple[str, str]] | None = None,
) -> BenefitRiskResult:
    """REAd per arm and Re-REAd per requested pair (default: consecutive
    arms against the last one)."""
    check_sign_consistency(efficacy)
    reads = {arm: read_score(efficacy[arm], est) for arm, est in estimates.items() if arm in efficacy}
    if pairs is None:
        arms = list(reads)
        pairs = [(a, arms[-1]) for a in arms[:-1]]
    rr = {(a, b): re_read(reads[a], reads[b]) for a, b in pairs}
    return BenefitRiskResult(read_values=reads, re_read_values=rr)


def _resample_episode_terms(terms: list[str], rng: np.random.Generator) -> FrequencyProfile:
    idx = rng.integers(0, len(terms), size=len(terms))
    counts: dict[str, int] = {}
    for i in idx:
        t = terms[i]
        counts[t] = counts.get(t, 0) + 1
    return FrequencyProfile(counts)


def _resample_subject_clusters(
    by_subject: list[list[str]], rng: np.random.Generator
) -> FrequencyProfile:
    idx = rng.integers(0, len(by_subject), size=len(by_subject))
    counts: dict[str, int] = {}
    for i in idx:
        for t in by_subject[i]:
            counts[t] = counts.get(t, 0) + 1
    return FrequencyProfile(counts)


def re_read_bootstrap_ci(
    data: TrialDataset,
    efficacy: dict[str, EfficacyInput],
    arms: tuple[str, str],
    level: float = 0.95,
    replicates: int = 1000,
    seed: int = 0,
    unit: str = "episode",
    hierarchy_level: str = "pt",
) -> tuple[float, float]:
    """Percentile bootstrap interval for Re-REAd(arms[0]/arms[1]).

    Resampling unit is the episode by default (matching the estimator's
    counting unit); ``unit="subject"`` draws whole subjects to respect
    within-subject correlation. Replicate r uses the stream seeded by
    (seed, r), so results are independent of evaluation order.
    """
    if unit not in ("episode", "subject"):
        raise ValueError("unit must be 'episode' or 'subject'")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    if replicates < 200:
        raise InsufficientData("need at least 200 bootstrap replicates")

    arm_terms: dict[str, list[str]] = {}
    arm_clusters: dict[str, list[list[str]]] = {}
    for arm in arms:
        eps = data.episodes_for_arm(arm)
        if len(eps) < 2:
            raise InsufficientData(f"arm {arm!r} has fewer than 2 episodes")
        if hierarchy_level == "pt":
            terms = [e.pt_term for e in eps]
        else:
            h = data.require_hierarchy()
            terms = [h.term_at(e.pt_term, hierarchy_level) for e in eps]
        arm_terms[arm] = terms
        clusters: dict[str, list[str]] = {}
        for e, t in zip(eps, terms):
            clusters.setdefault(e.subject_id, []).append(t)
        arm_clusters[arm] = list(clusters.values())
        # fail fast on a degenerate point estimate
        read_score(efficacy[arm], estimate(profile_from_episodes(eps, "pt", data.hierarchy)))

    values = np.empty(replicates)
    for r in range(replicates):
        rng = np.random.default_rng([seed, r])
        reads = []
        for arm in arms:
            if unit == "episode":
                prof = _resample_episode_terms(arm_terms[arm], rng)
            else:
                prof = _resample_subject_clusters(arm_clusters[arm], rng)
            h = adx(prof)
            if h == 0.0:
                raise ZeroAdversity(f"bootstrap replicate {r}: arm {arm!r} collapsed to one AE type")
            reads.append(abs(efficacy[arm].benefit) / h)
        values[r] = reads[0] / reads[1]
    lo_q = (1.0 - level) / 2.0
    lo, hi = np.quantile(values, [lo_q, 1.0 - lo_q])
    return float(lo), float(hi)
