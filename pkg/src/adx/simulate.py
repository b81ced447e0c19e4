"""Synthetic trial generation and empirical validation of the estimator.

Episode counts per subject are Poisson at the arm rate and AE types are
drawn iid from the arm's true probability vector, which is exactly the
multinomial sampling model under which the asymptotic variance formula is
derived. Replicate r of any validation run draws from the stream seeded
by (scenario seed, r), so aggregation is order-independent.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .data import AeEpisode, SubjectRecord, TrialDataset
from .entropy import FrequencyProfile, adx, adx_variance
from .errors import DegenerateScenario, InvalidScenario


@dataclass(frozen=True)
class ArmScenario:
    name: str
    probs: tuple[float, ...]
    episodes_per_subject: float
    n_subjects: int
    onset_span: int | None = None  # onset days uniform over [0, span]
    cycle_dropout: float | None = None  # per-cycle geometric continuation failure

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or len(p) == 0:
            raise InvalidScenario(f"arm {self.name!r}: empty probability vector")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise InvalidScenario(f"arm {self.name!r}: probabilities must be >= 0 and sum to 1")
        if self.episodes_per_subject < 0:
            raise InvalidScenario(f"arm {self.name!r}: negative episode rate")
        if self.n_subjects < 1:
            raise InvalidScenario(f"arm {self.name!r}: need at least one subject")
        if self.cycle_dropout is not None and not 0.0 < self.cycle_dropout <= 1.0:
            raise InvalidScenario(f"arm {self.name!r}: cycle_dropout must be in (0, 1]")

    def true_adx(self) -> float:
        p = np.asarray(self.probs)
        p = p[p > 0]
        return float(-(p * np.log(p)).sum())


@dataclass(frozen=True)
class Scenario:
    arms: tuple[ArmScenario, ...]
    seed: int = 0

    def __post_init__(self):
        if not self.arms:
            raise InvalidScenario("scenario needs at least one arm")
        names = [a.name for a in self.arms]
        if len(names) != len(set(names)):
            raise InvalidScenario("duplicate arm names")


def load_scenario(path: str | Path) -> Scenario:
    """Parse the scenario file: one [arm NAME] section per arm plus a
    [scenario] section holding the seed. ``probs`` is a whitespace- or
    comma-separated list."""
    cfg = configparser.ConfigParser()
    read = cfg.read(path)
    if not read:
        raise InvalidScenario(f"cannot read scenario file {path}")
    seed = cfg.getint("scenario", "seed", fallback=0)
    arms = []
    for section in cfg.sections():
        if not section.startswith("arm "):
            continue
        name = section[4:].strip()
        raw = cfg.get(section, "probs", fallback="")
        try:
            probs = tuple(float(tok) for tok in raw.replace(",", " ").split())
        except ValueError:
            raise InvalidScenario(f"arm {name!r}: unparseable probs list")
        kwargs = {}
        if cfg.has_option(section, "onset_span"):
            kwargs["onset_span"] = cfg.getint(section, "onset_span")
        if cfg.has_option(section, "cycle_dropout"):
            kwargs["cycle_dropout"] = cfg.getfloat(section, "cycle_dropout")
        arms.append(
            ArmScenario(
                name=name,
                probs=probs,
                episodes_per_subject=cfg.getfloat(section, "episodes_per_subject", fallback=1.0),
                n_subjects=cfg.getint(section, "subjects", fallback=100),
                **kwargs,
            )
        )
    if not arms:
        raise InvalidScenario(f"no [arm NAME] sections in {path}")
    return Scenario(arms=tuple(arms), seed=seed)


def type_label(i: int) -> str:
    return f"ae_{i + 1:03d}"


def generate_trial(scenario: Scenario) -> TrialDataset:
    """Draw one synthetic TrialDataset; deterministic given the seed."""
    rng = np.random.default_rng(scenario.seed)
    subjects: list[SubjectRecord] = []
    episodes: list[AeEpisode] = []
    sid = 0
    for arm in scenario.arms:
        for _ in range(arm.n_subjects):
            sid += 1
            subject_id = f"S{sid:05d}"
            subjects.append(SubjectRecord(subject_id=subject_id, arm=arm.name))
            n_ep = int(rng.poisson(arm.episodes_per_subject))
            if n_ep == 0:
                continue
            types = rng.choice(len(arm.probs), size=n_ep, p=arm.probs)
            onsets = (
                rng.integers(0, arm.onset_span + 1, size=n_ep)
                if arm.onset_span is not None
                else [None] * n_ep
            )
            cycles = (
                rng.geometric(arm.cycle_dropout, size=n_ep)
                if arm.cycle_dropout is not None
                else [None] * n_ep
            )
            for t, onset, cyc in zip(types, onsets, cycles):
                episodes.append(
                    AeEpisode(
                        subject_id=subject_id,
                        arm=arm.name,
                        pt_term=type_label(int(t)),
                        onset_day=None if onset is None else int(onset),
                        cycle=None if cyc is None else int(cyc),
                    )
                )
    return TrialDataset(subjects=tuple(subjects), episodes=tuple(episodes))


@dataclass
class ArmValidation:
    arm: str
    true_adx: float
    replicates: int
    mean_adx: float
    sd_adx: float
    mean_analytic_se: float
    sd_over_se: float
    bias: float
    first_order_bias: float  # -(K-1)/(2N), the leading plug-in bias term
    degenerate: bool
    skew: float | None = None
    excess_kurtosis: float | None = None
    ks_distance: float | None = None


@dataclass
class ValidationReport:
    scenario: Scenario
    replicates: int
    arms: list[ArmValidation] = field(default_factory=list)


def _replicate_draws(arm: ArmScenario, seed: int, replicates: int) -> tuple[np.ndarray, np.ndarray]:
    """adx and analytic se per replicate, via direct multinomial draws on
    the arm's expected total episode count (the model generate_trial uses,
    with the Poisson subject layer marginalized out)."""
    adxs = np.empty(replicates)
    ses = np.empty(replicates)
    n_total = max(1, round(arm.n_subjects * arm.episodes_per_subject))
    probs = np.asarray(arm.probs)
    for r in range(replicates):
        rng = np.random.default_rng([seed, r])
        counts = rng.multinomial(n_total, probs)
        prof = FrequencyProfile({type_label(i): int(c) for i, c in enumerate(counts) if c > 0})
        adxs[r] = adx(prof)
        ses[r] = math.sqrt(adx_variance(prof))
    return adxs, ses


def _is_uniform(probs: tuple[float, ...]) -> bool:
    p = np.asarray(probs)
    p = p[p > 0]
    return bool(np.allclose(p, p[0]))


def validate_variance(scenario: Scenario, replicates: int = 1000) -> ValidationReport:
    """Compare the empirical sd of adx across replicates with the mean
    analytic se; flags the uniform (zero-variance) regime instead of
    computing a meaningless ratio."""
    if replicates < 2:
        raise InvalidScenario("need at least 2 replicates")
    report = ValidationReport(scenario=scenario, replicates=replicates)
    for arm in scenario.arms:
        adxs, ses = _replicate_draws(arm, scenario.seed, replicates)
        sd = float(adxs.std(ddof=1))
        mean_se = float(ses.mean())
        degenerate = _is_uniform(arm.probs)
        true_h = arm.true_adx()
        k = int(np.count_nonzero(np.asarray(arm.probs)))
        n_total = max(1, round(arm.n_subjects * arm.episodes_per_subject))
        report.arms.append(
            ArmValidation(
                arm=arm.name,
                true_adx=true_h,
                replicates=replicates,
                mean_adx=float(adxs.mean()),
                sd_adx=sd,
                mean_analytic_se=mean_se,
                sd_over_se=sd / mean_se if mean_se > 0 else float("nan"),
                bias=float(adxs.mean() - true_h),
                first_order_bias=-(k - 1) / (2.0 * n_total),
                degenerate=degenerate,
            )
        )
    return report


def validate_normality(scenario: Scenario, replicates: int = 1000) -> ValidationReport:
    """Standardize replicate adx values and report shape diagnostics
    (skew, excess kurtosis, KS distance from the standard normal)."""
    if replicates < 2:
        raise InvalidScenario("need at least 2 replicates")
    report = ValidationReport(scenario=scenario, replicates=replicates)
    for arm in scenario.arms:
        if _is_uniform(arm.probs):
            raise DegenerateScenario(
                f"arm {arm.name!r}: uniform true vector has zero asymptotic variance"
            )
        adxs, ses = _replicate_draws(arm, scenario.seed, replicates)
        sd = float(adxs.std(ddof=1))
        z = (adxs - adxs.mean()) / sd
        ks = float(stats.kstest(z, "norm").statistic)
        true_h = arm.true_adx()
        k = int(np.count_nonzero(np.asarray(arm.probs)))
        n_total = max(1, round(arm.n_subjects * arm.episodes_per_subject))
        report.arms.append(
            ArmValidation(
                arm=arm.name,
                true_adx=true_h,
                replicates=replicates,
                mean_adx=float(adxs.mean()),
                sd_adx=sd,
                mean_analytic_se=float(ses.mean()),
                sd_over_se=sd / float(ses.mean()),
                bias=float(adxs.mean() - true_h),
                first_order_bias=-(k - 1) / (2.0 * n_total),
                degenerate=False,
                skew=float(stats.skew(z)),
                excess_kurtosis=float(stats.kurtosis(z)),
                ks_distance=ks,
            )
        )
    return report
