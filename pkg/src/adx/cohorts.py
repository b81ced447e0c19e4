"""Cohort partitioning: subgroup, SOC-wise, drilldown and hierarchy rollup.

Cells are (arm x subgroup) slices of the episode list. Every estimation
delegates to the entropy module, so a subgroup estimate is by construction
identical to a direct estimate on the restricted episode list.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .data import AeEpisode, TrialDataset
from .entropy import (
    AdxEstimate,
    ComparisonResult,
    compare,
    estimate,
    profile_from_episodes,
)
from .errors import DegenerateVariance, UnknownDimension, UnknownSoc

SUBJECT_DIMENSIONS = ("sex", "age", "background_therapy", "substudy")
EPISODE_DIMENSIONS = ("soc", "seriousness", "severity", "tier")
DIMENSIONS = SUBJECT_DIMENSIONS + EPISODE_DIMENSIONS

UNKNOWN = "Unknown"


@dataclass(frozen=True)
class AgeBinning:
    """Half-open age bins: [cut0, cut1), ..., [last, inf); below cut0 is
    its own bin. The convention is printed in report footers because
    published boundary labels are ambiguous."""

    cut_points: tuple[float, ...] = (40.0, 50.0, 65.0)

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cut_points)
        if list(cuts) != sorted(set(cuts)):
            raise ValueError("cut_points must be strictly ascending")
        if not cuts:
            raise ValueError("at least one cut point required")
        object.__setattr__(self, "cut_points", cuts)

    def label(self, age: float | None) -> str:
        if age is None:
            return UNKNOWN
        cuts = self.cut_points
        if age < cuts[0]:
            return f"<{cuts[0]:g}"
        for lo, hi in zip(cuts, cuts[1:]):
            if lo <= age < hi:
                return f"[{lo:g},{hi:g})"
        return f">={cuts[-1]:g}"

    def labels(self) -> list[str]:
        cuts = self.cut_points
        out = [f"<{cuts[0]:g}"]
        out += [f"[{lo:g},{hi:g})" for lo, hi in zip(cuts, cuts[1:])]
        out.append(f">={cuts[-1]:g}")
        return out


@dataclass(frozen=True)
class CohortKey:
    arm: str
    filters: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        dims = [d for d, _ in self.filters]
        if len(dims) != len(set(dims)):
            raise ValueError("at most one filter per dimension")
        object.__setattr__(self, "filters", tuple(sorted(self.filters)))

    @property
    def cell(self) -> tuple[tuple[str, str], ...]:
        """The subgroup part of the key, without the arm."""
        return self.filters

    def __str__(self) -> str:
        parts = [self.arm] + [f"{d}={v}" for d, v in self.filters]
        return " | ".join(parts)


@dataclass
class SubgroupReport:
    estimates: dict[CohortKey, AdxEstimate]
    comparisons: list[tuple[CohortKey, CohortKey, ComparisonResult]]
    low_n: set[CohortKey] = field(default_factory=set)
    empty: set[CohortKey] = field(default_factory=set)
    degenerate: list[tuple[CohortKey, CohortKey]] = field(default_factory=list)
    footnotes: list[str] = field(default_factory=list)


def _episode_dimension_value(ep: AeEpisode, dim: str, data: TrialDataset) -> str:
    if dim == "soc":
        return data.require_hierarchy().term_at(ep.pt_term, "soc")
    if dim == "seriousness":
        if ep.serious is None:
            return UNKNOWN
        return "serious" if ep.serious else "non-serious"
    if dim == "severity":
        return UNKNOWN if ep.severity is None else str(ep.severity)
    if dim == "tier":
        return ep.tier
    raise UnknownDimension(dim)


def _cell_value(ep: AeEpisode, dim: str, data: TrialDataset, age_binning: AgeBinning) -> str:
    if dim in SUBJECT_DIMENSIONS:
        subj = data.subject(ep.subject_id)
        if dim == "sex":
            return subj.sex
        if dim == "age":
            return age_binning.label(subj.age_years)
        value = getattr(subj, dim)
        return value if value is not None else UNKNOWN
    return _episode_dimension_value(ep, dim, data)


def _arm_pairs(arms: list[str], control: str | None) -> list[tuple[str, str]]:
    if control is not None:
        return [(a, control) for a in arms if a != control]
    return list(itertools.combinations(arms, 2))


def subgroup_analysis(
    data: TrialDataset,
    dimensions: list[str],
    level: str = "pt",
    age_binning: AgeBinning | None = None,
    min_episodes: int = 10,
    control: str | None = None,
    alpha: float = 0.05,
    two_sided: bool = True,
) -> SubgroupReport:
    """One estimate per (arm x subgroup cell), pairwise arm comparisons
    within each cell.

    Records lacking a dimension value land in an "Unknown" cell. Cells
    below ``min_episodes`` are still estimated but flagged low-N; empty
    cells are flagged, not fatal.
    """
    for dim in dimensions:
        if dim not in DIMENSIONS:
            raise UnknownDimension(f"{dim!r}; valid: {', '.join(DIMENSIONS)}")
    binning = age_binning or AgeBinning()
    hierarchy = data.hierarchy

    cells: dict[CohortKey, list[AeEpisode]] = {}
    for ep in data.episodes:
        filters = tuple((d, _cell_value(ep, d, data, binning)) for d in dimensions)
        cells.setdefault(CohortKey(ep.arm, filters), []).append(ep)

    report = SubgroupReport(estimates={}, comparisons=[])
    if dimensions and "age" in dimensions:
        report.footnotes.append(
            "age bins are left-closed right-open: " + ", ".join(binning.labels())
        )
    for key in sorted(cells, key=lambda k: (k.filters, k.arm)):
        eps = cells[key]
        report.estimates[key] = estimate(profile_from_episodes(eps, level, hierarchy))
        if len(eps) < min_episodes:
            report.low_n.add(key)

    # pairwise arm comparisons within each subgroup cell
    by_cell: dict[tuple, dict[str, CohortKey]] = {}
    for key in report.estimates:
        by_cell.setdefault(key.cell, {})[key.arm] = key
    for cell in sorted(by_cell):
        arm_keys = by_cell[cell]
        arms_here = [a for a in data.arms if a in arm_keys]
        for a, b in _arm_pairs(arms_here, control if control in arm_keys else None):
            ka, kb = arm_keys[a], arm_keys[b]
            try:
                res = compare(report.estimates[ka], report.estimates[kb], alpha, two_sided)
            except DegenerateVariance:
                report.degenerate.append((ka, kb))
                continue
            report.comparisons.append((ka, kb, res))
        for arm in data.arms:
            if arm not in arm_keys:
                report.empty.add(CohortKey(arm, cell))
    return report


def soc_analysis(
    data: TrialDataset,
    control: str | None = None,
    alpha: float = 0.05,
    two_sided: bool = True,
) -> SubgroupReport:
    """Per-SOC AdX per arm (PT-level profiles restricted to the SOC) with
    active-vs-control comparisons."""
    data.require_hierarchy()
    return subgroup_analysis(
        data, ["soc"], level="pt", control=control, alpha=alpha, two_sided=two_sided
    )


@dataclass
class DrilldownTable:
    soc: str
    arms: list[str]
    rows: list[tuple[str, dict[str, int]]]  # (pt term, counts per arm), top-n
    others: dict[str, int]
    zero_count_types: dict[str, int]
    totals: dict[str, int]
    total_types: int


def drilldown(data: TrialDataset, soc: str, arms: list[str] | None = None, top_n: int = 2) -> DrilldownTable:
    """Per-arm episode counts for the leading AE types inside one SOC,
    with "Others" and zero-count-type rows.

    The zero-count row counts, per arm, the types observed in the SOC
    across the listed arms but absent from that arm. It is informational:
    per-arm totals are named rows + Others.
    """
    hierarchy = data.require_hierarchy()
    from .data import normalize_term

    soc_n = normalize_term(soc)
    if soc_n not in hierarchy.socs():
        raise UnknownSoc(f"soc {soc_n!r} not present in hierarchy")
    arms = list(arms) if arms else list(data.arms)

    counts: dict[str, dict[str, int]] = {}
    for ep in data.episodes:
        if ep.arm not in arms:
            continue
        if hierarchy.term_at(ep.pt_term, "soc") != soc_n:
            continue
        counts.setdefault(ep.pt_term, {a: 0 for a in arms})[ep.arm] += 1

    ranked = sorted(counts, key=lambda pt: (-max(counts[pt].values()), pt))
    top = ranked[: max(top_n, 0)]
    rest = ranked[len(top):]
    others = {a: sum(counts[pt][a] for pt in rest) for a in arms}
    zero = {a: sum(1 for pt in counts if counts[pt][a] == 0) for a in arms}
    totals = {a: sum(counts[pt][a] for pt in counts) for a in arms}
    return DrilldownTable(
        soc=soc_n,
        arms=arms,
        rows=[(pt, dict(counts[pt])) for pt in top],
        others=others,
        zero_count_types=zero,
        totals=totals,
        total_types=len(counts),
    )


@dataclass
class PropositionReport:
    """AdX by hierarchy level and the rollup diagnostics.

    Rolling the profile up one level can only merge types, so the index
    can never increase (proposition 1, asserted). Rank preservation and
    significance propagation across levels (propositions 2-4) are not
    guaranteed and are recorded empirically only.
    """

    levels: list[str]
    estimates: dict[tuple[str, str], AdxEstimate]  # (arm, level) -> estimate
    comparisons: dict[tuple[str, str, str], ComparisonResult]  # (a, b, level)
    p1_holds: bool
    p2_holds: bool
    p3_holds: bool
    p4_holds: bool


def hierarchy_sweep(
    data: TrialDataset,
    levels: tuple[str, ...] = ("pt", "hlt", "hlgt"),
    control: str | None = None,
    alpha: float = 0.05,
    two_sided: bool = True,
) -> PropositionReport:
    hierarchy = data.require_hierarchy()
    arms = list(data.arms)
    estimates: dict[tuple[str, str], AdxEstimate] = {}
    comparisons: dict[tuple[str, str, str], ComparisonResult] = {}
    for level in levels:
        for arm in arms:
            estimates[(arm, level)] = estimate(
                profile_from_episodes(data.episodes_for_arm(arm), level, hierarchy)
            )
        for a, b in _arm_pairs(arms, control):
            try:
                comparisons[(a, b, level)] = compare(
                    estimates[(a, level)], estimates[(b, level)], alpha, two_sided
                )
            except DegenerateVariance:
                pass

    # P1: coarsening never increases the index (theorem; tiny float slack)
    p1 = all(
        estimates[(arm, levels[i])].adx >= estimates[(arm, levels[i + 1])].adx - 1e-9
        for arm in arms
        for i in range(len(levels) - 1)
    )
    if not p1:
        raise AssertionError("coarsening increased AdX; entropy rollup is broken")

    rankings = [
        tuple(sorted(arms, key=lambda a: estimates[(a, level)].adx)) for level in levels
    ]
    p2 = all(r == rankings[0] for r in rankings)

    # finer level = earlier in `levels`; P3: significant at coarser level
    # implies significant at every finer level; P4 is its contrapositive,
    # checked from the finer side.
    p3 = True
    p4 = True
    for a, b in _arm_pairs(arms, control):
        sig = [
            (a, b, lv) in comparisons and comparisons[(a, b, lv)].p_value < alpha
            for lv in levels
        ]
        for i in range(len(levels) - 1):
            if sig[i + 1] and not sig[i]:
                p3 = False
            if not sig[i] and sig[i + 1]:
                p4 = False
    return PropositionReport(
        levels=list(levels),
        estimates=estimates,
        comparisons=comparisons,
        p1_holds=p1,
        p2_holds=p2,
        p3_holds=p3,
        p4_holds=p4,
    )
