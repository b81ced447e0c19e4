"""Episode/subject data model, CSV loading and validation.

The counting unit throughout the toolkit is the AE *episode*: one recorded
occurrence of an adverse-event term in one subject. Repeated identical
(subject, term, onset_day) rows are kept as distinct episodes on purpose.
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import (
    ArmMismatch,
    InputError,
    MalformedRow,
    MissingHierarchy,
    UnknownSubject,
    UnmappedTerm,
)

HIERARCHY_LEVELS = ("pt", "hlt", "hlgt", "soc")

TIER_VALUES = ("tier1", "tier23", "untiered")

_WS = re.compile(r"\s+")


def normalize_term(text: str) -> str:
    """Case-fold, trim and collapse internal whitespace.

    Term identity everywhere in the toolkit is defined on the normalized
    form, so CSV exports that differ only in casing or spacing match.
    """
    return _WS.sub(" ", text.strip()).casefold()


@dataclass(frozen=True)
class AeEpisode:
    subject_id: str
    arm: str
    pt_term: str
    onset_day: int | None = None
    cycle: int | None = None
    serious: bool | None = None
    severity: int | None = None
    tier: str = "untiered"

    def __post_init__(self):
        object.__setattr__(self, "pt_term", normalize_term(self.pt_term))
        if not self.pt_term:
            raise ValueError("pt_term is empty after normalization")
        if self.onset_day is not None and self.onset_day < 0:
            raise ValueError(f"onset_day {self.onset_day} < 0")
        if self.cycle is not None and self.cycle < 1:
            raise ValueError(f"cycle {self.cycle} < 1")
        if self.tier not in TIER_VALUES:
            raise ValueError(f"tier must be one of {TIER_VALUES}, got {self.tier!r}")


@dataclass(frozen=True)
class SubjectRecord:
    subject_id: str
    arm: str
    sex: str = "U"  # F, M or U (other/unknown)
    age_years: float | None = None
    background_therapy: str | None = None
    substudy: str | None = None
    first_dose_day: int | None = None
    last_observed_day: int | None = None

    def __post_init__(self):
        if self.sex not in ("F", "M", "U"):
            raise ValueError(f"sex must be F, M or U, got {self.sex!r}")
        if self.age_years is not None and self.age_years < 0:
            raise ValueError("age_years < 0")
        if (
            self.first_dose_day is not None
            and self.last_observed_day is not None
            and self.last_observed_day < self.first_dose_day
        ):
            raise ValueError("last_observed_day < first_dose_day")


class HierarchyMap:
    """PT -> (HLT, HLGT, SOC) lookup with a functional chain.

    A given PT maps to exactly one triple, a given HLT to one HLGT, and a
    given HLGT to one SOC; violations are rejected at construction.
    """

    def __init__(self, entries: dict[str, tuple[str, str, str]]):
        norm: dict[str, tuple[str, str, str]] = {}
        hlt_parent: dict[str, str] = {}
        hlgt_parent: dict[str, str] = {}
        for pt, (hlt, hlgt, soc) in entries.items():
            pt_n = normalize_term(pt)
            triple = (normalize_term(hlt), normalize_term(hlgt), normalize_term(soc))
            if pt_n in norm and norm[pt_n] != triple:
                raise InputError(f"pt {pt_n!r} mapped to more than one hierarchy triple")
            norm[pt_n] = triple
        for pt_n, (hlt, hlgt, soc) in norm.items():
            if hlt in hlt_parent and hlt_parent[hlt] != hlgt:
                raise InputError(f"hlt {hlt!r} mapped to more than one hlgt")
            hlt_parent[hlt] = hlgt
            if hlgt in hlgt_parent and hlgt_parent[hlgt] != soc:
                raise InputError(f"hlgt {hlgt!r} mapped to more than one soc")
            hlgt_parent[hlgt] = soc
        self.entries = norm

    def __contains__(self, pt_term: str) -> bool:
        return normalize_term(pt_term) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def term_at(self, pt_term: str, level: str) -> str:
        """Resolve a PT to its term at the requested hierarchy level."""
        pt = normalize_term(pt_term)
        if level == "pt":
            return pt
        try:
            hlt, hlgt, soc = self.entries[pt]
        except KeyError:
            raise UnmappedTerm(f"pt {pt!r} not in hierarchy") from None
        return {"hlt": hlt, "hlgt": hlgt, "soc": soc}[level]

    def socs(self) -> list[str]:
        return sorted({soc for _, _, soc in self.entries.values()})

    def pts_in_soc(self, soc: str) -> set[str]:
        soc_n = normalize_term(soc)
        return {pt for pt, (_, _, s) in self.entries.items() if s == soc_n}

    @classmethod
    def from_csv(cls, path: str | Path) -> "HierarchyMap":
        entries: dict[str, tuple[str, str, str]] = {}
        seen: dict[str, tuple[str, str, str]] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            _require_columns(reader, path, ["pt_term", "hlt_term", "hlgt_term", "soc_term"])
            for line_no, row in enumerate(reader, start=2):
                try:
                    pt = normalize_term(row["pt_term"])
                    triple = (
                        normalize_term(row["hlt_term"]),
                        normalize_term(row["hlgt_term"]),
                        normalize_term(row["soc_term"]),
                    )
                except (KeyError, AttributeError):
                    raise MalformedRow(path, line_no, "missing hierarchy columns")
                if not pt or not all(triple):
                    raise MalformedRow(path, line_no, "empty term")
                if pt in seen and seen[pt] != triple:
                    raise InputError(
                        f"{path}:{line_no}: pt {pt!r} duplicated with a different hierarchy path"
                    )
                seen[pt] = triple
                entries[pt] = triple
        return cls(entries)


@dataclass(frozen=True)
class TrialDataset:
    """Immutable validated container for one trial's safety data."""

    subjects: tuple[SubjectRecord, ...]
    episodes: tuple[AeEpisode, ...]
    hierarchy: HierarchyMap | None = None
    arms: tuple[str, ...] = field(default=())

    def __post_init__(self):
        by_id = {}
        for s in self.subjects:
            if s.subject_id in by_id:
                raise InputError(f"duplicate subject_id {s.subject_id!r}")
            by_id[s.subject_id] = s
        for ep in self.episodes:
            subj = by_id.get(ep.subject_id)
            if subj is None:
                raise UnknownSubject(f"episode references unknown subject {ep.subject_id!r}")
            if subj.arm != ep.arm:
                raise ArmMismatch(
                    f"episode arm {ep.arm!r} != subject arm {subj.arm!r} for {ep.subject_id!r}"
                )
        present = []
        for s in self.subjects:
            if s.arm not in present:
                present.append(s.arm)
        if not self.arms:
            object.__setattr__(self, "arms", tuple(present))
        elif set(self.arms) != set(present):
            raise InputError("declared arms differ from arms present in subjects")
        object.__setattr__(self, "_subject_index", by_id)

    def subject(self, subject_id: str) -> SubjectRecord:
        return self._subject_index[subject_id]

    def episodes_for_arm(self, arm: str) -> list[AeEpisode]:
        return [e for e in self.episodes if e.arm == arm]

    def require_hierarchy(self) -> HierarchyMap:
        if self.hierarchy is None:
            raise MissingHierarchy("this analysis needs a hierarchy mapping file")
        return self.hierarchy


def _require_columns(reader: csv.DictReader, path, cols):
    missing = [c for c in cols if reader.fieldnames is None or c not in reader.fieldnames]
    if missing:
        raise MalformedRow(path, 1, f"missing required column(s): {', '.join(missing)}")


def _opt_int(value: str, path, line_no, col) -> int | None:
    if value is None or value.strip() == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise MalformedRow(path, line_no, f"column {col!r}: {value!r} is not an integer")


def _opt_float(value: str, path, line_no, col) -> float | None:
    if value is None or value.strip() == "":
        return None
    try:
        return float(value)
    except ValueError:
        raise MalformedRow(path, line_no, f"column {col!r}: {value!r} is not a number")


def _opt_bool(value: str, path, line_no, col) -> bool | None:
    if value is None or value.strip() == "":
        return None
    v = value.strip().lower()
    if v in ("1", "true", "yes", "y"):
        return True
    if v in ("0", "false", "no", "n"):
        return False
    raise MalformedRow(path, line_no, f"column {col!r}: {value!r} is not a boolean")


def load_subjects(path: str | Path) -> list[SubjectRecord]:
    subjects = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _require_columns(reader, path, ["subject_id", "arm", "sex"])
        for line_no, row in enumerate(reader, start=2):
            sid = (row.get("subject_id") or "").strip()
            arm = (row.get("arm") or "").strip()
            if not sid or not arm:
                raise MalformedRow(path, line_no, "empty subject_id or arm")
            sex = (row.get("sex") or "U").strip().upper() or "U"
            if sex not in ("F", "M", "U"):
                sex = "U"
            try:
                subjects.append(
                    SubjectRecord(
                        subject_id=sid,
                        arm=arm,
                        sex=sex,
                        age_years=_opt_float(row.get("age_years"), path, line_no, "age_years"),
                        background_therapy=(row.get("background_therapy") or "").strip() or None,
                        substudy=(row.get("substudy") or "").strip() or None,
                        first_dose_day=_opt_int(row.get("first_dose_day"), path, line_no, "first_dose_day"),
                        last_observed_day=_opt_int(row.get("last_observed_day"), path, line_no, "last_observed_day"),
                    )
                )
            except ValueError as exc:
                raise MalformedRow(path, line_no, str(exc))
    return subjects


def load_episodes(path: str | Path) -> list[AeEpisode]:
    episodes = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _require_columns(reader, path, ["subject_id", "arm", "pt_term"])
        for line_no, row in enumerate(reader, start=2):
            sid = (row.get("subject_id") or "").strip()
            arm = (row.get("arm") or "").strip()
            pt = row.get("pt_term") or ""
            if not sid or not arm:
                raise MalformedRow(path, line_no, "empty subject_id or arm")
            tier = (row.get("tier") or "").strip().lower() or "untiered"
            try:
                episodes.append(
                    AeEpisode(
                        subject_id=sid,
                        arm=arm,
                        pt_term=pt,
                        onset_day=_opt_int(row.get("onset_day"), path, line_no, "onset_day"),
                        cycle=_opt_int(row.get("cycle"), path, line_no, "cycle"),
                        serious=_opt_bool(row.get("serious"), path, line_no, "serious"),
                        severity=_opt_int(row.get("severity"), path, line_no, "severity"),
                        tier=tier,
                    )
                )
            except ValueError as exc:
                raise MalformedRow(path, line_no, str(exc))
    return episodes


def load_trial(
    episodes_file: str | Path,
    subjects_file: str | Path,
    hierarchy_file: str | Path | None = None,
    unmapped: str = "reject",
) -> TrialDataset:
    """Load and cross-validate the episodes/subjects (and optional hierarchy) CSVs.

    ``unmapped`` controls what happens when a hierarchy file is present but
    an episode's PT is absent from it: ``"reject"`` (default) raises
    UnmappedTerm; ``"synthetic"`` routes the term to an UNMAPPED branch.
    """
    if unmapped not in ("reject", "synthetic"):
        raise ValueError("unmapped must be 'reject' or 'synthetic'")
    subjects = load_subjects(subjects_file)
    episodes = load_episodes(episodes_file)
    hierarchy = None
    if hierarchy_file is not None:
        hierarchy = HierarchyMap.from_csv(hierarchy_file)
        missing = sorted({e.pt_term for e in episodes} - set(hierarchy.entries))
        if missing:
            if unmapped == "reject":
                raise UnmappedTerm(
                    f"{len(missing)} pt term(s) absent from hierarchy, e.g. {missing[:5]}"
                )
            entries = dict(hierarchy.entries)
            for pt in missing:
                entries[pt] = ("unmapped", "unmapped", "unmapped")
            hierarchy = HierarchyMap(entries)
    return TrialDataset(subjects=tuple(subjects), episodes=tuple(episodes), hierarchy=hierarchy)


def dataset_summary(data: TrialDataset, by_arm: bool = True) -> list[dict]:
    """Per-arm (and pooled) counts: subjects, episodes, distinct types,
    subjects with at least one episode.

    The pooled distinct-type count is a set union, so it can be smaller
    than the sum of the per-arm counts.
    """
    def _row(label: str, subjects: list[SubjectRecord], episodes: list[AeEpisode]) -> dict:
        with_ae = {e.subject_id for e in episodes}
        n_subj = len(subjects)
        n_with = sum(1 for s in subjects if s.subject_id in with_ae)
        return {
            "arm": label,
            "subjects": n_subj,
            "episodes": len(episodes),
            "distinct_types": len({e.pt_term for e in episodes}),
            "subjects_with_ae": n_with,
            "pct_subjects_with_ae": 100.0 * n_with / n_subj if n_subj else 0.0,
        }

    rows = []
    if by_arm:
        for arm in data.arms:
            rows.append(
                _row(arm, [s for s in data.subjects if s.arm == arm], data.episodes_for_arm(arm))
            )
    rows.append(_row("Total", list(data.subjects), list(data.episodes)))
    return rows


def write_trial(data: TrialDataset, episodes_file: str | Path, subjects_file: str | Path) -> None:
    """Serialize a dataset back to the two CSV schemas (order-normalized)."""
    with open(subjects_file, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["subject_id", "arm", "sex", "age_years", "background_therapy", "substudy",
             "first_dose_day", "last_observed_day"]
        )
        for s in sorted(data.subjects, key=lambda s: s.subject_id):
            w.writerow(
                [s.subject_id, s.arm, s.sex,
                 "" if s.age_years is None else s.age_years,
                 s.background_therapy or "", s.substudy or "",
                 "" if s.first_dose_day is None else s.first_dose_day,
                 "" if s.last_observed_day is None else s.last_observed_day]
            )
    with open(episodes_file, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["subject_id", "arm", "pt_term", "onset_day", "cycle", "serious", "severity", "tier"])
        key = lambda e: (e.subject_id, e.pt_term, e.onset_day if e.onset_day is not None else -1,
                         e.cycle if e.cycle is not None else -1)
        for e in sorted(data.episodes, key=key):
            w.writerow(
                [e.subject_id, e.arm, e.pt_term,
                 "" if e.onset_day is None else e.onset_day,
                 "" if e.cycle is None else e.cycle,
                 "" if e.serious is None else str(e.serious).lower(),
                 "" if e.severity is None else e.severity,
                 e.tier]
            )
