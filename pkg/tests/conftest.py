import csv

import pytest

from adx.data import AeEpisode, HierarchyMap, SubjectRecord, TrialDataset


def dataset_from_counts(arm_counts, hierarchy=None, subjects_per_arm=1):
    """Build a TrialDataset from {arm: {pt: episode count}}. Episodes are
    spread round-robin over the arm's subjects."""
    subjects, episodes = [], []
    for arm, counts in arm_counts.items():
        ids = [f"{arm}-{i}" for i in range(subjects_per_arm)]
        for sid in ids:
            subjects.append(SubjectRecord(subject_id=sid, arm=arm))
        i = 0
        for pt, n in counts.items():
            for _ in range(n):
                episodes.append(AeEpisode(subject_id=ids[i % len(ids)], arm=arm, pt_term=pt))
                i += 1
    return TrialDataset(subjects=tuple(subjects), episodes=tuple(episodes), hierarchy=hierarchy)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


@pytest.fixture
def tiny_trial_files(tmp_path):
    """3 subjects, 5 episodes, 2 arms; all referentially consistent."""
    subjects = write_csv(
        tmp_path / "subjects.csv",
        ["subject_id", "arm", "sex", "age_years", "background_therapy", "substudy",
         "first_dose_day", "last_observed_day"],
        [
            ["S1", "A", "F", 45, "", "", 0, 300],
            ["S2", "A", "M", 67, "", "", 0, 250],
            ["S3", "B", "F", 38, "", "", 0, 300],
        ],
    )
    episodes = write_csv(
        tmp_path / "episodes.csv",
        ["subject_id", "arm", "pt_term", "onset_day", "cycle", "serious", "severity", "tier"],
        [
            ["S1", "A", "nausea", 10, 1, "false", 1, ""],
            ["S1", "A", "headache", 40, 2, "", "", ""],
            ["S2", "A", "nausea", 100, 3, "true", 3, "tier1"],
            ["S3", "B", "fatigue", 20, 1, "", "", ""],
            ["S3", "B", "nausea", 150, 4, "", 2, ""],
        ],
    )
    hierarchy = write_csv(
        tmp_path / "hierarchy.csv",
        ["pt_term", "hlt_term", "hlgt_term", "soc_term"],
        [
            ["nausea", "nausea symptoms", "gi signs", "gastrointestinal disorders"],
            ["headache", "headaches", "neuro signs", "nervous system disorders"],
            ["fatigue", "asthenic conditions", "general signs", "general disorders"],
        ],
    )
    return {"subjects": subjects, "episodes": episodes, "hierarchy": hierarchy, "dir": tmp_path}


@pytest.fixture
def two_level_hierarchy():
    """Four PTs folding into two HLTs (one SOC); used by rollup tests."""
    return HierarchyMap(
        {
            "a": ("h1", "g1", "soc1"),
            "b": ("h1", "g1", "soc1"),
            "c": ("h2", "g1", "soc1"),
            "d": ("h2", "g1", "soc1"),
        }
    )
