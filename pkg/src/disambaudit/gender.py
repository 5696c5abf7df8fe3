"""Dictionary-backed, name-based gender classification.

The dictionary maps a normalized given name to the probability that the
name is structurally gendered female.  Classification is threshold-based
and deliberately conservative: only names with probability at or beyond
the cutoffs are labeled, everything else (including names missing from
the dictionary) stays unclassified.  The dictionary itself is supplied by
the user as a CSV export; this module never trains or guesses.
"""

from __future__ import annotations

import csv
import math
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .ingest import AuthorCareer


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"
    UNCLASSIFIED = "unclassified"


class EmptyDictionaryError(ValueError):
    """The dictionary file yielded no usable entries."""


@dataclass(frozen=True)
class Thresholds:
    male_max: float = 0.2
    female_min: float = 0.8

    def __post_init__(self) -> None:
        if not (0.0 <= self.male_max < self.female_min <= 1.0):
            raise ValueError("thresholds must satisfy 0 <= male_max < female_min <= 1")


@dataclass
class GenderDictionary:
    """Normalized given name -> probability of being gendered female."""

    entries: dict[str, float] = field(default_factory=dict)
    duplicate_count: int = 0
    rejected_count: int = 0

    def __len__(self) -> int:
        return len(self.entries)


def normalize_given_name(raw: str) -> Optional[str]:
    """Lowercased, diacritic-stripped first whitespace token of a name.

    Returns None when nothing remains (empty or whitespace-only input).
    """
    if not raw:
        return None
    decomposed = unicodedata.normalize("NFKD", raw)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    tokens = stripped.lower().split()
    return tokens[0] if tokens else None


def load_dictionary(path: str) -> GenderDictionary:
    """Load a ``name,p_gf`` CSV; a literal header row is auto-detected.

    Duplicate names (after normalization) keep the last value and are
    counted; rows with a malformed or out-of-range probability are
    rejected and counted.  Raises :class:`EmptyDictionaryError` when no
    valid entries remain, and OSError on unreadable paths.
    """
    d = GenderDictionary()
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for idx, row in enumerate(reader):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                d.rejected_count += 1
                continue
            raw_name, raw_p = row[0], row[1]
            try:
                p = float(raw_p)
            except ValueError:
                if idx == 0 and raw_name.strip().lower() == "name":
                    continue  # header row
                d.rejected_count += 1
                continue
            if not math.isfinite(p) or not (0.0 <= p <= 1.0):
                d.rejected_count += 1
                continue
            name = normalize_given_name(raw_name)
            if name is None:
                d.rejected_count += 1
                continue
            if name in d.entries:
                d.duplicate_count += 1
            d.entries[name] = p
    if not d.entries:
        raise EmptyDictionaryError(f"no usable entries in {path}")
    return d


def classify(name: str, dictionary: GenderDictionary, t: Thresholds) -> Gender:
    """Label a raw display name; unknown or mid-range names stay unclassified."""
    token = normalize_given_name(name)
    if token is None:
        return Gender.UNCLASSIFIED
    p = dictionary.entries.get(token)
    if p is None:
        return Gender.UNCLASSIFIED
    if p <= t.male_max:
        return Gender.MALE
    if p >= t.female_min:
        return Gender.FEMALE
    return Gender.UNCLASSIFIED


def annotate_careers(
    careers: list[AuthorCareer], dictionary: GenderDictionary, t: Thresholds
) -> list[AuthorCareer]:
    """Fill the gender column in place from display names; returns the list."""
    for c in careers:
        c.gender = classify(c.display_name, dictionary, t).value
    return careers
