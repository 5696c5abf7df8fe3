"""Career-transition metrics over a finalized career table.

The central quantity is time to independence: the gap in years between an
author's debut and their first last-author publication.  A value of zero
(last authorship in the debut year) is the anomaly this package audits.
The windowed rate restricts the denominator to authors who transitioned
within a fixed number of years of debut, over a debut-year cohort range
chosen so the window is fully observable (right-censoring).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .ingest import AuthorCareer


class Stratum(Enum):
    ALL = "all"
    AFFILIATION = "affiliation"
    ORCID = "orcid"
    GENDER = "gender"
    CONTINENT_GENDER = "continent-gender"


DEFAULT_STRATA = frozenset({Stratum.ALL, Stratum.AFFILIATION, Stratum.ORCID})

REPORT_COLUMNS = (
    "stratum_key",
    "debut_year",
    "n_authors",
    "n_independent_within_window",
    "n_anomalous",
    "anomaly_rate",
)

HISTOGRAM_COLUMNS = ("debut_year", "tti", "count")


class MissingGenderError(ValueError):
    """Gender strata were requested but the table has unannotated rows."""


@dataclass(frozen=True)
class MetricConfig:
    window_years: int = 5
    cohort_start: int = 2000
    cohort_end: int = 2018
    strata: frozenset[Stratum] = DEFAULT_STRATA
    # "country": affiliation stratum keys on country-code presence;
    # "institution": keys on the any-affiliation flag instead.
    affiliation_key: str = "country"

    def __post_init__(self) -> None:
        if self.window_years < 0:
            raise ValueError("window_years must be >= 0")
        if self.cohort_start > self.cohort_end:
            raise ValueError("cohort_start must not exceed cohort_end")
        if self.affiliation_key not in ("country", "institution"):
            raise ValueError("affiliation_key must be 'country' or 'institution'")


@dataclass(slots=True)
class AnomalyStat:
    stratum_key: str
    debut_year: Optional[int]  # None for a pooled stat
    n_authors: int
    n_independent_within_window: int
    n_anomalous: int
    anomaly_rate: Optional[float]


def _make_stat(
    key: str, year: Optional[int], n: int, n_win: int, n_anom: int
) -> AnomalyStat:
    rate = n_anom / n_win if n_win > 0 else None
    return AnomalyStat(key, year, n, n_win, n_anom, rate)


def time_to_independence(c: AuthorCareer) -> Optional[int]:
    """Years from debut to first last authorship; None when never observed."""
    if c.first_last_author_year is None:
        return None
    return c.first_last_author_year - c.debut_year


def in_cohort(c: AuthorCareer, cfg: MetricConfig) -> bool:
    return cfg.cohort_start <= c.debut_year <= cfg.cohort_end


def windowed_anomaly_rate(
    cohort: Iterable[AuthorCareer], cfg: MetricConfig
) -> AnomalyStat:
    """Pooled anomaly stat over an already cohort-bounded career list."""
    n = n_win = n_anom = 0
    w = cfg.window_years
    for c in cohort:
        n += 1
        tti = time_to_independence(c)
        if tti is not None and tti <= w:
            n_win += 1
            if tti == 0:
                n_anom += 1
    return _make_stat("all", None, n, n_win, n_anom)


def _affiliation_present(c: AuthorCareer, cfg: MetricConfig) -> bool:
    if cfg.affiliation_key == "country":
        return c.country_code is not None
    return c.has_affiliation


def build_report(
    table: Iterable[AuthorCareer], cfg: MetricConfig
) -> list[AnomalyStat]:
    """One row per stratum value and debut year in the cohort range.

    Stratum keys: ``all``; ``affiliation:present|absent``;
    ``orcid:present|absent``; ``gender:male|female`` (unclassified rows are
    omitted from gender strata, never from ``all``);
    ``continent-gender:<continent>:<gender>`` for observed continents.
    Rows are sorted by (stratum_key, debut_year); zero-member cells are
    retained with an empty rate so plots can tell "no data" from "zero".
    """
    cohort = [c for c in table if in_cohort(c, cfg)]
    strata = cfg.strata
    want_gender = Stratum.GENDER in strata or Stratum.CONTINENT_GENDER in strata
    if want_gender:
        unset = sum(1 for c in cohort if c.gender is None)
        if unset:
            raise MissingGenderError(
                f"gender strata requested but {unset} cohort rows lack a gender label"
            )

    counts: dict[tuple[str, int], list[int]] = {}
    keys: set[str] = set()
    if Stratum.ALL in strata:
        keys.add("all")
    if Stratum.AFFILIATION in strata:
        keys.update(("affiliation:present", "affiliation:absent"))
    if Stratum.ORCID in strata:
        keys.update(("orcid:present", "orcid:absent"))
    if Stratum.GENDER in strata:
        keys.update(("gender:male", "gender:female"))
    if Stratum.CONTINENT_GENDER in strata:
        for c in cohort:
            if c.continent is not None:
                keys.add(f"continent-gender:{c.continent}:male")
                keys.add(f"continent-gender:{c.continent}:female")

    w = cfg.window_years
    for c in cohort:
        row_keys: list[str] = []
        if Stratum.ALL in strata:
            row_keys.append("all")
        if Stratum.AFFILIATION in strata:
            row_keys.append(
                "affiliation:present" if _affiliation_present(c, cfg) else "affiliation:absent"
            )
        if Stratum.ORCID in strata:
            row_keys.append("orcid:present" if c.has_orcid else "orcid:absent")
        gender = c.gender if c.gender in ("male", "female") else None
        if Stratum.GENDER in strata and gender is not None:
            row_keys.append(f"gender:{gender}")
        if Stratum.CONTINENT_GENDER in strata and gender is not None and c.continent is not None:
            row_keys.append(f"continent-gender:{c.continent}:{gender}")

        tti = time_to_independence(c)
        within = tti is not None and tti <= w
        anomalous = tti == 0
        for key in row_keys:
            cell = counts.get((key, c.debut_year))
            if cell is None:
                cell = counts[(key, c.debut_year)] = [0, 0, 0]
            cell[0] += 1
            if within:
                cell[1] += 1
                if anomalous:
                    cell[2] += 1

    report: list[AnomalyStat] = []
    for key in sorted(keys):
        for year in range(cfg.cohort_start, cfg.cohort_end + 1):
            cell = counts.get((key, year), (0, 0, 0))
            report.append(_make_stat(key, year, cell[0], cell[1], cell[2]))
    return report


@dataclass(slots=True)
class TtiHistogram:
    """Distribution of time to independence over a debut cohort.

    ``pooled`` counts authors by observed gap; ``pooled_never`` counts
    cohort members who never appear as last author.  ``by_year`` holds the
    same breakdown per debut year.  Totals always equal the cohort size.
    """

    pooled: dict[int, int] = field(default_factory=dict)
    pooled_never: int = 0
    by_year: dict[int, dict[int, int]] = field(default_factory=dict)
    by_year_never: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.pooled.values()) + self.pooled_never


def tti_distribution(
    table: Iterable[AuthorCareer], cfg: MetricConfig
) -> TtiHistogram:
    hist = TtiHistogram()
    for c in table:
        if not in_cohort(c, cfg):
            continue
        year_counts = hist.by_year.setdefault(c.debut_year, {})
        tti = time_to_independence(c)
        if tti is None:
            hist.pooled_never += 1
            hist.by_year_never[c.debut_year] = hist.by_year_never.get(c.debut_year, 0) + 1
        else:
            hist.pooled[tti] = hist.pooled.get(tti, 0) + 1
            year_counts[tti] = year_counts.get(tti, 0) + 1
    return hist


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------


def format_rate(rate: Optional[float]) -> str:
    return "" if rate is None else f"{rate:.6f}"


def report_to_text(report: list[AnomalyStat]) -> str:
    lines = [",".join(REPORT_COLUMNS)]
    for s in report:
        year = "" if s.debut_year is None else str(s.debut_year)
        lines.append(
            f"{s.stratum_key},{year},{s.n_authors},"
            f"{s.n_independent_within_window},{s.n_anomalous},{format_rate(s.anomaly_rate)}"
        )
    return "\n".join(lines) + "\n"


def write_report_csv(report: list[AnomalyStat], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(report_to_text(report))


def _bucket_rows(counts: dict[int, int], never: int, label: str) -> list[str]:
    rows = [f"{label},-1,{never}"]
    top = max(counts) if counts else -1
    for tti in range(0, top + 1):
        rows.append(f"{label},{tti},{counts.get(tti, 0)}")
    return rows


def histogram_to_text(hist: TtiHistogram) -> str:
    lines = [",".join(HISTOGRAM_COLUMNS)]
    lines.extend(_bucket_rows(hist.pooled, hist.pooled_never, "all"))
    for year in sorted(hist.by_year):
        lines.extend(
            _bucket_rows(hist.by_year[year], hist.by_year_never.get(year, 0), str(year))
        )
    return "\n".join(lines) + "\n"


def write_histogram_csv(hist: TtiHistogram, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(histogram_to_text(hist))
