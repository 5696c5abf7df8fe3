"""Two-pass, shard-parallel aggregation of author careers from a works corpus.

Pass A scans every line and collects the set of authors holding at least
one eligible biomedical work.  Pass B re-scans the corpus and aggregates,
for exactly those authors, a per-author career summary over *all* eligible
journal articles (biomedical or not).  Per-shard results are mergeable:
``PartialAggregate.merge`` is associative and commutative with an empty
identity, so sharding and line order never change the final table.

Peak memory is proportional to the number of distinct selected authors,
never to the number of works.
"""

from __future__ import annotations

import csv
import gzip
import importlib.resources
import multiprocessing
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .model import (
    FilterConfig,
    ParseError,
    Position,
    WorkRecord,
    derive_positions,
    is_biomedical,
    is_eligible_work,
    parse_work_line,
)

CAREER_TABLE_COLUMNS = (
    "author_id",
    "debut_year",
    "first_last_author_year",
    "n_works",
    "has_affiliation",
    "has_orcid",
    "country_code",
    "continent",
    "display_name",
    "gender",
)

_GENDER_TOKENS = {"male", "female", "unclassified"}


class ShardReadError(RuntimeError):
    """An input shard could not be read; carries file and line context."""

    def __init__(self, path: str, line_no: int, cause: Exception):
        super().__init__(f"{path}: read failed near line {line_no}: {cause}")
        self.path = path
        self.line_no = line_no
        self.cause = cause


class CareerTableError(ValueError):
    """A career-table TSV did not match the expected schema."""


@dataclass(slots=True)
class ScanStats:
    lines_read: int = 0
    parse_errors: int = 0
    works_eligible: int = 0
    works_biomedical: int = 0
    works_aggregated: int = 0

    def __add__(self, other: "ScanStats") -> "ScanStats":
        return ScanStats(
            self.lines_read + other.lines_read,
            self.parse_errors + other.parse_errors,
            self.works_eligible + other.works_eligible,
            self.works_biomedical + other.works_biomedical,
            self.works_aggregated + other.works_aggregated,
        )


@dataclass(slots=True)
class PartialEntry:
    """Mergeable per-author aggregation state."""

    min_year: int
    min_last_year: Optional[int] = None
    n_works: int = 0
    has_affiliation: bool = False
    has_orcid: bool = False
    # (year, work_id, country_code) of the latest institution sighting
    witness: Optional[tuple[int, str, Optional[str]]] = None
    name_counts: dict[str, int] = field(default_factory=dict)


def _witness_wins(
    a: tuple[int, str, Optional[str]], b: tuple[int, str, Optional[str]]
) -> tuple[int, str, Optional[str]]:
    """Pick one witness under a total order: latest year wins, ties go to
    the lexicographically smallest work id, then to a present country code.

    The third tier is only reachable when one work yields several
    candidates for the same author; a total order keeps the merge
    associative and commutative.
    """
    if a[0] != b[0]:
        return a if a[0] > b[0] else b
    if a[1] != b[1]:
        return a if a[1] < b[1] else b
    ka = (a[2] is None, a[2] or "")
    kb = (b[2] is None, b[2] or "")
    return a if ka <= kb else b


def _merge_entry_into(dst: PartialEntry, src: PartialEntry) -> None:
    if src.min_year < dst.min_year:
        dst.min_year = src.min_year
    if src.min_last_year is not None:
        if dst.min_last_year is None or src.min_last_year < dst.min_last_year:
            dst.min_last_year = src.min_last_year
    dst.n_works += src.n_works
    dst.has_affiliation = dst.has_affiliation or src.has_affiliation
    dst.has_orcid = dst.has_orcid or src.has_orcid
    if src.witness is not None:
        dst.witness = src.witness if dst.witness is None else _witness_wins(dst.witness, src.witness)
    for name, count in src.name_counts.items():
        dst.name_counts[name] = dst.name_counts.get(name, 0) + count


@dataclass(slots=True)
class PartialAggregate:
    """Per-author career state for one shard; a commutative monoid under merge."""

    entries: dict[str, PartialEntry] = field(default_factory=dict)

    @staticmethod
    def empty() -> "PartialAggregate":
        return PartialAggregate()

    def absorb(self, other: "PartialAggregate") -> None:
        """In-place merge used by the shard reducer."""
        entries = self.entries
        for author_id, src in other.entries.items():
            dst = entries.get(author_id)
            if dst is None:
                entries[author_id] = _copy_entry(src)
            else:
                _merge_entry_into(dst, src)


def _copy_entry(e: PartialEntry) -> PartialEntry:
    return PartialEntry(
        min_year=e.min_year,
        min_last_year=e.min_last_year,
        n_works=e.n_works,
        has_affiliation=e.has_affiliation,
        has_orcid=e.has_orcid,
        witness=e.witness,
        name_counts=dict(e.name_counts),
    )


def merge(a: PartialAggregate, b: PartialAggregate) -> PartialAggregate:
    """Pure merge of two partials; inputs are left untouched."""
    out = PartialAggregate()
    out.absorb(a)
    out.absorb(b)
    return out


def observe_work_for_author_set(
    work: WorkRecord, cfg: FilterConfig, out: set[str]
) -> tuple[bool, bool]:
    """Pass-A observer; returns (eligible, eligible_and_biomedical)."""
    if not is_eligible_work(work):
        return False, False
    if not is_biomedical(work, cfg):
        return True, False
    for a in work.authorships:
        out.add(a.author_id)
    return True, True


def observe_work_for_careers(
    work: WorkRecord,
    members: set[str],
    cfg: FilterConfig,
    entries: dict[str, PartialEntry],
) -> bool:
    """Pass-B observer; returns True when the work touched any member."""
    if not is_eligible_work(work):
        return False
    authorships = work.authorships
    if not authorships:
        return False
    touched = False
    derive_positions(authorships)
    year = work.publication_year
    work_id = work.work_id
    solo_is_last = cfg.solo_counts_as_last
    counted: set[str] = set()
    for a in authorships:
        author_id = a.author_id
        if author_id not in members:
            continue
        touched = True
        e = entries.get(author_id)
        if e is None:
            e = entries[author_id] = PartialEntry(min_year=year)
        elif year < e.min_year:
            e.min_year = year
        pos = a.position
        if pos is Position.LAST or (pos is Position.SOLO and solo_is_last):
            if e.min_last_year is None or year < e.min_last_year:
                e.min_last_year = year
        if author_id not in counted:
            counted.add(author_id)
            e.n_works += 1
        if a.orcid is not None:
            e.has_orcid = True
        if a.institutions:
            e.has_affiliation = True
            country = None
            for _, cc in a.institutions:
                if cc is not None:
                    country = cc
                    break
            cand = (year, work_id, country)
            e.witness = cand if e.witness is None else _witness_wins(e.witness, cand)
        name = a.display_name
        if name:
            e.name_counts[name] = e.name_counts.get(name, 0) + 1
    return touched


def scan_author_set(
    lines: Iterable[str], cfg: FilterConfig
) -> tuple[set[str], ScanStats]:
    """Collect ids of authors on eligible biomedical works in a line stream."""
    out: set[str] = set()
    stats = ScanStats()
    for line in lines:
        if not line or line.isspace():
            continue
        stats.lines_read += 1
        try:
            work = parse_work_line(line)
        except ParseError:
            stats.parse_errors += 1
            continue
        eligible, biomed = observe_work_for_author_set(work, cfg, out)
        if eligible:
            stats.works_eligible += 1
        if biomed:
            stats.works_biomedical += 1
    return out, stats


def scan_careers(
    lines: Iterable[str], authors: set[str], cfg: FilterConfig
) -> tuple[PartialAggregate, ScanStats]:
    """Aggregate careers over all eligible works touching the author set."""
    agg = PartialAggregate()
    stats = ScanStats()
    entries = agg.entries
    for line in lines:
        if not line or line.isspace():
            continue
        stats.lines_read += 1
        try:
            work = parse_work_line(line)
        except ParseError:
            stats.parse_errors += 1
            continue
        if observe_work_for_careers(work, authors, cfg, entries):
            stats.works_aggregated += 1
    return agg, stats


@dataclass(slots=True)
class AuthorCareer:
    author_id: str
    debut_year: int
    first_last_author_year: Optional[int]
    n_works: int
    has_affiliation: bool
    has_orcid: bool
    country_code: Optional[str]
    continent: Optional[str]
    display_name: str
    gender: Optional[str] = None  # "male" | "female" | "unclassified"


@dataclass(slots=True)
class FinalizeStats:
    rows_emitted: int = 0
    rows_dropped_pre_cutoff: int = 0


def _best_name(name_counts: dict[str, int]) -> str:
    if not name_counts:
        return ""
    # Highest count wins; ties go to the lexicographically smallest name.
    return min(name_counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def finalize(
    p: PartialAggregate,
    continent_map: dict[str, str],
    cfg: FilterConfig,
) -> tuple[list[AuthorCareer], FinalizeStats]:
    """Turn the fully merged aggregate into a sorted career table.

    Authors whose debut is not strictly after ``min_debut_year_exclusive``
    are dropped and counted, never emitted.
    """
    stats = FinalizeStats()
    careers: list[AuthorCareer] = []
    cutoff = cfg.min_debut_year_exclusive
    for author_id in sorted(p.entries):
        e = p.entries[author_id]
        if e.min_year <= cutoff:
            stats.rows_dropped_pre_cutoff += 1
            continue
        country = e.witness[2] if e.witness is not None else None
        continent = continent_map.get(country) if country is not None else None
        careers.append(
            AuthorCareer(
                author_id=author_id,
                debut_year=e.min_year,
                first_last_author_year=e.min_last_year,
                n_works=e.n_works,
                has_affiliation=e.has_affiliation,
                has_orcid=e.has_orcid,
                country_code=country,
                continent=continent,
                display_name=_best_name(e.name_counts),
                gender=None,
            )
        )
    stats.rows_emitted = len(careers)
    return careers, stats


# ---------------------------------------------------------------------------
# In-memory record path (used by the synthetic harness and tests)
# ---------------------------------------------------------------------------


def author_set_from_records(
    records: Iterable[WorkRecord], cfg: FilterConfig
) -> set[str]:
    out: set[str] = set()
    for work in records:
        observe_work_for_author_set(work, cfg, out)
    return out


def aggregate_records(
    records: Iterable[WorkRecord], authors: set[str], cfg: FilterConfig
) -> PartialAggregate:
    agg = PartialAggregate()
    entries = agg.entries
    for work in records:
        observe_work_for_careers(work, authors, cfg, entries)
    return agg


def career_table_from_records(
    records: list[WorkRecord],
    cfg: FilterConfig,
    continent_map: Optional[dict[str, str]] = None,
) -> tuple[list[AuthorCareer], FinalizeStats]:
    """Run both passes over in-memory records; parsing already done."""
    if continent_map is None:
        continent_map = load_continent_map()
    authors = author_set_from_records(records, cfg)
    agg = aggregate_records(records, authors, cfg)
    return finalize(agg, continent_map, cfg)


# ---------------------------------------------------------------------------
# Sharded line-stream drivers
# ---------------------------------------------------------------------------

DEFAULT_BATCH_LINES = 4096

_worker_cfg: Optional[FilterConfig] = None
_worker_authors: Optional[set[str]] = None


def _decode_lines(batch: list[bytes]) -> Iterator[str]:
    for raw in batch:
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError:
            # Surface as a parse error through a line json cannot accept.
            yield "\x00"


def _init_pass_a(cfg: FilterConfig) -> None:
    global _worker_cfg
    _worker_cfg = cfg


def _run_pass_a_batch(batch: list[bytes]) -> tuple[set[str], ScanStats]:
    assert _worker_cfg is not None
    return scan_author_set(_decode_lines(batch), _worker_cfg)


def _init_pass_b(cfg: FilterConfig, authors: set[str]) -> None:
    global _worker_cfg, _worker_authors
    _worker_cfg = cfg
    _worker_authors = authors


def _run_pass_b_batch(batch: list[bytes]) -> tuple[PartialAggregate, ScanStats]:
    assert _worker_cfg is not None and _worker_authors is not None
    return scan_careers(_decode_lines(batch), _worker_authors, _worker_cfg)


def open_corpus(path: str):
    """Binary line stream over a JSONL or JSONL.gz file."""
    if path.endswith(".gz"):
        return gzip.open(path, "rb")
    return open(path, "rb")


def _iter_batches(
    paths: Iterable[str], batch_lines: int, progress: Optional[Callable[[int], None]]
) -> Iterator[list[bytes]]:
    done = 0
    for path in paths:
        line_no = 0
        try:
            with open_corpus(path) as handle:
                batch: list[bytes] = []
                while True:
                    raw = handle.readline()
                    if not raw:
                        break
                    line_no += 1
                    batch.append(raw)
                    if len(batch) >= batch_lines:
                        yield batch
                        done += len(batch)
                        if progress is not None:
                            progress(done)
                        batch = []
                if batch:
                    yield batch
                    done += len(batch)
                    if progress is not None:
                        progress(done)
        except (OSError, EOFError, gzip.BadGzipFile) as exc:
            raise ShardReadError(path, line_no + 1, exc) from exc


def _map_batches(
    paths: Iterable[str],
    threads: int,
    batch_lines: int,
    initializer,
    initargs,
    task,
    inline: Callable[[list[bytes]], tuple],
    progress: Optional[Callable[[int], None]] = None,
) -> Iterator[tuple]:
    batches = _iter_batches(paths, batch_lines, progress)
    if threads <= 1:
        for batch in batches:
            yield inline(batch)
        return
    # File reading stays in this thread so ShardReadError surfaces here;
    # a bounded window of in-flight tasks keeps memory flat.
    window = threads * 2
    with multiprocessing.Pool(threads, initializer=initializer, initargs=initargs) as pool:
        pending: deque = deque()
        for batch in batches:
            pending.append(pool.apply_async(task, (batch,)))
            if len(pending) >= window:
                yield pending.popleft().get()
        while pending:
            yield pending.popleft().get()


def run_author_pass(
    paths: list[str],
    cfg: FilterConfig,
    threads: int = 1,
    batch_lines: int = DEFAULT_BATCH_LINES,
    progress: Optional[Callable[[int], None]] = None,
) -> tuple[set[str], ScanStats]:
    authors: set[str] = set()
    stats = ScanStats()
    for part, part_stats in _map_batches(
        paths,
        threads,
        batch_lines,
        _init_pass_a,
        (cfg,),
        _run_pass_a_batch,
        lambda batch: scan_author_set(_decode_lines(batch), cfg),
        progress,
    ):
        authors |= part
        stats = stats + part_stats
    return authors, stats


def run_career_pass(
    paths: list[str],
    authors: set[str],
    cfg: FilterConfig,
    threads: int = 1,
    batch_lines: int = DEFAULT_BATCH_LINES,
    progress: Optional[Callable[[int], None]] = None,
) -> tuple[PartialAggregate, ScanStats]:
    agg = PartialAggregate()
    stats = ScanStats()
    for part, part_stats in _map_batches(
        paths,
        threads,
        batch_lines,
        _init_pass_b,
        (cfg, authors),
        _run_pass_b_batch,
        lambda batch: scan_careers(_decode_lines(batch), authors, cfg),
        progress,
    ):
        agg.absorb(part)
        stats = stats + part_stats
    return agg, stats


@dataclass(slots=True)
class TwoPassResult:
    careers: list[AuthorCareer]
    authors_selected: int
    pass_a: ScanStats
    pass_b: ScanStats
    finalize: FinalizeStats


def run_two_pass(
    paths: list[str],
    cfg: FilterConfig,
    threads: int = 1,
    batch_lines: int = DEFAULT_BATCH_LINES,
    continent_map: Optional[dict[str, str]] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> TwoPassResult:
    if continent_map is None:
        continent_map = load_continent_map()
    authors, stats_a = run_author_pass(paths, cfg, threads, batch_lines, progress)
    agg, stats_b = run_career_pass(paths, authors, cfg, threads, batch_lines, progress)
    careers, fin = finalize(agg, continent_map, cfg)
    return TwoPassResult(
        careers=careers,
        authors_selected=len(authors),
        pass_a=stats_a,
        pass_b=stats_b,
        finalize=fin,
    )


# ---------------------------------------------------------------------------
# Career table serialization (TSV)
# ---------------------------------------------------------------------------


def _clean_text(value: str) -> str:
    """Keep TSV rows one-line: control whitespace becomes plain spaces."""
    if "\t" in value or "\n" in value or "\r" in value:
        return value.replace("\t", " ").replace("\n", " ").replace("\r", " ")
    return value


def format_career_row(c: AuthorCareer) -> str:
    return "\t".join(
        (
            c.author_id,
            str(c.debut_year),
            "" if c.first_last_author_year is None else str(c.first_last_author_year),
            str(c.n_works),
            "true" if c.has_affiliation else "false",
            "true" if c.has_orcid else "false",
            c.country_code or "",
            c.continent or "",
            _clean_text(c.display_name),
            c.gender or "",
        )
    )


def career_table_to_text(careers: list[AuthorCareer]) -> str:
    lines = ["\t".join(CAREER_TABLE_COLUMNS)]
    lines.extend(format_career_row(c) for c in careers)
    return "\n".join(lines) + "\n"


def write_career_table(careers: list[AuthorCareer], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\t".join(CAREER_TABLE_COLUMNS))
        handle.write("\n")
        for c in careers:
            handle.write(format_career_row(c))
            handle.write("\n")


def _parse_bool(token: str, line_no: int, column: str) -> bool:
    if token == "true":
        return True
    if token == "false":
        return False
    raise CareerTableError(f"line {line_no}: bad boolean in {column}: {token!r}")


def read_career_table(path: str) -> list[AuthorCareer]:
    careers: list[AuthorCareer] = []
    with open(path, "r", encoding="utf-8", newline="\n") as handle:
        header = handle.readline().rstrip("\n")
        if header.split("\t") != list(CAREER_TABLE_COLUMNS):
            raise CareerTableError(f"unexpected header: {header!r}")
        for line_no, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != len(CAREER_TABLE_COLUMNS):
                raise CareerTableError(
                    f"line {line_no}: expected {len(CAREER_TABLE_COLUMNS)} columns, got {len(parts)}"
                )
            (
                author_id,
                debut,
                first_last,
                n_works,
                has_aff,
                has_orcid,
                country,
                continent,
                display_name,
                gender,
            ) = parts
            try:
                debut_year = int(debut)
                first_last_year = int(first_last) if first_last else None
                works = int(n_works)
            except ValueError as exc:
                raise CareerTableError(f"line {line_no}: bad integer field: {exc}") from None
            if gender and gender not in _GENDER_TOKENS:
                raise CareerTableError(f"line {line_no}: bad gender token: {gender!r}")
            careers.append(
                AuthorCareer(
                    author_id=author_id,
                    debut_year=debut_year,
                    first_last_author_year=first_last_year,
                    n_works=works,
                    has_affiliation=_parse_bool(has_aff, line_no, "has_affiliation"),
                    has_orcid=_parse_bool(has_orcid, line_no, "has_orcid"),
                    country_code=country or None,
                    continent=continent or None,
                    display_name=display_name,
                    gender=gender or None,
                )
            )
    return careers


# ---------------------------------------------------------------------------
# Continent lookup
# ---------------------------------------------------------------------------

_continent_cache: Optional[dict[str, str]] = None


def load_continent_map() -> dict[str, str]:
    """ISO-3166 alpha-2 country code to continent name, from packaged data."""
    global _continent_cache
    if _continent_cache is None:
        resource = importlib.resources.files("disambaudit").joinpath("data/continents.csv")
        mapping: dict[str, str] = {}
        with resource.open("r", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            if header != ["country_code", "continent"]:
                raise ValueError("continent data file has unexpected header")
            for row in reader:
                if len(row) != 2:
                    continue
                mapping[row[0].strip().upper()] = row[1].strip()
        _continent_cache = mapping
    return _continent_cache
