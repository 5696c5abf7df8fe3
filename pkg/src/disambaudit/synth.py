"""Synthetic bibliometric corpora with a known career ground truth, plus an
identity-split error injector and a naive in-memory reference pipeline.

The career model is deliberately minimal.  Trainees debut inside a
configurable year range, publish first-author papers with their assigned
senior as last author for a geometric number of training years, and a
configurable fraction go on to publish last-author papers of their own
from their independence year onward.  Seniors are anchored a decade
before the cohort (one solo founding paper), so the default debut cutoff
keeps the scaffolding out of the analyzed table while their supervision
papers remain in the corpus.

The split injector models the one failure mode under audit: a true
author's record is cut at one of their publication years and the suffix
is reassigned to a fresh author id.  A suffix that begins at or after the
author's independence year starts with a last-author paper, so the
fragment debuts as an instant senior author.  Split decisions are keyed
by (seed, author id), which makes split sets nested across rates: every
author split at rate 0.2 is also split at 0.3.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Optional

import numpy as np

from .ingest import (
    AuthorCareer,
    load_continent_map,
)
from .metrics import (
    AnomalyStat,
    MetricConfig,
    MissingGenderError,
    Stratum,
    TtiHistogram,
    _make_stat,
)
from .model import (
    AuthorshipRecord,
    ConceptTag,
    FilterConfig,
    Position,
    WorkRecord,
    derive_positions,
    is_biomedical,
    is_eligible_work,
)

TRUTH_COLUMNS = (
    "true_author_id",
    "emitted_author_id",
    "debut_year",
    "independence_year",
    "split_year",
)

_GIVEN_MALE = (
    "james", "john", "robert", "wei", "michael", "david", "ahmed", "carlos",
    "juan", "pierre", "hans", "kenji", "ravi", "dmitri", "lars",
)
_GIVEN_FEMALE = (
    "mary", "maria", "jennifer", "ana", "elena", "fatima", "yuki", "priya",
    "sofia", "emma", "olga", "ingrid", "mei", "amara", "lucia",
)
_GIVEN_AMBIGUOUS = ("alex", "sam", "jordan", "taylor", "robin", "casey", "kim")
_SURNAMES = (
    "smith", "garcia", "kim", "chen", "muller", "rossi", "silva", "tanaka",
    "kumar", "ivanov", "nielsen", "dubois", "lopez", "wang", "brown",
    "okafor", "haddad", "berg", "costa", "novak",
)
_COUNTRIES = (
    "US", "CN", "GB", "DE", "JP", "IN", "BR", "FR", "CA", "AU", "ES", "IT",
    "KR", "NL", "",
)
_COUNTRY_WEIGHTS = (
    0.20, 0.16, 0.07, 0.07, 0.06, 0.05, 0.05, 0.05, 0.04, 0.04, 0.04, 0.04,
    0.03, 0.02, 0.08,
)

_CONCEPT_SETS = (
    [ConceptTag("C86803240", 0)],  # biology
    [ConceptTag("C71924100", 0)],  # medicine
)
_CONCEPT_IDS = ("C86803240", "C71924100")
_NO_INSTITUTIONS: list[tuple[str, Optional[str]]] = []

_KIND_FOUNDING = 0
_KIND_TRAINING = 1
_KIND_ACTIVE = 2


@dataclass(frozen=True)
class SynthConfig:
    n_authors: int
    debut_year_range: tuple[int, int] = (2000, 2018)
    training_duration_mean: float = 8.0
    papers_per_year_mean: float = 2.0
    pi_fraction: float = 0.3
    immediate_pi_rate: float = 0.01
    affiliation_presence_rate: float = 0.7
    orcid_presence_rate: float = 0.3
    pi_active_years_mean: float = 8.0
    trainees_per_senior: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_authors < 0:
            raise ValueError("n_authors must be >= 0")
        lo, hi = self.debut_year_range
        if lo > hi:
            raise ValueError("debut_year_range must be (low, high) with low <= high")
        for name in ("pi_fraction", "immediate_pi_rate", "affiliation_presence_rate", "orcid_presence_rate"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"{name} must be within [0, 1]")
        if self.training_duration_mean < 1.0 or self.pi_active_years_mean < 1.0:
            raise ValueError("duration means must be >= 1 year")
        if self.papers_per_year_mean <= 0.0:
            raise ValueError("papers_per_year_mean must be > 0")
        if self.trainees_per_senior < 1:
            raise ValueError("trainees_per_senior must be >= 1")


@dataclass(frozen=True)
class SplitSpec:
    split_rate: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.split_rate <= 1.0):
            raise ValueError("split_rate must be within [0, 1]")


@dataclass(slots=True)
class TrueAuthor:
    author_id: str
    kind: str  # "trainee" | "senior"
    debut_year: int
    independence_year: Optional[int]
    pub_years: tuple[int, ...]
    works: Optional[list[tuple[str, int, str]]] = None  # (work_id, year, position)


@dataclass
class GroundTruth:
    authors: dict[str, TrueAuthor] = field(default_factory=dict)
    emitted_to_true: dict[str, str] = field(default_factory=dict)
    split_year_by_true: dict[str, int] = field(default_factory=dict)

    def true_tti(self, true_id: str) -> Optional[int]:
        a = self.authors[true_id]
        if a.independence_year is None:
            return None
        return a.independence_year - a.debut_year


@dataclass(slots=True)
class _AuthorMeta:
    author_id: str
    base_name: str
    alt_name: str
    orcid: Optional[str]
    institutions: list[tuple[str, Optional[str]]]


# A work plan is (year, kind, trainee_idx, senior_idx, concept, var_a, var_b);
# the plan's position in the generation-order list fixes its work id.
_Plan = tuple[int, int, int, int, int, bool, bool]


def _draw_author_meta(rng: np.random.Generator, author_id: str, idx: int, cfg: SynthConfig) -> _AuthorMeta:
    pick = rng.random()
    if pick < 0.45:
        given = _GIVEN_MALE[int(rng.integers(len(_GIVEN_MALE)))]
    elif pick < 0.90:
        given = _GIVEN_FEMALE[int(rng.integers(len(_GIVEN_FEMALE)))]
    else:
        given = _GIVEN_AMBIGUOUS[int(rng.integers(len(_GIVEN_AMBIGUOUS)))]
    surname = _SURNAMES[int(rng.integers(len(_SURNAMES)))]
    base = f"{given.title()} {surname.title()}"
    alt = f"{given.title()} {chr(65 + idx % 26)}. {surname.title()}"
    orcid = None
    if rng.random() < cfg.orcid_presence_rate:
        orcid = f"https://orcid.org/0000-0002-{idx % 10000:04d}-{(idx * 7) % 10000:04d}"
    institutions = _NO_INSTITUTIONS
    if rng.random() < cfg.affiliation_presence_rate:
        country = _COUNTRIES[int(rng.choice(len(_COUNTRIES), p=_COUNTRY_WEIGHTS))]
        institutions = [(f"I{int(rng.integers(400)):05d}", country or None)]
    return _AuthorMeta(author_id, base, alt, orcid, institutions)


def _plan_corpus(cfg: SynthConfig) -> tuple[list[_AuthorMeta], list[_Plan], list[int], GroundTruth]:
    """Sample every career and return build plans in emission order.

    Returns (author metas, plans in generation order, emission permutation,
    ground truth without per-work lists).
    """
    rng = np.random.default_rng(cfg.seed)
    truth = GroundTruth()
    n = cfg.n_authors
    metas: list[_AuthorMeta] = []
    plans: list[_Plan] = []
    if n == 0:
        return metas, plans, [], truth

    lo, hi = cfg.debut_year_range
    n_seniors = math.ceil(n / cfg.trainees_per_senior)
    anchor = min(lo, 2000)
    lam = cfg.papers_per_year_mean
    p_train = 1.0 / cfg.training_duration_mean
    p_active = 1.0 / cfg.pi_active_years_mean

    pub_years: list[set[int]] = []

    # Seniors first: ids follow the trainee block, metadata drawn up front.
    senior_meta: list[_AuthorMeta] = []
    founding_years: list[int] = []
    for j in range(n_seniors):
        author_id = f"A{n + j + 1:07d}"
        senior_meta.append(_draw_author_meta(rng, author_id, n + j, cfg))
        founding_years.append(int(rng.integers(anchor - 10, anchor - 1)))

    trainee_meta: list[_AuthorMeta] = []
    trainee_debut: list[int] = []
    trainee_indep: list[Optional[int]] = []
    for i in range(n):
        author_id = f"A{i + 1:07d}"
        meta = _draw_author_meta(rng, author_id, i, cfg)
        trainee_meta.append(meta)
        pub_years.append(set())
        d = int(rng.integers(lo, hi + 1))
        trainee_debut.append(d)
        is_pi = rng.random() < cfg.pi_fraction
        if is_pi:
            immediate = rng.random() < cfg.immediate_pi_rate
            t = 0 if immediate else int(rng.geometric(p_train))
            active_span = int(rng.geometric(p_active))
            trainee_indep.append(d + t)
        else:
            t = int(rng.geometric(p_train))
            active_span = 0
            trainee_indep.append(None)
        senior_idx = i // cfg.trainees_per_senior
        years_mine = pub_years[i]
        for offset in range(t):
            year = d + offset
            k = int(rng.poisson(lam))
            if offset == 0:
                k = max(1, k)
            for _ in range(k):
                plans.append(
                    (year, _KIND_TRAINING, i, senior_idx, int(rng.random() < 0.5),
                     bool(rng.random() < 0.1), bool(rng.random() < 0.1))
                )
            if k:
                years_mine.add(year)
        if is_pi:
            start_active = d + t
            for offset in range(active_span):
                year = start_active + offset
                k = int(rng.poisson(lam))
                if offset == 0:
                    k = max(1, k)
                for _ in range(k):
                    plans.append(
                        (year, _KIND_ACTIVE, i, senior_idx, int(rng.random() < 0.5),
                         bool(rng.random() < 0.1), bool(rng.random() < 0.1))
                    )
                if k:
                    years_mine.add(year)

    # Founding solo papers close the plan list; senior pub years fold in
    # supervision and first-author appearances accumulated above.
    senior_years: list[set[int]] = [set() for _ in range(n_seniors)]
    for year, _kind, _i, s_idx, _c, _va, _vb in plans:
        senior_years[s_idx].add(year)
    for j in range(n_seniors):
        year = founding_years[j]
        plans.append((year, _KIND_FOUNDING, -1, j, int(rng.random() < 0.5), bool(rng.random() < 0.1), False))
        senior_years[j].add(year)

    metas = trainee_meta + senior_meta
    for i, meta in enumerate(trainee_meta):
        truth.authors[meta.author_id] = TrueAuthor(
            author_id=meta.author_id,
            kind="trainee",
            debut_year=trainee_debut[i],
            independence_year=trainee_indep[i],
            pub_years=tuple(sorted(pub_years[i])),
        )
        truth.emitted_to_true[meta.author_id] = meta.author_id
    for j, meta in enumerate(senior_meta):
        # The solo founding paper counts as a last-author appearance under
        # the default position rules, so independence is the founding year.
        truth.authors[meta.author_id] = TrueAuthor(
            author_id=meta.author_id,
            kind="senior",
            debut_year=founding_years[j],
            independence_year=founding_years[j],
            pub_years=tuple(sorted(senior_years[j])),
        )
        truth.emitted_to_true[meta.author_id] = meta.author_id

    permutation = [int(x) for x in np.random.default_rng(cfg.seed + 1).permutation(len(plans))]
    return metas, plans, permutation, truth


def _authorship(meta: _AuthorMeta, variant: bool) -> AuthorshipRecord:
    return AuthorshipRecord(
        author_id=meta.author_id,
        display_name=meta.alt_name if variant else meta.base_name,
        position=None,
        orcid=meta.orcid,
        institutions=meta.institutions,
    )


def _build_record(plan: _Plan, work_id: str, metas: list[_AuthorMeta], n_trainees: int) -> WorkRecord:
    year, kind, t_idx, s_idx, concept, var_a, var_b = plan
    senior = metas[n_trainees + s_idx]
    if kind == _KIND_FOUNDING:
        authorships = [_authorship(senior, var_a)]
    elif kind == _KIND_TRAINING:
        authorships = [_authorship(metas[t_idx], var_a), _authorship(senior, var_b)]
    else:
        authorships = [_authorship(senior, var_a), _authorship(metas[t_idx], var_b)]
    return WorkRecord(
        work_id=work_id,
        publication_year=year,
        work_type="article",
        is_retracted=False,
        is_paratext=False,
        source_type="journal",
        concepts=_CONCEPT_SETS[concept],
        authorships=authorships,
    )


def _iter_records(
    metas: list[_AuthorMeta],
    plans: list[_Plan],
    permutation: list[int],
    n_trainees: int,
) -> Iterator[WorkRecord]:
    for orig_idx in permutation:
        yield _build_record(plans[orig_idx], f"W{orig_idx + 1:08d}", metas, n_trainees)


def generate(cfg: SynthConfig) -> tuple[list[WorkRecord], GroundTruth]:
    """Build the corpus in memory; deterministic for a given config."""
    metas, plans, permutation, truth = _plan_corpus(cfg)
    records: list[WorkRecord] = []
    for true_author in truth.authors.values():
        true_author.works = []
    for work in _iter_records(metas, plans, permutation, cfg.n_authors):
        records.append(work)
        year = work.publication_year
        if len(work.authorships) == 1:
            truth.authors[work.authorships[0].author_id].works.append((work.work_id, year, "solo"))
        else:
            first, last = work.authorships[0], work.authorships[-1]
            truth.authors[first.author_id].works.append((work.work_id, year, "first"))
            truth.authors[last.author_id].works.append((work.work_id, year, "last"))
    return records, truth


# ---------------------------------------------------------------------------
# Identity-split injection
# ---------------------------------------------------------------------------


def _unit_uniform(seed: int, author_id: str, tag: str) -> float:
    digest = hashlib.sha256(f"{seed}|{tag}|{author_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2.0**64


def split_decisions(
    truth: GroundTruth, spec: SplitSpec, seed: int
) -> dict[str, tuple[int, str]]:
    """Map of true author id -> (split year, fragment id) for this rate.

    Only authors with at least two distinct publication years are
    candidates.  Decisions are keyed by (seed, author id), so the selected
    set at a lower rate is a subset of the set at any higher rate.
    """
    out: dict[str, tuple[int, str]] = {}
    rate = spec.split_rate
    if rate <= 0.0:
        return out
    for true_id, author in truth.authors.items():
        years = author.pub_years
        if len(years) < 2:
            continue
        if _unit_uniform(seed, true_id, "select") >= rate:
            continue
        candidates = years[1:]  # strictly after debut
        pick = int(_unit_uniform(seed, true_id, "year") * len(candidates))
        if pick >= len(candidates):
            pick = len(candidates) - 1
        out[true_id] = (candidates[pick], f"{true_id}.1")
    return out


def _remap_work(work: WorkRecord, decisions: dict[str, tuple[int, str]]) -> WorkRecord:
    """Reassign suffix authorships to fragment ids; untouched works pass through."""
    year = work.publication_year
    replaced = None
    for idx, a in enumerate(work.authorships):
        decision = decisions.get(a.author_id)
        if decision is None or year is None or year < decision[0]:
            continue
        if replaced is None:
            replaced = list(work.authorships)
        replaced[idx] = AuthorshipRecord(
            author_id=decision[1],
            display_name=a.display_name,
            position=a.position,
            orcid=a.orcid,
            institutions=a.institutions,
        )
    if replaced is None:
        return work
    return WorkRecord(
        work_id=work.work_id,
        publication_year=work.publication_year,
        work_type=work.work_type,
        is_retracted=work.is_retracted,
        is_paratext=work.is_paratext,
        source_type=work.source_type,
        concepts=work.concepts,
        authorships=replaced,
    )


def inject_splits(
    corpus: list[WorkRecord],
    truth: GroundTruth,
    spec: SplitSpec,
    seed: int,
) -> tuple[list[WorkRecord], GroundTruth]:
    """Split selected authors' records at one publication year.

    Every work of a selected author from the split year onward is
    reassigned to a fresh author id.  The input corpus and truth are not
    mutated; at rate 0 the corpus is returned unchanged.
    """
    decisions = split_decisions(truth, spec, seed)
    if not decisions:
        return corpus, truth
    new_truth = GroundTruth(
        authors=truth.authors,
        emitted_to_true=dict(truth.emitted_to_true),
        split_year_by_true=dict(truth.split_year_by_true),
    )
    for true_id, (year, fragment_id) in decisions.items():
        new_truth.emitted_to_true[fragment_id] = true_id
        new_truth.split_year_by_true[true_id] = year
    corrupted = [_remap_work(w, decisions) for w in corpus]
    return corrupted, new_truth


# ---------------------------------------------------------------------------
# Corpus serialization
# ---------------------------------------------------------------------------


def work_to_json(work: WorkRecord) -> str:
    """One-line JSON in the schema the ingest parser recognizes.

    Author positions are always left implicit (derived from order by the
    consumer); explicit labels on the record are not emitted.
    """
    authorships = []
    for a in work.authorships:
        authorships.append(
            {
                "author": {
                    "id": a.author_id,
                    "display_name": a.display_name,
                    "orcid": a.orcid,
                },
                "institutions": [
                    {"id": iid, "country_code": cc} for iid, cc in a.institutions
                ],
            }
        )
    obj = {
        "id": work.work_id,
        "publication_year": work.publication_year,
        "type": work.work_type,
        "is_retracted": work.is_retracted,
        "is_paratext": work.is_paratext,
        "primary_location": {"source": {"type": work.source_type}},
        "concepts": [
            {"id": f"https://openalex.org/{c.concept_id}", "level": c.level}
            for c in work.concepts
        ],
        "authorships": authorships,
    }
    return json.dumps(obj, separators=(",", ":"))


def write_corpus_jsonl(records: Iterable[WorkRecord], handle: IO[str]) -> int:
    count = 0
    for work in records:
        handle.write(work_to_json(work))
        handle.write("\n")
        count += 1
    return count


def write_truth_tsv(truth: GroundTruth, handle: IO[str]) -> int:
    """Ground-truth rows sorted by (true id, emitted id); one row per emitted id."""
    handle.write("\t".join(TRUTH_COLUMNS))
    handle.write("\n")
    by_true: dict[str, list[str]] = {}
    for emitted, true_id in truth.emitted_to_true.items():
        by_true.setdefault(true_id, []).append(emitted)
    count = 0
    for true_id in sorted(by_true):
        author = truth.authors[true_id]
        indep = "" if author.independence_year is None else str(author.independence_year)
        split = truth.split_year_by_true.get(true_id)
        split_text = "" if split is None else str(split)
        for emitted in sorted(by_true[true_id]):
            handle.write(
                f"{true_id}\t{emitted}\t{author.debut_year}\t{indep}\t{split_text}\n"
            )
            count += 1
    return count


@dataclass(slots=True)
class GenerationSummary:
    n_works: int
    n_authors_emitted: int
    n_splits: int


def generate_to_files(
    cfg: SynthConfig,
    corpus_handle: IO[str],
    truth_handle: Optional[IO[str]] = None,
    split: Optional[SplitSpec] = None,
    split_seed: Optional[int] = None,
) -> GenerationSummary:
    """Stream the corpus to a text handle without materializing records.

    Byte-identical to serializing :func:`generate` (plus
    :func:`inject_splits` when a split spec is given).
    """
    metas, plans, permutation, truth = _plan_corpus(cfg)
    decisions: dict[str, tuple[int, str]] = {}
    if split is not None and split.split_rate > 0.0:
        seed = cfg.seed if split_seed is None else split_seed
        decisions = split_decisions(truth, split, seed)
        new_truth = GroundTruth(
            authors=truth.authors,
            emitted_to_true=dict(truth.emitted_to_true),
            split_year_by_true=dict(truth.split_year_by_true),
        )
        for true_id, (year, fragment_id) in decisions.items():
            new_truth.emitted_to_true[fragment_id] = true_id
            new_truth.split_year_by_true[true_id] = year
        truth = new_truth
    n_works = 0
    for work in _iter_records(metas, plans, permutation, cfg.n_authors):
        if decisions:
            work = _remap_work(work, decisions)
        corpus_handle.write(work_to_json(work))
        corpus_handle.write("\n")
        n_works += 1
    if truth_handle is not None:
        write_truth_tsv(truth, truth_handle)
    return GenerationSummary(
        n_works=n_works,
        n_authors_emitted=len(truth.emitted_to_true),
        n_splits=len(decisions),
    )


# ---------------------------------------------------------------------------
# Naive in-memory reference (the oracle)
# ---------------------------------------------------------------------------

ORACLE_MAX_WORKS = 100_000


def oracle_career_table(
    works: list[WorkRecord],
    cfg: FilterConfig,
    continent_map: Optional[dict[str, str]] = None,
) -> list[AuthorCareer]:
    """Reference career table by full materialization.

    Everything is held in memory and computed with plain sorts and
    counters; this is the independent check for the streaming two-pass
    aggregation and is only meant for small corpora.
    """
    if len(works) > ORACLE_MAX_WORKS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_WORKS} works, got {len(works)}")
    if continent_map is None:
        continent_map = load_continent_map()

    eligible = [w for w in works if is_eligible_work(w)]
    for w in eligible:
        derive_positions(w.authorships)

    selected: set[str] = set()
    for w in eligible:
        if is_biomedical(w, cfg):
            for a in w.authorships:
                selected.add(a.author_id)

    # author -> one item per corpus line listing that author
    index: dict[str, list[tuple[WorkRecord, list[AuthorshipRecord]]]] = {}
    for w in eligible:
        per_author: dict[str, list[AuthorshipRecord]] = {}
        for a in w.authorships:
            if a.author_id in selected:
                per_author.setdefault(a.author_id, []).append(a)
        for author_id, entries in per_author.items():
            index.setdefault(author_id, []).append((w, entries))

    def entry_is_last(a: AuthorshipRecord) -> bool:
        if a.position is Position.LAST:
            return True
        return a.position is Position.SOLO and cfg.solo_counts_as_last

    careers: list[AuthorCareer] = []
    for author_id in sorted(selected):
        items = index.get(author_id)
        if not items:
            continue
        years = [w.publication_year for w, _ in items]
        debut = min(years)
        if debut <= cfg.min_debut_year_exclusive:
            continue
        last_years = [
            w.publication_year
            for w, entries in items
            if any(entry_is_last(a) for a in entries)
        ]
        first_last = min(last_years) if last_years else None
        witness_candidates = []
        names: dict[str, int] = {}
        has_orcid = False
        has_affiliation = False
        for w, entries in items:
            for a in entries:
                if a.display_name:
                    names[a.display_name] = names.get(a.display_name, 0) + 1
                if a.orcid is not None:
                    has_orcid = True
                if a.institutions:
                    has_affiliation = True
                    country = next((cc for _, cc in a.institutions if cc is not None), None)
                    witness_candidates.append((w.publication_year, w.work_id, country))
        country = None
        if witness_candidates:
            witness_candidates.sort(key=lambda c: (-c[0], c[1], c[2] is None, c[2] or ""))
            country = witness_candidates[0][2]
        continent = continent_map.get(country) if country is not None else None
        display_name = ""
        if names:
            display_name = min(names.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        careers.append(
            AuthorCareer(
                author_id=author_id,
                debut_year=debut,
                first_last_author_year=first_last,
                n_works=len(items),
                has_affiliation=has_affiliation,
                has_orcid=has_orcid,
                country_code=country,
                continent=continent,
                display_name=display_name,
                gender=None,
            )
        )
    return careers


def _oracle_tti(c: AuthorCareer) -> Optional[int]:
    if c.first_last_author_year is None:
        return None
    return c.first_last_author_year - c.debut_year


def oracle_report_from_careers(
    careers: list[AuthorCareer], mcfg: MetricConfig
) -> list[AnomalyStat]:
    """Reference cohort report computed with plain filtering loops."""
    cohort = [c for c in careers if mcfg.cohort_start <= c.debut_year <= mcfg.cohort_end]
    strata = mcfg.strata
    want_gender = Stratum.GENDER in strata or Stratum.CONTINENT_GENDER in strata
    if want_gender and any(c.gender is None for c in cohort):
        raise MissingGenderError("gender strata requested on an unannotated table")

    def affiliated(c: AuthorCareer) -> bool:
        if mcfg.affiliation_key == "country":
            return c.country_code is not None
        return c.has_affiliation

    members: dict[str, list[AuthorCareer]] = {}
    if Stratum.ALL in strata:
        members["all"] = list(cohort)
    if Stratum.AFFILIATION in strata:
        members["affiliation:present"] = [c for c in cohort if affiliated(c)]
        members["affiliation:absent"] = [c for c in cohort if not affiliated(c)]
    if Stratum.ORCID in strata:
        members["orcid:present"] = [c for c in cohort if c.has_orcid]
        members["orcid:absent"] = [c for c in cohort if not c.has_orcid]
    if Stratum.GENDER in strata:
        for g in ("male", "female"):
            members[f"gender:{g}"] = [c for c in cohort if c.gender == g]
    if Stratum.CONTINENT_GENDER in strata:
        continents = sorted({c.continent for c in cohort if c.continent is not None})
        for continent in continents:
            for g in ("male", "female"):
                members[f"continent-gender:{continent}:{g}"] = [
                    c for c in cohort if c.continent == continent and c.gender == g
                ]

    report: list[AnomalyStat] = []
    w = mcfg.window_years
    for key in sorted(members):
        group = members[key]
        for year in range(mcfg.cohort_start, mcfg.cohort_end + 1):
            rows = [c for c in group if c.debut_year == year]
            ttis = [_oracle_tti(c) for c in rows]
            n_win = sum(1 for t in ttis if t is not None and t <= w)
            n_anom = sum(1 for t in ttis if t == 0)
            report.append(_make_stat(key, year, len(rows), n_win, n_anom))
    return report


def oracle_report(
    works: list[WorkRecord],
    cfg: FilterConfig,
    mcfg: MetricConfig,
    continent_map: Optional[dict[str, str]] = None,
) -> list[AnomalyStat]:
    return oracle_report_from_careers(
        oracle_career_table(works, cfg, continent_map), mcfg
    )


def oracle_tti_histogram(
    careers: list[AuthorCareer], mcfg: MetricConfig
) -> TtiHistogram:
    """Reference distribution built with direct counting."""
    hist = TtiHistogram()
    for c in careers:
        if not (mcfg.cohort_start <= c.debut_year <= mcfg.cohort_end):
            continue
        hist.by_year.setdefault(c.debut_year, {})
        t = _oracle_tti(c)
        if t is None:
            hist.pooled_never += 1
            hist.by_year_never[c.debut_year] = hist.by_year_never.get(c.debut_year, 0) + 1
        else:
            hist.pooled[t] = hist.pooled.get(t, 0) + 1
            hist.by_year[c.debut_year][t] = hist.by_year[c.debut_year].get(t, 0) + 1
    return hist
