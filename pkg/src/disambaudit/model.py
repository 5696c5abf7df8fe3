"""Domain types for works and authorships, plus line-level parsing and
eligibility predicates.

The input is JSON Lines shaped like an OpenAlex works dump: one JSON object
per line.  Only a small, documented subset of keys is recognized (see
``parse_work_line``); everything else is ignored.  Input is untrusted at
scale, so parsing never raises anything except :class:`ParseError` for a
bad line, and eligibility predicates silently reject records with missing
prerequisites instead of crashing the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class ParseError(ValueError):
    """A single input line could not be turned into a WorkRecord."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class Position(Enum):
    FIRST = "first"
    MIDDLE = "middle"
    LAST = "last"
    SOLO = "solo"


# Explicit position labels recognized in input. "solo" never appears in
# OpenAlex dumps but is accepted so our own serializations round-trip.
_POSITION_LABELS = {p.value: p for p in Position}


@dataclass(slots=True)
class ConceptTag:
    """A field-of-study tag; id is stored in bare form (URL prefix stripped)."""

    concept_id: str
    level: Optional[int]


@dataclass(slots=True)
class AuthorshipRecord:
    author_id: str
    display_name: str
    position: Optional[Position]
    orcid: Optional[str]
    # (institution_id, country_code); country codes uppercased, may be None
    institutions: list[tuple[str, Optional[str]]]


@dataclass(slots=True)
class WorkRecord:
    work_id: str
    publication_year: Optional[int]
    work_type: Optional[str]
    is_retracted: bool
    is_paratext: bool
    source_type: Optional[str]
    concepts: list[ConceptTag]
    authorships: list[AuthorshipRecord]


@dataclass(frozen=True)
class FilterConfig:
    """Eligibility rules for works and author positions.

    Defaults select non-retracted, non-paratext journal articles tagged
    with a top-level biology/medicine concept, and retain only authors
    whose earliest publication falls strictly after ``min_debut_year_exclusive``.
    """

    biomedical_concepts: frozenset[str] = frozenset({"C86803240", "C71924100"})
    require_level_zero: bool = True
    solo_counts_as_last: bool = True
    min_debut_year_exclusive: int = 1999

    def __post_init__(self) -> None:
        if not self.biomedical_concepts:
            raise ValueError("biomedical_concepts must be nonempty")


def _strip_url_prefix(raw: str) -> str:
    """Reduce an id like ``https://openalex.org/C86803240`` to its last segment."""
    raw = raw.strip()
    if "/" in raw:
        raw = raw.rsplit("/", 1)[-1]
    return raw


def _as_year(value) -> Optional[int]:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            return None
    return None


def _parse_concepts(raw) -> list[ConceptTag]:
    tags: list[ConceptTag] = []
    if not isinstance(raw, list):
        return tags
    for entry in raw:
        if not isinstance(entry, dict):
            continue
        cid = entry.get("id")
        if not isinstance(cid, str) or not cid.strip():
            continue
        level = entry.get("level")
        if isinstance(level, bool) or not isinstance(level, int):
            level = None
        tags.append(ConceptTag(concept_id=_strip_url_prefix(cid), level=level))
    return tags


def _parse_authorships(raw) -> list[AuthorshipRecord]:
    records: list[AuthorshipRecord] = []
    if not isinstance(raw, list):
        return records
    for entry in raw:
        if not isinstance(entry, dict):
            continue
        author = entry.get("author")
        if not isinstance(author, dict):
            continue
        author_id = author.get("id")
        if not isinstance(author_id, str) or not author_id.strip():
            # An authorship without an author id cannot be aggregated.
            continue
        display_name = author.get("display_name")
        if not isinstance(display_name, str):
            display_name = ""
        orcid = author.get("orcid")
        if not isinstance(orcid, str) or not orcid.strip():
            orcid = None
        label = entry.get("author_position")
        position = _POSITION_LABELS.get(label) if isinstance(label, str) else None
        institutions: list[tuple[str, Optional[str]]] = []
        raw_insts = entry.get("institutions")
        if isinstance(raw_insts, list):
            for inst in raw_insts:
                if not isinstance(inst, dict):
                    continue
                iid = inst.get("id")
                if not isinstance(iid, str) or not iid.strip():
                    continue
                cc = inst.get("country_code")
                if isinstance(cc, str) and cc.strip():
                    cc = cc.strip().upper()
                else:
                    cc = None
                institutions.append((iid.strip(), cc))
        records.append(
            AuthorshipRecord(
                author_id=author_id.strip(),
                display_name=display_name,
                position=position,
                orcid=orcid,
                institutions=institutions,
            )
        )
    return records


def parse_work_line(line: str) -> WorkRecord:
    """Parse one JSON Lines record into a WorkRecord.

    Recognized key paths::

        id, publication_year, type, is_retracted, is_paratext,
        primary_location.source.type,
        concepts[].id, concepts[].level,
        authorships[].author.{id,display_name,orcid},
        authorships[].author_position,
        authorships[].institutions[].{id,country_code}

    Unrecognized keys are ignored; missing optional fields become None.
    Raises :class:`ParseError` on malformed JSON, a non-object line, or a
    missing/empty work id.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ParseError("line is not a JSON object")
    work_id = obj.get("id")
    if not isinstance(work_id, str) or not work_id.strip():
        raise ParseError("missing work id")

    work_type = obj.get("type")
    if not isinstance(work_type, str) or not work_type.strip():
        work_type = None

    source_type = None
    loc = obj.get("primary_location")
    if isinstance(loc, dict):
        source = loc.get("source")
        if isinstance(source, dict):
            st = source.get("type")
            if isinstance(st, str) and st.strip():
                source_type = st.strip()

    return WorkRecord(
        work_id=work_id.strip(),
        publication_year=_as_year(obj.get("publication_year")),
        work_type=work_type.strip() if work_type else None,
        is_retracted=bool(obj.get("is_retracted", False)),
        is_paratext=bool(obj.get("is_paratext", False)),
        source_type=source_type,
        concepts=_parse_concepts(obj.get("concepts")),
        authorships=_parse_authorships(obj.get("authorships")),
    )


def derive_positions(authorships: list[AuthorshipRecord]) -> list[AuthorshipRecord]:
    """Fill in author positions, in place, and return the list.

    Explicit labels carried by the input are kept verbatim when every
    entry has one.  Otherwise positions are derived from list order:
    index 0 is first, the final index is last, everything between is
    middle; a single-element list is solo.  Idempotent.
    """
    if not authorships:
        return authorships
    if all(a.position is not None for a in authorships):
        return authorships
    if len(authorships) == 1:
        authorships[0].position = Position.SOLO
        return authorships
    last = len(authorships) - 1
    for i, a in enumerate(authorships):
        if i == 0:
            a.position = Position.FIRST
        elif i == last:
            a.position = Position.LAST
        else:
            a.position = Position.MIDDLE
    return authorships


def is_eligible_work(w: WorkRecord) -> bool:
    """Journal-article eligibility.

    Accepts non-retracted, non-paratext works of type "article" with a
    publication year.  A source type, when present, must be "journal";
    works without source typing are accepted, since dumps do not always
    carry it.
    """
    if w.work_type != "article":
        return False
    if w.is_retracted or w.is_paratext:
        return False
    if w.publication_year is None:
        return False
    if w.source_type is not None and w.source_type != "journal":
        return False
    return True


def is_biomedical(w: WorkRecord, cfg: FilterConfig) -> bool:
    """True when some concept tag matches the configured field ids.

    With ``require_level_zero`` (the default) only level-0 tags match;
    tags with a missing level never match in that mode.
    """
    wanted = cfg.biomedical_concepts
    for tag in w.concepts:
        if tag.concept_id not in wanted:
            continue
        if cfg.require_level_zero and tag.level != 0:
            continue
        return True
    return False


def is_last_author(a: AuthorshipRecord, cfg: FilterConfig) -> bool:
    """True for the last position; solo authorship counts when configured."""
    if a.position is Position.LAST:
        return True
    return a.position is Position.SOLO and cfg.solo_counts_as_last
