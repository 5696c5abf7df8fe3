"""Command-line surface: ingest, gender, report, synth, audit, oracle.

Every command writes exactly one single-line JSON manifest describing the
effective configuration, the inputs, and the run counts, so results can
be audited and reproduced.  Exit codes are a stable contract:

    0  success
    1  usage error (bad invocation)
    2  I/O or configuration error
    3  data-quality threshold breached (parse-error budget)
    4  missing prerequisite column (gender strata on unannotated table)
"""

from __future__ import annotations

import argparse
import gzip
import json
import os
import sys
import time
from typing import Optional

from . import __version__
from .gender import EmptyDictionaryError, Thresholds, annotate_careers, load_dictionary
from .ingest import (
    CareerTableError,
    ShardReadError,
    load_continent_map,
    open_corpus,
    read_career_table,
    run_two_pass,
    write_career_table,
)
from .metrics import (
    MetricConfig,
    MissingGenderError,
    Stratum,
    build_report,
    format_rate,
    in_cohort,
    tti_distribution,
    windowed_anomaly_rate,
    write_histogram_csv,
    write_report_csv,
)
from .model import FilterConfig, ParseError, parse_work_line
from .synth import (
    ORACLE_MAX_WORKS,
    SplitSpec,
    SynthConfig,
    generate_to_files,
    oracle_career_table,
    oracle_report_from_careers,
    oracle_tti_histogram,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO_CONFIG = 2
EXIT_DATA_QUALITY = 3
EXIT_MISSING_COLUMN = 4

GENDER_DICT_ENV = "DISAMB_GENDER_DICT"

_STRATA_TOKENS = {
    "all": Stratum.ALL,
    "affiliation": Stratum.AFFILIATION,
    "orcid": Stratum.ORCID,
    "gender": Stratum.GENDER,
    "continent-gender": Stratum.CONTINENT_GENDER,
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; our contract says 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_manifest(path: str, command: str, config: dict, inputs: list[str],
                    counts: dict, started: float) -> None:
    manifest = {
        "tool": "disambaudit",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": [
            {"path": p, "bytes": os.path.getsize(p) if os.path.exists(p) else None}
            for p in inputs
        ],
        "counts": counts,
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(manifest, separators=(",", ":"), sort_keys=True))
        handle.write("\n")


def _filter_config(args) -> FilterConfig:
    concepts = frozenset(
        token.strip() for token in args.concepts.split(",") if token.strip()
    )
    try:
        return FilterConfig(
            biomedical_concepts=concepts,
            require_level_zero=not args.no_require_level_zero,
            solo_counts_as_last=not args.no_solo_last,
            min_debut_year_exclusive=args.min_debut_year,
        )
    except ValueError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None


def _metric_config(args, default_strata: Optional[str] = None) -> MetricConfig:
    strata_text = args.strata if args.strata is not None else (default_strata or "all,affiliation,orcid")
    strata: set[Stratum] = set()
    for token in strata_text.split(","):
        token = token.strip()
        if not token:
            continue
        stratum = _STRATA_TOKENS.get(token)
        if stratum is None:
            raise CliError(
                EXIT_IO_CONFIG,
                f"unknown stratum {token!r}; expected one of {sorted(_STRATA_TOKENS)}",
            )
        strata.add(stratum)
    try:
        return MetricConfig(
            window_years=args.window,
            cohort_start=args.cohort_start,
            cohort_end=args.cohort_end,
            strata=frozenset(strata),
            affiliation_key=args.affiliation_key,
        )
    except ValueError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None


def _add_filter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--concepts", default="C86803240,C71924100",
                   help="comma-separated field concept ids (default: biology, medicine)")
    p.add_argument("--no-require-level-zero", action="store_true",
                   help="match field concepts at any level, not just level 0")
    p.add_argument("--no-solo-last", action="store_true",
                   help="do not count solo authorship as last authorship")
    p.add_argument("--min-debut-year", type=int, default=1999,
                   help="drop authors whose debut is not after this year (default 1999)")


def _add_metric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window", type=int, default=5,
                   help="independence window in years (default 5)")
    p.add_argument("--cohort-start", type=int, default=2000)
    p.add_argument("--cohort-end", type=int, default=2018)
    p.add_argument("--strata", default=None,
                   help="comma list of all,affiliation,orcid,gender,continent-gender")
    p.add_argument("--affiliation-key", choices=("country", "institution"), default="country",
                   help="key affiliation strata on country presence or any institution")


def _add_synth_flags(p: argparse.ArgumentParser, require_n: bool) -> None:
    p.add_argument("--n-authors", type=int, required=require_n, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-rate", type=float, default=0.0)
    p.add_argument("--split-seed", type=int, default=None,
                   help="seed for split decisions (default: --seed)")
    p.add_argument("--debut-start", type=int, default=2000)
    p.add_argument("--debut-end", type=int, default=2018)
    p.add_argument("--training-mean", type=float, default=8.0,
                   help="mean training years before independence (geometric)")
    p.add_argument("--papers-per-year", type=float, default=2.0)
    p.add_argument("--pi-fraction", type=float, default=0.3)
    p.add_argument("--immediate-pi-rate", type=float, default=0.01)
    p.add_argument("--affiliation-rate", type=float, default=0.7)
    p.add_argument("--orcid-rate", type=float, default=0.3)
    p.add_argument("--active-mean", type=float, default=8.0,
                   help="mean active last-author years (geometric)")
    p.add_argument("--trainees-per-senior", type=int, default=4)


def _synth_config(args) -> SynthConfig:
    try:
        return SynthConfig(
            n_authors=args.n_authors,
            debut_year_range=(args.debut_start, args.debut_end),
            training_duration_mean=args.training_mean,
            papers_per_year_mean=args.papers_per_year,
            pi_fraction=args.pi_fraction,
            immediate_pi_rate=args.immediate_pi_rate,
            affiliation_presence_rate=args.affiliation_rate,
            orcid_presence_rate=args.orcid_rate,
            pi_active_years_mean=args.active_mean,
            trainees_per_senior=args.trainees_per_senior,
            seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None


def _split_spec(args) -> Optional[SplitSpec]:
    if args.split_rate == 0.0:
        return None
    try:
        return SplitSpec(split_rate=args.split_rate)
    except ValueError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None


def _check_inputs_readable(paths: list[str]) -> None:
    for p in paths:
        if not os.path.isfile(p):
            raise CliError(EXIT_IO_CONFIG, f"input not found: {p}")
        if not os.access(p, os.R_OK):
            raise CliError(EXIT_IO_CONFIG, f"input not readable: {p}")


def _progress_printer(enabled: bool):
    if not enabled:
        return None
    state = {"last": 0}

    def tick(done: int) -> None:
        if done - state["last"] >= 100_000:
            state["last"] = done
            print(f"\r{done} lines", end="", file=sys.stderr, flush=True)

    return tick


def _run_ingest_passes(args, inputs: list[str], cfg: FilterConfig):
    _check_inputs_readable(inputs)
    progress = _progress_printer(args.progress)
    try:
        result = run_two_pass(inputs, cfg, threads=args.threads, progress=progress)
    except ShardReadError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None
    if progress is not None:
        print("", file=sys.stderr)
    stats = result.pass_a
    if stats.lines_read > 0:
        fraction = stats.parse_errors / stats.lines_read
        if fraction > args.max_error_rate:
            raise CliError(
                EXIT_DATA_QUALITY,
                f"parse-error fraction {fraction:.4f} exceeds budget {args.max_error_rate}"
                f" ({stats.parse_errors}/{stats.lines_read} lines)",
            )
    return result


def _ingest_counts(result) -> dict:
    return {
        "lines_read": result.pass_a.lines_read,
        "parse_errors": result.pass_a.parse_errors,
        "works_eligible": result.pass_a.works_eligible,
        "works_biomedical": result.pass_a.works_biomedical,
        "works_aggregated": result.pass_b.works_aggregated,
        "authors_selected": result.authors_selected,
        "career_rows": len(result.careers),
        "rows_dropped_pre_cutoff": result.finalize.rows_dropped_pre_cutoff,
    }


def cmd_ingest(args) -> int:
    started = time.monotonic()
    cfg = _filter_config(args)
    result = _run_ingest_passes(args, args.inputs, cfg)
    write_career_table(result.careers, args.out)
    manifest_path = args.manifest or f"{args.out}.manifest.json"
    _write_manifest(
        manifest_path,
        "ingest",
        {
            "out": args.out,
            "threads": args.threads,
            "max_error_rate": args.max_error_rate,
            "concepts": sorted(cfg.biomedical_concepts),
            "require_level_zero": cfg.require_level_zero,
            "solo_counts_as_last": cfg.solo_counts_as_last,
            "min_debut_year_exclusive": cfg.min_debut_year_exclusive,
        },
        args.inputs,
        _ingest_counts(result),
        started,
    )
    print(f"wrote {len(result.careers)} career rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def _load_gender_dictionary(path: Optional[str]):
    if path is None:
        path = os.environ.get(GENDER_DICT_ENV)
    if not path:
        raise CliError(
            EXIT_IO_CONFIG,
            f"no gender dictionary: pass --gender-dict or set {GENDER_DICT_ENV}",
        )
    try:
        return load_dictionary(path)
    except (OSError, EmptyDictionaryError) as exc:
        raise CliError(EXIT_IO_CONFIG, f"gender dictionary: {exc}") from None


def _thresholds(args) -> Thresholds:
    try:
        return Thresholds(male_max=args.male_max, female_min=args.female_min)
    except ValueError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None


def _read_table(path: str):
    try:
        return read_career_table(path)
    except OSError as exc:
        raise CliError(EXIT_IO_CONFIG, f"career table: {exc}") from None
    except CareerTableError as exc:
        raise CliError(EXIT_IO_CONFIG, f"career table: {exc}") from None


def cmd_gender(args) -> int:
    started = time.monotonic()
    dictionary = _load_gender_dictionary(args.gender_dict)
    thresholds = _thresholds(args)
    careers = _read_table(args.table)
    annotate_careers(careers, dictionary, thresholds)
    write_career_table(careers, args.out)
    labels = {"male": 0, "female": 0, "unclassified": 0}
    for c in careers:
        labels[c.gender] += 1
    manifest_path = args.manifest or f"{args.out}.manifest.json"
    _write_manifest(
        manifest_path,
        "gender",
        {
            "table": args.table,
            "out": args.out,
            "male_max": thresholds.male_max,
            "female_min": thresholds.female_min,
        },
        [args.table],
        {
            "rows": len(careers),
            "male": labels["male"],
            "female": labels["female"],
            "unclassified": labels["unclassified"],
            "dictionary_entries": len(dictionary),
            "dictionary_duplicates": dictionary.duplicate_count,
            "dictionary_rejected_rows": dictionary.rejected_count,
        },
        started,
    )
    print(f"annotated {len(careers)} rows -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _histogram_path(args) -> str:
    if args.histogram:
        return args.histogram
    base = args.out
    if base.endswith(".csv"):
        return base[:-4] + "_hist.csv"
    return base + "_hist.csv"


def cmd_report(args) -> int:
    started = time.monotonic()
    mcfg = _metric_config(args)
    careers = _read_table(args.table)
    try:
        report = build_report(careers, mcfg)
    except MissingGenderError as exc:
        raise CliError(EXIT_MISSING_COLUMN, str(exc)) from None
    hist = tti_distribution(careers, mcfg)
    write_report_csv(report, args.out)
    hist_path = _histogram_path(args)
    write_histogram_csv(hist, hist_path)
    cohort = [c for c in careers if in_cohort(c, mcfg)]
    pooled = windowed_anomaly_rate(cohort, mcfg)
    manifest_path = args.manifest or f"{args.out}.manifest.json"
    _write_manifest(
        manifest_path,
        "report",
        {
            "table": args.table,
            "out": args.out,
            "histogram": hist_path,
            "window": mcfg.window_years,
            "cohort_start": mcfg.cohort_start,
            "cohort_end": mcfg.cohort_end,
            "strata": sorted(s.value for s in mcfg.strata),
            "affiliation_key": mcfg.affiliation_key,
        },
        [args.table],
        {
            "table_rows": len(careers),
            "cohort_rows": len(cohort),
            "report_rows": len(report),
            "pooled_n_independent_within_window": pooled.n_independent_within_window,
            "pooled_n_anomalous": pooled.n_anomalous,
        },
        started,
    )
    rate_text = format_rate(pooled.anomaly_rate) or "undefined"
    print(f"pooled debut-year anomaly rate: {rate_text}", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args) -> int:
    started = time.monotonic()
    cfg = _synth_config(args)
    split = _split_spec(args)
    opener = gzip.open if args.gzip else open
    corpus_path = args.out
    if args.gzip and not corpus_path.endswith(".gz"):
        corpus_path += ".gz"
    truth_path = args.truth_out
    if truth_path is None:
        truth_path = corpus_path.removesuffix(".gz").removesuffix(".jsonl") + ".truth.tsv"
    try:
        with opener(corpus_path, "wt", encoding="utf-8", newline="\n") as corpus_handle:
            with open(truth_path, "w", encoding="utf-8", newline="\n") as truth_handle:
                summary = generate_to_files(
                    cfg, corpus_handle, truth_handle,
                    split=split, split_seed=args.split_seed,
                )
    except OSError as exc:
        raise CliError(EXIT_IO_CONFIG, str(exc)) from None
    manifest_path = args.manifest or f"{corpus_path}.manifest.json"
    _write_manifest(
        manifest_path,
        "synth",
        {
            "out": corpus_path,
            "truth_out": truth_path,
            "n_authors": cfg.n_authors,
            "seed": cfg.seed,
            "split_rate": args.split_rate,
            "split_seed": args.split_seed if args.split_seed is not None else cfg.seed,
            "debut_year_range": list(cfg.debut_year_range),
            "training_duration_mean": cfg.training_duration_mean,
            "papers_per_year_mean": cfg.papers_per_year_mean,
            "pi_fraction": cfg.pi_fraction,
            "immediate_pi_rate": cfg.immediate_pi_rate,
            "affiliation_presence_rate": cfg.affiliation_presence_rate,
            "orcid_presence_rate": cfg.orcid_presence_rate,
            "pi_active_years_mean": cfg.pi_active_years_mean,
            "trainees_per_senior": cfg.trainees_per_senior,
            "gzip": bool(args.gzip),
        },
        [],
        {
            "works": summary.n_works,
            "authors_emitted": summary.n_authors_emitted,
            "splits": summary.n_splits,
        },
        started,
    )
    print(
        f"wrote {summary.n_works} works, {summary.n_authors_emitted} authors, "
        f"{summary.n_splits} splits -> {corpus_path}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_audit(args) -> int:
    started = time.monotonic()
    synth_mode = args.n_authors is not None
    if not synth_mode and not args.inputs:
        raise CliError(EXIT_USAGE, "audit needs input files or --n-authors for a synthetic run")
    if synth_mode and args.inputs:
        raise CliError(EXIT_USAGE, "give either input files or --n-authors, not both")
    os.makedirs(args.out_dir, exist_ok=True)
    inputs = list(args.inputs)
    synth_counts: dict = {}
    if synth_mode:
        cfg = _synth_config(args)
        split = _split_spec(args)
        corpus_path = os.path.join(args.out_dir, "corpus.jsonl")
        truth_path = os.path.join(args.out_dir, "corpus.truth.tsv")
        with open(corpus_path, "w", encoding="utf-8", newline="\n") as corpus_handle:
            with open(truth_path, "w", encoding="utf-8", newline="\n") as truth_handle:
                summary = generate_to_files(
                    cfg, corpus_handle, truth_handle,
                    split=split, split_seed=args.split_seed,
                )
        inputs = [corpus_path]
        synth_counts = {
            "synth_works": summary.n_works,
            "synth_authors_emitted": summary.n_authors_emitted,
            "synth_splits": summary.n_splits,
        }

    fcfg = _filter_config(args)
    result = _run_ingest_passes(args, inputs, fcfg)
    table_path = os.path.join(args.out_dir, "career_table.tsv")

    dict_path = args.gender_dict or os.environ.get(GENDER_DICT_ENV)
    annotated = False
    if dict_path:
        dictionary = _load_gender_dictionary(dict_path)
        thresholds = _thresholds(args)
        annotate_careers(result.careers, dictionary, thresholds)
        annotated = True
    write_career_table(result.careers, table_path)

    default_strata = "all,affiliation,orcid"
    if annotated:
        default_strata += ",gender,continent-gender"
    mcfg = _metric_config(args, default_strata=default_strata)
    try:
        report = build_report(result.careers, mcfg)
    except MissingGenderError as exc:
        raise CliError(EXIT_MISSING_COLUMN, str(exc)) from None
    hist = tti_distribution(result.careers, mcfg)
    report_path = os.path.join(args.out_dir, "cohort_report.csv")
    hist_path = os.path.join(args.out_dir, "tti_histogram.csv")
    write_report_csv(report, report_path)
    write_histogram_csv(hist, hist_path)

    cohort = [c for c in result.careers if in_cohort(c, mcfg)]
    pooled = windowed_anomaly_rate(cohort, mcfg)
    rate_text = format_rate(pooled.anomaly_rate) or "undefined"

    counts = _ingest_counts(result)
    counts.update(synth_counts)
    counts.update(
        {
            "cohort_rows": len(cohort),
            "pooled_n_independent_within_window": pooled.n_independent_within_window,
            "pooled_n_anomalous": pooled.n_anomalous,
            "gender_annotated": annotated,
        }
    )
    _write_manifest(
        os.path.join(args.out_dir, "manifest.json"),
        "audit",
        {
            "out_dir": args.out_dir,
            "threads": args.threads,
            "max_error_rate": args.max_error_rate,
            "window": mcfg.window_years,
            "cohort_start": mcfg.cohort_start,
            "cohort_end": mcfg.cohort_end,
            "strata": sorted(s.value for s in mcfg.strata),
            "synthetic": synth_mode,
        },
        inputs,
        counts,
        started,
    )
    print(
        f"pooled debut-year anomaly rate: {rate_text} "
        f"({pooled.n_anomalous}/{pooled.n_independent_within_window} within "
        f"{mcfg.window_years}y, debuts {mcfg.cohort_start}-{mcfg.cohort_end})"
    )
    print(f"career table: {table_path}")
    print(f"cohort report: {report_path}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    started = time.monotonic()
    _check_inputs_readable([args.corpus])
    fcfg = _filter_config(args)
    mcfg = _metric_config(args)
    works = []
    parse_errors = 0
    lines_read = 0
    try:
        with open_corpus(args.corpus) as handle:
            for raw in handle:
                line = raw.decode("utf-8", errors="replace")
                if not line or line.isspace():
                    continue
                lines_read += 1
                try:
                    works.append(parse_work_line(line))
                except ParseError:
                    parse_errors += 1
                if len(works) > ORACLE_MAX_WORKS:
                    raise CliError(
                        EXIT_IO_CONFIG,
                        f"oracle corpus exceeds {ORACLE_MAX_WORKS} works; use ingest",
                    )
    except (OSError, EOFError, gzip.BadGzipFile) as exc:
        raise CliError(EXIT_IO_CONFIG, f"{args.corpus}: {exc}") from None
    continent_map = load_continent_map()
    careers = oracle_career_table(works, fcfg, continent_map)
    report = oracle_report_from_careers(careers, mcfg)
    hist = oracle_tti_histogram(careers, mcfg)
    write_career_table(careers, args.out_table)
    write_report_csv(report, args.out_report)
    hist_path = args.histogram or (args.out_report.removesuffix(".csv") + "_hist.csv")
    write_histogram_csv(hist, hist_path)
    _write_manifest(
        args.manifest or f"{args.out_report}.manifest.json",
        "oracle",
        {
            "corpus": args.corpus,
            "out_table": args.out_table,
            "out_report": args.out_report,
            "histogram": hist_path,
            "window": mcfg.window_years,
            "cohort_start": mcfg.cohort_start,
            "cohort_end": mcfg.cohort_end,
        },
        [args.corpus],
        {
            "lines_read": lines_read,
            "parse_errors": parse_errors,
            "career_rows": len(careers),
            "report_rows": len(report),
        },
        started,
    )
    print(f"oracle table: {args.out_table}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="disambaudit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"disambaudit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="two-pass career aggregation from JSONL works")
    p.add_argument("inputs", nargs="+", help="JSONL or JSONL.gz works files")
    p.add_argument("--out", required=True, help="career table TSV to write")
    p.add_argument("--manifest", default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-error-rate", type=float, default=0.01,
                   help="abort when the parse-error fraction exceeds this (default 0.01)")
    p.add_argument("--progress", action="store_true", help="line counter on stderr")
    _add_filter_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("gender", help="annotate a career table with inferred gender")
    p.add_argument("--table", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gender-dict", default=None,
                   help=f"name,p_gf CSV (default: ${GENDER_DICT_ENV})")
    p.add_argument("--male-max", type=float, default=0.2, dest="male_max")
    p.add_argument("--female-min", type=float, default=0.8, dest="female_min")
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=cmd_gender)

    p = sub.add_parser("report", help="cohort anomaly report and tti histogram")
    p.add_argument("--table", required=True)
    p.add_argument("--out", required=True, help="cohort report CSV")
    p.add_argument("--histogram", default=None, help="tti histogram CSV")
    p.add_argument("--manifest", default=None)
    _add_metric_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p.add_argument("--out", required=True, help="corpus JSONL to write")
    p.add_argument("--truth-out", default=None, help="ground-truth TSV (default: <out>.truth.tsv)")
    p.add_argument("--gzip", action="store_true", help="gzip the corpus output")
    p.add_argument("--manifest", default=None)
    _add_synth_flags(p, require_n=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("audit", help="ingest, annotate, report in one run")
    p.add_argument("inputs", nargs="*", help="JSONL works files (omit with --n-authors)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-error-rate", type=float, default=0.01)
    p.add_argument("--progress", action="store_true")
    p.add_argument("--gender-dict", default=None)
    p.add_argument("--male-max", type=float, default=0.2, dest="male_max")
    p.add_argument("--female-min", type=float, default=0.8, dest="female_min")
    _add_filter_flags(p)
    _add_metric_flags(p)
    _add_synth_flags(p, require_n=False)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("oracle", help="naive in-memory reference on a small corpus")
    p.add_argument("corpus", help="JSONL corpus (at most 100k works)")
    p.add_argument("--out-table", required=True)
    p.add_argument("--out-report", required=True)
    p.add_argument("--histogram", default=None)
    p.add_argument("--manifest", default=None)
    _add_filter_flags(p)
    _add_metric_flags(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"disambaudit: error: {exc}", file=sys.stderr)
        return exc.code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
