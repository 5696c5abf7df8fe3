from __future__ import annotations

import gzip
import json
import os
from pathlib import Path

import pytest

from conftest import run_cli

GOLDEN_FIXTURE_TABLE = """\
author_id\tdebut_year\tfirst_last_author_year\tn_works\thas_affiliation\thas_orcid\tcountry_code\tcontinent\tdisplay_name\tgender
A1\t2005\t2005\t2\tfalse\tfalse\t\t\tAna Reyes\t
A10\t2005\t\t3\ttrue\tfalse\tDE\tEurope\tYuki Un\t
A11\t2005\t2005\t2\ttrue\tfalse\t\t\tKenji Vo\t
A12\t2009\t2009\t2\tfalse\ttrue\t\t\tEmma West\t
A13\t2009\t\t2\tfalse\tfalse\t\t\tMaria Garcia\t
A14\t2000\t\t1\tfalse\tfalse\t\t\tNoah Pike\t
A2\t2001\t2001\t3\ttrue\tfalse\tDE\tEurope\tJuan Klein\t
A3\t2003\t2003\t2\tfalse\tfalse\t\t\tLucia Mendes\t
A8\t2004\t2004\t4\tfalse\tfalse\t\t\tRobin Sato\t
A9\t2007\t2007\t3\ttrue\ttrue\tCZ\tEurope\tIvan Novak\t
"""

GOLDEN_ANNOTATED_GENDERS = {
    "A1": "female",     # ana
    "A10": "female",    # yuki
    "A11": "male",      # kenji
    "A12": "female",    # emma
    "A13": "female",    # maria (diacritic-free variant won the tie)
    "A14": "male",      # noah
    "A2": "male",       # juan
    "A3": "female",     # lucia
    "A8": "unclassified",  # robin, p=0.5
    "A9": "male",       # ivan
}


def _read_manifest(path: Path) -> dict:
    text = path.read_text(encoding="utf-8")
    assert text.count("\n") == 1  # single-line JSON
    return json.loads(text)


def test_ingest_fixture_golden(tmp_path, fixture_corpus):
    out = tmp_path / "table.tsv"
    rc = run_cli(["ingest", str(fixture_corpus), "--out", str(out)])
    assert rc == 0
    assert out.read_text(encoding="utf-8") == GOLDEN_FIXTURE_TABLE
    manifest = _read_manifest(tmp_path / "table.tsv.manifest.json")
    assert manifest["command"] == "ingest"
    assert manifest["counts"] == {
        "lines_read": 20,
        "parse_errors": 0,
        "works_eligible": 15,
        "works_biomedical": 13,
        "works_aggregated": 15,
        "authors_selected": 12,
        "career_rows": 10,
        "rows_dropped_pre_cutoff": 2,
    }
    assert manifest["counts"]["works_eligible"] <= manifest["counts"]["lines_read"]
    assert manifest["inputs"][0]["path"] == str(fixture_corpus)
    assert manifest["inputs"][0]["bytes"] == os.path.getsize(fixture_corpus)


def test_ingest_gzip_input_same_table(tmp_path, fixture_corpus):
    gz = tmp_path / "corpus.jsonl.gz"
    with gzip.open(gz, "wt", encoding="utf-8") as handle:
        handle.write(Path(fixture_corpus).read_text(encoding="utf-8"))
    out = tmp_path / "table.tsv"
    assert run_cli(["ingest", str(gz), "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == GOLDEN_FIXTURE_TABLE


def test_ingest_missing_file_exit_2(tmp_path):
    rc = run_cli(["ingest", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "t.tsv")])
    assert rc == 2


def test_ingest_all_malformed_exit_3(tmp_path):
    corpus = tmp_path / "bad.jsonl"
    corpus.write_text("{oops\n{also bad\n", encoding="utf-8")
    rc = run_cli(["ingest", str(corpus), "--out", str(tmp_path / "t.tsv")])
    assert rc == 3


def test_ingest_error_budget_flag(tmp_path, fixture_corpus):
    corpus = tmp_path / "mixed.jsonl"
    corpus.write_text(
        Path(fixture_corpus).read_text(encoding="utf-8") + "{bad line\n",
        encoding="utf-8",
    )
    out = tmp_path / "t.tsv"
    assert run_cli(["ingest", str(corpus), "--out", str(out)]) == 3  # 1/21 > 1%
    assert run_cli(["ingest", str(corpus), "--out", str(out), "--max-error-rate", "0.1"]) == 0
    assert out.read_text(encoding="utf-8") == GOLDEN_FIXTURE_TABLE


def test_usage_errors_exit_1(capsys):
    assert run_to_exit(["ingest"]) == 1          # missing required args
    assert run_to_exit(["--bogus-flag"]) == 1    # unknown flag
    assert run_to_exit([]) == 1                  # no subcommand
    capsys.readouterr()


def run_to_exit(argv) -> int:
    try:
        return run_cli(argv)
    except SystemExit as exc:
        return int(exc.code)


@pytest.fixture()
def fixture_table(tmp_path, fixture_corpus) -> Path:
    out = tmp_path / "table.tsv"
    assert run_cli(["ingest", str(fixture_corpus), "--out", str(out)]) == 0
    return out


def test_gender_annotation_golden(tmp_path, fixture_table, gender_dict_path):
    out = tmp_path / "annotated.tsv"
    rc = run_cli([
        "gender", "--table", str(fixture_table), "--out", str(out),
        "--gender-dict", str(gender_dict_path),
    ])
    assert rc == 0
    rows = out.read_text(encoding="utf-8").splitlines()[1:]
    got = {r.split("\t")[0]: r.split("\t")[-1] for r in rows}
    assert got == GOLDEN_ANNOTATED_GENDERS
    # all other columns byte-identical to the unannotated table
    plain = fixture_table.read_text(encoding="utf-8").splitlines()
    annotated = out.read_text(encoding="utf-8").splitlines()
    for before, after in zip(plain, annotated):
        assert before.rsplit("\t", 1)[0] == after.rsplit("\t", 1)[0]


def test_gender_rerun_idempotent(tmp_path, fixture_table, gender_dict_path):
    out1 = tmp_path / "a1.tsv"
    out2 = tmp_path / "a2.tsv"
    run_cli(["gender", "--table", str(fixture_table), "--out", str(out1),
             "--gender-dict", str(gender_dict_path)])
    run_cli(["gender", "--table", str(out1), "--out", str(out2),
             "--gender-dict", str(gender_dict_path)])
    assert out1.read_bytes() == out2.read_bytes()


def test_gender_env_var_fallback(tmp_path, fixture_table, gender_dict_path, monkeypatch):
    out = tmp_path / "a.tsv"
    monkeypatch.setenv("DISAMB_GENDER_DICT", str(gender_dict_path))
    assert run_cli(["gender", "--table", str(fixture_table), "--out", str(out)]) == 0
    monkeypatch.delenv("DISAMB_GENDER_DICT")
    assert run_cli(["gender", "--table", str(fixture_table), "--out", str(out)]) == 2


def test_gender_empty_dictionary_exit_2(tmp_path, fixture_table):
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    rc = run_cli(["gender", "--table", str(fixture_table), "--out", str(tmp_path / "x.tsv"),
                  "--gender-dict", str(empty)])
    assert rc == 2


def test_report_matches_oracle_and_formats(tmp_path, fixture_table):
    from disambaudit.ingest import read_career_table
    from disambaudit.metrics import MetricConfig
    from disambaudit.synth import oracle_report_from_careers
    from disambaudit.metrics import report_to_text

    out = tmp_path / "report.csv"
    rc = run_cli(["report", "--table", str(fixture_table), "--out", str(out)])
    assert rc == 0
    hist = tmp_path / "report_hist.csv"
    assert hist.exists()
    careers = read_career_table(str(fixture_table))
    expected = report_to_text(oracle_report_from_careers(careers, MetricConfig()))
    assert out.read_text(encoding="utf-8") == expected
    first_lines = hist.read_text(encoding="utf-8").splitlines()
    assert first_lines[0] == "debut_year,tti,count"
    assert first_lines[1].startswith("all,-1,")


def test_report_window_zero_rates_are_one(tmp_path, fixture_table):
    out = tmp_path / "w0.csv"
    assert run_cli(["report", "--table", str(fixture_table), "--out", str(out),
                    "--window", "0"]) == 0
    for line in out.read_text(encoding="utf-8").splitlines()[1:]:
        rate = line.rsplit(",", 1)[1]
        if rate:
            assert rate == "1.000000"


def test_report_gender_strata_without_column_exit_4(tmp_path, fixture_table):
    rc = run_cli(["report", "--table", str(fixture_table), "--out", str(tmp_path / "r.csv"),
                  "--strata", "all,gender"])
    assert rc == 4


def test_report_unknown_stratum_exit_2(tmp_path, fixture_table):
    rc = run_cli(["report", "--table", str(fixture_table), "--out", str(tmp_path / "r.csv"),
                  "--strata", "all,zodiac"])
    assert rc == 2


def test_synth_deterministic_bytes(tmp_path):
    out1, out2 = tmp_path / "c1.jsonl", tmp_path / "c2.jsonl"
    for out in (out1, out2):
        rc = run_cli(["synth", "--out", str(out), "--n-authors", "100", "--seed", "7"])
        assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert (tmp_path / "c1.truth.tsv").read_bytes() == (tmp_path / "c2.truth.tsv").read_bytes()


def test_synth_rejects_bad_probability(tmp_path):
    rc = run_cli(["synth", "--out", str(tmp_path / "c.jsonl"), "--n-authors", "10",
                  "--split-rate", "1.5"])
    assert rc == 2
    rc = run_cli(["synth", "--out", str(tmp_path / "c.jsonl"), "--n-authors", "10",
                  "--pi-fraction", "-0.2"])
    assert rc == 2


def test_synth_zero_authors(tmp_path):
    out = tmp_path / "c.jsonl"
    rc = run_cli(["synth", "--out", str(out), "--n-authors", "0"])
    assert rc == 0
    assert out.read_text(encoding="utf-8") == ""
    manifest = _read_manifest(tmp_path / "c.jsonl.manifest.json")
    assert manifest["counts"] == {"works": 0, "authors_emitted": 0, "splits": 0}


def test_synth_gzip_output_round_trips(tmp_path):
    out = tmp_path / "c.jsonl"
    run_cli(["synth", "--out", str(out), "--n-authors", "20", "--seed", "3"])
    gz = tmp_path / "z.jsonl"
    run_cli(["synth", "--out", str(gz), "--n-authors", "20", "--seed", "3", "--gzip"])
    with gzip.open(tmp_path / "z.jsonl.gz", "rt", encoding="utf-8") as handle:
        assert handle.read() == out.read_text(encoding="utf-8")


def test_audit_requires_inputs_or_synth(tmp_path):
    rc = run_cli(["audit", "--out-dir", str(tmp_path / "o")])
    assert rc == 1


def test_audit_rejects_inputs_plus_synth(tmp_path, fixture_corpus):
    rc = run_cli(["audit", str(fixture_corpus), "--out-dir", str(tmp_path / "o"),
                  "--n-authors", "10"])
    assert rc == 1


def test_audit_fixture_golden_counts(tmp_path, fixture_corpus, capsys):
    out_dir = tmp_path / "audit"
    rc = run_cli(["audit", str(fixture_corpus), "--out-dir", str(out_dir)])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "pooled debut-year anomaly rate:" in stdout
    manifest = _read_manifest(out_dir / "manifest.json")
    counts = manifest["counts"]
    assert counts["lines_read"] == 20
    assert counts["authors_selected"] == 12
    assert counts["career_rows"] == 10
    assert counts["rows_dropped_pre_cutoff"] == 2
    # fixture cohort: 8 of 10 rows debut 2000-2018 with tti<=5: A1,A11,A12,A2,A3,A8,A9 -> 7
    assert counts["cohort_rows"] == 10
    assert counts["pooled_n_independent_within_window"] == 7
    assert counts["pooled_n_anomalous"] == 7
    assert (out_dir / "career_table.tsv").read_text(encoding="utf-8") == GOLDEN_FIXTURE_TABLE


def test_audit_with_gender_dict_adds_strata(tmp_path, fixture_corpus, gender_dict_path):
    out_dir = tmp_path / "audit"
    rc = run_cli(["audit", str(fixture_corpus), "--out-dir", str(out_dir),
                  "--gender-dict", str(gender_dict_path)])
    assert rc == 0
    table = (out_dir / "career_table.tsv").read_text(encoding="utf-8")
    rows = table.splitlines()[1:]
    genders = {r.split("\t")[0]: r.split("\t")[-1] for r in rows}
    assert genders == GOLDEN_ANNOTATED_GENDERS
    report = (out_dir / "cohort_report.csv").read_text(encoding="utf-8")
    assert "gender:female," in report
    assert "continent-gender:Europe:male," in report


def test_audit_synthetic_split_rate_raises_headline(tmp_path):
    rates = {}
    for s in ("0.0", "0.5"):
        out_dir = tmp_path / f"audit-{s}"
        rc = run_cli(["audit", "--out-dir", str(out_dir), "--n-authors", "400",
                      "--seed", "19", "--split-rate", s,
                      "--training-mean", "5"])
        assert rc == 0
        manifest = _read_manifest(out_dir / "manifest.json")
        counts = manifest["counts"]
        rates[s] = counts["pooled_n_anomalous"] / counts["pooled_n_independent_within_window"]
    assert rates["0.5"] > rates["0.0"]


def test_audit_threads_do_not_change_outputs(tmp_path, fixture_corpus):
    texts = []
    for threads in ("1", "4"):
        out_dir = tmp_path / f"t{threads}"
        rc = run_cli(["audit", str(fixture_corpus), "--out-dir", str(out_dir),
                      "--threads", threads])
        assert rc == 0
        texts.append(
            (out_dir / "career_table.tsv").read_bytes()
            + (out_dir / "cohort_report.csv").read_bytes()
            + (out_dir / "tti_histogram.csv").read_bytes()
        )
    assert texts[0] == texts[1]


def test_oracle_subcommand_matches_pipeline(tmp_path, fixture_corpus, fixture_table):
    table = tmp_path / "oracle_table.tsv"
    report = tmp_path / "oracle_report.csv"
    rc = run_cli(["oracle", str(fixture_corpus), "--out-table", str(table),
                  "--out-report", str(report)])
    assert rc == 0
    assert table.read_text(encoding="utf-8") == GOLDEN_FIXTURE_TABLE

    pipeline_report = tmp_path / "pipeline_report.csv"
    rc = run_cli(["report", "--table", str(fixture_table), "--out", str(pipeline_report)])
    assert rc == 0
    assert report.read_bytes() == pipeline_report.read_bytes()


def test_oracle_too_large_exit_2(tmp_path):
    corpus = tmp_path / "big.jsonl"
    line = '{"id":"W1","publication_year":2005,"type":"article"}\n'
    with corpus.open("w", encoding="utf-8") as handle:
        for _ in range(100_001):
            handle.write(line)
    rc = run_cli(["oracle", str(corpus), "--out-table", str(tmp_path / "t.tsv"),
                  "--out-report", str(tmp_path / "r.csv")])
    assert rc == 2
