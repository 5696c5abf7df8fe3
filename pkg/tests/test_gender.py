from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disambaudit.gender import (
    EmptyDictionaryError,
    Gender,
    GenderDictionary,
    Thresholds,
    annotate_careers,
    classify,
    load_dictionary,
    normalize_given_name,
)
from disambaudit.ingest import AuthorCareer, career_table_to_text

T = Thresholds()


def test_normalize_strips_diacritics_and_takes_first_token():
    assert normalize_given_name("José García") == "jose"
    assert normalize_given_name("  Mei  Sun ") == "mei"
    assert normalize_given_name("") is None
    assert normalize_given_name("   ") is None
    assert normalize_given_name("ZOË") == "zoe"


def test_normalize_is_fixed_point():
    for raw in ("José García", "Émilie", "Ana-Maria", "Ø. Berg"):
        token = normalize_given_name(raw)
        assert normalize_given_name(token) == token


def test_load_fixture_dictionary(gender_dict_path):
    d = load_dictionary(str(gender_dict_path))
    assert len(d) == 50
    assert d.rejected_count == 0
    assert d.duplicate_count == 0
    assert d.entries["jose"] == 0.02  # diacritic key normalized on load
    assert d.entries["zoe"] == 0.94


def test_load_small_inline(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("maria,0.98\njohn,0.01\n", encoding="utf-8")
    d = load_dictionary(str(path))
    assert len(d) == 2


def test_load_rejects_out_of_range(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("x,1.5\ny,0.4\nz,nan\n", encoding="utf-8")
    d = load_dictionary(str(path))
    assert len(d) == 1
    assert d.rejected_count == 2


def test_load_empty_raises(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(EmptyDictionaryError):
        load_dictionary(str(path))
    path.write_text("name,p_gf\n", encoding="utf-8")
    with pytest.raises(EmptyDictionaryError):
        load_dictionary(str(path))


def test_load_duplicate_last_wins(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("jose,0.5\njosé,0.02\n", encoding="utf-8")
    d = load_dictionary(str(path))
    assert d.entries["jose"] == 0.02
    assert d.duplicate_count == 1


def test_load_malformed_probability_mid_file(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("ana,0.9\nbad,oops\n", encoding="utf-8")
    d = load_dictionary(str(path))
    assert len(d) == 1
    assert d.rejected_count == 1


def test_classify_threshold_rules():
    d = GenderDictionary(entries={"a": 0.15, "b": 0.8, "c": 0.5, "d": 0.2})
    assert classify("A", d, T) is Gender.MALE
    assert classify("B", d, T) is Gender.FEMALE
    assert classify("C", d, T) is Gender.UNCLASSIFIED
    assert classify("D", d, T) is Gender.MALE  # inclusive boundary
    assert classify("missing", d, T) is Gender.UNCLASSIFIED
    assert classify("", d, T) is Gender.UNCLASSIFIED


@settings(max_examples=300)
@given(st.floats(min_value=0.0, max_value=1.0))
def test_classify_partition(p: float):
    d = GenderDictionary(entries={"name": p})
    label = classify("Name Surname", d, T)
    if p <= 0.2:
        assert label is Gender.MALE
    elif p >= 0.8:
        assert label is Gender.FEMALE
    else:
        assert label is Gender.UNCLASSIFIED


def test_annotate_preserves_other_columns(gender_dict_path):
    d = load_dictionary(str(gender_dict_path))
    careers = [
        AuthorCareer("A1", 2005, 2006, 3, True, False, "US", "North America", "Maria Cruz", None),
        AuthorCareer("A2", 2008, None, 1, False, True, None, None, "John Ode", None),
        AuthorCareer("A3", 2010, 2010, 2, False, False, None, None, "Robin Day", None),
        AuthorCareer("A4", 2012, 2012, 2, False, False, None, None, "", None),
    ]
    before = [
        "\t".join(row.split("\t")[:-1])
        for row in career_table_to_text(careers).splitlines()[1:]
    ]
    annotate_careers(careers, d, T)
    after = [
        "\t".join(row.split("\t")[:-1])
        for row in career_table_to_text(careers).splitlines()[1:]
    ]
    assert before == after
    assert [c.gender for c in careers] == ["female", "male", "unclassified", "unclassified"]


def test_thresholds_validation():
    with pytest.raises(ValueError):
        Thresholds(male_max=0.9, female_min=0.8)
    with pytest.raises(ValueError):
        Thresholds(male_max=-0.1, female_min=0.8)
    with pytest.raises(ValueError):
        Thresholds(male_max=0.2, female_min=1.2)
