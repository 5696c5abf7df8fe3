from __future__ import annotations

import random
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


def random_partial(rng: random.Random, pool=("A1", "A2", "A3", "A4")):
    """Random aggregation state for merge-law checks."""
    from disambaudit.ingest import PartialAggregate, PartialEntry

    agg = PartialAggregate()
    for aid in pool:
        if rng.random() < 0.4:
            continue
        witness = None
        if rng.random() < 0.7:
            witness = (
                rng.randint(1995, 2020),
                f"W{rng.randint(1, 50):03d}",
                rng.choice([None, "US", "DE", "JP"]),
            )
        names = {}
        for name in ("Ana", "Bo", "Cy"):
            if rng.random() < 0.5:
                names[name] = rng.randint(1, 5)
        agg.entries[aid] = PartialEntry(
            min_year=rng.randint(1995, 2020),
            min_last_year=rng.choice([None, rng.randint(1995, 2022)]),
            n_works=rng.randint(1, 9),
            has_affiliation=rng.random() < 0.5,
            has_orcid=rng.random() < 0.5,
            witness=witness,
            name_counts=names,
        )
    return agg


@pytest.fixture(scope="session")
def fixture_corpus() -> Path:
    return DATA_DIR / "filter_fidelity.jsonl"


@pytest.fixture(scope="session")
def gender_dict_path() -> Path:
    return DATA_DIR / "gender_names.csv"


def run_cli(argv: list[str]) -> int:
    from disambaudit.cli import main

    return main(argv)
