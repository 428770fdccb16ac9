import random

import pytest

from cds.catalog import load_catalog
from cds.critique import new_draft

# Five words from the canonical lexicon used by most fixtures.
FIVE_WORDS = ["clear", "clever", "reliable", "organised", "useful"]


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


def make_complete_sheet(
    catalog,
    values=None,
    artefact_key="poster-2025",
    appraiser="alice",
    words=FIVE_WORDS,
    finalize=True,
):
    """Build a sheet with all 30 values set (constant 0 unless given)."""
    sheet = new_draft(artefact_key, appraiser, catalog)
    sheet.set_overview("Demo design", "a compact data story", words, catalog)
    values = values if values is not None else [0] * 30
    for number, value in enumerate(values, start=1):
        sheet.set_response(number, value, f"note {number}")
    sheet.set_review("looks solid", "tighten the colour palette")
    if finalize:
        sheet.finalize()
    return sheet


def random_values(rng: random.Random):
    return [rng.randint(-2, 2) for _ in range(30)]


def random_words(rng: random.Random, catalog):
    return rng.sample(sorted(catalog.words), 5)


def random_sheet(rng: random.Random, catalog, artefact_key="poster-2025", finalize=True):
    return make_complete_sheet(
        catalog,
        values=random_values(rng),
        artefact_key=artefact_key,
        appraiser=rng.choice(["alice", "bob", "carol"]),
        words=random_words(rng, catalog),
        finalize=finalize,
    )
