from pathlib import Path

import pytest

from squareness.harness import parse_db

FIXTURE = Path(__file__).parent / "fixtures" / "curves_le1000.txt"


@pytest.fixture(scope="session")
def db():
    return parse_db(FIXTURE)


@pytest.fixture(scope="session")
def by_label(db):
    return {r.label: r for r in db}
