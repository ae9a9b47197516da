"""
Shared fixtures for the test suite.
"""
import json

import numpy as np
import pytest

from models.fractran import FractranProg
from models.minsky import Dec, Inc, MMProg


@pytest.fixture
def rng():
    """Seeded generator so randomized properties are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def conway():
    """The two-fraction program [5/7, 2/1]."""
    return FractranProg(((5, 7), (2, 1)))


@pytest.fixture
def recognizer():
    """1: DEC 0 3; 2: DEC 1 2; 3: INC 1. Halts from PC 1 iff register 0 is 0."""
    return MMProg(1, (Dec(0, 3), Dec(1, 2), Inc(1)), 2)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document to a fresh file and return its path."""
    counter = [0]

    def write(doc) -> str:
        counter[0] += 1
        path = tmp_path / f"doc{counter[0]}.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return write
