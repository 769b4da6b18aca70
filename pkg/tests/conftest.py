from pathlib import Path

import pytest

from crosslap.io import parse_bicomplex

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def f3():
    """The 14-node toy bicomplex: two layers, two kinds of cross-triangles,
    nine cross-edges."""
    return parse_bicomplex(FIXTURES / "f3.json")


@pytest.fixture(scope="session")
def kites_cones():
    """A 12-node bicomplex with one long kite and a mix of open and closed cones."""
    return parse_bicomplex(FIXTURES / "kites_cones.json")


@pytest.fixture(scope="session")
def f3_path():
    return FIXTURES / "f3.json"
