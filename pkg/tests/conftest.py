import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qtilt import based_algebra as ba
from qtilt.builtin import builtin_spec_text
from qtilt.path_algebra import complete_groebner
from qtilt.qspec import parse_algebra_spec


@pytest.fixture(scope="session")
def builtin_quotient():
    return complete_groebner(parse_algebra_spec(builtin_spec_text()))


@pytest.fixture(scope="session")
def builtin_based(builtin_quotient):
    return ba.from_quotient_algebra(builtin_quotient)
