import os
import sys

SRC = os.path.join(os.path.dirname(__file__), os.pardir, "src")
if os.path.isdir(SRC) and SRC not in sys.path:
    sys.path.insert(0, os.path.abspath(SRC))

import pytest

from ebconst import expand_sieve

# First 52 fractional bits of E = 1.6066951..., the published reference
# expansion; reproduced independently by both expansion methods.
GOLDEN_52 = "1001101101010000010111111001111001000011111100100010"


@pytest.fixture(scope="session")
def golden52() -> str:
    return GOLDEN_52


@pytest.fixture(scope="session")
def sieve_16384():
    return expand_sieve(16384)
