from functools import lru_cache

import pytest

from superchar.core import parse_weight
from superchar.forge import build_kac_module, restrict_decompose
from superchar.operators import BranchingOracle

# typical integral weights whose branch candidates also have distinct roots
DESK_TOPS = {
    (1, 2): ["4|0,-1", "2|3,1", "-2|0,-1", "3|0,0"],
    (2, 1): ["3,1|2", "1,-2|0", "1,0|2"],
    (1, 3): ["-2|0,0,-1"],
    (2, 2): ["-1,-2|-2,-2"],
}
GL22_TOP = "-1,-2|-2,-2"


@lru_cache(maxsize=None)
def kac(text):
    return build_kac_module(parse_weight(text))


@lru_cache(maxsize=None)
def decomposition(text):
    return restrict_decompose(kac(text))


@lru_cache(maxsize=None)
def oracle(text):
    return BranchingOracle(kac(text), decomposition(text))


@pytest.fixture
def W():
    return parse_weight


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
