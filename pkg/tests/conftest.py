import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qmpg.qpair import RTPairing  # noqa: E402
from qmpg.rootsys import CartanData  # noqa: E402

_CARTANS = {}
_PAIRINGS = {}


def cartan(name):
    if name not in _CARTANS:
        _CARTANS[name] = CartanData.build(name[0], int(name[1:]))
    return _CARTANS[name]


def pairing(name):
    """One shared pairing per type so memoised values are reused across tests."""
    if name not in _PAIRINGS:
        _PAIRINGS[name] = RTPairing(cartan(name))
    return _PAIRINGS[name]


def alt(n, entries):
    """Antisymmetric matrix from its strict upper triangle."""
    U = [[Fraction(0)] * n for _ in range(n)]
    it = iter(entries)
    for i in range(n):
        for j in range(i + 1, n):
            x = Fraction(next(it))
            U[i][j], U[j][i] = x, -x
    return U


@pytest.fixture
def a1():
    return cartan("A1")


@pytest.fixture
def a2():
    return cartan("A2")


@pytest.fixture
def b2():
    return cartan("B2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
