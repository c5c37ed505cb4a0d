import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from threatcorr.evidence import (  # noqa: E402
    build_coverage_bel,
    build_location_bel,
    build_movement_bel,
    build_separation_bel,
    rows,
)
from threatcorr.scenario import load_scenario  # noqa: E402


def figure2_arguments(center2=(80.0, 80.0), same_mass=0.7):
    return [
        build_location_bel(1, (20.0, 20.0), rows([4.5, 9.5, 15.0, 22.0, 33.0, 60.0], [0.18] * 5 + [0.10])),
        build_location_bel(2, center2, rows([9.0, 18.0, 30.0, 45.0, 70.0, 120.0], [0.18] * 5 + [0.10])),
        build_movement_bel(0.3, rows([10.0, 9.0, 7.5, 6.0, 0.0], [0.15] * 4 + [0.10], [13.0, 15.0, 18.0, 22.0, math.inf])),
        build_coverage_bel(same_mass),
        build_separation_bel(rows([60.0, 49.0, 40.0, 32.0, 26.0, 20.0], [0.17] * 5 + [0.15])),
    ]


@pytest.fixture(scope="session")
def fig2_args():
    return figure2_arguments()


@pytest.fixture(scope="session")
def fig2_scenario():
    return load_scenario("figure2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
        terminalreporter.write_line(line)
