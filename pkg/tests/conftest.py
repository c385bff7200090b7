import numpy as np
import pytest

from kleinian import MobiusMap


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_map(rng, scale=2.0) -> MobiusMap:
    a, b, c = scale * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
    d = (1 + b * c) / a
    return MobiusMap(a, b, c, d)


OCTAGON = [complex(np.cos(2 * np.pi * k / 8), np.sin(2 * np.pi * k / 8)) for k in range(8)]
RECTANGLE = [0, 1, 1 + 1j, 1 + 2j, 2j, 1j]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
