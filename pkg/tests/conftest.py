import numpy as np
import pytest

from framepot.core import Configuration


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_config(rng, n, d):
    x = rng.standard_normal((n, d))
    return Configuration(x / np.linalg.norm(x, axis=1)[:, None])


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def pytest_terminal_summary(terminalreporter):
    import sys

    test_acceptance = sys.modules.get("tests.test_acceptance")
    if test_acceptance is None or not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in test_acceptance.summary_lines():
        terminalreporter.write_line(line)
