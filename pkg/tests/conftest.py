import random
from fractions import Fraction

import pytest

from invjac.polyring import Poly

_criteria: dict = {}


def random_poly(rng: random.Random, n: int, max_deg: int = 4, terms: int = 5,
                homogeneous: int | None = None) -> Poly:
    out = {}
    for _ in range(rng.randint(0, terms)):
        if homogeneous is None:
            mono = tuple(rng.randint(0, max_deg) for _ in range(n))
        else:
            cuts = sorted(rng.randint(0, homogeneous) for _ in range(n - 1))
            bounds = [0] + cuts + [homogeneous]
            mono = tuple(bounds[k + 1] - bounds[k] for k in range(n))
        out[mono] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return Poly(n, out)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _markers.get(report.nodeid)
    if marker is None:
        return
    number, title = marker
    ok = report.passed
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and ok)


_markers: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _markers[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {title}: {'PASS' if ok else 'FAIL'}")
