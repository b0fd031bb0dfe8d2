import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def disc_points(rng, size, radius=1.0):
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# The expensive Appendix C runs are shared across test modules.

@pytest.fixture(scope="session")
def grid_1e3():
    from symdisc.metrics.appendix_c import grid_search_appendixC

    return grid_search_appendixC(1e-3)


@pytest.fixture(scope="session")
def certificate_one():
    from symdisc.metrics.appendix_c import certified_max_bb

    return certified_max_bb(target=1.0)


# -- acceptance report ---------------------------------------------------------------
# Tests marked ``criterion(k, title)`` get one summary line each; details added with
# ``record_property("detail", ...)`` are appended to the line.

_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    num, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    verdict = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    # a criterion split over several tests fails if any part fails
    prev = _CRITERIA.get(num)
    if prev is not None and prev[1] != "PASS" and verdict == "PASS":
        verdict = prev[1]
    if prev is not None and prev[2]:
        detail = prev[2] + "; " + detail if detail else prev[2]
    _CRITERIA[num] = (title, verdict, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, verdict, detail = _CRITERIA[num]
        line = f"criterion {num:2d} {verdict}: {title}"
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))
