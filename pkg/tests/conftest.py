import math

import pytest

from piezoharv.config import load_config
from piezoharv.laminate import LaminateStack, LayerSpec
from piezoharv.lem import HarvesterModel
from piezoharv.materials import MaterialProps, material_registry

_CRITERIA: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _CRITERIA.setdefault(num, {"title": title, "outcomes": [], "notes": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[mark.args[0]]["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        entry = _CRITERIA[num]
        outcomes = entry["outcomes"]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {num}: {entry['title']}")
        for note in entry["notes"]:
            terminalreporter.write_line(f"    {note}")


@pytest.fixture
def criterion_report(request):
    """Attach a reported value to the current test's criterion line."""
    mark = request.node.get_closest_marker("criterion")

    def report(text: str) -> None:
        if mark is not None:
            _CRITERIA[mark.args[0]]["notes"].append(text)

    return report


@pytest.fixture(scope="session")
def registry():
    return material_registry()


@pytest.fixture(scope="session")
def device_config():
    return load_config()


@pytest.fixture(scope="session")
def device_model(device_config):
    return device_config.model


@pytest.fixture
def coupled_model(device_model):
    """Fabricated stack with the coupling-optimal electrode coverage."""
    return device_model.with_coverage(1 / math.sqrt(2))


def single_layer_model(E=2.5e9, nu=0.34, rho=1880.0, t=18e-6, r=1.5e-3, zeta=0.117):
    mat = MaterialProps("film", E, nu, rho, rel_permittivity=12.0, e31f=-0.015, g33=0.4)
    stack = LaminateStack([LayerSpec(mat, t, "piezoelectric")])
    return HarvesterModel(stack, r, damping_ratio=zeta)


@pytest.fixture
def make_single_layer():
    return single_layer_model
