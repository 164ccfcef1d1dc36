import pytest

from fsmodel.regression import FittedModel
from fsmodel.schema import HARDWARE, Dataset
from fsmodel.synthbench import TABLE5_COEFFICIENTS, GeneratorConfig, generate

from helpers import toy_schema


@pytest.fixture(scope="session")
def hardware_campaign():
    return generate(GeneratorConfig(regime="hardware", n=2000, seed=42))


@pytest.fixture(scope="session")
def table5_model():
    return FittedModel(HARDWARE, {m: list(b) for m, b in TABLE5_COEFFICIENTS.items()})


@pytest.fixture
def toy_line():
    return Dataset(toy_schema("x"), [[1.0], [2.0], [3.0]], [[5.0], [8.0], [11.0]])


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}. {title}: {detail}")
