import copy
import json

import pytest

from qgevrey.pipelines import reference_eps, stage_b, stage_q
from qgevrey.scenario import load_scenario, reference_path


@pytest.fixture(scope="session")
def reference_raw():
    return json.loads(reference_path().read_text())


@pytest.fixture
def variant(reference_raw):
    """Build a scenario from the reference after editing a copy of its dict."""

    def make(edit):
        raw = copy.deepcopy(reference_raw)
        edit(raw)
        return load_scenario(raw)

    return make


@pytest.fixture(scope="session")
def reference():
    return load_scenario(reference_path())


@pytest.fixture(scope="session")
def q_results(reference):
    return stage_q(reference)


@pytest.fixture(scope="session")
def q_series(q_results):
    return q_results[0]["series"]


@pytest.fixture(scope="session")
def eps_ref(reference):
    return reference_eps(reference, 0)


@pytest.fixture(scope="session")
def b_results(reference, q_results):
    return stage_b(reference, q_results)
