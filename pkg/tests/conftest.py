import pytest

import reference_data
from adcodes.synthesis import build_matrix, synthesize


@pytest.fixture(scope="session")
def constraint_matrices():
    return {
        name: build_matrix(reference_data.make_params(name))
        for name in reference_data.CASE_NAMES
    }


@pytest.fixture(scope="session")
def code_specs():
    return {
        name: synthesize(reference_data.make_params(name))
        for name in reference_data.CASE_NAMES
    }
