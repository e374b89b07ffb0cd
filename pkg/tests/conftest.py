import pytest
from hypothesis import HealthCheck, settings

from tropbun import catalog
from tropbun.metric_graph import simple_model

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def seg():
    return catalog.segment()


@pytest.fixture
def circ():
    return catalog.circle()


@pytest.fixture
def theta():
    return catalog.theta()


@pytest.fixture
def dumbbell():
    return catalog.dumbbell()


@pytest.fixture
def circ_model():
    return simple_model(catalog.circle())


@pytest.fixture
def theta_model():
    return simple_model(catalog.theta())


@pytest.fixture
def seg_model():
    return simple_model(catalog.segment())
