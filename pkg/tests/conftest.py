"""Shared fixtures: catalog oracles are cheap to build, so each test takes
a fresh one (call counters are per-oracle state)."""
import pytest

from altkit.fixtures import catalog, oracle_by_name, utility_by_name


@pytest.fixture
def cobb_oracle():
    return oracle_by_name("cobb_douglas")


@pytest.fixture
def linear_oracle():
    return oracle_by_name("linear")


@pytest.fixture
def catalog_names():
    return [spec.name for spec in catalog()]


@pytest.fixture
def cobb_spec():
    return utility_by_name("cobb_douglas")
