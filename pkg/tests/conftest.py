import pytest

from injectnet.scenario import ScenarioParams, generate_scenario

from helpers import two_islands_scenario


@pytest.fixture(scope="session")
def two_islands():
    return two_islands_scenario()


@pytest.fixture(scope="session")
def clustered():
    return generate_scenario(
        ScenarioParams(
            node_count=30,
            partition_count=5,
            radio_range=0.15,
            area_side=1.0,
            cluster_radius=0.05,
            seed=1,
        )
    )
