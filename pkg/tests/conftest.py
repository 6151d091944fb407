import pytest

from rpmsim import SimulationConfig, inject_messiness, simulate


@pytest.fixture(scope="session")
def cohort_for_seed():
    """Default-config cohorts, messiness included, cached per seed.

    The cached cohorts are shared across the whole run; tests that mutate
    one must deepcopy it first.
    """
    cache = {}

    def get(seed: int):
        if seed not in cache:
            cohort = simulate(SimulationConfig(seed=seed))
            cache[seed] = inject_messiness(cohort)
        return cache[seed]

    return get


@pytest.fixture()
def small_config():
    """A quick-to-simulate configuration for structural tests."""
    return SimulationConfig(n_patients=3, n_hcps=3, duration_days=21, seed=11)
