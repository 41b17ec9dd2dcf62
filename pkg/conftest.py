import pytest

from modules.Mechanisms.RandomSource import RandomSource
from modules.SyntheticData import random_small_dataset, zipf_dataset

collect_ignore = ["examples"]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large Monte Carlo or scaling tests")


@pytest.fixture(scope="session")
def small_corpus():
    """1000 random datasets with n <= 5, |u_i| <= 4 over six items, each paired with a bound in 1..4."""
    rng = RandomSource(2024)
    corpus = []
    for _ in range(1000):
        dataset = random_small_dataset(rng)
        corpus.append((dataset, rng.integers(1, 5)))
    return corpus


@pytest.fixture(scope="session")
def zipf_data():
    return zipf_dataset(200, exponent=1.1, size_p=0.25, max_size=20, seed=11)
