import math
import time

import pytest

from modules.Dataset import Dataset, distinct_count_exact
from modules.Errors import InvalidParameterError
from modules.GreedyMatching import GreedyState, greedy_count_at, greedy_count_curve
from modules.Matching.BoundedCount import bounded_distinct_count
from modules.Oracle import curve_shape_violations, sensitivity_probe
from modules.SyntheticData import zipf_dataset


def people(*item_sets):
    return Dataset.from_records([(str(i + 1), list(items)) for i, items in enumerate(item_sets)])


def replicated(dataset, times):
    """Every person `times` times, whole dataset after whole dataset."""
    return Dataset.from_records(
        (f"{key}#{copy}", items) for copy in range(times) for key, items in dataset.records()
    )


@pytest.mark.parametrize("item_sets,ell_max,expected", [
    (("ab", "a"), 1, (1,)),
    (("a", "b"), 1, (2,)),
    (("abc",), 2, (1, 2)),
    (("ab", "a"), 3, (1, 2, 2)),
])
def test_greedy_curve(item_sets, ell_max, expected):
    curve = greedy_count_curve(people(*item_sets), ell_max)
    assert curve.counts == expected
    assert not curve.exact


def test_tight_case_is_half_of_exact():
    dataset = people("ab", "a")
    assert greedy_count_at(dataset, 1) == 1
    assert bounded_distinct_count(dataset, 1) == 2


def test_greedy_count_at():
    assert greedy_count_at(people("ab", "a"), 2) == 2
    assert greedy_count_at(people(), 3) == 0


def test_greedy_rejects_zero_bound():
    with pytest.raises(InvalidParameterError):
        greedy_count_at(people("a"), 0)
    with pytest.raises(InvalidParameterError):
        greedy_count_curve(people("a"), 0)


def test_people_take_first_unmatched_item_in_byte_order():
    dataset = people("cab", "ba")
    state = GreedyState.start(dataset)
    state.run_round(dataset)
    # person 1 takes "a", person 2 skips "a" and takes "b"
    assert state.matched_size == 2
    assert state.cursors == [1, 2]
    assert state.active == [0]


def test_two_sided_bound_on_corpus(small_corpus):
    for dataset, ell in small_corpus:
        exact = bounded_distinct_count(dataset, ell)
        assert math.ceil(exact / 2) <= greedy_count_at(dataset, ell) <= exact, dataset.records()


def test_sensitivity_on_corpus(small_corpus):
    for dataset, ell in small_corpus:
        if dataset.n:
            assert sensitivity_probe(dataset, ell, "greedy") <= ell, dataset.records()


def test_curve_shape_on_corpus(small_corpus):
    for dataset, _ in small_corpus:
        curve = greedy_count_curve(dataset, 5)
        assert curve_shape_violations(curve, dataset) == []


def test_saturated_greedy_covers_half_of_distinct_count(zipf_data):
    count = greedy_count_at(zipf_data, zipf_data.max_contribution)
    assert count >= distinct_count_exact(zipf_data) / 2
    assert greedy_count_curve(zipf_data, zipf_data.max_contribution + 5).counts[-6:] == (count,) * 6


@pytest.mark.parametrize("ell", [1, 2, 3, 5])
def test_bound_matches_replicated_single_round(zipf_data, ell):
    assert greedy_count_at(zipf_data, ell) == greedy_count_at(replicated(zipf_data, ell), 1)


@pytest.mark.slow
def test_linear_scaling():
    def timed(people_count):
        dataset = zipf_dataset(people_count, exponent=1.1, size_p=0.2, max_size=20, seed=3)
        start = time.perf_counter()
        greedy_count_curve(dataset, 20)
        return dataset.size, time.perf_counter() - start

    small_size, small_time = timed(25_000)
    large_size, large_time = timed(250_000)
    assert large_size >= 1_000_000
    assert large_time / small_time <= 15
