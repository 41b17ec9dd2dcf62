from collections import Counter

import pytest

from modules.Dataset import Dataset
from modules.Errors import InvalidParameterError
from modules.Experiment import run_comparison
from modules.Mechanisms.PrivacyParams import PrivacyParams


def test_comparison_rows(zipf_data):
    params = PrivacyParams(epsilon=1.0, beta=0.05, ell_max=10)
    rows = list(run_comparison(zipf_data, params, trials=3, seed=2))
    assert len(rows) == 3 * 3 * 5
    per_selection = Counter((row.selection, row.private_selection, row.private_count) for row in rows)
    assert per_selection[("max", False, True)] == 9
    assert per_selection[("p90", False, True)] == 9
    assert per_selection[("utility", False, False)] == 9
    assert per_selection[("gem", True, False)] == 9
    assert per_selection[("gem", True, True)] == 9
    assert {row.ell for row in rows if row.selection == "max"} == {zipf_data.max_contribution}


def test_comparison_is_seeded(zipf_data):
    params = PrivacyParams(epsilon=1.0, beta=0.05, ell_max=5)
    first = [row.to_dict() for row in run_comparison(zipf_data, params, trials=2, seed=8)]
    second = [row.to_dict() for row in run_comparison(zipf_data, params, trials=2, seed=8)]
    assert first == second


def test_comparison_of_empty_dataset():
    params = PrivacyParams(epsilon=1.0, beta=0.05, ell_max=5)
    assert list(run_comparison(Dataset.from_records([]), params, trials=2, seed=0)) == []


def test_comparison_sweeps_budgets(zipf_data):
    params = PrivacyParams(epsilon=1.0, beta=0.05, ell_max=6)
    rows = list(run_comparison(zipf_data, params, trials=2, seed=4, epsilons=[0.5, 4.0]))
    assert len(rows) == 2 * 2 * 3 * 5
    assert Counter(row.epsilon for row in rows) == {0.5: 30, 4.0: 30}
    single = [row.to_dict() for row in run_comparison(zipf_data, params, trials=2, seed=4, epsilons=[4.0])]
    assert [row.to_dict() for row in rows if row.epsilon == 4.0] == single


def test_comparison_defaults_to_the_params_budget(zipf_data):
    params = PrivacyParams(epsilon=2.0, beta=0.05, ell_max=4)
    assert {row.epsilon for row in run_comparison(zipf_data, params, trials=1, seed=0)} == {2.0}


def test_comparison_needs_a_trial(zipf_data):
    params = PrivacyParams(epsilon=1.0, beta=0.05, ell_max=4)
    with pytest.raises(InvalidParameterError):
        list(run_comparison(zipf_data, params, trials=0, seed=0))
