import pytest

from modules.Dataset import Dataset, distinct_count_exact
from modules.Errors import InvalidParameterError
from modules.Matching.BoundedCount import bounded_count_curve, bounded_distinct_count
from modules.Matching.CopyGraph import CopyGraph, build_copy_graph
from modules.Matching.HopcroftKarp import maximum_matching_size
from modules.Mechanisms.RandomSource import RandomSource
from modules.Oracle import bounded_count_bruteforce, curve_shape_violations, matching_bruteforce


def people(*item_sets):
    return Dataset.from_records([(str(i + 1), list(items)) for i, items in enumerate(item_sets)])


def test_copy_graph_caps_copies_at_set_size():
    graph = build_copy_graph(people("ab"), 3)
    assert graph.left_vertices == ((0, 0), (0, 1))


def test_copy_graph_sizes():
    graph = build_copy_graph(people("ab", "b"), 1)
    assert graph.left_count == 2
    assert graph.edge_count == 3
    assert graph.right_count == 2


def test_copy_graph_of_empty_dataset():
    graph = build_copy_graph(people(), 2)
    assert graph.left_count == 0
    assert maximum_matching_size(graph) == 0


def test_copy_graph_rejects_zero_bound():
    with pytest.raises(InvalidParameterError):
        build_copy_graph(people("a"), 0)


def test_from_edges_rejects_out_of_range():
    with pytest.raises(InvalidParameterError):
        CopyGraph.from_edges(1, 1, [(0, 1)])


def test_two_copies_one_item():
    assert maximum_matching_size(build_copy_graph(people("a"), 2)) == 1


def test_disjoint_singletons_match_perfectly():
    dataset = people(*[[f"x{i}"] for i in range(30)])
    assert maximum_matching_size(build_copy_graph(dataset, 1)) == 30


def test_hopcroft_karp_against_augmenting_paths():
    rng = RandomSource(99)
    for _ in range(1000):
        left, right = rng.integers(1, 9), rng.integers(1, 9)
        edges = [(u, v) for u in range(left) for v in range(right) if rng.uniform() < 0.3]
        graph = CopyGraph.from_edges(left, right, edges)
        assert maximum_matching_size(graph) == matching_bruteforce(graph), edges


def test_hopcroft_karp_needs_augmenting_paths():
    # greedy in index order would match 0-0 and leave 1 unmatched
    graph = CopyGraph.from_edges(2, 2, [(0, 0), (0, 1), (1, 0)])
    assert maximum_matching_size(graph) == 2


@pytest.mark.parametrize("item_sets,ell,expected", [
    (("abc",), 2, 2),
    (("ab", "b", "bc"), 1, 3),
    (("ab", "a"), 1, 2),
    ((), 3, 0),
])
def test_bounded_distinct_count(item_sets, ell, expected):
    assert bounded_distinct_count(people(*item_sets), ell) == expected


def test_bounded_distinct_count_rejects_zero_bound():
    with pytest.raises(InvalidParameterError):
        bounded_distinct_count(people("a"), 0)


def test_curve_single_person():
    curve = bounded_count_curve(people("ab"), 3)
    assert curve.counts == (1, 2, 2)
    assert curve.exact
    assert curve.rows() == [(1, 1), (2, 2), (3, 2)]


def test_curve_two_people():
    assert bounded_count_curve(people("ab", "a"), 2).counts == (2, 2)


def test_curve_rejects_zero_ell_max():
    with pytest.raises(InvalidParameterError):
        bounded_count_curve(people("a"), 0)


def test_curve_at_reads_by_bound():
    curve = bounded_count_curve(people("abc", "c"), 3)
    assert curve.at(1) == curve.counts[0]
    with pytest.raises(InvalidParameterError):
        curve.at(4)


def test_matching_equals_bruteforce_on_corpus(small_corpus):
    for dataset, ell in small_corpus:
        assert bounded_distinct_count(dataset, ell) == bounded_count_bruteforce(dataset, ell), dataset.records()


def test_copy_graph_matching_equals_bruteforce_on_corpus(small_corpus):
    for dataset, ell in small_corpus:
        graph = build_copy_graph(dataset, ell)
        assert maximum_matching_size(graph) == matching_bruteforce(graph)


def test_exact_curve_shape_on_corpus(small_corpus):
    for dataset, _ in small_corpus:
        assert curve_shape_violations(bounded_count_curve(dataset, 5), dataset) == []


def test_saturation(zipf_data):
    assert bounded_distinct_count(zipf_data, zipf_data.max_contribution) == distinct_count_exact(zipf_data)


def test_curve_in_parallel_matches_sequential(zipf_data):
    assert bounded_count_curve(zipf_data, 8, workers=2) == bounded_count_curve(zipf_data, 8)


def test_curve_past_saturation_repeats_distinct_count():
    dataset = people("abc", "cd")
    curve = bounded_count_curve(dataset, 6)
    assert curve.counts[2:] == (4, 4, 4, 4)


def test_curve_ignores_person_order():
    forward = people("ab", "b", "bc", "cde")
    backward = people("cde", "bc", "b", "ab")
    assert bounded_count_curve(forward, 4) == bounded_count_curve(backward, 4)


def test_curve_stops_matching_once_the_distinct_count_is_reached(monkeypatch):
    dataset = people("abcd", "a", "b", "c", "d")
    computed = []

    def counting(dataset, ell):
        computed.append(ell)
        return bounded_distinct_count(dataset, ell)

    monkeypatch.setattr("modules.Matching.BoundedCount.bounded_distinct_count", counting)
    curve = bounded_count_curve(dataset, 10)
    assert computed == [1]
    assert curve.counts == (4,) * 10


def test_early_stop_keeps_the_rising_part_of_the_curve(zipf_data):
    curve = bounded_count_curve(zipf_data, 12)
    assert list(curve.counts) == [bounded_distinct_count(zipf_data, ell) for ell in range(1, 13)]
