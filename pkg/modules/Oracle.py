"""
Slow, independent reference implementations. Tests and the `selftest` command compare
the production code against these; nothing on the estimation path calls them.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from tqdm import tqdm

from modules.Dataset import Dataset, distinct_count_exact
from modules.Errors import InvalidParameterError, OracleGuardError
from modules.GreedyMatching import greedy_count_at, greedy_count_curve
from modules.Matching.BoundedCount import BoundedCountCurve, bounded_count_curve, bounded_distinct_count
from modules.Matching.CopyGraph import CopyGraph, build_copy_graph
from modules.Matching.HopcroftKarp import maximum_matching_size
from modules.Mechanisms.GeneralizedExponentialMechanism import GemProblem, gem_scores_fast
from modules.Mechanisms.RandomSource import RandomSource
from modules.SyntheticData import random_small_dataset

logger = logging.getLogger(__name__)

MAX_BRUTEFORCE_RECORDS = 20
MAX_BRUTEFORCE_VERTICES = 64
GEM_TOLERANCE = 1e-9


def bounded_count_bruteforce(dataset: Dataset, ell: int) -> int:
    """
    Exhaustive D_l: every union reachable by picking one subset of size
    min(l, |u_i|) per person, carried as bitmasks person by person. Smaller subsets
    never enlarge a union, so skipping them loses nothing.
    """
    if ell < 1:
        raise InvalidParameterError(f"contribution bound must be >= 1, got {ell}")
    if dataset.size > MAX_BRUTEFORCE_RECORDS:
        raise OracleGuardError(f"|D|={dataset.size} exceeds the brute-force guard of {MAX_BRUTEFORCE_RECORDS}")

    reachable = {0}
    for person in dataset.people:
        k = min(ell, len(person.items))
        masks = set()
        for chosen in _subsets(list(person.items), k):
            mask = 0
            for item in chosen:
                mask |= 1 << item
            masks.add(mask)
        if masks:
            reachable = {union | mask for union in reachable for mask in masks}
    return max(bin(union).count("1") for union in reachable)


def _subsets(items: List[int], k: int):
    if k == 0:
        yield ()
        return
    for position in range(len(items) - k + 1):
        for rest in _subsets(items[position + 1:], k - 1):
            yield (items[position],) + rest


def matching_bruteforce(graph: CopyGraph) -> int:
    """Kuhn's algorithm: one recursive augmenting-path search per left vertex."""
    if graph.left_count + graph.right_count > MAX_BRUTEFORCE_VERTICES:
        raise OracleGuardError(f"{graph.left_count}+{graph.right_count} vertices exceed "
                               f"the guard of {MAX_BRUTEFORCE_VERTICES}")
    owner = {}

    def try_claim(u, visited):
        for v in graph.adjacency[u]:
            if v in visited:
                continue
            visited.add(v)
            if v not in owner or try_claim(owner[v], visited):
                owner[v] = u
                return True
        return False

    return sum(1 for u in range(graph.left_count) if try_claim(u, set()))


def gem_scores_naive(problem: GemProblem) -> np.ndarray:
    """The O(m^2) definition, evaluated as written."""
    q = np.asarray(problem.q, dtype=np.float64)
    delta = np.asarray(problem.delta, dtype=np.float64)
    shifted = q - problem.t * delta
    ratios = (shifted[:, None] - shifted[None, :]) / (delta[:, None] + delta[None, :])
    return ratios.min(axis=1)


def sensitivity_probe(dataset: Dataset, ell: int, counter: str = "matching") -> float:
    """Largest change of the counter when any single person is removed."""
    if dataset.n < 1:
        raise InvalidParameterError("the sensitivity probe needs at least one person")
    if counter == "matching":
        count = bounded_distinct_count
    elif counter == "greedy":
        count = greedy_count_at
    else:
        raise InvalidParameterError(f"unknown counter '{counter}', expected 'matching' or 'greedy'")
    full = count(dataset, ell)
    return float(max(abs(full - count(dataset.without_person(i), ell)) for i in range(dataset.n)))


def curve_shape_violations(curve: BoundedCountCurve, dataset: Dataset) -> List[str]:
    problems = []
    counts = list(curve.counts)
    distinct = distinct_count_exact(dataset)
    if any(b < a for a, b in zip(counts, counts[1:])):
        problems.append(f"curve decreases: {counts}")
    for ell, count in curve.rows():
        if count > distinct or count > dataset.n * ell:
            problems.append(f"curve entry {count} at l={ell} exceeds DC={distinct} or n*l={dataset.n * ell}")
    if curve.exact:
        steps = [b - a for a, b in zip(counts, counts[1:])]
        if any(later > earlier for earlier, later in zip(steps, steps[1:])):
            problems.append(f"exact curve increments grow: {counts}")
    saturated = dataset.max_contribution
    if 1 <= saturated <= curve.ell_max and any(count != counts[saturated - 1] for count in counts[saturated - 1:]):
        problems.append(f"curve moves after l={saturated}: {counts}")
    return problems


@dataclass
class SelftestReport:
    cases: int
    seed: int
    mismatches: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"cases": self.cases, "seed": self.seed, "passed": self.passed, "mismatches": self.mismatches}


def _random_gem_problem(rng: RandomSource, max_m: int = 50) -> GemProblem:
    generator = rng.generator
    m = rng.integers(1, max_m + 1)
    q = generator.uniform(-1e3, 1e3, size=m)
    delta = 10.0 ** generator.uniform(-3, 3, size=m)
    t = float(generator.uniform(0, 50))
    return GemProblem(q=q.tolist(), delta=delta.tolist(), t=t)


def check_case(dataset: Dataset, ell: int, ell_max: int = 4) -> List[str]:
    """Every oracle agreement and bound for one small dataset; returns the failures."""
    failures = []
    exact = bounded_distinct_count(dataset, ell)
    brute = bounded_count_bruteforce(dataset, ell)
    if exact != brute:
        failures.append(f"D_{ell}: matching {exact} != brute force {brute}")

    graph = build_copy_graph(dataset, ell)
    fast_matching, slow_matching = maximum_matching_size(graph), matching_bruteforce(graph)
    if fast_matching != slow_matching:
        failures.append(f"matching size: Hopcroft-Karp {fast_matching} != augmenting paths {slow_matching}")

    greedy = greedy_count_at(dataset, ell)
    if not math.ceil(exact / 2) <= greedy <= exact:
        failures.append(f"greedy {greedy} outside [{math.ceil(exact / 2)}, {exact}] at l={ell}")

    if dataset.n >= 1:
        for counter in ("matching", "greedy"):
            change = sensitivity_probe(dataset, ell, counter)
            if change > ell:
                failures.append(f"{counter} sensitivity {change} > l={ell}")

    failures.extend(curve_shape_violations(bounded_count_curve(dataset, ell_max), dataset))
    failures.extend(curve_shape_violations(greedy_count_curve(dataset, ell_max), dataset))
    return [f"{failure} on {dataset.records()}" for failure in failures]


def check_gem_case(problem: GemProblem) -> List[str]:
    fast = gem_scores_fast(problem)
    naive = gem_scores_naive(problem)
    worst = float(np.max(np.abs(fast - naive)))
    if worst > GEM_TOLERANCE:
        return [f"GEM scores differ by {worst:.3e} (m={problem.m}, t={problem.t})"]
    return []


def run_selftest(cases: int = 1000, seed: int = 0) -> SelftestReport:
    rng = RandomSource(seed)
    report = SelftestReport(cases=cases, seed=seed)
    for _ in tqdm(range(cases), desc="selftest", disable=None):
        dataset = random_small_dataset(rng)
        ell = rng.integers(1, 5)
        report.mismatches.extend(check_case(dataset, ell))
        report.mismatches.extend(check_gem_case(_random_gem_problem(rng)))
    logger.info(f"Selftest: {cases} cases, {len(report.mismatches)} mismatch(es).")
    return report
