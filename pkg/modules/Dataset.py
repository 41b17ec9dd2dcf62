import json
import logging
from dataclasses import dataclass
from itertools import groupby
from typing import BinaryIO, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from modules.Errors import DatasetEncodingError, DatasetParseError, DistinctCountError, InvalidParameterError

logger = logging.getLogger(__name__)

FORMATS = ("tsv", "jsonl")


@dataclass(frozen=True)
class PersonRecord:
    """One person's contribution u_i: item ids sorted by their original strings."""
    key: str
    items: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class StatsReport:
    people: int
    records: int
    min_per_person: int
    median_per_person: float
    max_per_person: int
    vocabulary: int

    def to_dict(self) -> dict:
        return {
            "people": self.people,
            "records": self.records,
            "min_per_person": self.min_per_person,
            "median_per_person": self.median_per_person,
            "max_per_person": self.max_per_person,
            "vocabulary": self.vocabulary,
        }


def _byte_order(item_names: Sequence[str]):
    return lambda item_id: item_names[item_id].encode("utf-8")


@dataclass(frozen=True)
class Dataset:
    """
    Person-keyed item table D = (u_1, ..., u_n).

    Items are interned to dense ids 0..V-1 in first-occurrence order. Every
    person's item tuple is duplicate-free and sorted by the UTF-8 bytes of
    the original item strings, which is the order the greedy counter walks.
    Equality is field-for-field, so the id table takes part in it.
    """
    people: Tuple[PersonRecord, ...]
    item_names: Tuple[str, ...]

    @classmethod
    def from_records(cls, records: Iterable[Tuple[str, Iterable[str]]]) -> "Dataset":
        item_ids: Dict[str, int] = {}
        item_names: List[str] = []
        person_index: Dict[str, int] = {}
        person_keys: List[str] = []
        person_items: List[set] = []

        for key, items in records:
            slot = person_index.get(key)
            if slot is None:
                slot = len(person_keys)
                person_index[key] = slot
                person_keys.append(key)
                person_items.append(set())
            bucket = person_items[slot]
            for name in items:
                item_id = item_ids.get(name)
                if item_id is None:
                    item_id = len(item_names)
                    item_ids[name] = item_id
                    item_names.append(name)
                bucket.add(item_id)

        order = _byte_order(item_names)
        people = tuple(
            PersonRecord(key=key, items=tuple(sorted(bucket, key=order)))
            for key, bucket in zip(person_keys, person_items)
        )
        return cls(people=people, item_names=tuple(item_names))

    @property
    def n(self) -> int:
        return len(self.people)

    @property
    def vocabulary_size(self) -> int:
        return len(self.item_names)

    @property
    def size(self) -> int:
        """|D| = sum of |u_i|."""
        return sum(len(person) for person in self.people)

    def contributions(self) -> List[int]:
        return [len(person) for person in self.people]

    @property
    def max_contribution(self) -> int:
        return max(self.contributions(), default=0)

    def item_strings(self, person_index: int) -> List[str]:
        return [self.item_names[item_id] for item_id in self.people[person_index].items]

    def records(self) -> List[Tuple[str, Tuple[str, ...]]]:
        return [(person.key, tuple(self.item_strings(i))) for i, person in enumerate(self.people)]

    def without_person(self, person_index: int) -> "Dataset":
        """The neighboring dataset with person `person_index` removed; the rest keep their order."""
        if not 0 <= person_index < self.n:
            raise InvalidParameterError(f"person index {person_index} out of range for n={self.n}")
        remaining = [record for i, record in enumerate(self.records()) if i != person_index]
        return Dataset.from_records(remaining)


def _decode(raw: bytes, line_number: int) -> str:
    # a byte order mark is only legal in front of the first line
    try:
        return raw.decode("utf-8-sig" if line_number == 1 else "utf-8")
    except UnicodeDecodeError:
        raise DatasetEncodingError(line_number)


def _iter_tsv(source: BinaryIO):
    for line_number, raw in enumerate(source, start=1):
        line = _decode(raw, line_number).rstrip("\r\n")
        if not line:
            continue
        if "\t" not in line:
            raise DatasetParseError(line_number, "expected 'person<TAB>item'")
        key, item = line.split("\t", 1)
        yield key, (item,)


def _iter_jsonl(source: BinaryIO):
    for line_number, raw in enumerate(source, start=1):
        line = _decode(raw, line_number).strip()
        if not line:
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as e:
            raise DatasetParseError(line_number, f"bad JSON: {e.msg}")
        if not isinstance(row, dict):
            raise DatasetParseError(line_number, "expected a JSON object")
        key = row.get("person")
        items = row.get("items")
        if not isinstance(key, str):
            raise DatasetParseError(line_number, "'person' must be a string")
        if not isinstance(items, list) or not all(isinstance(item, str) for item in items):
            raise DatasetParseError(line_number, "'items' must be an array of strings")
        yield key, items


def load_dataset(source: BinaryIO, format: str = "tsv") -> Dataset:
    """
    Reads a UTF-8 byte stream of person/item rows.

    :param source: binary stream, one row per line.
    :param format: 'tsv' (person<TAB>item) or 'jsonl' ({"person": ..., "items": [...]}).
    :return: the interned Dataset.
    """
    if format == "tsv":
        rows = _iter_tsv(source)
    elif format == "jsonl":
        rows = _iter_jsonl(source)
    else:
        raise InvalidParameterError(f"unknown format '{format}', expected one of {FORMATS}")
    return Dataset.from_records(rows)


def load_dataset_file(path: str, format: str = "tsv") -> Dataset:
    with open(path, "rb") as f:
        dataset = load_dataset(f, format)
    logger.info(f"Loaded '{path}': {dataset.n} people, {dataset.size} records, "
                f"{dataset.vocabulary_size} distinct items.")
    return dataset


def _dump_rows(dataset: Dataset, keep_empty: bool) -> List[Tuple[int, Optional[int]]]:
    """
    (person index, item id) rows whose first occurrences replay the person order
    and the item-id order of `dataset`.

    Each step introduces the next item through a person already written, or the
    next person through an item already written, or both through one shared row.
    Rows that introduce nothing new go last. Empty persons get an item-less row
    when `keep_empty`, otherwise they are skipped.
    """
    first_holder = [dataset.n] * dataset.vocabulary_size
    for person_index, person in enumerate(dataset.people):
        for item_id in person.items:
            first_holder[item_id] = min(first_holder[item_id], person_index)
    member_sets = [set(person.items) for person in dataset.people]

    rows: List[Tuple[int, Optional[int]]] = []
    written = set()
    next_person, next_item = 0, 0
    while next_person < dataset.n or next_item < dataset.vocabulary_size:
        if next_person < dataset.n and not dataset.people[next_person].items:
            if keep_empty:
                rows.append((next_person, None))
            next_person += 1
        elif next_item < dataset.vocabulary_size and first_holder[next_item] < next_person:
            rows.append((first_holder[next_item], next_item))
            next_item += 1
        elif next_person < dataset.n and min(dataset.people[next_person].items) < next_item:
            rows.append((next_person, min(dataset.people[next_person].items)))
            next_person += 1
        elif next_item in member_sets[next_person]:
            rows.append((next_person, next_item))
            next_person += 1
            next_item += 1
        else:
            raise DistinctCountError(f"no row order reproduces person {next_person} and item {next_item}")
        if rows and rows[-1][1] is not None:
            written.add(rows[-1])

    for person_index, person in enumerate(dataset.people):
        rows.extend((person_index, item_id) for item_id in person.items if (person_index, item_id) not in written)
    return rows


def dump_dataset(dataset: Dataset, sink: BinaryIO, format: str = "tsv") -> None:
    """
    Writes `dataset` so that load_dataset reads back the same Dataset, item-id table
    included. TSV has no way to express a person without items; JSONL keeps them.
    """
    if format not in FORMATS:
        raise InvalidParameterError(f"unknown format '{format}', expected one of {FORMATS}")
    rows = _dump_rows(dataset, keep_empty=format == "jsonl")
    if format == "tsv":
        for person_index, item_id in rows:
            sink.write(f"{dataset.people[person_index].key}\t{dataset.item_names[item_id]}\n".encode("utf-8"))
        return

    # consecutive rows of one person share a JSON line
    for person_index, group in groupby(rows, key=lambda row: row[0]):
        items = [dataset.item_names[item_id] for _, item_id in group if item_id is not None]
        line = json.dumps({"person": dataset.people[person_index].key, "items": items}, ensure_ascii=False)
        sink.write((line + "\n").encode("utf-8"))


def dataset_stats(dataset: Dataset) -> StatsReport:
    contributions = np.asarray(dataset.contributions(), dtype=np.int64)
    if contributions.size == 0:
        return StatsReport(people=0, records=0, min_per_person=0, median_per_person=0.0,
                           max_per_person=0, vocabulary=0)
    return StatsReport(
        people=dataset.n,
        records=int(contributions.sum()),
        min_per_person=int(contributions.min()),
        median_per_person=float(np.median(contributions)),
        max_per_person=int(contributions.max()),
        vocabulary=distinct_count_exact(dataset),
    )


def distinct_count_exact(dataset: Dataset) -> int:
    """DC(D) = |union of u_i|."""
    seen = np.zeros(dataset.vocabulary_size, dtype=bool)
    for person in dataset.people:
        if person.items:
            seen[list(person.items)] = True
    return int(seen.sum())
