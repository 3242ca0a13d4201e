"""Retrieval by polymorphous rule or by seed object.

An m-of-n query admits any object possessing at least m of the n named
features, which is exactly the disjunction of all m-subsets written as
conjunctions. Seed retrieval ranks the rest of the corpus by affinity
to one chosen object. Both are pure, read-only scans.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import information
from .model import Corpus, ObjectInstance


@dataclass(frozen=True)
class PolymorphousQuery:
    """An "at least m of these features" query, resolved against a corpus."""

    m: int
    feature_labels: tuple[str, ...]
    feature_set: tuple[int, ...]

    @classmethod
    def resolve(cls, corpus: Corpus, m: int, labels: Iterable[str]) -> "PolymorphousQuery":
        names = tuple(labels)
        if not names:
            raise ValueError("query needs at least one feature label")
        indices: list[int] = []
        for name in names:
            idx = corpus.space.index_of(name)  # raises naming the label
            if idx not in indices:
                indices.append(idx)
        if not 1 <= m <= len(indices):
            raise ValueError(f"m={m} outside [1, {len(indices)}]")
        return cls(m, names, tuple(indices))

    def count_in(self, obj: ObjectInstance) -> int:
        return sum(obj.bits[f] for f in self.feature_set)


def match(query: PolymorphousQuery, obj: ObjectInstance) -> bool:
    """True when the object possesses at least m of the query features."""
    return query.count_in(obj) >= query.m


def retrieve(corpus: Corpus, query: PolymorphousQuery) -> tuple[int, ...]:
    """All matching object ids, by descending query-feature count, then id."""
    scored = [
        (query.count_in(obj), obj.id)
        for obj in corpus.objects
        if match(query, obj)
    ]
    scored.sort(key=lambda t: (-t[0], t[1]))
    return tuple(obj_id for _, obj_id in scored)


def retrieve_by_seed(
    corpus: Corpus, seed: int, k: int
) -> tuple[tuple[int, float], ...]:
    """Top-k non-seed objects by affinity to the seed, ties by id."""
    if not 0 <= seed < len(corpus):
        raise ValueError(f"seed id {seed} outside the corpus")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    seed_obj = corpus.objects[seed]
    ranked = [
        (information.affinity(seed_obj, obj), obj.id)
        for obj in corpus.objects
        if obj.id != seed
    ]
    ranked.sort(key=lambda t: (-t[0], t[1]))
    return tuple((obj_id, aff) for aff, obj_id in ranked[:k])
