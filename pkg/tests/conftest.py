"""Shared fixtures and corpus-building helpers."""

from __future__ import annotations

from typing import Optional, Sequence

import pytest

from polyclust import datasets, description, information
from polyclust.model import Category, Corpus, FeatureSpace, ObjectInstance


def bits_corpus(
    patterns: Sequence[str],
    labels: Optional[Sequence[str]] = None,
    features: Optional[Sequence[str]] = None,
) -> Corpus:
    """Corpus from bit strings like "1100", with auto feature names f0.."""
    width = len(patterns[0])
    names = list(features) if features else [f"f{i}" for i in range(width)]
    space = FeatureSpace(tuple((name, name) for name in names))
    labs = list(labels) if labels else [f"o{i}" for i in range(len(patterns))]
    objects = tuple(
        ObjectInstance(i, labs[i], tuple(int(c) for c in pattern))
        for i, pattern in enumerate(patterns)
    )
    return Corpus(space, objects)


def make_category(corpus: Corpus, ids: Sequence[int]) -> Category:
    """Category with cohesion and best member recomputed from scratch."""
    members = tuple(sorted(ids))
    cohesion = information.cohesion([corpus.objects[i] for i in members])
    provisional = Category(members, cohesion, members[0])
    return Category(members, cohesion, description.best_member(provisional, corpus))


@pytest.fixture(scope="session")
def shapes_corpus() -> Corpus:
    return datasets.shapes_corpus()


@pytest.fixture(scope="session")
def abstracts_corpus() -> Corpus:
    return datasets.abstracts_corpus()
