"""Bundled demonstration corpora.

shapes: eight objects enumerating every {shape, symmetry, color}
combination of two values each, one-hot encoded to six features.
abstracts: seven keyword-indexed psychological dissertation abstracts
in refer format.
"""

from __future__ import annotations

from importlib import resources

from .dataio import RefRecord, Table, one_hot_encode, parse_csv, parse_refer
from .model import Corpus


def _read(name: str) -> str:
    return (resources.files("polyclust") / "data" / name).read_text(encoding="utf-8")


def abstracts_text() -> str:
    return _read("abstracts.ref")


def abstracts_records() -> tuple[RefRecord, ...]:
    return parse_refer(abstracts_text())


def abstracts_corpus(with_title_tokens: bool = False) -> Corpus:
    return one_hot_encode(abstracts_records(), with_title_tokens=with_title_tokens)


def shapes_text() -> str:
    return _read("shapes.csv")


def shapes_table() -> Table:
    return parse_csv(shapes_text())


def shapes_corpus() -> Corpus:
    return one_hot_encode(shapes_table())
