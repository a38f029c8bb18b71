"""Corpus loading, validation, serialization, and summary statistics.

The corpus format is UTF-8 JSON lines, one document per line:

    {"id": "d1", "text": "...", "gold": ["...", ...],
     "tokens": [["deep", "ADJ"], ["learning", "NOUN"], ...]}

``id`` and ``text`` are required; ``gold`` (gold keyphrases, kept verbatim)
and ``tokens`` (pre-tagged input that bypasses the bundled tagger) are
optional. Blank lines are ignored. Ids must be unique within a corpus.
Gold strings are stored untouched; normalization and stemming happen only
at matching time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence

from .extraction import tokenize
from .model import Document


class CorpusFormatError(ValueError):
    """Raised for malformed corpus files; the message names the line."""


@dataclass(frozen=True)
class CorpusStats:
    """Corpus summary: document count plus the GKP / KPL / DL averages.

    gkp: average gold keyphrases per document; kpl: average gold
    keyphrase length in tokens; dl: average document length in tokens.
    """

    count: int
    gkp: float
    kpl: float
    dl: float


def _parse_record(line: str, lineno: int) -> Document:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {lineno}: invalid record: {exc}") from exc
    if not isinstance(record, dict):
        raise CorpusFormatError(f"line {lineno}: record is not an object")
    for field in ("id", "text"):
        if field not in record:
            raise CorpusFormatError(f"line {lineno}: missing field {field}")
        if not isinstance(record[field], str):
            raise CorpusFormatError(f"line {lineno}: field {field} must be a string")
    if not record["id"]:
        raise CorpusFormatError(f"line {lineno}: field id must be nonempty")

    gold = None
    if record.get("gold") is not None:
        raw_gold = record["gold"]
        if not isinstance(raw_gold, list) or not all(
                isinstance(g, str) and g for g in raw_gold):
            raise CorpusFormatError(
                f"line {lineno}: field gold must be a list of nonempty strings")
        gold = tuple(raw_gold)

    tokens = None
    if record.get("tokens") is not None:
        raw_tokens = record["tokens"]
        if not isinstance(raw_tokens, list):
            raise CorpusFormatError(f"line {lineno}: field tokens must be a list")
        pairs = []
        for i, pair in enumerate(raw_tokens):
            if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                    or not all(isinstance(p, str) for p in pair)):
                raise CorpusFormatError(
                    f"line {lineno}: tokens[{i}] must be a [text, tag] pair")
            pairs.append((pair[0], pair[1]))
        tokens = tuple(pairs)

    try:
        return Document(id=record["id"], text=record["text"],
                        tokens=tokens, gold=gold)
    except ValueError as exc:
        raise CorpusFormatError(f"line {lineno}: {exc}") from exc


def load_corpus(path) -> List[Document]:
    """Load and validate a JSON-lines corpus, preserving document order."""
    docs: List[Document] = []
    seen = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            doc = _parse_record(raw, lineno)
            if doc.id in seen:
                raise CorpusFormatError(
                    f"line {lineno}: duplicate id {doc.id!r} "
                    f"(first seen on line {seen[doc.id]})")
            seen[doc.id] = lineno
            docs.append(doc)
    return docs


def document_to_record(doc: Document) -> str:
    """Serialize one Document to its JSON-line form."""
    record = {"id": doc.id, "text": doc.text}
    if doc.gold is not None:
        record["gold"] = list(doc.gold)
    if doc.tokens is not None:
        record["tokens"] = [[t, tag] for t, tag in doc.tokens]
    return json.dumps(record, ensure_ascii=False)


def save_corpus(docs: Sequence[Document], path) -> None:
    text = "".join(document_to_record(d) + "\n" for d in docs)
    Path(path).write_text(text, encoding="utf-8")


def corpus_stats(docs: Sequence[Document]) -> CorpusStats:
    """Compute the corpus averages; rejects an empty corpus.

    Documents without gold count as zero gold keyphrases. Token counts
    (for both keyphrase length and document length) come from the
    bundled tokenizer.
    """
    if not docs:
        raise ValueError("corpus_stats needs at least one document")
    gold_counts = [len(d.gold) if d.gold is not None else 0 for d in docs]
    all_gold = [g for d in docs for g in (d.gold or ())]
    gold_lengths = [len(tokenize(g)) for g in all_gold]
    doc_lengths = [len(tokenize(d.text)) for d in docs]
    return CorpusStats(
        count=len(docs),
        gkp=sum(gold_counts) / len(docs),
        kpl=sum(gold_lengths) / len(gold_lengths) if gold_lengths else 0.0,
        dl=sum(doc_lengths) / len(docs),
    )


def render_stats(stats: CorpusStats) -> str:
    """Stats block with the GKP / KPL / DL column names."""
    return (f"count {stats.count}\n"
            f"GKP {stats.gkp:.2f}\n"
            f"KPL {stats.kpl:.2f}\n"
            f"DL {stats.dl:.2f}\n")
