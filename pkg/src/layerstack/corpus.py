"""Corpus ingestion, tokenization, and term-frequency products.

Documents are plain-text UTF-8 files (or a JSON-lines manifest pointing at
them). Tokenization is deliberately simple and deterministic: lowercase,
split on anything non-alphanumeric, drop purely numeric tokens, drop stop
words. Everything downstream (entropy, correlation, clustering) consumes the
per-document term counts built here.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from math import log10
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .stopwords import ENGLISH_STOP_WORDS

# word characters minus underscore, applied to lowercased text
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenization and stop-word policy."""

    stop_words: frozenset[str] = ENGLISH_STOP_WORDS

    @classmethod
    def from_stop_words_file(cls, path: str | Path) -> "TokenizerConfig":
        return cls(stop_words=load_stop_words(path))


DEFAULT_CONFIG = TokenizerConfig()


def load_stop_words(path: str | Path) -> frozenset[str]:
    """Read a stop-word override file: one term per line, UTF-8, blank lines
    ignored. Terms are lowercased so the file may be written in any case."""
    text = _read_text(Path(path))
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


def tokenize(text: str, config: TokenizerConfig = DEFAULT_CONFIG) -> list[str]:
    """Split ``text`` into terms: lowercase, alphanumeric runs only, purely
    numeric tokens and stop words removed, original order preserved."""
    stop = config.stop_words
    return [
        tok
        for tok in _WORD_RE.findall(text.lower())
        if not tok.isdigit() and tok not in stop
    ]


def term_frequencies(tokens: Iterable[str]) -> Counter[str]:
    """Count each distinct term; the counts sum to the number of tokens."""
    return Counter(tokens)


@dataclass(frozen=True)
class Document:
    """One ingested text with its term-count profile."""

    id: str
    title: str
    token_counts: Mapping[str, int]
    total_tokens: int

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")
        total = 0
        for term, count in self.token_counts.items():
            if not term or term != term.lower():
                raise ValueError(f"invalid term {term!r} in document {self.id!r}")
            if count < 0:
                raise ValueError(f"negative count for term {term!r} in {self.id!r}")
            total += count
        if total != self.total_tokens:
            raise ValueError(
                f"total_tokens {self.total_tokens} != sum of counts {total} in {self.id!r}"
            )

    @classmethod
    def from_text(
        cls,
        doc_id: str,
        title: str,
        text: str,
        config: TokenizerConfig = DEFAULT_CONFIG,
    ) -> "Document":
        counts = term_frequencies(tokenize(text, config))
        return cls(
            id=doc_id,
            title=title,
            token_counts=dict(counts),
            total_tokens=sum(counts.values()),
        )

    def proportions(self) -> dict[str, float]:
        """Term relative frequencies within this document."""
        total = self.total_tokens
        return {t: c / total for t, c in self.token_counts.items() if c > 0}


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of documents."""

    documents: tuple[Document, ...]
    stop_words: frozenset[str] = ENGLISH_STOP_WORDS
    vocabulary: frozenset[str] = field(init=False)

    def __post_init__(self) -> None:
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate document ids: {dupes}")
        vocab: set[str] = set()
        for doc in self.documents:
            overlap = self.stop_words.intersection(doc.token_counts)
            if overlap:
                raise ValueError(
                    f"stop words present in document {doc.id!r}: {sorted(overlap)[:5]}"
                )
            vocab.update(t for t, c in doc.token_counts.items() if c > 0)
        object.__setattr__(self, "vocabulary", frozenset(vocab))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def get(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)

    def __contains__(self, doc_id: str) -> bool:
        return any(d.id == doc_id for d in self.documents)

    def subset(self, doc_ids: Iterable[str]) -> "Corpus":
        """Restrict to the given ids, keeping lexicographic-id order."""
        wanted = set(doc_ids)
        missing = wanted - {d.id for d in self.documents}
        if missing:
            raise KeyError(f"ids not in corpus: {sorted(missing)}")
        kept = tuple(d for d in self.documents if d.id in wanted)
        return Corpus(documents=kept, stop_words=self.stop_words)

    def total_counts(self) -> Counter[str]:
        """Aggregate term counts over every document."""
        total: Counter[str] = Counter()
        for doc in self.documents:
            total.update(doc.token_counts)
        return +total

    def leave_one_out_counts(self, doc_id: str) -> Counter[str]:
        """Aggregate term counts over every document except ``doc_id``."""
        held_out = self.get(doc_id)
        rest = self.total_counts()
        rest.subtract(held_out.token_counts)
        return +rest  # drops zero and negative entries


@dataclass(frozen=True)
class ScatterPoint:
    """One term's relative frequency in a document versus a reference body,
    with the signed log10 ratio between the two."""

    term: str
    doc_proportion: float
    reference_proportion: float
    deviation: float


def top_k_terms(doc: Document, k: int) -> list[tuple[str, int]]:
    """The ``k`` most frequent terms, descending by count, ties broken by
    ascending term."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranked = sorted(doc.token_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def frequency_scatter(
    doc: Document, reference: Mapping[str, int]
) -> list[ScatterPoint]:
    """Compare a document's term proportions against a reference count table.

    Emits one point per term present on both sides (terms absent from either
    side would have an infinite log ratio and are skipped), ordered
    lexicographically by term. ``deviation`` is
    log10(doc_proportion) - log10(reference_proportion): positive means the
    term is relatively more frequent in the document than in the reference.
    """
    if doc.total_tokens == 0:
        raise ValueError(f"empty document {doc.id!r}")
    ref_total = sum(reference.values())
    if ref_total == 0:
        raise ValueError("empty reference")
    points = []
    for term in sorted(doc.token_counts):
        doc_count = doc.token_counts[term]
        ref_count = reference.get(term, 0)
        if doc_count <= 0 or ref_count <= 0:
            continue
        dp = doc_count / doc.total_tokens
        rp = ref_count / ref_total
        points.append(
            ScatterPoint(
                term=term,
                doc_proportion=dp,
                reference_proportion=rp,
                deviation=log10(dp) - log10(rp),
            )
        )
    return points


def resolve_sources(source: str | Path) -> list[tuple[str, str, Path]]:
    """Resolve a corpus source into (id, title, path) triples, sorted by id.

    A directory yields one entry per ``*.txt`` file (id = title = file stem);
    a file is read as a JSON-lines manifest with records
    ``{"id": ..., "title": ..., "path": ...}`` where relative paths are taken
    relative to the manifest's directory.
    """
    src = Path(source)
    if src.is_dir():
        entries = [(p.stem, p.stem, p) for p in src.glob("*.txt")]
        if not entries:
            raise ValueError(f"empty corpus: no .txt files in {src}")
    elif src.is_file():
        entries = []
        for line_no, line in enumerate(_read_text(src).splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"bad manifest line {line_no} in {src}: {exc}") from exc
            try:
                doc_id, title, path = record["id"], record["title"], record["path"]
            except (TypeError, KeyError) as exc:
                raise ValueError(
                    f"manifest line {line_no} in {src} needs id/title/path"
                ) from exc
            doc_path = Path(path)
            if not doc_path.is_absolute():
                doc_path = src.parent / doc_path
            entries.append((str(doc_id), str(title), doc_path))
        if not entries:
            raise ValueError(f"empty corpus: no records in manifest {src}")
    else:
        raise ValueError(f"corpus source not found: {src}")
    ids = [e[0] for e in entries]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate document ids in source: {dupes}")
    return sorted(entries, key=lambda e: e[0])


def ingest_corpus(
    source: str | Path, config: TokenizerConfig = DEFAULT_CONFIG
) -> Corpus:
    """Build a :class:`Corpus` from a directory of ``.txt`` files or a
    JSON-lines manifest. Document order is lexicographic by id; ingestion is
    fully deterministic for fixed inputs and config."""
    docs = tuple(
        Document.from_text(doc_id, title, _read_text(path), config)
        for doc_id, title, path in resolve_sources(source)
    )
    return Corpus(documents=docs, stop_words=config.stop_words)


def _read_text(path: Path) -> str:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValueError(f"{path} is not valid UTF-8: {exc}") from exc
