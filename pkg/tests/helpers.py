"""Shared builders for hand-made documents and corpora."""

from __future__ import annotations

import contextlib
import io
from typing import Mapping

from layerstack import Corpus, Document


def make_doc(doc_id: str, counts: Mapping[str, int], title: str | None = None) -> Document:
    return Document(
        id=doc_id,
        title=title if title is not None else doc_id,
        token_counts=dict(counts),
        total_tokens=sum(counts.values()),
    )


def make_corpus(docs: Mapping[str, Mapping[str, int]], stop_words=frozenset()) -> Corpus:
    """Corpus from {doc_id: {term: count}}; no stop words by default so tests
    may use short artificial terms like "a" freely."""
    return Corpus(
        documents=tuple(make_doc(doc_id, counts) for doc_id, counts in docs.items()),
        stop_words=stop_words,
    )


def run_cli(main, argv: list[str]) -> tuple[int, str, str]:
    """Invoke a CLI entry point in-process, capturing stdout/stderr."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()
