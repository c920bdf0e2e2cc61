"""Sentence splitting and text embedding behind a provider interface.

Two providers are shipped:

* :class:`TrigramHashEmbedder` — the deterministic reference embedder.
  It lowercases the whitespace-normalized text, extracts all character
  trigrams (texts shorter than three characters contribute themselves as
  a single token), hashes every token with FNV-1a 32-bit into one of
  ``dimension`` buckets, counts, and L2-normalizes. The hash is fixed and
  documented so embeddings are bit-reproducible across platforms.
* :class:`FileBackedEmbedder` — looks vectors up in a precomputed
  JSONL map (``{"text": ..., "vector": [...]}``), exact match after
  whitespace normalization. This is the hook for plugging in vectors
  from a real sentence-transformer without adding a model dependency.

Both are interchangeable: downstream modules only rely on ``embed``,
``name`` and ``dimension``. Empty or whitespace-only text embeds to the
zero vector; cosine against a zero vector is defined as 0 elsewhere.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Protocol, runtime_checkable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .textnorm import load_wordlist, normalize_ws
from .validation import as_vector, check_texts

DEFAULT_DIMENSION = 256

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193


def fnv1a32(data: bytes) -> int:
    """FNV-1a 32-bit hash; the bucket assignment contract of the reference
    embedder, kept dependency-free on purpose."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


def default_abbreviations() -> frozenset[str]:
    """Dutch sentence-split guard list shipped with the package."""
    return load_wordlist("abbreviations_nl.txt")


_TERMINALS = ".!?"


def split_sentences(text: str, abbreviations: Iterable[str] | None = None) -> list[str]:
    """Split text into sentences.

    A boundary is a run of ``.``/``!``/``?`` followed by whitespace and an
    uppercase letter or digit, unless the whitespace-delimited token ending
    at a ``.`` is on the abbreviation guard list. Non-whitespace content is
    preserved exactly; each sentence is stripped.
    """
    if abbreviations is None:
        guard = default_abbreviations()
    else:
        guard = {a.casefold() for a in abbreviations}

    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        first = text[i]
        j = i + 1
        while j < n and text[j] in _TERMINALS:
            j += 1
        k = j
        while k < n and text[k].isspace():
            k += 1
        if k > j and k < n and (text[k].isupper() or text[k].isdigit()):
            # Token that ends at the terminal run, e.g. "Dhr." in "Dhr. Frank".
            t = j
            while t > start and not text[t - 1].isspace():
                t -= 1
            token = text[t:j]
            if not (first == "." and token.casefold() in guard):
                sentence = text[start:j].strip()
                if sentence:
                    sentences.append(sentence)
                start = k
        i = j
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


@runtime_checkable
class EmbeddingProvider(Protocol):
    """Deterministic text-to-vector mapping: same text, same vector."""

    @property
    def name(self) -> str: ...

    @property
    def dimension(self) -> int: ...

    def embed(self, text: str) -> np.ndarray: ...


class TrigramHashEmbedder(BaseEstimator, TransformerMixin):
    """Reference embedder: hashed character-trigram counts, L2-normalized.

    Stateless; ``fit`` exists only so the embedder composes as a sklearn
    transformer over lists of raw texts.
    """

    def __init__(self, dimension: int = DEFAULT_DIMENSION):
        self.dimension = dimension

    @property
    def name(self) -> str:
        return f"trigram-fnv1a-{self.dimension}"

    def _tokens(self, text: str) -> list[str]:
        s = normalize_ws(text).lower()
        if not s:
            return []
        if len(s) < 3:
            return [s]
        return [s[i : i + 3] for i in range(len(s) - 2)]

    def embed(self, text: str) -> np.ndarray:
        counts = np.zeros(self.dimension, dtype=np.float64)
        for token in self._tokens(text):
            counts[fnv1a32(token.encode("utf-8")) % self.dimension] += 1.0
        norm = np.linalg.norm(counts)
        if norm > 0.0:
            counts /= norm
        return counts

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        texts = check_texts(X)
        return np.stack([self.embed(t) for t in texts]) if texts else np.empty(
            (0, self.dimension)
        )


class FileBackedEmbedder(BaseEstimator, TransformerMixin):
    """Provider backed by a precomputed text-to-vector JSONL file.

    Lookup is exact-match after whitespace normalization; a missing text
    raises ``KeyError`` so silent drift between providers cannot happen.
    """

    def __init__(self, path: str | Path):
        self.path = path
        vectors: dict[str, np.ndarray] = {}
        dim: int | None = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    vec = as_vector(record["vector"], dim)
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"{path} line {lineno}: {exc}") from exc
                if dim is None:
                    dim = vec.shape[0]
                vectors[normalize_ws(record["text"])] = vec
        if dim is None:
            raise ValueError(f"{path}: empty vector file")
        self._vectors = vectors
        self._dimension = dim

    @property
    def name(self) -> str:
        return f"file:{Path(self.path).name}"

    @property
    def dimension(self) -> int:
        return self._dimension

    def embed(self, text: str) -> np.ndarray:
        key = normalize_ws(text)
        if not key:
            return np.zeros(self._dimension, dtype=np.float64)
        try:
            return self._vectors[key]
        except KeyError:
            raise KeyError(f"no precomputed vector for text: {key[:80]!r}") from None

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        texts = check_texts(X)
        return np.stack([self.embed(t) for t in texts]) if texts else np.empty(
            (0, self._dimension)
        )


def embed_section(text: str, provider: EmbeddingProvider) -> np.ndarray:
    """Mean of the sentence vectors of ``text``; zero vector when empty."""
    sentences = split_sentences(text)
    if not sentences:
        return np.zeros(provider.dimension, dtype=np.float64)
    return np.mean([provider.embed(s) for s in sentences], axis=0)


def title_group_vector(sections: list[str], provider: EmbeddingProvider) -> np.ndarray:
    """Mean section vector over all sections sharing one title."""
    if not sections:
        raise ValueError("empty title group")
    return np.mean([embed_section(s, provider) for s in sections], axis=0)
