"""Extractive multi-snippet summaries per (person, role, aspect).

Summaries are built only from verbatim snippet sentences, which rules out
hallucinated content by construction. Candidate sentences come from the
most probable snippets; greedy maximal-marginal-relevance selection
balances centrality against redundancy with what was already picked.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import cosine
from .embedding import EmbeddingProvider, split_sentences
from .models import ClassifiedSnippet
from .readability import ReadabilityReport, report

DEFAULT_K = 20
DEFAULT_MAX_SENTENCES = 12
DEFAULT_LAMBDA = 0.7
MIN_SNIPPETS = 5


@dataclass(frozen=True)
class SummarySentence:
    text: str
    snippet_id: str


@dataclass(frozen=True)
class AspectSummary:
    person_id: str
    role: str
    aspect: str
    sentences: tuple[SummarySentence, ...]
    metrics: ReadabilityReport
    k_used: int

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences)

    def to_dict(self) -> dict:
        return {
            "person_id": self.person_id,
            "role": self.role,
            "aspect": self.aspect,
            "sentences": [{"text": s.text, "snippet_id": s.snippet_id} for s in self.sentences],
            "metrics": self.metrics.to_dict(),
            "k_used": self.k_used,
        }


def summarize(
    snippets: Sequence[ClassifiedSnippet],
    provider: EmbeddingProvider,
    person_id: str = "",
    k: int = DEFAULT_K,
    max_sentences: int = DEFAULT_MAX_SENTENCES,
    mmr_lambda: float = DEFAULT_LAMBDA,
    familiar_words: frozenset[str] | set[str] = frozenset(),
) -> AspectSummary | None:
    """Summarize one (role, aspect) group of classified snippets.

    Returns None below 5 snippets (not enough information to show). The
    k most probable snippets provide the candidate sentences; duplicates
    are dropped after their first occurrence. Greedy MMR picks up to
    ``max_sentences``:

        score(s) = lambda * cos(v_s, centroid)
                   - (1 - lambda) * max over selected t of cos(v_s, v_t)

    with the centroid being the mean vector of all candidate sentences.
    Selected sentences come out in original (snippet, sentence) order.
    """
    if len(snippets) < MIN_SNIPPETS:
        return None
    candidates = sorted(
        snippets,
        key=lambda e: (-e.probability, e.snippet.article_id, e.snippet.sentence_span),
    )[:k]
    role = candidates[0].role
    aspect = candidates[0].aspect

    texts: list[str] = []
    sources: list[str] = []
    seen: set[str] = set()
    for entry in candidates:
        for sentence in split_sentences(entry.snippet.text):
            if sentence in seen:
                continue
            seen.add(sentence)
            texts.append(sentence)
            sources.append(entry.snippet.snippet_id)
    if not texts:
        return None

    vectors = [provider.embed(t) for t in texts]
    centroid = np.mean(vectors, axis=0)
    relevance = [cosine(v, centroid) for v in vectors]

    selected: list[int] = []
    remaining = list(range(len(texts)))
    while remaining and len(selected) < max_sentences:
        best = None
        best_score = -np.inf
        for idx in remaining:
            redundancy = (
                max(cosine(vectors[idx], vectors[j]) for j in selected) if selected else 0.0
            )
            score = mmr_lambda * relevance[idx] - (1.0 - mmr_lambda) * redundancy
            if score > best_score:
                best_score = score
                best = idx
        selected.append(best)
        remaining.remove(best)

    selected.sort()  # candidate construction order == (snippet, sentence) order
    sentences = tuple(SummarySentence(text=texts[i], snippet_id=sources[i]) for i in selected)
    summary_text = " ".join(s.text for s in sentences)
    metrics = report(summary_text, familiar_words, sentence_count=len(sentences))
    return AspectSummary(
        person_id=person_id,
        role=role,
        aspect=aspect,
        sentences=sentences,
        metrics=metrics,
        k_used=len(candidates),
    )
