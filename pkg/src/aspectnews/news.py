"""News article filtering, snippet extraction, classification and ranking.

Articles are matched to a person through partial names (whitespace tokens
of the full name and synonyms, minus particles). An article survives only
if it clears the OCR-quality dictionary ratio, falls in the person's life
span, is long enough and mentions the person often enough. Snippets are
the match sentence plus its neighbors; fragments are the display excerpts
bounded by the archive's 160-character limit.
"""
from __future__ import annotations

import datetime
import re
from typing import Iterable, Mapping, Sequence

from .classifier import NEGATIVE, TrainedAspectModel, classify
from .embedding import EmbeddingProvider, split_sentences
from .models import ClassifiedSnippet, NewsArticle, PersonProfile, Snippet
from .textnorm import (
    alpha_tokens,
    count_token,
    count_words,
    find_token,
    load_wordlist,
    normalize_ws,
)

DICTIONARY_RATIO = 0.90
MIN_WORDS = 100  # keep requires strictly more
MIN_MENTIONS = 3
MIN_SNIPPET_CHARS = 50
MAX_FRAGMENT_CHARS = 160
DEFAULT_TOP_N = 5

ELLIPSIS = "…"


def default_particles() -> frozenset[str]:
    return load_wordlist("name_particles.txt")


def partial_names(
    profile: PersonProfile, particles: Iterable[str] | None = None
) -> set[str]:
    """Name tokens that identify the person: whitespace tokens of the full
    name and synonyms, minus particles and single characters. Downstream
    matching is case-sensitive on word boundaries."""
    if not profile.full_name.strip():
        raise ValueError(f"profile {profile.person_id}: empty full name")
    stop = default_particles() if particles is None else {p.casefold() for p in particles}
    names = set()
    for phrase in (profile.full_name, *profile.synonyms):
        for token in phrase.split():
            if len(token) >= 2 and token.casefold() not in stop:
                names.add(token)
    if not names:
        raise ValueError(f"unmatchable person: {profile.person_id}")
    return names


def mention_count(text: str, names: Iterable[str]) -> int:
    return sum(count_token(text, name) for name in names)


def filter_article(
    article: NewsArticle,
    profile: PersonProfile,
    dictionary: frozenset[str] | set[str],
    names: set[str] | None = None,
) -> str | None:
    """Apply the four keep rules in order; return None to keep, or the
    first failing reason: "ocr", "lifespan" (or "bad date"), "length",
    "mentions"."""
    tokens = alpha_tokens(article.text)
    found = sum(1 for t in tokens if t.lower() in dictionary)
    ratio = found / len(tokens) if tokens else 0.0
    if ratio < DICTIONARY_RATIO:
        return "ocr"

    try:
        year = datetime.date.fromisoformat(article.date).year
    except ValueError:
        return "bad date"
    if not profile.birth_year <= year <= profile.death_year:
        return "lifespan"

    if count_words(article.text) <= MIN_WORDS:
        return "length"

    if names is None:
        names = partial_names(profile)
    if mention_count(article.text, names) < MIN_MENTIONS:
        return "mentions"
    return None


def extract_snippets(
    article: NewsArticle, profile: PersonProfile, names: set[str] | None = None
) -> list[Snippet]:
    """One snippet per sentence mentioning a partial name: the sentence
    plus its neighbors, clipped at the document edges, at least 50
    characters, exact-duplicate texts dropped after the first."""
    if names is None:
        names = partial_names(profile)
    ordered_names = sorted(names)
    sentences = split_sentences(article.text)
    snippets: list[Snippet] = []
    seen: set[str] = set()
    for i, sentence in enumerate(sentences):
        matched = None
        best_pos = None
        for name in ordered_names:
            m = find_token(sentence, name)
            if m is not None and (best_pos is None or m.start() < best_pos):
                best_pos = m.start()
                matched = name
        if matched is None:
            continue
        lo = max(0, i - 1)
        hi = min(len(sentences) - 1, i + 1)
        text = " ".join(normalize_ws(s) for s in sentences[lo : hi + 1])
        if len(text) < MIN_SNIPPET_CHARS or text in seen:
            continue
        seen.add(text)
        snippets.append(
            Snippet(
                article_id=article.article_id,
                sentence_span=(lo + 1, hi + 1),
                text=text,
                matched_token=matched,
            )
        )
    return snippets


def classify_snippets(
    snippets: Sequence[Snippet],
    models: Mapping[str, TrainedAspectModel],
    provider: EmbeddingProvider,
) -> list[ClassifiedSnippet]:
    """Run every role's classifier over every snippet; keep entries whose
    argmax is a real aspect. The same snippet may surface under several
    roles, which is intended: aspects of different roles overlap."""
    classified: list[ClassifiedSnippet] = []
    for snippet in snippets:
        for role in sorted(models):
            label, distribution = classify(models[role], snippet.text, provider)
            if label == NEGATIVE:
                continue
            classified.append(
                ClassifiedSnippet(
                    snippet=snippet,
                    role=role,
                    aspect=label,
                    probability=distribution[label],
                )
            )
    return classified


def rank_top(
    classified: Sequence[ClassifiedSnippet], n: int = DEFAULT_TOP_N
) -> dict[tuple[str, str], list[ClassifiedSnippet]]:
    """Top-n snippets per (role, aspect) by descending probability; ties
    break on (article_id, sentence_span)."""
    grouped: dict[tuple[str, str], list[ClassifiedSnippet]] = {}
    for entry in classified:
        grouped.setdefault((entry.role, entry.aspect), []).append(entry)
    return {
        key: sorted(
            entries,
            key=lambda e: (-e.probability, e.snippet.article_id, e.snippet.sentence_span),
        )[:n]
        for key, entries in sorted(grouped.items())
    }


_WORD_SPAN_RE = re.compile(r"\S+")


def make_fragment(snippet: Snippet, max_len: int = MAX_FRAGMENT_CHARS) -> str:
    """Display excerpt of at most ``max_len`` characters around the first
    occurrence of the matched token, grown to word boundaries; an ellipsis
    marks each truncated side and counts against ``max_len``."""
    text = snippet.text
    m = find_token(text, snippet.matched_token)
    if m is None:
        raise ValueError(
            f"matched token {snippet.matched_token!r} not found in snippet text"
        )
    if len(text) <= max_len:
        return text
    if len(snippet.matched_token) + 2 > max_len:
        raise ValueError("matched token does not fit the fragment budget")

    words = [w.span() for w in _WORD_SPAN_RE.finditer(text)]
    anchor = next(i for i, (s, e) in enumerate(words) if s <= m.start() < e)

    def render(i: int, j: int) -> str:
        start, end = words[i][0], words[j][1]
        lead = ELLIPSIS if start > 0 else ""
        trail = ELLIPSIS if end < len(text) else ""
        return lead + text[start:end] + trail

    if len(render(anchor, anchor)) > max_len:
        # Anchor word alone exceeds the budget; cut mid-word around the token.
        budget = max_len - 2
        center = (m.start() + m.end()) // 2
        start = max(0, min(m.start(), center - budget // 2))
        end = start + budget
        if end < m.end():
            end = m.end()
            start = end - budget
        lead = ELLIPSIS if start > 0 else ""
        trail = ELLIPSIS if end < len(text) else ""
        return lead + text[start:end] + trail

    i = j = anchor
    token_center = (m.start() + m.end()) / 2
    while True:
        left_extent = token_center - words[i][0]
        right_extent = words[j][1] - token_center
        candidates = []
        if i > 0:
            candidates.append(("left", left_extent))
        if j < len(words) - 1:
            candidates.append(("right", right_extent))
        candidates.sort(key=lambda c: c[1])  # grow the shorter side first
        grown = False
        for side, _ in candidates:
            ni, nj = (i - 1, j) if side == "left" else (i, j + 1)
            if len(render(ni, nj)) <= max_len:
                i, j = ni, nj
                grown = True
                break
        if not grown:
            break
    return render(i, j)
