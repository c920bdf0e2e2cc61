"""Shared text normalization and tokenization rules.

All character-count thresholds in the pipeline are measured on
whitespace-normalized text (runs of whitespace collapsed to one space,
ends stripped), so every module must go through these helpers instead
of rolling its own.
"""
from __future__ import annotations

import re
from importlib import resources

# Maximal runs of letters (no digits, no underscore); used wherever the
# pipeline needs "alphabetic tokens".
_ALPHA_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


def load_wordlist(name: str) -> frozenset[str]:
    """Read a shipped word list (one case-folded entry per line, ``#``
    comments ignored) from the package data directory."""
    text = resources.files("aspectnews").joinpath(f"data/{name}").read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line.casefold())
    return frozenset(entries)


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def normalize_title(title: str) -> str:
    """Canonical form under which section titles are considered equal."""
    return normalize_ws(title).casefold()


def alpha_tokens(text: str) -> list[str]:
    """All maximal alphabetic runs, in order."""
    return _ALPHA_RE.findall(text)


def count_words(text: str) -> int:
    """Whitespace-separated token count."""
    return len(text.split())


def token_pattern(token: str) -> re.Pattern[str]:
    """Case-sensitive word-boundary pattern for a name token."""
    return re.compile(r"(?<!\w)" + re.escape(token) + r"(?!\w)")


def find_token(text: str, token: str) -> re.Match[str] | None:
    """First word-boundary occurrence of ``token`` in ``text``."""
    return token_pattern(token).search(text)


def count_token(text: str, token: str) -> int:
    """Number of word-boundary occurrences of ``token`` in ``text``."""
    return len(token_pattern(token).findall(text))
