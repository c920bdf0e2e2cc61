"""Record types shared across pipeline stages.

These are plain immutable carriers; behavior lives in the modules that
produce them. JSON field names match the on-disk interchange formats.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Section:
    title: str
    text: str


@dataclass(frozen=True)
class PersonPage:
    """A Wikipedia-derived person record."""

    page_id: str
    title: str
    summary: str
    sections: tuple[Section, ...]
    occupations: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "page_id": self.page_id,
            "title": self.title,
            "summary": self.summary,
            "sections": [{"title": s.title, "text": s.text} for s in self.sections],
            "occupations": sorted(self.occupations),
        }


@dataclass(frozen=True)
class PersonProfile:
    """A person whose news coverage the pipeline structures."""

    person_id: str
    full_name: str
    synonyms: tuple[str, ...]
    birth_year: int
    death_year: int
    roles: frozenset[str]

    def __post_init__(self) -> None:
        if self.birth_year > self.death_year:
            raise ValueError(
                f"profile {self.person_id}: birth year {self.birth_year} "
                f"after death year {self.death_year}"
            )

    @classmethod
    def from_dict(cls, d: dict) -> "PersonProfile":
        return cls(
            person_id=d["person_id"],
            full_name=d["full_name"],
            synonyms=tuple(d.get("synonyms", [])),
            birth_year=int(d["birth_year"]),
            death_year=int(d["death_year"]),
            roles=frozenset(d.get("roles", [])),
        )

    def to_dict(self) -> dict:
        return {
            "person_id": self.person_id,
            "full_name": self.full_name,
            "synonyms": list(self.synonyms),
            "birth_year": self.birth_year,
            "death_year": self.death_year,
            "roles": sorted(self.roles),
        }


@dataclass(frozen=True)
class NewsArticle:
    """One digitized newspaper article. ``date`` stays an ISO-8601 string;
    it is parsed (and may be rejected) by the article filter."""

    article_id: str
    title: str
    text: str
    date: str
    newspaper: str
    external_url: str

    @classmethod
    def from_dict(cls, d: dict) -> "NewsArticle":
        return cls(
            article_id=d["article_id"],
            title=d.get("title", ""),
            text=d["text"],
            date=d["date"],
            newspaper=d.get("newspaper", ""),
            external_url=d.get("external_url", ""),
        )


@dataclass(frozen=True)
class Snippet:
    """A name-anchored excerpt of at most three consecutive sentences.

    ``sentence_span`` is (start, end), 1-indexed and inclusive, into the
    article's sentence list; the anchor sentence contains ``matched_token``.
    """

    article_id: str
    sentence_span: tuple[int, int]
    text: str
    matched_token: str

    @property
    def snippet_id(self) -> str:
        lo, hi = self.sentence_span
        return f"{self.article_id}:{lo}-{hi}"


@dataclass(frozen=True)
class ClassifiedSnippet:
    snippet: Snippet
    role: str
    aspect: str
    probability: float
