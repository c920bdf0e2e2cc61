"""Person-page ingestion: occupation taxonomy, page parsing and filtering.

Native page input is JSONL (one page object per line). A best-effort
MediaWiki XML adapter is included for convenience; it extracts infobox
key-values and ``== title ==`` sections at the regex level and is
explicitly lossy.
"""
from __future__ import annotations

import html
import json
import logging
import re
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .models import PersonPage, Section
from .textnorm import load_wordlist, normalize_title, normalize_ws

logger = logging.getLogger(__name__)

#: Reserved role every person carries, with taxonomy depth 1.
PERSON_ROLE = "person"


def default_ref_stoplist() -> frozenset[str]:
    """Shipped list of reference/literature section titles."""
    return load_wordlist("ref_stoplist.txt")


@dataclass
class OccupationTaxonomy:
    """Occupation categories with parent edges and root-derived depths.

    ``depth`` holds the shortest edge-distance from any root (roots have
    depth 1), computed by BFS; cycles therefore get finite depths and
    categories unreachable from every root have no depth at all.
    """

    categories: set[str] = field(default_factory=set)
    parent_edges: dict[str, set[str]] = field(default_factory=dict)
    roots: set[str] = field(default_factory=set)
    depth: dict[str, int] = field(default_factory=dict)

    def depth_of(self, category: str) -> int | None:
        return self.depth.get(category)

    def ancestors(self, category: str) -> set[str]:
        """All categories reachable by following parent edges; cycle-safe."""
        seen: set[str] = set()
        stack = list(self.parent_edges.get(category, ()))
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(self.parent_edges.get(current, ()))
        return seen

    def recompute_depths(self) -> None:
        children: dict[str, set[str]] = {c: set() for c in self.categories}
        for child, parents in self.parent_edges.items():
            for parent in parents:
                children[parent].add(child)
        depth: dict[str, int] = {root: 1 for root in self.roots}
        queue = deque(sorted(self.roots))
        while queue:
            current = queue.popleft()
            for child in sorted(children.get(current, ())):
                if child not in depth:
                    depth[child] = depth[current] + 1
                    queue.append(child)
        self.depth = depth


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def load_taxonomy(source) -> OccupationTaxonomy:
    """Load the occupation taxonomy from JSONL records.

    Records carry ``id``, ``parents`` (possibly empty) and ``is_root``.
    A malformed record rejects the whole load with its line number;
    dangling parent references are logged and dropped. The reserved role
    ``person`` is injected (as a root) when absent.
    """
    tax = OccupationTaxonomy()
    for lineno, line in enumerate(_iter_lines(source), 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"taxonomy line {lineno}: invalid JSON ({exc})") from exc
        if not isinstance(record, dict) or "id" not in record:
            raise ValueError(f"taxonomy line {lineno}: record without an id")
        cid = record["id"]
        if not isinstance(cid, str) or not cid.strip():
            raise ValueError(f"taxonomy line {lineno}: id must be a non-empty string")
        cid = cid.strip()
        parents = record.get("parents", [])
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise ValueError(f"taxonomy line {lineno}: parents must be a list of ids")
        tax.categories.add(cid)
        tax.parent_edges.setdefault(cid, set()).update(p.strip() for p in parents)
        if record.get("is_root"):
            tax.roots.add(cid)

    for cid, parents in tax.parent_edges.items():
        dangling = parents - tax.categories
        for parent in sorted(dangling):
            logger.warning("taxonomy: dropping dangling parent %r of %r", parent, cid)
        parents -= dangling

    if PERSON_ROLE not in tax.categories:
        tax.categories.add(PERSON_ROLE)
        tax.parent_edges[PERSON_ROLE] = set()
    tax.roots.add(PERSON_ROLE)  # reserved role is always depth 1
    tax.recompute_depths()
    return tax


_LINK_RE = re.compile(r"\[\[([^\]|#]+)")


def _occupation_candidates(value) -> Iterator[str]:
    if isinstance(value, list):
        for item in value:
            yield from _occupation_candidates(item)
        return
    if not isinstance(value, str):
        return
    yield value.strip()
    for target in _LINK_RE.findall(value):
        yield target.strip()


def _resolve_occupations(infobox: dict, taxonomy: OccupationTaxonomy) -> frozenset[str]:
    found = set()
    for value in infobox.values():
        for candidate in _occupation_candidates(value):
            if candidate in taxonomy.categories:
                found.add(candidate)
    return frozenset(found)


def _page_from_dict(record: dict, taxonomy: OccupationTaxonomy) -> PersonPage | None:
    occupations = _resolve_occupations(record.get("infobox", {}), taxonomy)
    if not occupations:
        return None
    sections = tuple(
        Section(title=str(s.get("title", "")), text=str(s.get("text", "")))
        for s in record.get("sections", [])
    )
    return PersonPage(
        page_id=str(record["page_id"]),
        title=str(record.get("title", "")),
        summary=str(record.get("summary", "")),
        sections=sections,
        occupations=occupations,
    )


def parse_pages(source, taxonomy: OccupationTaxonomy, fmt: str = "jsonl") -> list[PersonPage]:
    """Parse person pages, keeping only those whose infobox links at least
    one occupation category of the taxonomy. Input order is preserved;
    unusable pages are skipped with a logged diagnostic.
    """
    if fmt == "jsonl":
        raw: Iterable[dict] = _iter_jsonl_pages(source)
    elif fmt == "xml":
        raw = pages_from_mediawiki_xml(source)
    else:
        raise ValueError(f"unknown page format: {fmt!r}")

    pages: list[PersonPage] = []
    skipped_no_role = 0
    for record in raw:
        try:
            page = _page_from_dict(record, taxonomy)
        except (KeyError, TypeError, AttributeError) as exc:
            logger.warning("skipping unparsable page: %s", exc)
            continue
        if page is None:
            skipped_no_role += 1
            continue
        pages.append(page)
    if skipped_no_role:
        logger.info("skipped %d pages without a resolvable occupation", skipped_no_role)
    return pages


def _iter_jsonl_pages(source) -> Iterator[dict]:
    for lineno, line in enumerate(_iter_lines(source), 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            logger.warning("skipping page line %d: invalid JSON (%s)", lineno, exc)
            continue
        if isinstance(record, dict):
            yield record
        else:
            logger.warning("skipping page line %d: not an object", lineno)


# -- MediaWiki XML adapter (best effort, lossy) ------------------------------

_PAGE_RE = re.compile(r"<page>(.*?)</page>", re.DOTALL)
_TITLE_RE = re.compile(r"<title>(.*?)</title>", re.DOTALL)
_ID_RE = re.compile(r"<id>(\d+)</id>")
_TEXT_RE = re.compile(r"<text[^>]*>(.*?)</text>", re.DOTALL)
_HEADING_RE = re.compile(r"^==+\s*(.*?)\s*=+\s*$", re.MULTILINE)
_TEMPLATE_RE = re.compile(r"\{\{[^{}]*\}\}")
_PIPED_LINK_RE = re.compile(r"\[\[(?:[^\]|]*)\|([^\]]+)\]\]")
_PLAIN_LINK_RE = re.compile(r"\[\[([^\]]+)\]\]")


def _strip_markup(wikitext: str) -> str:
    text = wikitext
    for _ in range(4):  # peel nested templates a few levels deep
        stripped = _TEMPLATE_RE.sub("", text)
        if stripped == text:
            break
        text = stripped
    text = _PIPED_LINK_RE.sub(r"\1", text)
    text = _PLAIN_LINK_RE.sub(r"\1", text)
    return text.replace("'''", "").replace("''", "")


def _parse_infobox(wikitext: str) -> dict:
    start = wikitext.find("{{Infobox")
    if start < 0:
        start = wikitext.find("{{infobox")
    if start < 0:
        return {}
    depth = 0
    end = start
    i = start
    while i < len(wikitext) - 1:
        pair = wikitext[i : i + 2]
        if pair == "{{":
            depth += 1
            i += 2
        elif pair == "}}":
            depth -= 1
            i += 2
            if depth == 0:
                end = i
                break
        else:
            i += 1
    body = wikitext[start:end]
    infobox: dict[str, str] = {}
    for line in body.splitlines():
        line = line.strip()
        if line.startswith("|") and "=" in line:
            key, _, value = line[1:].partition("=")
            infobox[key.strip()] = value.strip()
    return infobox


def pages_from_mediawiki_xml(source) -> Iterator[dict]:
    """Extract page dicts from a MediaWiki XML export string or path."""
    if isinstance(source, Path):
        xml = source.read_text(encoding="utf-8")
    elif isinstance(source, str) and "<page" not in source:
        xml = Path(source).read_text(encoding="utf-8")
    else:
        xml = source
    for match in _PAGE_RE.finditer(xml):
        block = match.group(1)
        title_m = _TITLE_RE.search(block)
        id_m = _ID_RE.search(block)
        text_m = _TEXT_RE.search(block)
        if not (title_m and id_m and text_m):
            continue
        wikitext = html.unescape(text_m.group(1))
        headings = list(_HEADING_RE.finditer(wikitext))
        summary_end = headings[0].start() if headings else len(wikitext)
        sections = []
        for i, heading in enumerate(headings):
            body_start = heading.end()
            body_end = headings[i + 1].start() if i + 1 < len(headings) else len(wikitext)
            sections.append(
                {
                    "title": heading.group(1),
                    "text": normalize_ws(_strip_markup(wikitext[body_start:body_end])),
                }
            )
        yield {
            "page_id": id_m.group(1),
            "title": html.unescape(title_m.group(1)),
            "summary": normalize_ws(_strip_markup(wikitext[:summary_end])),
            "sections": sections,
            "infobox": _parse_infobox(wikitext),
        }


# -- Filtering and role expansion --------------------------------------------

MIN_SUMMARY_CHARS = 150
MIN_SECTION_CHARS = 100
MIN_SECTIONS = 3


def filter_pages(
    pages: list[PersonPage], ref_stoplist: Iterable[str] | None = None
) -> list[PersonPage]:
    """Apply the page-quality rules, in order: drop reference/literature
    sections and sections under 100 characters, then drop pages with a
    summary under 150 characters or fewer than 3 remaining sections.
    Character counts are over whitespace-normalized text. Idempotent.
    """
    if ref_stoplist is None:
        stop = default_ref_stoplist()
    else:
        stop = {normalize_title(t) for t in ref_stoplist}

    kept: list[PersonPage] = []
    for page in pages:
        sections = tuple(
            s
            for s in page.sections
            if normalize_title(s.title) not in stop
            and len(normalize_ws(s.text)) >= MIN_SECTION_CHARS
        )
        if len(normalize_ws(page.summary)) < MIN_SUMMARY_CHARS:
            continue
        if len(sections) < MIN_SECTIONS:
            continue
        kept.append(replace(page, sections=sections))
    return kept


def expand_roles(assigned: Iterable[str], taxonomy: OccupationTaxonomy) -> frozenset[str]:
    """Union of the assigned categories, all their taxonomy ancestors and
    the reserved role ``person``. Unknown ids are kept as-is (ancestors
    skipped) with a logged warning.
    """
    roles: set[str] = {PERSON_ROLE}
    for category in assigned:
        roles.add(category)
        if category not in taxonomy.categories:
            logger.warning("expand_roles: unknown category %r kept without ancestors", category)
            continue
        roles |= taxonomy.ancestors(category)
    return frozenset(roles)
