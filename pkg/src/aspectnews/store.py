"""End-to-end corpus build and the immutable on-disk store.

A build runs ingest, title clustering, aspect mining, per-role training,
news processing and summarization, then writes one directory:

    manifest.json      build config echo, counts, content digest
    clusters.json      section-title clusters (id, members, labels)
    models/<role>.json trained per-role classifiers with metrics
    persons/<id>.json  profile, roles, ranked snippets, summaries
    rejects.jsonl      filtered-out (article, person) pairs with reasons

Stores are written once and never mutated; rebuilding means a new
directory. Identical inputs and seed produce byte-identical stores.
"""
from __future__ import annotations

import hashlib
import json
import logging
import re
import shutil
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from . import __version__
from .classifier import TrainedAspectModel, build_training_set, train
from .clustering import cluster_titles, member_index
from .embedding import (
    DEFAULT_DIMENSION,
    EmbeddingProvider,
    FileBackedEmbedder,
    TrigramHashEmbedder,
    title_group_vector,
)
from .mining import (
    DEFAULT_ABS_SUPPORT,
    DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_ASPECTS,
    DEFAULT_REL_SUPPORT,
    count_supports,
    mine_aspects,
    select_roles,
    strip_role_suffix,
)
from .models import NewsArticle, PersonProfile
from .news import (
    DEFAULT_TOP_N,
    MAX_FRAGMENT_CHARS,
    classify_snippets,
    extract_snippets,
    filter_article,
    make_fragment,
    partial_names,
    rank_top,
)
from .summarize import DEFAULT_K, DEFAULT_LAMBDA, DEFAULT_MAX_SENTENCES, summarize
from .textnorm import normalize_title
from .wiki import expand_roles, filter_pages, load_taxonomy, parse_pages

logger = logging.getLogger(__name__)

_CONFIG_KEYS = {
    "pages",
    "taxonomy",
    "profiles",
    "articles",
    "dictionary",
    "familiar_words",
    "ref_stoplist",
    "particles",
    "vectors",
    "pages_format",
    "sim_threshold",
    "abs_support",
    "rel_support",
    "min_title_freq",
    "min_aspects",
    "max_depth",
    "k",
    "top_n",
    "max_fragment",
    "max_summary_sentences",
    "mmr_lambda",
    "tau_grid",
    "dimension",
    "seed",
}


@dataclass
class BuildConfig:
    pages: str
    taxonomy: str
    profiles: str
    articles: str
    dictionary: str
    familiar_words: str | None = None
    ref_stoplist: str | None = None
    particles: str | None = None
    vectors: str | None = None  # precomputed text->vector JSONL; else reference embedder
    pages_format: str = "jsonl"
    sim_threshold: float = 0.95
    abs_support: int = DEFAULT_ABS_SUPPORT
    rel_support: float = DEFAULT_REL_SUPPORT
    min_title_freq: int = 100
    min_aspects: int = DEFAULT_MIN_ASPECTS
    max_depth: int = DEFAULT_MAX_DEPTH
    k: int = DEFAULT_K
    top_n: int = DEFAULT_TOP_N
    max_fragment: int = MAX_FRAGMENT_CHARS
    max_summary_sentences: int = DEFAULT_MAX_SENTENCES
    mmr_lambda: float = DEFAULT_LAMBDA
    tau_grid: tuple[float, ...] = (1.0, 5.0, 10.0, 50.0)
    dimension: int = DEFAULT_DIMENSION
    seed: int = 0

    @classmethod
    def from_file(cls, path: str | Path, base_dir: str | Path | None = None) -> "BuildConfig":
        """Read a JSON config; relative input paths resolve against the
        config file's directory unless ``base_dir`` overrides it."""
        path = Path(path)
        raw = json.loads(path.read_text(encoding="utf-8"))
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {unknown}")
        missing = sorted(
            k for k in ("pages", "taxonomy", "profiles", "articles", "dictionary") if k not in raw
        )
        if missing:
            raise ValueError(f"config misses required keys: {missing}")
        base = Path(base_dir) if base_dir is not None else path.parent
        for key in (
            "pages",
            "taxonomy",
            "profiles",
            "articles",
            "dictionary",
            "familiar_words",
            "ref_stoplist",
            "particles",
            "vectors",
        ):
            if raw.get(key):
                raw[key] = str((base / raw[key]).resolve())
        if "tau_grid" in raw:
            raw["tau_grid"] = tuple(float(t) for t in raw["tau_grid"])
        return cls(**raw)

    def echo(self) -> dict:
        """Manifest echo: settings and input file names (not full paths,
        which would make otherwise identical builds differ)."""
        d = {
            "pages_format": self.pages_format,
            "sim_threshold": self.sim_threshold,
            "abs_support": self.abs_support,
            "rel_support": self.rel_support,
            "min_title_freq": self.min_title_freq,
            "min_aspects": self.min_aspects,
            "max_depth": self.max_depth,
            "k": self.k,
            "top_n": self.top_n,
            "max_fragment": self.max_fragment,
            "max_summary_sentences": self.max_summary_sentences,
            "mmr_lambda": self.mmr_lambda,
            "tau_grid": list(self.tau_grid),
            "dimension": self.dimension,
            "seed": self.seed,
            "inputs": {
                key: Path(value).name if value else None
                for key, value in (
                    ("pages", self.pages),
                    ("taxonomy", self.taxonomy),
                    ("profiles", self.profiles),
                    ("articles", self.articles),
                    ("dictionary", self.dictionary),
                    ("familiar_words", self.familiar_words),
                    ("vectors", self.vectors),
                )
            },
        }
        return d


class BuildError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"build failed at stage {stage!r}: {cause}")
        self.stage = stage
        self.cause = cause


class StoreIntegrityError(RuntimeError):
    pass


def _slug(name: str) -> str:
    return re.sub(r"[^\w.\- ]", "_", name).strip() or "unnamed"


def _dump_json(path: Path, payload) -> None:
    path.write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def _load_lexicon(path: str) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


def _make_provider(config: BuildConfig) -> EmbeddingProvider:
    if config.vectors:
        return FileBackedEmbedder(config.vectors)
    return TrigramHashEmbedder(dimension=config.dimension)


def canonical_roles(assigned: Iterable[str], taxonomy) -> frozenset[str]:
    """Expanded roles with nationality/occupation suffixes stripped."""
    return frozenset(strip_role_suffix(r) for r in expand_roles(assigned, taxonomy))


@dataclass
class CorpusStore:
    """In-memory view of a built store directory."""

    root: Path
    manifest: dict
    clusters: list[dict]
    models: dict[str, dict]
    persons: dict[str, dict]

    @staticmethod
    def content_digest(root: Path) -> str:
        """SHA-256 over every store file except the manifest, in sorted
        relative-path order."""
        h = hashlib.sha256()
        for file in sorted(
            p for p in Path(root).rglob("*") if p.is_file() and p.name != "manifest.json"
        ):
            h.update(str(file.relative_to(root)).encode("utf-8"))
            h.update(b"\0")
            h.update(file.read_bytes())
        return h.hexdigest()

    @classmethod
    def load(cls, root: str | Path, verify: bool = True) -> "CorpusStore":
        root = Path(root)
        manifest_path = root / "manifest.json"
        if not manifest_path.is_file():
            raise FileNotFoundError(f"not a corpus store: {root} has no manifest.json")
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        if verify:
            actual = cls.content_digest(root)
            if actual != manifest.get("digest"):
                raise StoreIntegrityError(
                    f"store digest mismatch in {root}: manifest says "
                    f"{manifest.get('digest')}, content is {actual}"
                )
        clusters = json.loads((root / "clusters.json").read_text(encoding="utf-8"))
        models = {
            role: json.loads((root / rel).read_text(encoding="utf-8"))
            for role, rel in manifest["files"]["models"].items()
        }
        persons = {
            pid: json.loads((root / rel).read_text(encoding="utf-8"))
            for pid, rel in manifest["files"]["persons"].items()
        }
        return cls(root=root, manifest=manifest, clusters=clusters, models=models, persons=persons)

    def recount(self) -> dict:
        """Recompute the manifest counts from loaded content."""
        snippets = 0
        summaries = 0
        for doc in self.persons.values():
            for role in doc["roles"]:
                for aspect in role["aspects"]:
                    snippets += len(aspect["snippets"])
                    if aspect["summary"] is not None:
                        summaries += 1
        return {
            "clusters": len(self.clusters),
            "models": len(self.models),
            "persons": len(self.persons),
            "snippets": snippets,
            "summaries": summaries,
        }


def build_corpus(config: BuildConfig, out_dir: str | Path) -> CorpusStore:
    """Run the full pipeline and write an immutable store to ``out_dir``.

    Any stage error aborts the build with the stage name and removes the
    partial output directory.
    """
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise FileExistsError(f"output directory {out} exists and is not empty")
    out.mkdir(parents=True, exist_ok=True)

    stage = "init"
    try:
        stage = "load-taxonomy"
        taxonomy = load_taxonomy(config.taxonomy)

        stage = "parse-pages"
        pages = parse_pages(config.pages, taxonomy, fmt=config.pages_format)

        stage = "filter-pages"
        stoplist = _load_lexicon(config.ref_stoplist) if config.ref_stoplist else None
        pages = filter_pages(pages, stoplist)

        stage = "load-profiles"
        raw_profiles = json.loads(Path(config.profiles).read_text(encoding="utf-8"))
        profiles = [PersonProfile.from_dict(d) for d in raw_profiles]
        if len({p.person_id for p in profiles}) != len(profiles):
            raise ValueError("duplicate person_id in profiles")
        profiles = [
            replace(p, roles=canonical_roles(p.roles, taxonomy)) for p in profiles
        ]
        profiles.sort(key=lambda p: p.person_id)

        stage = "embed-titles"
        provider = _make_provider(config)
        texts_by_title: dict[str, list[str]] = {}
        pages_by_title: dict[str, set[str]] = {}
        for page in pages:
            for section in page.sections:
                title = normalize_title(section.title)
                texts_by_title.setdefault(title, []).append(section.text)
                pages_by_title.setdefault(title, set()).add(page.page_id)
        frequent = sorted(
            t for t, ids in pages_by_title.items() if len(ids) >= config.min_title_freq
        )
        title_vectors = {t: title_group_vector(texts_by_title[t], provider) for t in frequent}
        title_counts = {t: len(texts_by_title[t]) for t in frequent}

        stage = "cluster-titles"
        clusters = cluster_titles(title_vectors, config.sim_threshold, title_counts)
        section_clusters = member_index(clusters)

        stage = "mine-aspects"
        roles_by_page = {
            page.page_id: canonical_roles(page.occupations, taxonomy) for page in pages
        }
        all_roles = sorted(set().union(*roles_by_page.values())) if roles_by_page else []
        schemas = {}
        for role in all_roles:
            supports = count_supports(pages, clusters, role, roles_by_page)
            schemas[role] = mine_aspects(role, supports, config.abs_support, config.rel_support)
        selected = select_roles(taxonomy, schemas, config.min_aspects, config.max_depth)

        stage = "train-models"
        warnings: list[str] = []
        models: dict[str, TrainedAspectModel] = {}
        for role in selected:
            try:
                ts = build_training_set(
                    role, schemas[role], pages, roles_by_page, config.seed, section_clusters
                )
            except ValueError as exc:
                # Typically the universal "person" role: nobody lacks it,
                # so it has no negative pool and cannot be trained.
                warnings.append(f"role {role!r} skipped: {exc}")
                logger.warning("role %r skipped: %s", role, exc)
                continue
            models[role] = train(ts, provider, config.tau_grid)

        stage = "load-articles"
        articles: list[NewsArticle] = []
        with open(config.articles, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    articles.append(NewsArticle.from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise ValueError(f"articles line {lineno}: {exc}") from exc
        if len({a.article_id for a in articles}) != len(articles):
            raise ValueError("duplicate article_id in articles")
        articles.sort(key=lambda a: a.article_id)

        stage = "process-persons"
        dictionary = _load_lexicon(config.dictionary)
        familiar = (
            _load_lexicon(config.familiar_words) if config.familiar_words else frozenset()
        )
        particles = _load_lexicon(config.particles) if config.particles else None
        rejects: list[dict] = []
        person_docs: dict[str, dict] = {}
        snippet_count = 0
        summary_count = 0
        articles_by_id = {a.article_id: a for a in articles}
        for profile in profiles:
            names = partial_names(profile, particles)
            snippets = []
            for article in articles:
                reason = filter_article(article, profile, dictionary, names)
                if reason is not None:
                    rejects.append(
                        {
                            "article_id": article.article_id,
                            "person_id": profile.person_id,
                            "reason": reason,
                        }
                    )
                    continue
                snippets.extend(extract_snippets(article, profile, names))
            person_models = {
                role: models[role] for role in sorted(profile.roles) if role in models
            }
            classified = classify_snippets(snippets, person_models, provider)
            ranked = rank_top(classified, config.top_n)
            by_key: dict[tuple[str, str], list] = {}
            for entry in classified:
                by_key.setdefault((entry.role, entry.aspect), []).append(entry)

            role_entries = []
            for role in sorted(person_models):
                aspect_entries = []
                for (r, aspect), top in ranked.items():
                    if r != role:
                        continue
                    summary = summarize(
                        by_key[(r, aspect)],
                        provider,
                        person_id=profile.person_id,
                        k=config.k,
                        max_sentences=config.max_summary_sentences,
                        mmr_lambda=config.mmr_lambda,
                        familiar_words=familiar,
                    )
                    if summary is not None:
                        summary_count += 1
                    snippet_entries = []
                    for entry in top:
                        article = articles_by_id[entry.snippet.article_id]
                        snippet_entries.append(
                            {
                                "article_id": entry.snippet.article_id,
                                "sentence_span": list(entry.snippet.sentence_span),
                                "text": entry.snippet.text,
                                "matched_token": entry.snippet.matched_token,
                                "fragment": make_fragment(entry.snippet, config.max_fragment),
                                "probability": entry.probability,
                                "date": article.date,
                                "newspaper": article.newspaper,
                                "external_url": article.external_url,
                            }
                        )
                    snippet_count += len(snippet_entries)
                    aspect_entries.append(
                        {
                            "aspect": aspect,
                            "snippets": snippet_entries,
                            "summary": summary.to_dict() if summary else None,
                        }
                    )
                role_entries.append({"role": role, "aspects": aspect_entries})
            person_docs[profile.person_id] = {
                "profile": profile.to_dict(),
                "roles": role_entries,
            }

        stage = "write-store"
        _dump_json(out / "clusters.json", [c.to_dict() for c in clusters])
        (out / "models").mkdir()
        (out / "persons").mkdir()
        model_files = {}
        for role, model in sorted(models.items()):
            rel = f"models/{_slug(role)}.json"
            model_files[role] = rel
            _dump_json(out / rel, model.to_dict())
        person_files = {}
        for pid, doc in sorted(person_docs.items()):
            rel = f"persons/{_slug(pid)}.json"
            person_files[pid] = rel
            _dump_json(out / rel, doc)
        with open(out / "rejects.jsonl", "w", encoding="utf-8") as fh:
            for entry in rejects:
                fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")

        counts = {
            "clusters": len(clusters),
            "models": len(models),
            "persons": len(person_docs),
            "snippets": snippet_count,
            "summaries": summary_count,
        }
        manifest = {
            "version": __version__,
            "provider": provider.name,
            "seed": config.seed,
            "config": config.echo(),
            "counts": counts,
            "warnings": warnings,
            "files": {"models": model_files, "persons": person_files},
            "digest": CorpusStore.content_digest(out),
        }
        _dump_json(out / "manifest.json", manifest)
    except Exception as exc:
        shutil.rmtree(out, ignore_errors=True)
        if isinstance(exc, BuildError):
            raise
        raise BuildError(stage, exc) from exc

    return CorpusStore.load(out)
