"""Frequent-aspect mining per role and role selection for training.

An aspect of a role is a section-title cluster that clears both a minimum
absolute support (total section texts, so there is enough training data)
and a minimum relative support (fraction of the role's persons exhibiting
it, so it is actually characteristic of the role).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .clustering import SectionTitleCluster, member_index
from .models import PersonPage
from .textnorm import normalize_title
from .wiki import OccupationTaxonomy

DEFAULT_ABS_SUPPORT = 100
DEFAULT_REL_SUPPORT = 0.05
DEFAULT_MIN_ASPECTS = 3
DEFAULT_MAX_DEPTH = 2

#: Category-name suffixes that only split a role by nationality/occupation;
#: roles differing only by such a suffix are merged.
ROLE_SUFFIXES = ("naar nationaliteit", "naar beroep")


@dataclass(frozen=True)
class SupportCounts:
    role: str
    persons_in_role: int
    by_cluster: dict[str, tuple[int, float]]  # cluster_id -> (abs, rel)


@dataclass(frozen=True)
class AspectStat:
    cluster_id: str
    abs_support: int
    rel_support: float


@dataclass(frozen=True)
class RoleAspectSchema:
    role: str
    aspects: tuple[AspectStat, ...]
    persons_in_role: int

    def aspect_ids(self) -> tuple[str, ...]:
        return tuple(a.cluster_id for a in self.aspects)

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "persons_in_role": self.persons_in_role,
            "aspects": [
                {
                    "cluster_id": a.cluster_id,
                    "abs_support": a.abs_support,
                    "rel_support": a.rel_support,
                }
                for a in self.aspects
            ],
        }


def count_supports(
    pages: Sequence[PersonPage],
    clusters: Sequence[SectionTitleCluster],
    role: str,
    roles_by_page: Mapping[str, frozenset[str]],
) -> SupportCounts:
    """Count absolute and relative support per cluster for one role.

    Absolute support is the number of section texts across the role's
    pages whose title falls in the cluster; relative support is the
    fraction of the role's persons having at least one such section.
    """
    role_pages = [p for p in pages if role in roles_by_page.get(p.page_id, frozenset())]
    if not role_pages:
        raise ValueError(f"empty role: {role!r}")

    index = member_index(clusters)
    abs_counts: dict[str, int] = {}
    persons_with: dict[str, set[str]] = {}
    for page in role_pages:
        for section in page.sections:
            cluster_id = index.get(normalize_title(section.title))
            if cluster_id is None:
                continue
            abs_counts[cluster_id] = abs_counts.get(cluster_id, 0) + 1
            persons_with.setdefault(cluster_id, set()).add(page.page_id)

    n = len(role_pages)
    by_cluster = {
        cid: (abs_counts[cid], len(persons_with[cid]) / n) for cid in abs_counts
    }
    return SupportCounts(role=role, persons_in_role=n, by_cluster=by_cluster)


def mine_aspects(
    role: str,
    supports: SupportCounts,
    abs_min: int = DEFAULT_ABS_SUPPORT,
    rel_min: float = DEFAULT_REL_SUPPORT,
) -> RoleAspectSchema:
    """Keep clusters meeting both thresholds (inclusive), ordered by
    descending relative support with cluster id as tie-break."""
    aspects = [
        AspectStat(cluster_id=cid, abs_support=a, rel_support=r)
        for cid, (a, r) in supports.by_cluster.items()
        if a >= abs_min and r >= rel_min
    ]
    aspects.sort(key=lambda s: (-s.rel_support, s.cluster_id))
    return RoleAspectSchema(
        role=role, aspects=tuple(aspects), persons_in_role=supports.persons_in_role
    )


def strip_role_suffix(role: str) -> str:
    """Remove trailing nationality/occupation suffixes, case-insensitively."""
    name = role.strip()
    changed = True
    while changed:
        changed = False
        for suffix in ROLE_SUFFIXES:
            if re.search(r"\s+" + re.escape(suffix) + r"$", name, re.IGNORECASE):
                name = re.sub(r"\s+" + re.escape(suffix) + r"$", "", name, flags=re.IGNORECASE)
                changed = True
    return name


def _merged_schema(name: str, group: list[RoleAspectSchema]) -> RoleAspectSchema:
    # Defensive merge for callers that did not canonicalize role names
    # upstream; supports are approximated by per-cluster maxima.
    if len(group) == 1:
        return RoleAspectSchema(
            role=name, aspects=group[0].aspects, persons_in_role=group[0].persons_in_role
        )
    merged: dict[str, AspectStat] = {}
    for schema in group:
        for aspect in schema.aspects:
            old = merged.get(aspect.cluster_id)
            if old is None:
                merged[aspect.cluster_id] = aspect
            else:
                merged[aspect.cluster_id] = AspectStat(
                    cluster_id=aspect.cluster_id,
                    abs_support=max(old.abs_support, aspect.abs_support),
                    rel_support=max(old.rel_support, aspect.rel_support),
                )
    aspects = sorted(merged.values(), key=lambda s: (-s.rel_support, s.cluster_id))
    return RoleAspectSchema(
        role=name,
        aspects=tuple(aspects),
        persons_in_role=max(s.persons_in_role for s in group),
    )


def select_roles(
    taxonomy: OccupationTaxonomy,
    schemas: Mapping[str, RoleAspectSchema],
    min_aspects: int = DEFAULT_MIN_ASPECTS,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[str]:
    """Roles eligible for classifier training: at least ``min_aspects``
    frequent aspects and a taxonomy depth within the top ``max_depth``
    levels, after suffix stripping and merging of stripped duplicates.
    """
    groups: dict[str, list[RoleAspectSchema]] = {}
    originals: dict[str, list[str]] = {}
    for role, schema in schemas.items():
        name = strip_role_suffix(role)
        groups.setdefault(name, []).append(schema)
        originals.setdefault(name, []).append(role)

    selected = []
    for name in sorted(groups):
        schema = _merged_schema(name, groups[name])
        if len(schema.aspects) < min_aspects:
            continue
        depths = [
            d
            for candidate in [name, *originals[name]]
            if (d := taxonomy.depth_of(candidate)) is not None
        ]
        if not depths or min(depths) > max_depth:
            continue
        selected.append(name)
    return selected
