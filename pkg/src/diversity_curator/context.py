"""The request-side world model: spheres, contexts, actions, instruments."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping

from .af import Labelling
from .errors import EmptyRequestError, UnclassifiableError


class Sphere(enum.Enum):
    MAXIMUM_FREEDOM = "maximum-freedom"
    SHARED_RESOURCES = "shared-resources"
    PROTECTION_SENSITIVE = "protection-sensitive"

    @property
    def protectiveness(self) -> int:
        return _PROTECTIVENESS[self]


_PROTECTIVENESS = {
    Sphere.MAXIMUM_FREEDOM: 0,
    Sphere.SHARED_RESOURCES: 1,
    Sphere.PROTECTION_SENSITIVE: 2,
}

SPHERE_BY_NAME: dict[str, Sphere] = {s.value: s for s in Sphere}

# Default topic map. `mental-health` is an alias entry; knowledge bases may
# extend this map with further aliases.
DEFAULT_SPHERE_MAP: dict[str, Sphere] = {
    "leisure": Sphere.MAXIMUM_FREEDOM,
    "sports": Sphere.MAXIMUM_FREEDOM,
    "art": Sphere.MAXIMUM_FREEDOM,
    "economy": Sphere.SHARED_RESOURCES,
    "politics": Sphere.SHARED_RESOURCES,
    "education": Sphere.SHARED_RESOURCES,
    "religion": Sphere.PROTECTION_SENSITIVE,
    "health": Sphere.PROTECTION_SENSITIVE,
    "medicine": Sphere.PROTECTION_SENSITIVE,
    "psychology": Sphere.PROTECTION_SENSITIVE,
    "mental-health": Sphere.PROTECTION_SENSITIVE,
}


class DiversityPreference(enum.Enum):
    SIMILAR = "similar"
    DIFFERENT = "different"
    UNSPECIFIED = "unspecified"


PREFERENCE_BY_NAME: dict[str, DiversityPreference] = {
    p.value: p for p in DiversityPreference
}


@dataclass(frozen=True)
class RequestContext:
    """Everything known about one help request.

    The sensitivity and harm flags are explicit inputs set upstream; the
    engine never infers them from the request text.
    """

    request_text: str = ""
    topic_tags: frozenset[str] = frozenset()
    sphere: Sphere | None = None
    demographic_target: bool = False
    skill_specific: bool = False
    sensitive: bool = False
    harm: bool = False
    diversity_preference: DiversityPreference = DiversityPreference.UNSPECIFIED
    situatedness: str = ""


class CurationAction(enum.Enum):
    LIMIT_DIVERSITY = "limit-diversity"
    DO_NOT_LIMIT = "do-not-limit"
    PERMIT_LIMIT = "permit-limit"
    PERMIT_LIMIT_WITH_NUDGE = "permit-limit-with-nudge"
    REJECT_REQUEST = "reject-request"


ACTION_BY_NAME: dict[str, CurationAction] = {a.value: a for a in CurationAction}


class Instrument(enum.Enum):
    NUDGE_REVISE = "nudge-revise"
    SCOPE_OPTIONS = "scope-options"
    BLOCK_REQUEST = "block-request"
    REPORT_COMPLAINT = "report-complaint"


_INSTRUMENT_ORDER = {instrument: i for i, instrument in enumerate(Instrument)}


def instrument_sorted(instruments: Iterable[Instrument]) -> tuple[Instrument, ...]:
    return tuple(sorted(set(instruments), key=_INSTRUMENT_ORDER.__getitem__))


@dataclass(frozen=True)
class Decision:
    """Curation verdict with the evidence that produced it."""

    action: CurationAction
    instruments: tuple[Instrument, ...]
    prevailing: frozenset[str]
    labelling: Labelling
    contested: bool
    trace: tuple[Mapping[str, Any], ...]


def classify_sphere(
    topic_tags: Iterable[str],
    sphere_map: Mapping[str, Sphere] = DEFAULT_SPHERE_MAP,
) -> Sphere:
    """Sphere with the most matching tags; ties go to the more protective one."""
    tags = frozenset(topic_tags)
    votes: dict[Sphere, int] = {}
    for tag in tags:
        sphere = sphere_map.get(tag)
        if sphere is not None:
            votes[sphere] = votes.get(sphere, 0) + 1
    if not votes:
        raise UnclassifiableError(
            f"no topic tag maps to a sphere: {sorted(tags)!r}"
        )
    return max(votes, key=lambda s: (votes[s], s.protectiveness))


def validate_context(
    ctx: RequestContext,
    sphere_map: Mapping[str, Sphere] = DEFAULT_SPHERE_MAP,
) -> RequestContext:
    """Normalize tags and resolve the sphere; idempotent on valid contexts."""
    tags = frozenset(
        tag.strip().lower() for tag in ctx.topic_tags if tag.strip()
    )
    if not ctx.request_text.strip() and not tags:
        raise EmptyRequestError("request text and topic tags are both empty")
    sphere = ctx.sphere
    if sphere is None:
        if not tags:
            raise UnclassifiableError(
                "no sphere supplied and no topic tags to classify"
            )
        sphere = classify_sphere(tags, sphere_map)
    return replace(ctx, topic_tags=tags, sphere=sphere)


def context_from_json(payload: Mapping[str, Any]) -> RequestContext:
    """Build a context from its JSON form; booleans default to false."""
    known = {
        "request_text",
        "topic_tags",
        "sphere",
        "demographic_target",
        "skill_specific",
        "sensitive",
        "harm",
        "diversity_preference",
        "situatedness",
    }
    unknown = set(payload) - known
    if unknown:
        raise ValueError(f"unknown context fields: {sorted(unknown)}")
    sphere_name = payload.get("sphere")
    if sphere_name is not None and sphere_name not in SPHERE_BY_NAME:
        raise ValueError(f"unknown sphere: {sphere_name!r}")
    preference_name = payload.get("diversity_preference", "unspecified")
    if preference_name not in PREFERENCE_BY_NAME:
        raise ValueError(f"unknown diversity preference: {preference_name!r}")
    return RequestContext(
        request_text=str(payload.get("request_text", "")),
        topic_tags=frozenset(str(t) for t in payload.get("topic_tags", ())),
        sphere=SPHERE_BY_NAME[sphere_name] if sphere_name is not None else None,
        demographic_target=bool(payload.get("demographic_target", False)),
        skill_specific=bool(payload.get("skill_specific", False)),
        sensitive=bool(payload.get("sensitive", False)),
        harm=bool(payload.get("harm", False)),
        diversity_preference=PREFERENCE_BY_NAME[preference_name],
        situatedness=str(payload.get("situatedness", "")),
    )


def context_to_json(ctx: RequestContext) -> dict[str, Any]:
    return {
        "request_text": ctx.request_text,
        "topic_tags": sorted(ctx.topic_tags),
        "sphere": ctx.sphere.value if ctx.sphere is not None else None,
        "demographic_target": ctx.demographic_target,
        "skill_specific": ctx.skill_specific,
        "sensitive": ctx.sensitive,
        "harm": ctx.harm,
        "diversity_preference": ctx.diversity_preference.value,
        "situatedness": ctx.situatedness,
    }
