"""Ethical argument rules: instantiation, conflict topology, and the decision pipeline.

A rule carries an applicability condition over the request context, a stance
toward limiting respondent diversity, and the values it promotes. Deciding a
request runs: instantiate rules -> derive raw attacks from stance conflicts
-> filter attacks by value rank -> grounded labelling -> map accepted
stances to a curation action, recording a transparency trace throughout.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

from .af import Labelling, grounded
from .context import (
    CurationAction,
    Decision,
    Instrument,
    RequestContext,
    Sphere,
    DEFAULT_SPHERE_MAP,
    DiversityPreference,
    instrument_sorted,
    validate_context,
)
from .errors import SourceSpan, UnknownFieldError
from .values import (
    DomainArgument,
    EthicalValue,
    derive_defeat_graph,
    effective_rank,
)


class Stance(enum.Enum):
    MUST_LIMIT = "must-limit"
    MUST_NOT_LIMIT = "must-not-limit"
    MAY_LIMIT = "may-limit"
    MAY_LIMIT_CAUTION = "may-limit-caution"
    REJECT_REQUEST = "reject-request"


STANCE_BY_NAME: dict[str, Stance] = {s.value: s for s in Stance}

# Most protective first; drives both the action mapping precedence and the
# precautionary fallback.
_STANCE_PRECEDENCE = (
    Stance.REJECT_REQUEST,
    Stance.MUST_LIMIT,
    Stance.MUST_NOT_LIMIT,
    Stance.MAY_LIMIT_CAUTION,
    Stance.MAY_LIMIT,
)

_ACTION_FOR_STANCE: dict[Stance, tuple[CurationAction, tuple[Instrument, ...]]] = {
    Stance.REJECT_REQUEST: (
        CurationAction.REJECT_REQUEST,
        (Instrument.BLOCK_REQUEST, Instrument.REPORT_COMPLAINT),
    ),
    Stance.MUST_LIMIT: (CurationAction.LIMIT_DIVERSITY, ()),
    Stance.MUST_NOT_LIMIT: (
        CurationAction.DO_NOT_LIMIT,
        (Instrument.SCOPE_OPTIONS,),
    ),
    Stance.MAY_LIMIT_CAUTION: (
        CurationAction.PERMIT_LIMIT_WITH_NUDGE,
        (Instrument.NUDGE_REVISE, Instrument.SCOPE_OPTIONS),
    ),
    Stance.MAY_LIMIT: (CurationAction.PERMIT_LIMIT, ()),
}


def stances_conflict(a: Stance, b: Stance) -> bool:
    """Symmetric conflict table; pro-limiting stances never conflict."""
    if a == b:
        return False
    if Stance.REJECT_REQUEST in (a, b):
        return True
    pro_limiting = {Stance.MUST_LIMIT, Stance.MAY_LIMIT, Stance.MAY_LIMIT_CAUTION}
    return (a is Stance.MUST_NOT_LIMIT and b in pro_limiting) or (
        b is Stance.MUST_NOT_LIMIT and a in pro_limiting
    )


# ---------------------------------------------------------------------------
# Condition expressions
# ---------------------------------------------------------------------------

CONDITION_FIELDS: dict[str, frozenset[str]] = {
    "sphere": frozenset(s.value for s in Sphere),
    "sensitive": frozenset({"true", "false"}),
    "harm": frozenset({"true", "false"}),
    "demographic_target": frozenset({"true", "false"}),
    "skill_specific": frozenset({"true", "false"}),
    "preference": frozenset(p.value for p in DiversityPreference),
}


def _field_value(ctx: RequestContext, name: str) -> str:
    if name == "sphere":
        return ctx.sphere.value if ctx.sphere is not None else ""
    if name == "sensitive":
        return "true" if ctx.sensitive else "false"
    if name == "harm":
        return "true" if ctx.harm else "false"
    if name == "demographic_target":
        return "true" if ctx.demographic_target else "false"
    if name == "skill_specific":
        return "true" if ctx.skill_specific else "false"
    if name == "preference":
        return ctx.diversity_preference.value
    raise UnknownFieldError(f"unknown condition field {name!r}")


class Condition:
    """Base of the boolean expression tree over context atoms."""

    def evaluate(self, ctx: RequestContext) -> bool:
        raise NotImplementedError

    def atoms(self) -> Iterator["Atom"]:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Condition):
    field_name: str
    op: str  # "=" or "!="
    value: str
    span: SourceSpan | None = field(default=None, compare=False)

    def evaluate(self, ctx: RequestContext) -> bool:
        actual = _field_value(ctx, self.field_name)
        return (actual == self.value) if self.op == "=" else (actual != self.value)

    def atoms(self) -> Iterator["Atom"]:
        yield self

    def render(self) -> str:
        return f"{self.field_name} {self.op} {self.value}"


@dataclass(frozen=True)
class Not(Condition):
    inner: Condition
    span: SourceSpan | None = field(default=None, compare=False)

    def evaluate(self, ctx: RequestContext) -> bool:
        return not self.inner.evaluate(ctx)

    def atoms(self) -> Iterator[Atom]:
        yield from self.inner.atoms()

    def render(self) -> str:
        if isinstance(self.inner, Atom):
            return f"not {self.inner.render()}"
        return f"not ({self.inner.render()})"


def _flatten(kind: type, parts: Iterable[Condition]) -> tuple[Condition, ...]:
    flat: list[Condition] = []
    for part in parts:
        if isinstance(part, kind):
            flat.extend(part.parts)  # type: ignore[attr-defined]
        else:
            flat.append(part)
    return tuple(flat)


@dataclass(frozen=True, init=False)
class And(Condition):
    parts: tuple[Condition, ...]
    span: SourceSpan | None = field(default=None, compare=False)

    def __init__(
        self, parts: Iterable[Condition], span: SourceSpan | None = None
    ) -> None:
        object.__setattr__(self, "parts", _flatten(And, parts))
        object.__setattr__(self, "span", span)

    def evaluate(self, ctx: RequestContext) -> bool:
        return all(part.evaluate(ctx) for part in self.parts)

    def atoms(self) -> Iterator[Atom]:
        for part in self.parts:
            yield from part.atoms()

    def render(self) -> str:
        rendered = [
            f"({part.render()})" if isinstance(part, Or) else part.render()
            for part in self.parts
        ]
        return " and ".join(rendered)


@dataclass(frozen=True, init=False)
class Or(Condition):
    parts: tuple[Condition, ...]
    span: SourceSpan | None = field(default=None, compare=False)

    def __init__(
        self, parts: Iterable[Condition], span: SourceSpan | None = None
    ) -> None:
        object.__setattr__(self, "parts", _flatten(Or, parts))
        object.__setattr__(self, "span", span)

    def evaluate(self, ctx: RequestContext) -> bool:
        return any(part.evaluate(ctx) for part in self.parts)

    def atoms(self) -> Iterator[Atom]:
        for part in self.parts:
            yield from part.atoms()

    def render(self) -> str:
        return " or ".join(part.render() for part in self.parts)


def eval_condition(expr: Condition, ctx: RequestContext) -> bool:
    return expr.evaluate(ctx)


# ---------------------------------------------------------------------------
# Rules and knowledge bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArgumentRule:
    name: str
    applies_if: Condition
    stance: Stance
    promotes: frozenset[EthicalValue]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True, init=False)
class KnowledgeBase:
    """Ordered rule set with name shadowing already applied.

    A later rule with an existing name replaces the earlier definition in
    place; `version` counts the entries that produced this state, so it can
    exceed the number of effective rules. Equality is structural (rules and
    sphere map); version is provenance, not content.
    """

    version: int = field(compare=False)
    rules: tuple[ArgumentRule, ...] = field()
    sphere_map: Mapping[str, Sphere] = field()

    def __init__(
        self,
        version: int,
        rules: Iterable[ArgumentRule],
        sphere_map: Mapping[str, Sphere] | None = None,
    ) -> None:
        effective: dict[str, ArgumentRule] = {}
        for rule in rules:
            effective[rule.name] = rule
        object.__setattr__(self, "version", version)
        object.__setattr__(self, "rules", tuple(effective.values()))
        object.__setattr__(self, "sphere_map", dict(sphere_map or {}))

    def with_rule(self, rule: ArgumentRule) -> "KnowledgeBase":
        return KnowledgeBase(self.version + 1, self.rules + (rule,), self.sphere_map)

    def combined_sphere_map(self) -> dict[str, Sphere]:
        merged = dict(DEFAULT_SPHERE_MAP)
        merged.update(self.sphere_map)
        return merged


def instantiate(kb: KnowledgeBase, ctx: RequestContext) -> tuple[DomainArgument, ...]:
    """One domain argument per rule whose condition holds, in rule order."""
    instantiated = []
    for rule in kb.rules:
        if rule.applies_if.evaluate(ctx):
            premises = tuple(
                atom.render() for atom in rule.applies_if.atoms() if atom.evaluate(ctx)
            )
            instantiated.append(
                DomainArgument(
                    name=rule.name,
                    stance=rule.stance,
                    promotes=rule.promotes,
                    premises=premises,
                )
            )
    return tuple(instantiated)


def raw_attacks(
    arguments: Iterable[DomainArgument],
) -> frozenset[tuple[str, str]]:
    """Symmetric attack pair between every two arguments with conflicting stances."""
    args = list(arguments)
    attacks = set()
    for i, a in enumerate(args):
        for b in args[i + 1 :]:
            if stances_conflict(a.stance, b.stance):
                attacks.add((a.name, b.name))
                attacks.add((b.name, a.name))
    return frozenset(attacks)


NO_APPLICABLE_NOTE = "no argument applicable; user preference respected"
FALLBACK_NOTE = (
    "no argument accepted outright; most protective undecided stance applied"
)


def decide(ctx: RequestContext, kb: KnowledgeBase) -> Decision:
    """Run the full pipeline and map the grounded outcome to a curation action."""
    ctx = validate_context(ctx, kb.combined_sphere_map())
    arguments = instantiate(kb, ctx)
    by_name = {a.name: a for a in arguments}
    trace: list[dict[str, Any]] = []
    for argument in arguments:
        trace.append(
            {
                "step": "applicable",
                "argument": argument.name,
                "stance": argument.stance.value,
                "promotes": sorted(v.value for v in argument.promotes),
                "premises": list(argument.premises),
            }
        )

    if not arguments:
        trace.append({"step": "no-applicable", "note": NO_APPLICABLE_NOTE})
        action, instruments = CurationAction.PERMIT_LIMIT, ()
        trace.append(
            {
                "step": "action",
                "mapped_from": None,
                "action": action.value,
                "instruments": [],
            }
        )
        return Decision(
            action=action,
            instruments=(),
            prevailing=frozenset(),
            labelling=Labelling({}),
            contested=False,
            trace=tuple(trace),
        )

    raw = raw_attacks(arguments)
    for attacker, target in sorted(raw):
        trace.append({"step": "raw-attack", "attacker": attacker, "target": target})

    defeat_graph = derive_defeat_graph(arguments, raw)
    for attacker, target in sorted(raw - defeat_graph.attacks):
        trace.append(
            {
                "step": "attack-removed",
                "attacker": attacker,
                "attacker_rank": effective_rank(by_name[attacker]).label,
                "target": target,
                "target_rank": effective_rank(by_name[target]).label,
                "reason": "attacker ranked below target",
            }
        )

    labelling = grounded(defeat_graph)
    trace.append(
        {
            "step": "semantics",
            "kind": "grounded",
            "labelling": {
                name: label.value for name, label in sorted(labelling.items())
            },
        }
    )

    accepted_stances = {by_name[name].stance for name in labelling.in_set}
    contested = False
    winning: Stance | None = None
    for stance in _STANCE_PRECEDENCE:
        if stance in accepted_stances:
            winning = stance
            break

    if winning is None:
        undecided = sorted(labelling.undec_set)
        undecided_stances = {by_name[name].stance for name in undecided}
        for stance in _STANCE_PRECEDENCE:
            if stance in undecided_stances:
                winning = stance
                break
        assert winning is not None  # grounded cannot label every argument OUT
        contested = True
        trace.append(
            {
                "step": "fallback",
                "note": FALLBACK_NOTE,
                "undecided": undecided,
                "stance": winning.value,
            }
        )

    action, base_instruments = _ACTION_FOR_STANCE[winning]
    instruments = (
        instrument_sorted(base_instruments + (Instrument.NUDGE_REVISE,))
        if contested
        else instrument_sorted(base_instruments)
    )
    trace.append(
        {
            "step": "action",
            "mapped_from": winning.value,
            "action": action.value,
            "instruments": [i.value for i in instruments],
        }
    )
    return Decision(
        action=action,
        instruments=instruments,
        prevailing=labelling.in_set,
        labelling=labelling,
        contested=contested,
        trace=tuple(trace),
    )


# ---------------------------------------------------------------------------
# Rendering and canonical JSON
# ---------------------------------------------------------------------------


def decision_payload(decision: Decision) -> dict[str, Any]:
    """Decision JSON object with stable field order, suitable for hashing."""
    return {
        "action": decision.action.value,
        "instruments": [i.value for i in decision.instruments],
        "prevailing": sorted(decision.prevailing),
        "labelling": {
            name: label.value for name, label in sorted(decision.labelling.items())
        },
        "contested": decision.contested,
        "trace": [dict(entry) for entry in decision.trace],
    }


def decision_to_json(decision: Decision) -> str:
    return json.dumps(decision_payload(decision), indent=2)


def decision_hash(decision: Decision) -> str:
    return hashlib.sha256(decision_to_json(decision).encode("utf-8")).hexdigest()


def explain(decision: Decision) -> str:
    """Human-readable rendering of the decision trace.

    The structured form of the same information is `decision.trace` (and
    `decision_to_json` for the full document).
    """
    lines: list[str] = []
    applicable = [e for e in decision.trace if e["step"] == "applicable"]
    if applicable:
        lines.append("applicable arguments:")
        for entry in applicable:
            because = (
                "; because " + ", ".join(entry["premises"])
                if entry["premises"]
                else ""
            )
            lines.append(
                f"  {entry['argument']} [{entry['stance']}] promotes "
                f"{', '.join(entry['promotes'])}{because}"
            )
    raw = [e for e in decision.trace if e["step"] == "raw-attack"]
    if raw:
        lines.append("raw attacks:")
        for entry in raw:
            lines.append(f"  {entry['attacker']} -> {entry['target']}")
    removed = [e for e in decision.trace if e["step"] == "attack-removed"]
    if removed:
        lines.append("removed by value ranking:")
        for entry in removed:
            lines.append(
                f"  {entry['attacker']} -x-> {entry['target']} "
                f"({entry['attacker_rank']} below {entry['target_rank']})"
            )
    for entry in decision.trace:
        if entry["step"] == "semantics":
            lines.append(f"{entry['kind']} labelling:")
            for name, label in entry["labelling"].items():
                lines.append(f"  {name}: {label}")
        elif entry["step"] == "no-applicable":
            lines.append(entry["note"])
        elif entry["step"] == "fallback":
            lines.append(
                f"fallback: {entry['note']} "
                f"(stance {entry['stance']}; undecided: {', '.join(entry['undecided'])})"
            )
        elif entry["step"] == "action":
            mapped = (
                f"mapped from {entry['mapped_from']}"
                if entry["mapped_from"]
                else "default"
            )
            instruments = (
                ", ".join(entry["instruments"]) if entry["instruments"] else "none"
            )
            lines.append(
                f"decision: {entry['action']} ({mapped}); instruments: {instruments}"
            )
    if decision.contested:
        lines.append("flagged contested: human review advised")
    return "\n".join(lines)
