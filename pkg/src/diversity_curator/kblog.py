"""Versioned append-only knowledge-base log and the coaching step protocol.

The log is the auditable format of record: a header line, then one entry
per rule (timestamp, author, canonical rule block), each terminated by a
`---` line. Replaying the entries in order reconstructs the current
knowledge base; rules are never rewritten, only shadowed by later entries
with the same name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path

from .context import Decision, RequestContext
from .errors import (
    BadHeaderError,
    CorruptEntryError,
    DslError,
    KbValidationError,
)
from .rules import ArgumentRule, KnowledgeBase, STANCE_BY_NAME, decide
from .values import EthicalValue
from .af import ARGUMENT_NAME
from .dsl import emit_rule, parse_rule

KB_LOG_HEADER = "kbversion 1"
ENTRY_SEPARATOR = "---"

_META_LINE = re.compile(
    r"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z) (.+)\Z"
)


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _validate_rule(rule: ArgumentRule) -> None:
    if not ARGUMENT_NAME.match(rule.name):
        raise KbValidationError(f"invalid rule name {rule.name!r}")
    if not rule.promotes:
        raise KbValidationError(f"rule {rule.name!r} promotes no values")
    for value in rule.promotes:
        if not isinstance(value, EthicalValue):
            raise KbValidationError(f"unknown ethical value {value!r}")
    if rule.stance not in STANCE_BY_NAME.values():
        raise KbValidationError(f"unknown stance {rule.stance!r}")


def _coerce_rule(rule: ArgumentRule | str) -> ArgumentRule:
    if isinstance(rule, str):
        try:
            rule = parse_rule(rule)
        except DslError as exc:
            raise KbValidationError(exc.reason, exc.span) from exc
    _validate_rule(rule)
    return rule


def kb_init(
    path: str | Path,
    kb_text: str | None = None,
    author: str = "system",
    timestamp: str | None = None,
) -> int:
    """Create a fresh log seeded with one entry per rule of `kb_text`.

    With no text, the bundled default knowledge base is used. Returns the
    resulting version (= number of entries).
    """
    from .defaults import default_kb_text
    from .dsl import parse_kb

    path = Path(path)
    if path.exists():
        raise FileExistsError(f"refusing to overwrite existing log {path}")
    kb = parse_kb(kb_text if kb_text is not None else default_kb_text())
    stamp = timestamp or _utc_now()
    chunks = [KB_LOG_HEADER + "\n"]
    for rule in kb.rules:
        chunks.append(f"{stamp} {author}\n{emit_rule(rule)}\n{ENTRY_SEPARATOR}\n")
    path.write_text("".join(chunks), encoding="utf-8")
    return len(kb.rules)


def _split_entries(path: Path) -> list[tuple[int, str, str, str]]:
    """Return (start_line, timestamp, author, block_text) per entry."""
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if not lines or lines[0] != KB_LOG_HEADER:
        raise BadHeaderError(
            f"expected header {KB_LOG_HEADER!r}, found {lines[0][:40]!r}"
        )
    entries = []
    i = 1
    n = len(lines)
    while i < n:
        if lines[i] == "" and i == n - 1:
            break  # trailing newline
        meta = _META_LINE.match(lines[i])
        if meta is None:
            raise CorruptEntryError(
                i + 1, f"expected 'timestamp author' line, found {lines[i]!r}"
            )
        start = i + 1
        i += 1
        block_lines = []
        while i < n and lines[i] != ENTRY_SEPARATOR:
            block_lines.append(lines[i])
            i += 1
        if i >= n:
            raise CorruptEntryError(
                start, f"entry is missing its {ENTRY_SEPARATOR!r} terminator"
            )
        i += 1  # past separator
        entries.append((start, meta.group(1), meta.group(2), "\n".join(block_lines)))
    return entries


def kb_load(path: str | Path, at_version: int | None = None) -> KnowledgeBase:
    """Replay the log (optionally only its first `at_version` entries)."""
    path = Path(path)
    entries = _split_entries(path)
    if at_version is not None:
        if not 0 <= at_version <= len(entries):
            raise KbValidationError(
                f"version {at_version} outside log range 0..{len(entries)}"
            )
        entries = entries[:at_version]
    rules = []
    for start_line, _stamp, _author, block in entries:
        try:
            rules.append(parse_rule(block))
        except DslError as exc:
            where = start_line + (exc.span.line if exc.span else 1)
            raise CorruptEntryError(where, exc.reason) from exc
    return KnowledgeBase(version=len(entries), rules=rules)


def kb_append(
    path: str | Path,
    rule: ArgumentRule | str,
    author: str,
    timestamp: str | None = None,
) -> int:
    """Append one rule entry; prior bytes are never touched. Returns the new version."""
    path = Path(path)
    rule = _coerce_rule(rule)
    current = len(_split_entries(path))
    stamp = timestamp or _utc_now()
    with path.open("a", encoding="utf-8") as handle:
        handle.write(f"{stamp} {author}\n{emit_rule(rule)}\n{ENTRY_SEPARATOR}\n")
    return current + 1


@dataclass(frozen=True)
class DecisionDiff:
    """Structural comparison of two decisions on the same context."""

    action_before: str
    action_after: str
    contested_before: bool
    contested_after: bool
    label_changes: dict[str, tuple[str | None, str | None]]
    added_attacks: frozenset[tuple[str, str]]
    removed_attacks: frozenset[tuple[str, str]]

    @property
    def action_changed(self) -> bool:
        return self.action_before != self.action_after

    @property
    def empty(self) -> bool:
        return (
            not self.action_changed
            and self.contested_before == self.contested_after
            and not self.label_changes
            and not self.added_attacks
            and not self.removed_attacks
        )


def _defeat_edges(decision: Decision) -> frozenset[tuple[str, str]]:
    raw = {
        (e["attacker"], e["target"])
        for e in decision.trace
        if e["step"] == "raw-attack"
    }
    removed = {
        (e["attacker"], e["target"])
        for e in decision.trace
        if e["step"] == "attack-removed"
    }
    return frozenset(raw - removed)


def diff_decisions(before: Decision, after: Decision) -> DecisionDiff:
    labels_before = {n: label.value for n, label in before.labelling.items()}
    labels_after = {n: label.value for n, label in after.labelling.items()}
    changes = {}
    for name in sorted(set(labels_before) | set(labels_after)):
        pair = (labels_before.get(name), labels_after.get(name))
        if pair[0] != pair[1]:
            changes[name] = pair
    edges_before = _defeat_edges(before)
    edges_after = _defeat_edges(after)
    return DecisionDiff(
        action_before=before.action.value,
        action_after=after.action.value,
        contested_before=before.contested,
        contested_after=after.contested,
        label_changes=changes,
        added_attacks=frozenset(edges_after - edges_before),
        removed_attacks=frozenset(edges_before - edges_after),
    )


@dataclass(frozen=True)
class CoachingStep:
    """Preview of one counter-rule: decisions before and after, plus the diff."""

    before: Decision
    proposed_rule: ArgumentRule
    after: Decision

    @cached_property
    def diff(self) -> DecisionDiff:
        return diff_decisions(self.before, self.after)


def coach(
    ctx: RequestContext, kb: KnowledgeBase, proposed_rule_text: str
) -> CoachingStep:
    """Compute before/after decisions for a proposed rule without persisting it.

    The caller commits via `kb_append` or discards the step.
    """
    rule = parse_rule(proposed_rule_text)
    _validate_rule(rule)
    before = decide(ctx, kb)
    after = decide(ctx, kb.with_rule(rule))
    return CoachingStep(before=before, proposed_rule=rule, after=after)
