"""Abstract argumentation frameworks and the standard acceptability semantics.

A framework is a finite directed attack graph. The semantics implemented
here are grounded (via least-fixpoint iteration of the defense operator),
complete (via a propagation-based labelling search), and preferred/stable
(derived from the complete labellings). All inputs are immutable and every
function is pure, so concurrent use is safe.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    ApxSyntaxError,
    FrameworkTooLargeError,
    UndeclaredArgumentError,
    UnknownArgumentError,
)

ARGUMENT_NAME = re.compile(r"[A-Za-z0-9_-]+\Z")

# Guards the enumerating semantics (complete/preferred/stable); grounded is
# fixpoint-based and has no cap.
ENUMERATION_CAP = 24


class Label(enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNDEC = "UNDEC"


@dataclass(frozen=True, init=False)
class ArgumentationFramework:
    """Finite set of argument names plus a directed attack relation.

    Attack endpoints must be declared arguments; duplicate attack pairs are
    collapsed and self-attacks are permitted.
    """

    arguments: frozenset[str]
    attacks: frozenset[tuple[str, str]]

    def __init__(
        self,
        arguments: Iterable[str],
        attacks: Iterable[tuple[str, str]] = (),
    ) -> None:
        args = frozenset(arguments)
        atts = frozenset((attacker, target) for attacker, target in attacks)
        for name in args:
            if not ARGUMENT_NAME.match(name):
                raise ValueError(f"invalid argument name: {name!r}")
        for attacker, target in atts:
            for endpoint in (attacker, target):
                if endpoint not in args:
                    raise UnknownArgumentError(
                        f"attack ({attacker}, {target}) references "
                        f"undeclared argument {endpoint!r}"
                    )
        object.__setattr__(self, "arguments", args)
        object.__setattr__(self, "attacks", atts)

    def __contains__(self, name: str) -> bool:
        return name in self.arguments


@dataclass(frozen=True, init=False)
class Labelling:
    """Total assignment of a label to every argument of a framework."""

    entries: tuple[tuple[str, Label], ...]

    def __init__(self, assignment: Mapping[str, Label]) -> None:
        object.__setattr__(self, "entries", tuple(sorted(assignment.items())))

    def __getitem__(self, name: str) -> Label:
        for key, label in self.entries:
            if key == name:
                return label
        raise KeyError(name)

    def __iter__(self) -> Iterator[str]:
        return (name for name, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self) -> tuple[tuple[str, Label], ...]:
        return self.entries

    def as_dict(self) -> dict[str, Label]:
        return dict(self.entries)

    @property
    def in_set(self) -> frozenset[str]:
        return frozenset(n for n, label in self.entries if label is Label.IN)

    @property
    def out_set(self) -> frozenset[str]:
        return frozenset(n for n, label in self.entries if label is Label.OUT)

    @property
    def undec_set(self) -> frozenset[str]:
        return frozenset(n for n, label in self.entries if label is Label.UNDEC)


class Semantics(enum.Enum):
    GROUNDED = "grounded"
    COMPLETE = "complete"
    PREFERRED = "preferred"
    STABLE = "stable"


def _check_members(af: ArgumentationFramework, names: Iterable[str]) -> None:
    for name in names:
        if name not in af.arguments:
            raise UnknownArgumentError(f"unknown argument {name!r}")


def _attacker_map(af: ArgumentationFramework) -> dict[str, set[str]]:
    by_target: dict[str, set[str]] = {name: set() for name in af.arguments}
    for attacker, target in af.attacks:
        by_target[target].add(attacker)
    return by_target


def attackers(af: ArgumentationFramework, argument: str) -> frozenset[str]:
    """All arguments attacking `argument`."""
    _check_members(af, (argument,))
    return frozenset(a for a, t in af.attacks if t == argument)


def is_conflict_free(af: ArgumentationFramework, subset: Iterable[str]) -> bool:
    """True iff no member of `subset` attacks another member (or itself)."""
    members = frozenset(subset)
    _check_members(af, members)
    return not any(a in members and t in members for a, t in af.attacks)


def characteristic(
    af: ArgumentationFramework, subset: Iterable[str]
) -> frozenset[str]:
    """Arguments every attacker of which is attacked by some member of `subset`."""
    members = frozenset(subset)
    _check_members(af, members)
    attacked_by_members = {t for a, t in af.attacks if a in members}
    by_target = _attacker_map(af)
    return frozenset(
        name
        for name in af.arguments
        if by_target[name] <= attacked_by_members
    )


def grounded(af: ArgumentationFramework) -> Labelling:
    """The unique minimal complete labelling.

    IN is the least fixpoint of the defense operator starting from the
    empty set; OUT is everything attacked by IN; the rest is UNDEC.
    """
    in_set: frozenset[str] = frozenset()
    while True:
        nxt = characteristic(af, in_set)
        if nxt == in_set:
            break
        in_set = nxt
    out_set = {t for a, t in af.attacks if a in in_set}
    assignment = {}
    for name in af.arguments:
        if name in in_set:
            assignment[name] = Label.IN
        elif name in out_set:
            assignment[name] = Label.OUT
        else:
            assignment[name] = Label.UNDEC
    return Labelling(assignment)


_UNASSIGNED, _IN, _OUT, _UNDEC = 0, 1, 2, 3
_LABEL_OF_CODE = {_IN: Label.IN, _OUT: Label.OUT, _UNDEC: Label.UNDEC}


def complete_labellings(
    af: ArgumentationFramework, cap: int = ENUMERATION_CAP
) -> list[Labelling]:
    """Every labelling satisfying the completeness conditions.

    Backtracking search over labels with constraint propagation; each full
    assignment is verified against the defining conditions before being
    accepted. Deterministic order (sorted by label entries).
    """
    if len(af.arguments) > cap:
        raise FrameworkTooLargeError(
            f"{len(af.arguments)} arguments exceed the enumeration cap of {cap}"
        )
    order = sorted(af.arguments)
    index = {name: i for i, name in enumerate(order)}
    n = len(order)
    attackers_of: list[list[int]] = [[] for _ in range(n)]
    attacked_by: list[list[int]] = [[] for _ in range(n)]
    for a, t in af.attacks:
        attackers_of[index[t]].append(index[a])
        attacked_by[index[a]].append(index[t])

    labels = [_UNASSIGNED] * n
    results: list[Labelling] = []

    def assign(arg: int, value: int, trail: list[int], queue: list[int]) -> bool:
        current = labels[arg]
        if current != _UNASSIGNED:
            return current == value
        labels[arg] = value
        trail.append(arg)
        queue.append(arg)
        queue.extend(attacked_by[arg])
        return True

    def examine(b: int, trail: list[int], queue: list[int]) -> bool:
        """Apply every deduction the completeness conditions force for b."""
        n_in = n_out = n_undec = 0
        unassigned: list[int] = []
        for x in attackers_of[b]:
            lx = labels[x]
            if lx == _IN:
                n_in += 1
            elif lx == _OUT:
                n_out += 1
            elif lx == _UNDEC:
                n_undec += 1
            else:
                unassigned.append(x)
        lb = labels[b]
        if lb == _UNASSIGNED:
            if n_in:
                return assign(b, _OUT, trail, queue)
            if not unassigned:
                forced = _UNDEC if n_undec else _IN
                return assign(b, forced, trail, queue)
            return True
        if lb == _IN:
            # requires every attacker OUT
            if n_in or n_undec:
                return False
            return all(assign(x, _OUT, trail, queue) for x in unassigned)
        if lb == _OUT:
            # requires some attacker IN
            if n_in:
                return True
            if not unassigned:
                return False
            if len(unassigned) == 1:
                return assign(unassigned[0], _IN, trail, queue)
            return True
        # UNDEC: requires no attacker IN and not all attackers OUT
        if n_in:
            return False
        if not unassigned and not n_undec:
            return False
        if not n_undec and len(unassigned) == 1:
            return assign(unassigned[0], _UNDEC, trail, queue)
        return True

    def propagate(queue: list[int], trail: list[int]) -> bool:
        while queue:
            b = queue.pop()
            if not examine(b, trail, queue):
                return False
        return True

    def verify() -> bool:
        for b in range(n):
            some_in = any(labels[x] == _IN for x in attackers_of[b])
            all_out = all(labels[x] == _OUT for x in attackers_of[b])
            if (labels[b] == _IN) != all_out:
                return False
            if (labels[b] == _OUT) != some_in:
                return False
        return True

    def undo(trail: list[int], mark: int) -> None:
        while len(trail) > mark:
            labels[trail.pop()] = _UNASSIGNED

    def search(trail: list[int]) -> None:
        try:
            pivot = labels.index(_UNASSIGNED)
        except ValueError:
            if verify():
                results.append(
                    Labelling(
                        {order[i]: _LABEL_OF_CODE[labels[i]] for i in range(n)}
                    )
                )
            return
        for value in (_IN, _OUT, _UNDEC):
            mark = len(trail)
            queue: list[int] = []
            if assign(pivot, value, trail, queue) and propagate(queue, trail):
                search(trail)
            undo(trail, mark)

    trail: list[int] = []
    if propagate(list(range(n)), trail):
        search(trail)
    results.sort(key=lambda lab: tuple(label.value for _, label in lab.entries))
    return results


def preferred(
    af: ArgumentationFramework, cap: int = ENUMERATION_CAP
) -> set[frozenset[str]]:
    """IN-sets of complete labellings that are maximal under set inclusion."""
    in_sets = [lab.in_set for lab in complete_labellings(af, cap)]
    return {
        s
        for s in in_sets
        if not any(s < other for other in in_sets)
    }


def stable(
    af: ArgumentationFramework, cap: int = ENUMERATION_CAP
) -> set[frozenset[str]]:
    """IN-sets of complete labellings that leave no argument UNDEC."""
    return {
        lab.in_set for lab in complete_labellings(af, cap) if not lab.undec_set
    }


_APX_ARG = re.compile(r"arg\(\s*([A-Za-z0-9_-]+)\s*\)\.\Z")
_APX_ATT = re.compile(r"att\(\s*([A-Za-z0-9_-]+)\s*,\s*([A-Za-z0-9_-]+)\s*\)\.\Z")


def parse_apx(text: str) -> ArgumentationFramework:
    """Parse ICCMA-style apx text: `arg(NAME).` and `att(A,B).` lines.

    `%` starts a comment, blank lines are skipped, and attack lines may
    appear anywhere relative to the declarations they reference.
    """
    arguments: set[str] = set()
    pending: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        arg_match = _APX_ARG.match(line)
        if arg_match:
            arguments.add(arg_match.group(1))
            continue
        att_match = _APX_ATT.match(line)
        if att_match:
            pending.append((lineno, att_match.group(1), att_match.group(2)))
            continue
        raise ApxSyntaxError(lineno, f"unrecognized statement: {line!r}")
    attacks = set()
    for lineno, attacker, target in pending:
        for endpoint in (attacker, target):
            if endpoint not in arguments:
                raise UndeclaredArgumentError(
                    lineno, f"attack references undeclared argument {endpoint!r}"
                )
        attacks.add((attacker, target))
    return ArgumentationFramework(arguments, attacks)


def emit_apx(af: ArgumentationFramework) -> str:
    """Canonical apx text: sorted arg lines, then sorted att lines, LF-terminated."""
    lines = [f"arg({name})." for name in sorted(af.arguments)]
    lines += [f"att({a},{t})." for a, t in sorted(af.attacks)]
    return "".join(line + "\n" for line in lines)
