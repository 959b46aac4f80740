"""Ethical values, their ranks, and the value-weighted defeat relation.

An attack between instantiated arguments becomes a defeat unless the
attacker's effective rank is strictly below the target's. Values within the
same rank class are incomparable, so equal ranks defeat in both directions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .af import ArgumentationFramework
from .errors import EmptyPromotesError, UnknownArgumentError

if TYPE_CHECKING:
    from .rules import Stance


class ValueRank(enum.IntEnum):
    """Rank classes ordered by ordinal; higher carries more weight."""

    INSTRUMENTAL = 0
    FUNDAMENTAL = 1
    PARAMOUNT = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class EthicalValue(enum.Enum):
    INCLUSION = "inclusion"
    TOLERANCE = "tolerance"
    FREEDOM_OF_CHOICE = "freedom-of-choice"
    EFFICIENCY = "efficiency"
    AUTONOMY = "autonomy"
    WELL_BEING = "well-being"
    HEALTH = "health"
    DIGNITY = "dignity"
    JUSTICE = "justice"
    # Engine-added sentinel so the harm gate dominates structurally.
    NO_HARM_PRINCIPLE = "no-harm-principle"

    @property
    def rank(self) -> ValueRank:
        return _RANK_OF_VALUE[self]


_RANK_OF_VALUE: dict[EthicalValue, ValueRank] = {
    EthicalValue.INCLUSION: ValueRank.INSTRUMENTAL,
    EthicalValue.TOLERANCE: ValueRank.INSTRUMENTAL,
    EthicalValue.FREEDOM_OF_CHOICE: ValueRank.INSTRUMENTAL,
    EthicalValue.EFFICIENCY: ValueRank.INSTRUMENTAL,
    EthicalValue.AUTONOMY: ValueRank.FUNDAMENTAL,
    EthicalValue.WELL_BEING: ValueRank.FUNDAMENTAL,
    EthicalValue.HEALTH: ValueRank.FUNDAMENTAL,
    EthicalValue.DIGNITY: ValueRank.FUNDAMENTAL,
    EthicalValue.JUSTICE: ValueRank.FUNDAMENTAL,
    EthicalValue.NO_HARM_PRINCIPLE: ValueRank.PARAMOUNT,
}

VALUE_BY_NAME: dict[str, EthicalValue] = {v.value: v for v in EthicalValue}


@dataclass(frozen=True)
class DomainArgument:
    """A named ethical argument instantiated against one request context."""

    name: str
    stance: "Stance"
    promotes: frozenset[EthicalValue]
    # Context atoms that held when the argument's rule applied.
    premises: tuple[str, ...] = field(default=())


def effective_rank(argument: DomainArgument) -> ValueRank:
    """The heaviest rank among the argument's promoted values."""
    if not argument.promotes:
        raise EmptyPromotesError(
            f"argument {argument.name!r} promotes no values"
        )
    return max(value.rank for value in argument.promotes)


def defeats(attacker: DomainArgument, target: DomainArgument) -> bool:
    """True unless the attacker is strictly lower-ranked than the target."""
    return effective_rank(attacker) >= effective_rank(target)


def derive_defeat_graph(
    arguments: Iterable[DomainArgument],
    raw_attacks: Iterable[tuple[str, str]],
) -> ArgumentationFramework:
    """Keep exactly the raw attacks that survive the value weighting."""
    by_name: dict[str, DomainArgument] = {}
    for argument in arguments:
        if argument.name in by_name:
            raise ValueError(f"duplicate argument name {argument.name!r}")
        by_name[argument.name] = argument
    surviving = set()
    for attacker, target in raw_attacks:
        for endpoint in (attacker, target):
            if endpoint not in by_name:
                raise UnknownArgumentError(
                    f"raw attack references unknown argument {endpoint!r}"
                )
        if defeats(by_name[attacker], by_name[target]):
            surviving.add((attacker, target))
    return ArgumentationFramework(by_name.keys(), surviving)
