from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from diversity_curator import (
    DomainArgument,
    EmptyPromotesError,
    EthicalValue,
    Stance,
    UnknownArgumentError,
    ValueRank,
    defeats,
    derive_defeat_graph,
    effective_rank,
    grounded,
)

V = EthicalValue


def arg(name: str, *promotes: EthicalValue, stance: Stance = Stance.MAY_LIMIT) -> DomainArgument:
    return DomainArgument(name=name, stance=stance, promotes=frozenset(promotes))


class TestRanks:
    def test_value_rank_assignments(self):
        assert {v for v in V if v.rank is ValueRank.INSTRUMENTAL} == {
            V.INCLUSION, V.TOLERANCE, V.FREEDOM_OF_CHOICE, V.EFFICIENCY,
        }
        assert {v for v in V if v.rank is ValueRank.FUNDAMENTAL} == {
            V.AUTONOMY, V.WELL_BEING, V.HEALTH, V.DIGNITY, V.JUSTICE,
        }
        assert {v for v in V if v.rank is ValueRank.PARAMOUNT} == {
            V.NO_HARM_PRINCIPLE,
        }

    def test_rank_order(self):
        assert ValueRank.PARAMOUNT > ValueRank.FUNDAMENTAL > ValueRank.INSTRUMENTAL


class TestEffectiveRank:
    def test_single_instrumental(self):
        assert effective_rank(arg("x", V.EFFICIENCY)) is ValueRank.INSTRUMENTAL

    def test_max_rule(self):
        assert effective_rank(arg("x", V.INCLUSION, V.JUSTICE)) is ValueRank.FUNDAMENTAL

    def test_paramount(self):
        assert effective_rank(arg("x", V.NO_HARM_PRINCIPLE)) is ValueRank.PARAMOUNT

    def test_empty_promotes(self):
        with pytest.raises(EmptyPromotesError):
            effective_rank(DomainArgument("x", Stance.MAY_LIMIT, frozenset()))


class TestDefeats:
    def test_higher_defeats_lower(self):
        assert defeats(arg("a", V.DIGNITY), arg("b", V.EFFICIENCY))

    def test_lower_blocked_by_strict_preference(self):
        assert not defeats(arg("a", V.EFFICIENCY), arg("b", V.DIGNITY))

    def test_equal_ranks_defeat(self):
        assert defeats(arg("a", V.HEALTH), arg("b", V.JUSTICE))


class TestDeriveDefeatGraph:
    def test_fundamental_vs_instrumental_one_way(self):
        protection = arg("protection", V.WELL_BEING)
        efficiency = arg("efficiency", V.EFFICIENCY)
        raw = {("protection", "efficiency"), ("efficiency", "protection")}
        graph = derive_defeat_graph([protection, efficiency], raw)
        assert graph.attacks == frozenset({("protection", "efficiency")})

    def test_equal_rank_symmetric(self):
        inclusion = arg("inclusion", V.INCLUSION, V.JUSTICE)
        protection = arg("protection", V.DIGNITY)
        raw = {("inclusion", "protection"), ("protection", "inclusion")}
        graph = derive_defeat_graph([inclusion, protection], raw)
        assert graph.attacks == frozenset(raw)

    def test_paramount_strictly_above_all(self):
        no_harm = arg("no-harm", V.NO_HARM_PRINCIPLE)
        other = arg("other", V.JUSTICE)
        raw = {("no-harm", "other"), ("other", "no-harm")}
        graph = derive_defeat_graph([no_harm, other], raw)
        assert graph.attacks == frozenset({("no-harm", "other")})

    def test_unknown_endpoint(self):
        with pytest.raises(UnknownArgumentError):
            derive_defeat_graph([arg("a", V.HEALTH)], {("a", "ghost")})

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            derive_defeat_graph([arg("a", V.HEALTH), arg("a", V.JUSTICE)], set())


def value_sets(rank: ValueRank | None = None):
    pool = [v for v in V if rank is None or v.rank is rank]
    return st.frozensets(st.sampled_from(pool), min_size=1)


@st.composite
def argument_pools(draw, min_size: int = 1, max_size: int = 6):
    count = draw(st.integers(min_size, max_size))
    return [
        arg(f"a{i}", *draw(value_sets()))
        for i in range(count)
    ]


@st.composite
def raw_attack_sets(draw, names: list[str]):
    pairs = [(x, y) for x in names for y in names if x != y]
    if not pairs:
        return set()
    return set(draw(st.sets(st.sampled_from(pairs))))


class TestDefeatGraphProperties:
    @given(argument_pools(), st.data())
    def test_subset_of_raw_and_same_arguments(self, pool, data):
        names = [a.name for a in pool]
        raw = data.draw(raw_attack_sets(names))
        graph = derive_defeat_graph(pool, raw)
        assert graph.attacks <= frozenset(raw)
        assert graph.arguments == frozenset(names)

    @given(st.data())
    def test_uniform_rank_keeps_raw_graph(self, data):
        rank = data.draw(st.sampled_from(list(ValueRank)))
        count = data.draw(st.integers(1, 5))
        pool = [
            arg(f"a{i}", *data.draw(value_sets(rank)))
            for i in range(count)
        ]
        raw = data.draw(raw_attack_sets([a.name for a in pool]))
        graph = derive_defeat_graph(pool, raw)
        assert graph.attacks == frozenset(raw)

    @given(st.data())
    def test_strict_rank_difference_keeps_exactly_one_direction(self, data):
        low_rank, high_rank = sorted(
            data.draw(
                st.lists(
                    st.sampled_from(list(ValueRank)), min_size=2, max_size=2,
                    unique=True,
                )
            )
        )
        higher = arg("hi", *data.draw(value_sets(high_rank)))
        lower = arg("lo", *data.draw(value_sets(low_rank)))
        raw = {("hi", "lo"), ("lo", "hi")}
        graph = derive_defeat_graph([higher, lower], raw)
        assert graph.attacks == frozenset({("hi", "lo")})

    @given(st.data())
    def test_single_paramount_argument_dominates_grounded(self, data):
        count = data.draw(st.integers(1, 5))
        others = [
            arg(f"a{i}", *data.draw(value_sets(data.draw(
                st.sampled_from([ValueRank.INSTRUMENTAL, ValueRank.FUNDAMENTAL])
            ))))
            for i in range(count)
        ]
        paramount = arg("npa", V.NO_HARM_PRINCIPLE)
        names = [a.name for a in others]
        raw = data.draw(raw_attack_sets(names))
        raw |= {("npa", n) for n in names}
        raw |= {(n, "npa") for n in names}
        graph = derive_defeat_graph(others + [paramount], raw)
        assert grounded(graph).in_set == frozenset({"npa"})
