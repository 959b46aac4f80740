from __future__ import annotations

import json

from hypothesis import given, settings, strategies as st

from diversity_curator import (
    ArgumentRule,
    Atom,
    CurationAction,
    DiversityPreference,
    EthicalValue,
    Instrument,
    KnowledgeBase,
    Not,
    RequestContext,
    Sphere,
    Stance,
    decide,
    decision_payload,
    decision_to_json,
    default_kb,
    eval_condition,
    explain,
    instantiate,
    raw_attacks,
    stances_conflict,
    validate_context,
)
from diversity_curator.rules import FALLBACK_NOTE, NO_APPLICABLE_NOTE

V = EthicalValue


def ctx(
    sphere: Sphere = Sphere.MAXIMUM_FREEDOM,
    sensitive: bool = False,
    harm: bool = False,
    demographic_target: bool = False,
    skill_specific: bool = False,
    preference: DiversityPreference = DiversityPreference.UNSPECIFIED,
) -> RequestContext:
    return validate_context(
        RequestContext(
            request_text="request",
            sphere=sphere,
            sensitive=sensitive,
            harm=harm,
            demographic_target=demographic_target,
            skill_specific=skill_specific,
            diversity_preference=preference,
        )
    )


FIGURE2_CTX = ctx(sphere=Sphere.PROTECTION_SENSITIVE, sensitive=True)


contexts = st.builds(
    ctx,
    sphere=st.sampled_from(list(Sphere)),
    sensitive=st.booleans(),
    harm=st.booleans(),
    demographic_target=st.booleans(),
    skill_specific=st.booleans(),
    preference=st.sampled_from(list(DiversityPreference)),
)


class TestStanceConflicts:
    def test_must_not_limit_conflicts_pro_limiting(self):
        for other in (Stance.MUST_LIMIT, Stance.MAY_LIMIT, Stance.MAY_LIMIT_CAUTION):
            assert stances_conflict(Stance.MUST_NOT_LIMIT, other)
            assert stances_conflict(other, Stance.MUST_NOT_LIMIT)

    def test_reject_conflicts_every_other_stance(self):
        for other in Stance:
            assert stances_conflict(Stance.REJECT_REQUEST, other) == (
                other is not Stance.REJECT_REQUEST
            )

    def test_pro_limiting_stances_do_not_conflict(self):
        pro = (Stance.MUST_LIMIT, Stance.MAY_LIMIT, Stance.MAY_LIMIT_CAUTION)
        for a in pro:
            for b in pro:
                assert not stances_conflict(a, b)

    @given(st.sampled_from(list(Stance)), st.sampled_from(list(Stance)))
    def test_symmetric(self, a, b):
        assert stances_conflict(a, b) == stances_conflict(b, a)


class TestEvalCondition:
    def test_sensitive_atom(self):
        assert eval_condition(Atom("sensitive", "=", "true"), FIGURE2_CTX)

    def test_negation(self):
        expr = Not(Atom("harm", "=", "true"))
        assert eval_condition(expr, ctx(harm=False))
        assert not eval_condition(expr, ctx(harm=True))

    def test_conjunction_of_sphere_and_flag(self):
        from diversity_curator import And

        expr = And(
            [
                Atom("sphere", "=", "shared-resources"),
                Atom("demographic_target", "=", "true"),
            ]
        )
        assert eval_condition(
            expr, ctx(sphere=Sphere.SHARED_RESOURCES, demographic_target=True)
        )
        assert not eval_condition(expr, ctx(sphere=Sphere.SHARED_RESOURCES))

    def test_preference_atom(self):
        expr = Atom("preference", "!=", "unspecified")
        assert eval_condition(expr, ctx(preference=DiversityPreference.SIMILAR))
        assert not eval_condition(expr, ctx())


class TestInstantiate:
    def test_figure2_context_yields_protection_only(self):
        names = {a.name for a in instantiate(default_kb(), FIGURE2_CTX)}
        assert names == {"protection"}

    def test_shared_resources_with_demographic_target(self):
        names = {
            a.name
            for a in instantiate(
                default_kb(), ctx(sphere=Sphere.SHARED_RESOURCES, demographic_target=True)
            )
        }
        assert names == {"inclusion", "efficiency"}

    def test_harm_in_maximum_freedom(self):
        names = {
            a.name
            for a in instantiate(default_kb(), ctx(harm=True))
        }
        assert names == {"no-harm", "freedom-of-choice"}

    def test_premises_record_atoms_that_held(self):
        (protection,) = instantiate(default_kb(), FIGURE2_CTX)
        assert protection.premises == (
            "sphere = protection-sensitive",
            "sensitive = true",
        )


class TestRawAttacks:
    def kb_args(self, context):
        return instantiate(default_kb(), context)

    def test_protection_vs_inclusion_symmetric(self):
        args = self.kb_args(ctx(sphere=Sphere.SHARED_RESOURCES, sensitive=True))
        assert raw_attacks(args) == frozenset(
            {("protection", "inclusion"), ("inclusion", "protection")}
        )

    def test_pro_limiting_pair_no_attacks(self):
        args = self.kb_args(
            ctx(sphere=Sphere.PROTECTION_SENSITIVE, demographic_target=True)
        )
        assert {a.name for a in args} == {"protection", "efficiency"}
        assert raw_attacks(args) == frozenset()

    def test_reject_conflicts_all(self):
        args = self.kb_args(ctx(sphere=Sphere.PROTECTION_SENSITIVE, harm=True))
        assert raw_attacks(args) == frozenset(
            {("no-harm", "protection"), ("protection", "no-harm")}
        )


class TestDecide:
    def test_figure2_limits_diversity(self):
        decision = decide(FIGURE2_CTX, default_kb())
        assert decision.action is CurationAction.LIMIT_DIVERSITY
        assert decision.prevailing == frozenset({"protection"})
        assert decision.contested is False

    def test_inclusion_defeats_efficiency(self):
        decision = decide(
            ctx(sphere=Sphere.SHARED_RESOURCES, demographic_target=True), default_kb()
        )
        assert decision.action is CurationAction.DO_NOT_LIMIT
        assert decision.prevailing == frozenset({"inclusion"})
        assert Instrument.SCOPE_OPTIONS in decision.instruments
        removed = [e for e in decision.trace if e["step"] == "attack-removed"]
        assert removed == [
            {
                "step": "attack-removed",
                "attacker": "efficiency",
                "attacker_rank": "instrumental",
                "target": "inclusion",
                "target_rank": "fundamental",
                "reason": "attacker ranked below target",
            }
        ]

    def test_equal_rank_deadlock_falls_back_protectively(self):
        decision = decide(
            ctx(sphere=Sphere.SHARED_RESOURCES, sensitive=True), default_kb()
        )
        assert decision.action is CurationAction.LIMIT_DIVERSITY
        assert decision.contested is True
        assert decision.prevailing == frozenset()
        assert Instrument.NUDGE_REVISE in decision.instruments

    def test_harm_rejects_request(self):
        decision = decide(ctx(sphere=Sphere.MAXIMUM_FREEDOM, harm=True), default_kb())
        assert decision.action is CurationAction.REJECT_REQUEST
        assert decision.instruments == (
            Instrument.BLOCK_REQUEST,
            Instrument.REPORT_COMPLAINT,
        )

    def test_caution_outranks_plain_permit_in_mapping(self):
        decision = decide(
            ctx(sphere=Sphere.MAXIMUM_FREEDOM, skill_specific=True), default_kb()
        )
        assert decision.prevailing == frozenset({"freedom-of-choice", "efficiency"})
        assert decision.action is CurationAction.PERMIT_LIMIT_WITH_NUDGE

    def test_no_applicable_rule_respects_preference(self):
        empty_kb = KnowledgeBase(version=0, rules=())
        decision = decide(ctx(), empty_kb)
        assert decision.action is CurationAction.PERMIT_LIMIT
        assert decision.contested is False
        assert any(e["step"] == "no-applicable" for e in decision.trace)

    def test_efficiency_alone_permits_limit(self):
        kb = KnowledgeBase(version=1, rules=(default_kb().rules[0],))
        decision = decide(ctx(demographic_target=True), kb)
        assert decision.action is CurationAction.PERMIT_LIMIT

    @given(contexts)
    @settings(max_examples=200)
    def test_no_harm_dominance(self, context):
        if not context.harm:
            context = validate_context(
                RequestContext(
                    request_text=context.request_text or "r",
                    sphere=context.sphere,
                    sensitive=context.sensitive,
                    harm=True,
                    demographic_target=context.demographic_target,
                    skill_specific=context.skill_specific,
                    diversity_preference=context.diversity_preference,
                )
            )
        decision = decide(context, default_kb())
        assert decision.action is CurationAction.REJECT_REQUEST

    @given(contexts)
    def test_protection_over_efficiency(self, context):
        if context.harm or context.sphere is not Sphere.PROTECTION_SENSITIVE:
            return
        if not (context.demographic_target or context.skill_specific):
            return
        decision = decide(context, default_kb())
        assert decision.action is CurationAction.LIMIT_DIVERSITY

    @given(contexts)
    def test_prevailing_stances_never_conflict(self, context):
        kb = default_kb()
        decision = decide(context, kb)
        stance_of = {rule.name: rule.stance for rule in kb.rules}
        prevailing = sorted(decision.prevailing)
        for i, a in enumerate(prevailing):
            for b in prevailing[i + 1:]:
                assert not stances_conflict(stance_of[a], stance_of[b])

    @given(contexts)
    def test_fallback_safety(self, context):
        decision = decide(context, default_kb())
        if decision.contested:
            assert not decision.labelling.in_set
            assert decision.labelling.undec_set

    @given(contexts)
    def test_determinism(self, context):
        kb = default_kb()
        first = decision_to_json(decide(context, kb))
        second = decision_to_json(decide(context, kb))
        assert first == second

    @given(contexts, st.data())
    @settings(max_examples=100)
    def test_rank_scaling_invariance(self, context, data):
        kb = default_kb()
        target = data.draw(st.sampled_from(kb.rules))
        rank = max(v.rank for v in target.promotes)
        same_rank_pool = [v for v in EthicalValue if v.rank is rank]
        lower_pool = [v for v in EthicalValue if v.rank < rank]
        replacement = data.draw(
            st.frozensets(st.sampled_from(same_rank_pool), min_size=1)
        ) | data.draw(st.frozensets(st.sampled_from(lower_pool)) if lower_pool else st.just(frozenset()))
        swapped = ArgumentRule(
            name=target.name,
            applies_if=target.applies_if,
            stance=target.stance,
            promotes=replacement,
        )
        rules = tuple(
            swapped if rule.name == target.name else rule for rule in kb.rules
        )
        modified = KnowledgeBase(version=kb.version, rules=rules)
        assert decide(context, modified).action is decide(context, kb).action


class TestExplain:
    def test_figure2_rendering(self):
        text = explain(decide(FIGURE2_CTX, default_kb()))
        assert "protection: IN" in text
        assert "decision: limit-diversity (mapped from must-limit)" in text

    def test_contested_rendering(self):
        decision = decide(ctx(sphere=Sphere.SHARED_RESOURCES, sensitive=True), default_kb())
        text = explain(decision)
        assert FALLBACK_NOTE in text
        assert "flagged contested" in text

    def test_no_applicable_rendering(self):
        decision = decide(ctx(), KnowledgeBase(version=0, rules=()))
        assert NO_APPLICABLE_NOTE in explain(decision)

    def test_removed_attack_shows_both_ranks(self):
        decision = decide(
            ctx(sphere=Sphere.SHARED_RESOURCES, demographic_target=True), default_kb()
        )
        text = explain(decision)
        assert "efficiency -x-> inclusion (instrumental below fundamental)" in text


class TestDecisionJson:
    def test_field_order_is_stable(self):
        payload = decision_payload(decide(FIGURE2_CTX, default_kb()))
        assert list(payload) == [
            "action", "instruments", "prevailing", "labelling", "contested", "trace",
        ]

    def test_labelling_keys_sorted(self):
        payload = decision_payload(
            decide(ctx(sphere=Sphere.SHARED_RESOURCES, sensitive=True), default_kb())
        )
        keys = list(payload["labelling"])
        assert keys == sorted(keys)

    def test_json_parses_back(self):
        document = decision_to_json(decide(FIGURE2_CTX, default_kb()))
        parsed = json.loads(document)
        assert parsed["action"] == "limit-diversity"
        assert parsed["contested"] is False


class TestKnowledgeBase:
    def test_shadowing_keeps_first_position(self):
        kb = default_kb()
        override = ArgumentRule(
            name="efficiency",
            applies_if=Atom("harm", "=", "false"),
            stance=Stance.MAY_LIMIT,
            promotes=frozenset({V.EFFICIENCY}),
        )
        updated = kb.with_rule(override)
        assert updated.version == kb.version + 1
        assert [r.name for r in updated.rules] == [r.name for r in kb.rules]
        assert updated.rules[0].applies_if == Atom("harm", "=", "false")

    def test_version_excluded_from_equality(self):
        kb = default_kb()
        renumbered = KnowledgeBase(version=99, rules=kb.rules)
        assert renumbered == kb
