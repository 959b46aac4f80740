"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

from __future__ import annotations

import random
import time
from pathlib import Path

from click.testing import CliRunner

from diversity_curator import (
    ArgumentationFramework,
    CurationAction,
    DiversityPreference,
    DslError,
    RequestContext,
    Sphere,
    complete_labellings,
    decide,
    decision_hash,
    default_kb,
    default_kb_text,
    emit_kb,
    emit_scenarios,
    grounded,
    is_conflict_free,
    kb_append,
    kb_init,
    kb_load,
    load_bundled_fixtures,
    parse_kb,
    parse_scenario,
    preferred,
    stable,
    validate_context,
)
from diversity_curator.cli import main as cli_main
from diversity_curator.context import SPHERE_BY_NAME

from .decision_oracle import all_flag_contexts, decide_oracle
from .dslgen import mutations, random_kb_text, random_scenario_text
from .oracle import (
    complete_labellings_bruteforce,
    grounded_bruteforce,
    preferred_bruteforce,
    random_framework,
    stable_bruteforce,
)

SEED = 20260810


def _report(name: str, check) -> None:
    try:
        check()
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def _generated_frameworks() -> list[tuple[set[str], set[tuple[str, str]]]]:
    rng = random.Random(SEED)
    instances = []
    for i in range(200):
        instances.append(random_framework(rng, n_args=(i % 10) + 1))
    return instances


def test_figure2_golden():
    def check() -> None:
        ctx = validate_context(
            RequestContext(
                request_text="how do you cope with stress?",
                topic_tags=frozenset({"mental-health"}),
                sensitive=True,
                harm=False,
            )
        )
        started = time.perf_counter()
        decision = decide(ctx, default_kb())
        elapsed = time.perf_counter() - started
        assert decision.action is CurationAction.LIMIT_DIVERSITY
        assert decision.contested is False
        assert decision.prevailing == frozenset({"protection"})
        assert elapsed < 1.0, f"decision took {elapsed:.3f}s"

    _report("figure-2 golden scenario", check)


def test_five_argument_truth_table():
    def check() -> None:
        kb = default_kb()
        agreements = 0
        for cell in all_flag_contexts():
            ctx = validate_context(
                RequestContext(
                    request_text="r",
                    sphere=SPHERE_BY_NAME[cell["sphere"]],
                    sensitive=cell["sensitive"],
                    harm=cell["harm"],
                    demographic_target=cell["demographic_target"],
                    skill_specific=cell["skill_specific"],
                )
            )
            decision = decide(ctx, kb)
            expected_action, expected_contested = decide_oracle(cell)
            assert decision.action.value == expected_action, cell
            assert decision.contested == expected_contested, cell
            agreements += 1
        assert agreements == 48

    _report("48-context truth table vs independent oracle", check)


def test_semantics_oracle_agreement():
    def check() -> None:
        started = time.perf_counter()
        for args, attacks in _generated_frameworks():
            af = ArgumentationFramework(args, attacks)
            produced = {
                tuple(sorted((n, l.value) for n, l in lab.items()))
                for lab in complete_labellings(af)
            }
            brute = {
                tuple(sorted(lab.items()))
                for lab in complete_labellings_bruteforce(args, attacks)
            }
            assert produced == brute, (args, attacks)
            got_grounded = {n: l.value for n, l in grounded(af).items()}
            assert got_grounded == grounded_bruteforce(args, attacks), (args, attacks)
            assert preferred(af) == preferred_bruteforce(args, attacks), (args, attacks)
            assert stable(af) == stable_bruteforce(args, attacks), (args, attacks)
        elapsed = time.perf_counter() - started
        assert elapsed < 30.0, f"oracle comparison took {elapsed:.1f}s"

    _report("semantics vs 3^n oracle on 200 random frameworks", check)


def test_classical_identities():
    def check() -> None:
        for args, attacks in _generated_frameworks():
            af = ArgumentationFramework(args, attacks)
            preferred_sets = preferred(af)
            assert stable(af) <= preferred_sets
            grounded_in = grounded(af).in_set
            for labelling in complete_labellings(af):
                assert grounded_in <= labelling.in_set
                assert is_conflict_free(af, labelling.in_set)
            for extension in preferred_sets:
                assert is_conflict_free(af, extension)

    _report("classical identities on every generated instance", check)


def test_no_harm_dominance():
    def check() -> None:
        rng = random.Random(SEED + 1)
        kb = default_kb()
        spheres = list(Sphere)
        preferences = list(DiversityPreference)
        for _ in range(1000):
            ctx = validate_context(
                RequestContext(
                    request_text=f"request {rng.randint(0, 10**6)}",
                    sphere=rng.choice(spheres),
                    sensitive=rng.random() < 0.5,
                    harm=True,
                    demographic_target=rng.random() < 0.5,
                    skill_specific=rng.random() < 0.5,
                    diversity_preference=rng.choice(preferences),
                    situatedness=f"note {rng.randint(0, 10**6)}",
                )
            )
            assert decide(ctx, kb).action is CurationAction.REJECT_REQUEST

    _report("no-harm dominance on 1000 randomized contexts", check)


def test_dsl_round_trip_and_mutations():
    def check() -> None:
        rng = random.Random(SEED + 2)

        def round_trip_kb(text: str) -> None:
            first = parse_kb(text)
            assert parse_kb(emit_kb(first)) == first

        def round_trip_scn(text: str) -> None:
            first = parse_scenario(text)
            assert parse_scenario(emit_scenarios(first)) == first

        round_trip_kb(default_kb_text())
        fixture_paths = sorted(
            (Path(__file__).resolve().parents[1] / "src" / "diversity_curator" / "fixtures").glob("*.scn")
        )
        assert len(fixture_paths) == 6
        for path in fixture_paths:
            round_trip_scn(path.read_text(encoding="utf-8"))

        valid_files = []
        for i in range(500):
            if i % 2 == 0:
                text = random_kb_text(rng)
                round_trip_kb(text)
                valid_files.append(("kb", text))
            else:
                text = random_scenario_text(rng)
                round_trip_scn(text)
                valid_files.append(("scn", text))

        mutated_total = 0
        for kind, text in rng.sample(valid_files, 120):
            for mutated, planted in mutations(rng, text, kind):
                mutated_total += 1
                try:
                    if kind == "kb":
                        parse_kb(mutated)
                    else:
                        parse_scenario(mutated)
                except DslError as exc:
                    assert exc.span is not None
                    lines = mutated.split("\n")
                    assert 1 <= exc.span.line <= len(lines)
                    if planted is not None:
                        assert planted in lines[exc.span.line - 1], (
                            planted, exc.span, mutated,
                        )
                else:
                    raise AssertionError(f"mutation not rejected: {mutated!r}")
        assert mutated_total >= 400

    _report("DSL round-trip on 500 fuzz files; mutations rejected with spans", check)


def test_determinism_and_audit(tmp_path):
    def check() -> None:
        log = tmp_path / "kb.log"
        kb_init(log)
        contexts = [
            validate_context(
                RequestContext(request_text="q", topic_tags=frozenset({tag}),
                               sensitive=sensitive)
            )
            for tag in ("mental-health", "economy", "sports")
            for sensitive in (False, True)
        ]
        replay_log: list[tuple[RequestContext, int, str]] = []

        def record_all() -> None:
            kb = kb_load(log)
            for ctx in contexts:
                replay_log.append((ctx, kb.version, decision_hash(decide(ctx, kb))))

        record_all()
        kb_append(
            log,
            "argument extra-caution {\n  promotes: dignity\n"
            "  applies-if: preference = different\n  stance: may-limit-caution\n}",
            "auditor",
        )
        record_all()
        kb_append(
            log,
            "argument efficiency {\n  promotes: efficiency\n"
            "  applies-if: skill_specific = true\n  stance: may-limit\n}",
            "auditor",
        )
        record_all()

        for ctx, version, expected in replay_log:
            replayed = kb_load(log, at_version=version)
            assert decision_hash(decide(ctx, replayed)) == expected

    _report("replaying logged (context, KB version) pairs is byte-identical", check)


def test_six_fixture_suite():
    def check() -> None:
        fixtures = load_bundled_fixtures()
        assert len(fixtures) == 6
        result = CliRunner().invoke(cli_main, ["scenarios-run"])
        assert result.exit_code == 0, result.output
        assert "6/6 fixtures passed" in result.output

    _report("bundled six-fixture suite passes via scenarios-run", check)
