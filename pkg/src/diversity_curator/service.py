"""JSON HTTP API the chat platform and the review console integrate against.

Every request binds an immutable knowledge-base snapshot; rule commits are
serialized by a single writer lock and swap the snapshot atomically. Each
response carries the `X-KB-Version` header of the snapshot it used, and the
POST /v1/decide body is the same canonical Decision JSON the CLI prints.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response

from .af import Semantics, complete_labellings, grounded, parse_apx, preferred, stable
from .context import context_from_json, context_to_json
from .dsl import ScenarioFixture, emit_kb, parse_scenario
from .errors import (
    ApxError,
    ContextError,
    CuratorError,
    DslError,
    KbLogError,
    KbValidationError,
    UnclassifiableError,
)
from .kblog import coach, kb_append, kb_init, kb_load
from .rules import KnowledgeBase, decide, decision_payload, decision_to_json


class ApiErrorResponse(Exception):
    """Carries one ApiError payload to the outermost handler."""

    def __init__(
        self,
        status: int,
        code: str,
        message: str,
        span: dict[str, int] | None = None,
    ) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.span = span

    def payload(self) -> dict[str, Any]:
        body: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.span is not None:
            body["span"] = self.span
        return body


def _api_error_from(exc: Exception) -> ApiErrorResponse:
    if isinstance(exc, DslError):
        span = (
            {"line": exc.span.line, "column": exc.span.column}
            if exc.span
            else None
        )
        return ApiErrorResponse(400, "parse-error", exc.reason, span)
    if isinstance(exc, ApxError):
        return ApiErrorResponse(
            400, "parse-error", exc.reason, {"line": exc.line, "column": 1}
        )
    if isinstance(exc, UnclassifiableError):
        return ApiErrorResponse(400, "unclassifiable", str(exc))
    if isinstance(exc, ContextError):
        return ApiErrorResponse(400, "bad-request", str(exc))
    if isinstance(exc, KbValidationError):
        span = (
            {"line": exc.span.line, "column": exc.span.column}
            if exc.span
            else None
        )
        return ApiErrorResponse(400, "parse-error", exc.reason, span)
    if isinstance(exc, KbLogError):
        return ApiErrorResponse(409, "kb-conflict", str(exc))
    if isinstance(exc, (CuratorError, ValueError)):
        return ApiErrorResponse(400, "bad-request", str(exc))
    return ApiErrorResponse(500, "internal", str(exc))


class KbStore:
    """Single-writer, multi-reader access to the knowledge-base log."""

    def __init__(self, path: str | Path, create_missing: bool = True) -> None:
        self.path = Path(path)
        if create_missing and not self.path.exists():
            kb_init(self.path)
        self._lock = threading.Lock()
        self._kb = kb_load(self.path)

    @property
    def kb(self) -> KnowledgeBase:
        """The current immutable snapshot."""
        return self._kb

    def commit(self, rule_text: str, author: str) -> KnowledgeBase:
        with self._lock:
            version = kb_append(self.path, rule_text, author)
            self._kb = kb_load(self.path, at_version=version)
            return self._kb


def _fixture_payload(fixture: ScenarioFixture) -> dict[str, Any]:
    return {
        "name": fixture.name,
        "context": context_to_json(fixture.context),
        "expect": fixture.expect.value,
        "note": fixture.note,
    }


def run_fixtures(
    fixtures: list[ScenarioFixture], kb: KnowledgeBase
) -> dict[str, Any]:
    """Evaluate fixtures against a knowledge base; failures carry their trace."""
    results = []
    passed = 0
    for fixture in fixtures:
        decision = decide(fixture.context, kb)
        ok = decision.action == fixture.expect
        passed += ok
        entry: dict[str, Any] = {
            "name": fixture.name,
            "expected": fixture.expect.value,
            "actual": decision.action.value,
            "contested": decision.contested,
            "passed": ok,
        }
        if not ok:
            entry["trace"] = [dict(e) for e in decision.trace]
        results.append(entry)
    return {
        "total": len(fixtures),
        "passed": passed,
        "all_passed": passed == len(fixtures),
        "results": results,
    }


def create_app(kb_log_path: str | Path, create_missing: bool = True) -> FastAPI:
    store = KbStore(kb_log_path, create_missing=create_missing)
    app = FastAPI(title="diversity-curator", docs_url=None, redoc_url=None)
    app.state.store = store

    def respond_json(payload: Any, version: int, status: int = 200) -> Response:
        return Response(
            content=json.dumps(payload, indent=2) + "\n",
            status_code=status,
            media_type="application/json",
            headers={"X-KB-Version": str(version)},
        )

    async def body_json(request: Request) -> Any:
        raw = await request.body()
        try:
            return json.loads(raw) if raw else {}
        except json.JSONDecodeError as exc:
            raise ApiErrorResponse(400, "bad-request", f"invalid JSON body: {exc}")

    @app.exception_handler(ApiErrorResponse)
    async def handle_api_error(request: Request, exc: ApiErrorResponse) -> Response:
        return Response(
            content=json.dumps(exc.payload(), indent=2) + "\n",
            status_code=exc.status,
            media_type="application/json",
            headers={"X-KB-Version": str(store.kb.version)},
        )

    @app.exception_handler(CuratorError)
    async def handle_curator_error(request: Request, exc: CuratorError) -> Response:
        return await handle_api_error(request, _api_error_from(exc))

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception) -> Response:
        return await handle_api_error(request, _api_error_from(exc))

    @app.post("/v1/decide")
    async def decide_endpoint(request: Request) -> Response:
        payload = await body_json(request)
        if not isinstance(payload, dict):
            raise ApiErrorResponse(400, "bad-request", "context must be a JSON object")
        kb = store.kb
        try:
            ctx = context_from_json(payload)
            decision = decide(ctx, kb)
        except (ValueError, CuratorError) as exc:
            raise _api_error_from(exc) from exc
        return Response(
            content=decision_to_json(decision) + "\n",
            media_type="application/json",
            headers={"X-KB-Version": str(kb.version)},
        )

    @app.get("/v1/kb")
    async def kb_endpoint() -> Response:
        kb = store.kb
        return respond_json({"version": kb.version, "text": emit_kb(kb)}, kb.version)

    @app.post("/v1/kb/rules")
    async def kb_rules_endpoint(request: Request, preview: str | None = None) -> Response:
        payload = await body_json(request)
        if not isinstance(payload, dict) or "rule" not in payload:
            raise ApiErrorResponse(400, "bad-request", "body must carry a 'rule' field")
        rule_text = str(payload["rule"])
        if preview == "1":
            context_payload = payload.get("context")
            if not isinstance(context_payload, dict):
                raise ApiErrorResponse(
                    400, "bad-request", "preview requires a 'context' object"
                )
            kb = store.kb
            try:
                ctx = context_from_json(context_payload)
                step = coach(ctx, kb, rule_text)
            except (ValueError, CuratorError) as exc:
                raise _api_error_from(exc) from exc
            diff = step.diff
            return respond_json(
                {
                    "kb_version": kb.version,
                    "before": decision_payload(step.before),
                    "after": decision_payload(step.after),
                    "diff": {
                        "action_changed": diff.action_changed,
                        "action_before": diff.action_before,
                        "action_after": diff.action_after,
                        "contested_before": diff.contested_before,
                        "contested_after": diff.contested_after,
                        "label_changes": {
                            name: list(pair)
                            for name, pair in diff.label_changes.items()
                        },
                        "added_attacks": sorted(map(list, diff.added_attacks)),
                        "removed_attacks": sorted(map(list, diff.removed_attacks)),
                        "empty": diff.empty,
                    },
                },
                kb.version,
            )
        author = str(payload.get("author", "api"))
        try:
            kb = store.commit(rule_text, author)
        except (ValueError, CuratorError) as exc:
            raise _api_error_from(exc) from exc
        return respond_json({"version": kb.version}, kb.version)

    @app.get("/v1/scenarios")
    async def scenarios_endpoint() -> Response:
        from .defaults import load_bundled_fixtures

        kb = store.kb
        fixtures = load_bundled_fixtures()
        return respond_json(
            {
                "version": kb.version,
                "fixtures": [_fixture_payload(f) for f in fixtures],
            },
            kb.version,
        )

    @app.post("/v1/scenarios/run")
    async def scenarios_run_endpoint(request: Request) -> Response:
        from .defaults import load_bundled_fixtures

        payload = await body_json(request)
        kb = store.kb
        try:
            if isinstance(payload, dict) and "fixtures" in payload:
                fixtures = parse_scenario(str(payload["fixtures"]))
            else:
                fixtures = load_bundled_fixtures()
            report = run_fixtures(fixtures, kb)
        except (ValueError, CuratorError) as exc:
            raise _api_error_from(exc) from exc
        report["version"] = kb.version
        return respond_json(report, kb.version)

    @app.post("/v1/af/solve")
    async def af_solve_endpoint(request: Request) -> Response:
        payload = await body_json(request)
        if not isinstance(payload, dict) or "apx" not in payload:
            raise ApiErrorResponse(400, "bad-request", "body must carry an 'apx' field")
        semantics_name = str(payload.get("semantics", "grounded"))
        try:
            semantics = Semantics(semantics_name)
        except ValueError as exc:
            raise ApiErrorResponse(
                400, "bad-request", f"unknown semantics {semantics_name!r}"
            ) from exc
        kb = store.kb
        try:
            af = parse_apx(str(payload["apx"]))
            extensions = solve(af, semantics)
        except (ValueError, CuratorError) as exc:
            raise _api_error_from(exc) from exc
        return respond_json(
            {
                "semantics": semantics.value,
                "extensions": [sorted(ext) for ext in extensions],
            },
            kb.version,
        )

    return app


def solve(af, semantics: Semantics) -> list[frozenset[str]]:
    """Extensions (IN-sets) under the requested semantics, deterministically ordered."""
    if semantics is Semantics.GROUNDED:
        return [grounded(af).in_set]
    if semantics is Semantics.COMPLETE:
        return sorted(
            (lab.in_set for lab in complete_labellings(af)), key=sorted
        )
    if semantics is Semantics.PREFERRED:
        return sorted(preferred(af), key=sorted)
    return sorted(stable(af), key=sorted)
