"""Bundled default knowledge base and scenario fixtures."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .dsl import ScenarioFixture, parse_kb, parse_scenario
from .rules import KnowledgeBase


def _fixtures_root() -> Path:
    return Path(str(resources.files("diversity_curator") / "fixtures"))


def default_kb_text() -> str:
    return (_fixtures_root() / "default.kb").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def default_kb() -> KnowledgeBase:
    return parse_kb(default_kb_text())


def bundled_fixtures_dir() -> Path:
    return _fixtures_root()


def load_bundled_fixtures() -> list[ScenarioFixture]:
    fixtures: list[ScenarioFixture] = []
    for path in sorted(_fixtures_root().glob("*.scn")):
        fixtures.extend(parse_scenario(path.read_text(encoding="utf-8")))
    return fixtures
