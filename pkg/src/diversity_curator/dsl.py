"""Parser and canonical emitter for rule (.kb) and scenario (.scn) files.

Grammar (normative):

    file     := (block | comment | blank)*
    comment  := "#" any-to-eol
    block    := kb_block | scn_block
    kb_block := "argument" NAME "{"
                    "promotes:" value ("," value)*
                    "applies-if:" cond
                    "stance:" STANCE
                "}"
    scn_block := "scenario" STRING "{" (ctxfield)* "expect:" ACTION
                 ("note:" STRING)? "}"
    ctxfield := FIELDNAME ":" literal
    cond     := disj
    disj     := conj ("or" conj)*
    conj     := neg ("and" neg)*
    neg      := ["not"] atom
    atom     := FIELDNAME ("=" | "!=") literal | "(" cond ")"

Newlines terminate field entries; whitespace is otherwise insignificant.
Unknown fields, values, and stances are hard errors carrying a source span.
Comments are dropped by the emitters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .context import (
    ACTION_BY_NAME,
    CurationAction,
    PREFERENCE_BY_NAME,
    RequestContext,
    SPHERE_BY_NAME,
    validate_context,
)
from .errors import (
    DslSyntaxError,
    SourceSpan,
    UnknownFieldError,
    UnknownStanceError,
    UnknownValueError,
)
from .rules import (
    And,
    ArgumentRule,
    Atom,
    CONDITION_FIELDS,
    Condition,
    KnowledgeBase,
    Not,
    Or,
    STANCE_BY_NAME,
)
from .values import VALUE_BY_NAME

TOKEN_PATTERN = re.compile(r"[A-Za-z0-9_-]+\Z")

# Context fields allowed in scenario blocks, with their literal kind.
CONTEXT_FIELD_KINDS: dict[str, str] = {
    "request_text": "string",
    "topic_tags": "tags",
    "sphere": "sphere",
    "demographic_target": "bool",
    "skill_specific": "bool",
    "sensitive": "bool",
    "harm": "bool",
    "diversity_preference": "preference",
    "situatedness": "string",
}

@dataclass(frozen=True)
class ScenarioFixture:
    """One named scenario: a context plus the curation action it should get."""

    name: str
    context: RequestContext
    expect: CurationAction
    note: str | None = None
    # Explicit (field, canonical-literal) entries in file order; the basis
    # for emitting the fixture back out.
    entries: tuple[tuple[str, str], ...] = ()
    span: SourceSpan | None = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_NAME_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-"
)
_PUNCT = {"{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
          ",": "COMMA", ":": "COLON"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, column = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            tokens.append(Token("NEWLINE", "\n", SourceSpan(line, column)))
            line += 1
            column = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            column += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
                column += 1
        elif ch == '"':
            start = SourceSpan(line, column)
            i += 1
            column += 1
            parts: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise DslSyntaxError("unterminated string", start)
                c = text[i]
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise DslSyntaxError(
                            "invalid escape in string", SourceSpan(line, column)
                        )
                    parts.append(text[i + 1])
                    i += 2
                    column += 2
                elif c == '"':
                    i += 1
                    column += 1
                    break
                else:
                    parts.append(c)
                    i += 1
                    column += 1
            tokens.append(Token("STRING", "".join(parts), start))
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, SourceSpan(line, column)))
            i += 1
            column += 1
        elif ch == "=":
            tokens.append(Token("OP", "=", SourceSpan(line, column)))
            i += 1
            column += 1
        elif ch == "!":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(Token("OP", "!=", SourceSpan(line, column)))
                i += 2
                column += 2
            else:
                raise DslSyntaxError(
                    "expected '=' after '!'", SourceSpan(line, column)
                )
        elif ch in _NAME_CHARS:
            start = SourceSpan(line, column)
            j = i
            while j < n and text[j] in _NAME_CHARS:
                j += 1
            tokens.append(Token("NAME", text[i:j], start))
            column += j - i
            i = j
        else:
            raise DslSyntaxError(
                f"unexpected character {ch!r}", SourceSpan(line, column)
            )
    tokens.append(Token("EOF", "", SourceSpan(line, column)))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "EOF":
            self.pos += 1
        return token

    def at(self, kind: str, text: str | None = None) -> bool:
        token = self.peek()
        return token.kind == kind and (text is None or token.text == text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind or (text is not None and token.text != text):
            wanted = what or (text if text is not None else kind.lower())
            found = token.text if token.text else token.kind.lower()
            raise DslSyntaxError(f"expected {wanted!r}, found {found!r}", token.span)
        return self.advance()

    def skip_newlines(self) -> None:
        while self.at("NEWLINE"):
            self.advance()

    def end_of_entry(self, what: str) -> None:
        """A field entry ends at a newline (or just before the closing brace)."""
        if self.at("NEWLINE"):
            self.skip_newlines()
        elif not self.at("RBRACE"):
            token = self.peek()
            raise DslSyntaxError(
                f"expected end of {what} entry, found {token.text!r}", token.span
            )

    # -- shared literal handling --

    def literal(self) -> Token:
        token = self.peek()
        if token.kind in ("NAME", "STRING"):
            return self.advance()
        raise DslSyntaxError(
            f"expected a literal, found {token.text or token.kind.lower()!r}",
            token.span,
        )

    # -- rule files --

    def parse_kb(self) -> KnowledgeBase:
        rules: list[ArgumentRule] = []
        blocks = 0
        self.skip_newlines()
        while not self.at("EOF"):
            keyword = self.expect("NAME", what="'argument'")
            if keyword.text != "argument":
                raise DslSyntaxError(
                    f"expected 'argument', found {keyword.text!r}", keyword.span
                )
            rules.append(self.rule_block(keyword.span))
            blocks += 1
            self.skip_newlines()
        return KnowledgeBase(version=blocks, rules=rules)

    def rule_block(self, span: SourceSpan) -> ArgumentRule:
        name = self.expect("NAME", what="rule name")
        self.expect("LBRACE")
        self.skip_newlines()

        self.expect("NAME", "promotes")
        self.expect("COLON")
        promotes = [self.value_literal()]
        while self.at("COMMA"):
            self.advance()
            promotes.append(self.value_literal())
        self.end_of_entry("promotes")

        self.expect("NAME", "applies-if")
        self.expect("COLON")
        condition = self.condition()
        self.end_of_entry("applies-if")

        self.expect("NAME", "stance")
        self.expect("COLON")
        stance_token = self.literal()
        stance = STANCE_BY_NAME.get(stance_token.text)
        if stance is None:
            raise UnknownStanceError(
                f"unknown stance {stance_token.text!r}", stance_token.span
            )
        self.skip_newlines()
        self.expect("RBRACE")
        return ArgumentRule(
            name=name.text,
            applies_if=condition,
            stance=stance,
            promotes=frozenset(promotes),
            span=span,
        )

    def value_literal(self):
        token = self.literal()
        value = VALUE_BY_NAME.get(token.text)
        if value is None:
            raise UnknownValueError(
                f"unknown ethical value {token.text!r}", token.span
            )
        return value

    # -- conditions --

    def condition(self) -> Condition:
        return self.disjunction()

    def disjunction(self) -> Condition:
        parts = [self.conjunction()]
        while self.at("NAME", "or"):
            self.advance()
            parts.append(self.conjunction())
        if len(parts) == 1:
            return parts[0]
        return Or(parts, span=_span_of(parts[0]))

    def conjunction(self) -> Condition:
        parts = [self.negation()]
        while self.at("NAME", "and"):
            self.advance()
            parts.append(self.negation())
        if len(parts) == 1:
            return parts[0]
        return And(parts, span=_span_of(parts[0]))

    def negation(self) -> Condition:
        if self.at("NAME", "not"):
            token = self.advance()
            return Not(self.atom(), span=token.span)
        return self.atom()

    def atom(self) -> Condition:
        if self.at("LPAREN"):
            self.advance()
            inner = self.condition()
            self.expect("RPAREN")
            return inner
        token = self.expect("NAME", what="condition field")
        allowed = CONDITION_FIELDS.get(token.text)
        if allowed is None:
            raise UnknownFieldError(
                f"unknown condition field {token.text!r}", token.span
            )
        op = self.expect("OP", what="'=' or '!='")
        literal = self.literal()
        if literal.text not in allowed:
            raise UnknownValueError(
                f"value {literal.text!r} not allowed for field {token.text!r}",
                literal.span,
            )
        return Atom(token.text, op.text, literal.text, span=token.span)

    # -- scenario files --

    def parse_scenarios(self) -> list[ScenarioFixture]:
        fixtures: list[ScenarioFixture] = []
        self.skip_newlines()
        while not self.at("EOF"):
            keyword = self.expect("NAME", what="'scenario'")
            if keyword.text != "scenario":
                raise DslSyntaxError(
                    f"expected 'scenario', found {keyword.text!r}", keyword.span
                )
            fixtures.append(self.scenario_block(keyword.span))
            self.skip_newlines()
        return fixtures

    def scenario_block(self, span: SourceSpan) -> ScenarioFixture:
        name_token = self.expect("STRING", what="scenario name string")
        if not TOKEN_PATTERN.match(name_token.text):
            raise DslSyntaxError(
                f"scenario name must be a token, got {name_token.text!r}",
                name_token.span,
            )
        self.expect("LBRACE")
        self.skip_newlines()

        entries: list[tuple[str, str]] = []
        seen: set[str] = set()
        expect_action: CurationAction | None = None
        while True:
            token = self.peek()
            if token.kind == "RBRACE":
                raise DslSyntaxError("missing 'expect:' entry", token.span)
            field_token = self.expect("NAME", what="context field or 'expect'")
            if field_token.text == "expect":
                self.expect("COLON")
                action_token = self.literal()
                expect_action = ACTION_BY_NAME.get(action_token.text)
                if expect_action is None:
                    raise UnknownValueError(
                        f"unknown curation action {action_token.text!r}",
                        action_token.span,
                    )
                self.end_of_entry("expect")
                break
            if field_token.text == "note":
                raise DslSyntaxError(
                    "'note' must follow 'expect'", field_token.span
                )
            kind = CONTEXT_FIELD_KINDS.get(field_token.text)
            if kind is None:
                raise UnknownFieldError(
                    f"unknown context field {field_token.text!r}", field_token.span
                )
            if field_token.text in seen:
                raise DslSyntaxError(
                    f"duplicate context field {field_token.text!r}", field_token.span
                )
            seen.add(field_token.text)
            self.expect("COLON")
            entries.append((field_token.text, self.context_literal(kind)))
            self.end_of_entry(field_token.text)

        note: str | None = None
        if self.at("NAME", "note"):
            self.advance()
            self.expect("COLON")
            note = self.expect("STRING", what="note string").text
            self.end_of_entry("note")
        self.expect("RBRACE")

        context = validate_context(_context_from_entries(entries))
        return ScenarioFixture(
            name=name_token.text,
            context=context,
            expect=expect_action,
            note=note,
            entries=tuple(entries),
            span=span,
        )

    def context_literal(self, kind: str) -> str:
        if kind == "string":
            return self.expect("STRING", what="quoted string").text
        if kind == "tags":
            token = self.expect("STRING", what="quoted tag list")
            tags = []
            for part in token.text.split(","):
                tag = part.strip().lower()
                if tag and tag not in tags:
                    tags.append(tag)
            if not tags:
                raise UnknownValueError("empty tag list", token.span)
            return ", ".join(tags)
        token = self.literal()
        vocab = {
            "sphere": SPHERE_BY_NAME,
            "bool": {"true": True, "false": False},
            "preference": PREFERENCE_BY_NAME,
        }[kind]
        if token.text not in vocab:
            raise UnknownValueError(
                f"value {token.text!r} not allowed here", token.span
            )
        return token.text


def _span_of(condition: Condition) -> SourceSpan | None:
    return getattr(condition, "span", None)


def _context_from_entries(entries: Iterable[tuple[str, str]]) -> RequestContext:
    kwargs: dict = {}
    for name, value in entries:
        kind = CONTEXT_FIELD_KINDS[name]
        if kind == "string":
            kwargs[name] = value
        elif kind == "tags":
            kwargs[name] = frozenset(t.strip() for t in value.split(","))
        elif kind == "bool":
            kwargs[name] = value == "true"
        elif kind == "sphere":
            kwargs[name] = SPHERE_BY_NAME[value]
        elif kind == "preference":
            kwargs[name] = PREFERENCE_BY_NAME[value]
    return RequestContext(**kwargs)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def parse_kb(text: str) -> KnowledgeBase:
    """Parse rule-file text; later rules with the same name shadow earlier ones."""
    return _Parser(text).parse_kb()


def parse_scenario(text: str) -> list[ScenarioFixture]:
    """Parse scenario-file text into fixtures, in file order."""
    return _Parser(text).parse_scenarios()


def parse_rule(text: str) -> ArgumentRule:
    """Parse text containing exactly one rule block."""
    kb = parse_kb(text)
    if len(kb.rules) != 1 or kb.version != 1:
        raise DslSyntaxError(
            f"expected exactly one rule block, found {kb.version}",
            SourceSpan(1, 1),
        )
    return kb.rules[0]


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_rule(rule: ArgumentRule) -> str:
    values = ", ".join(sorted(v.value for v in rule.promotes))
    return (
        f"argument {rule.name} {{\n"
        f"  promotes: {values}\n"
        f"  applies-if: {rule.applies_if.render()}\n"
        f"  stance: {rule.stance.value}\n"
        f"}}"
    )


def emit_kb(kb: KnowledgeBase) -> str:
    """Canonical rule-file text; comments from the source are not retained."""
    if not kb.rules:
        return ""
    return "\n\n".join(emit_rule(rule) for rule in kb.rules) + "\n"


def emit_scenarios(fixtures: Iterable[ScenarioFixture]) -> str:
    blocks = []
    for fixture in fixtures:
        lines = [f"scenario {_quote(fixture.name)} {{"]
        for name, value in fixture.entries:
            kind = CONTEXT_FIELD_KINDS[name]
            rendered = _quote(value) if kind in ("string", "tags") else value
            lines.append(f"  {name}: {rendered}")
        lines.append(f"  expect: {fixture.expect.value}")
        if fixture.note is not None:
            lines.append(f"  note: {_quote(fixture.note)}")
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""
