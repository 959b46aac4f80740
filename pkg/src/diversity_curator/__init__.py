"""Value-weighted argumentation engine for curating respondent diversity.

Given everything known about a help request, the engine instantiates the
applicable ethical arguments, resolves their conflicts through value-ranked
defeat and grounded argumentation semantics, and returns an auditable
curation decision.
"""

from .af import (
    ArgumentationFramework,
    ENUMERATION_CAP,
    Label,
    Labelling,
    Semantics,
    attackers,
    characteristic,
    complete_labellings,
    emit_apx,
    grounded,
    is_conflict_free,
    parse_apx,
    preferred,
    stable,
)
from .context import (
    CurationAction,
    Decision,
    DiversityPreference,
    DEFAULT_SPHERE_MAP,
    Instrument,
    RequestContext,
    Sphere,
    classify_sphere,
    context_from_json,
    context_to_json,
    validate_context,
)
from .defaults import (
    bundled_fixtures_dir,
    default_kb,
    default_kb_text,
    load_bundled_fixtures,
)
from .dsl import (
    ScenarioFixture,
    emit_kb,
    emit_rule,
    emit_scenarios,
    parse_kb,
    parse_rule,
    parse_scenario,
)
from .errors import (
    ApxError,
    ApxSyntaxError,
    BadHeaderError,
    ContextError,
    CorruptEntryError,
    CuratorError,
    DslError,
    DslSyntaxError,
    EmptyPromotesError,
    EmptyRequestError,
    FrameworkTooLargeError,
    KbLogError,
    KbValidationError,
    SourceSpan,
    UnclassifiableError,
    UndeclaredArgumentError,
    UnknownArgumentError,
    UnknownFieldError,
    UnknownStanceError,
    UnknownValueError,
)
from .kblog import (
    CoachingStep,
    DecisionDiff,
    coach,
    diff_decisions,
    kb_append,
    kb_init,
    kb_load,
)
from .rules import (
    And,
    ArgumentRule,
    Atom,
    KnowledgeBase,
    Not,
    Or,
    Stance,
    decide,
    decision_hash,
    decision_payload,
    decision_to_json,
    eval_condition,
    explain,
    instantiate,
    raw_attacks,
    stances_conflict,
)
from .values import (
    DomainArgument,
    EthicalValue,
    ValueRank,
    defeats,
    derive_defeat_graph,
    effective_rank,
)

__version__ = "0.1.0"
