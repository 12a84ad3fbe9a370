"""PIA session document model and its lifecycle operations.

A session holds the product concept, use cases, capability summary, risk
assessments, ranking, and mitigation plan. Every field stays editable at every
stage; the ``stage_hint`` is advisory only. Mutating operations validate their
inputs, keep referential integrity (deletes cascade), and bump the version
counter used for optimistic concurrency.

Two rules are deliberately strict:

* an assessment cannot enter the ranking, a mitigation plan, or a report until
  both its relevancy and severity are rated (the friction gate), and
* at most one assessment may exist per taxonomy risk type.
"""

from __future__ import annotations

import copy
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .errors import NotFoundError, ValidationError
from .taxonomy import TaxonomyBundle

SCHEMA_VERSION = "1"


class UseCaseKind(str, Enum):
    INTENDED = "intended"
    UNINTENDED = "unintended"


class Stakes(str, Enum):
    HIGH = "high"
    LOW = "low"
    UNSPECIFIED = "unspecified"


class Origin(str, Enum):
    USER = "user"
    AI_SUGGESTED = "ai-suggested"


class Rating(str, Enum):
    """High/Medium/Low rating used for both relevancy and severity."""

    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"


class Stage(str, Enum):
    SCAFFOLD = "scaffold"
    EXPLORE = "explore"
    MITIGATE = "mitigate"
    SUMMARIZE = "summarize"


class ReqDimension(str, Enum):
    COLLECTION = "collection"
    PROCESSING = "processing"
    DISSEMINATION = "dissemination"
    INFRASTRUCTURE = "infrastructure"


# Sort rank for the default risk ordering; missing ratings sort last.
_RATING_RANK = {Rating.HIGH: 0, Rating.MEDIUM: 1, Rating.LOW: 2, None: 3}


def new_id() -> str:
    return uuid.uuid4().hex


def _utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


@dataclass
class ProductConcept:
    name: str = ""
    purpose: str = ""
    data_description: str = ""
    example_use_case: str = ""


@dataclass
class UseCase:
    id: str
    kind: UseCaseKind
    description: str
    party: str  # beneficiary when intended, exploiter when unintended
    stakes: Stakes = Stakes.UNSPECIFIED
    origin: Origin = Origin.USER


@dataclass
class Requirement:
    dimension: ReqDimension
    text: str


@dataclass
class CapabilityRequirement:
    id: str
    capability: str
    requirements: list[Requirement]
    derived_from_use_cases: list[str] = field(default_factory=list)
    origin: Origin = Origin.USER


@dataclass
class CapabilitySummary:
    text: str = ""
    pairs: list[CapabilityRequirement] = field(default_factory=list)


@dataclass
class RiskAssessment:
    id: str
    risk_type: str
    manifestation: str = ""
    impacted_stakeholders: str = ""
    relevancy: Rating | None = None
    severity: Rating | None = None
    origin: Origin = Origin.USER

    @property
    def rated(self) -> bool:
        return self.relevancy is not None and self.severity is not None


@dataclass
class RiskRanking:
    ordered_ids: list[str] = field(default_factory=list)
    user_ranked: bool = False  # False until the first explicit rank_risks call


@dataclass
class MitigationStrategy:
    id: str
    text: str
    addresses: set[str]


@dataclass
class MitigationPlan:
    strategies: list[MitigationStrategy] = field(default_factory=list)
    confidence: dict[str, int] = field(default_factory=dict)  # assessment id -> 1..5


@dataclass
class Session:
    id: str
    concept: ProductConcept
    created_at: datetime
    updated_at: datetime
    version: int = 1
    stage_hint: Stage = Stage.SCAFFOLD
    use_cases: list[UseCase] = field(default_factory=list)
    capability_summary: CapabilitySummary = field(default_factory=CapabilitySummary)
    assessments: list[RiskAssessment] = field(default_factory=list)
    ranking: RiskRanking = field(default_factory=RiskRanking)
    plan: MitigationPlan = field(default_factory=MitigationPlan)

    def use_case_ids(self) -> set[str]:
        return {u.id for u in self.use_cases}

    def assessment_by_id(self, assessment_id: str) -> RiskAssessment | None:
        for a in self.assessments:
            if a.id == assessment_id:
                return a
        return None

    def rated_assessments(self) -> list[RiskAssessment]:
        return [a for a in self.assessments if a.rated]


# A snapshot is a deep copy, isolated from further session mutations.
SessionSnapshot = Session


def _touch(session: Session) -> None:
    session.version += 1
    session.updated_at = _utcnow()


def _require(condition: bool, message: str, code: str, details=None) -> None:
    if not condition:
        raise ValidationError(message, code=code, details=details)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def create_session(concept: ProductConcept, session_id: str | None = None) -> Session:
    """Start a new PIA session from a product concept."""
    _require(bool(concept.purpose.strip()), "concept purpose must not be empty",
             "invalid_concept")
    now = _utcnow()
    return Session(
        id=session_id or new_id(),
        concept=copy.deepcopy(concept),
        created_at=now,
        updated_at=now,
    )


def update_concept(session: Session, concept: ProductConcept) -> Session:
    _require(bool(concept.purpose.strip()), "concept purpose must not be empty",
             "invalid_concept")
    session.concept = copy.deepcopy(concept)
    _touch(session)
    return session


def set_stage_hint(session: Session, stage: Stage) -> Session:
    session.stage_hint = stage
    _touch(session)
    return session


def upsert_use_case(session: Session, use_case: UseCase) -> Session:
    """Insert or replace a use case by id."""
    _require(bool(use_case.id), "use case id must not be empty", "invalid_use_case")
    _require(bool(use_case.description.strip()),
             "use case description must not be empty", "invalid_use_case")
    _require(bool(use_case.party.strip()),
             "use case party must not be empty", "invalid_use_case")
    stored = copy.deepcopy(use_case)
    for i, existing in enumerate(session.use_cases):
        if existing.id == use_case.id:
            session.use_cases[i] = stored
            break
    else:
        session.use_cases.append(stored)
    _touch(session)
    return session


def delete_use_case(session: Session, use_case_id: str) -> Session:
    """Remove a use case and any capability-pair references to it."""
    before = len(session.use_cases)
    session.use_cases = [u for u in session.use_cases if u.id != use_case_id]
    if len(session.use_cases) == before:
        raise NotFoundError(f"unknown use case: {use_case_id!r}")
    for pair in session.capability_summary.pairs:
        pair.derived_from_use_cases = [
            i for i in pair.derived_from_use_cases if i != use_case_id
        ]
    _touch(session)
    return session


def set_capability_summary(session: Session, summary: CapabilitySummary) -> Session:
    """Replace the capability summary (e.g. accepting a generated one)."""
    if summary.pairs:
        _require(bool(summary.text.strip()),
                 "capability summary text must not be empty when pairs are present",
                 "invalid_summary")
    known = session.use_case_ids()
    for pair in summary.pairs:
        _require(bool(pair.capability.strip()),
                 "capability must not be empty", "invalid_summary")
        _require(len(pair.requirements) > 0,
                 "each capability needs at least one requirement", "invalid_summary")
        for ref in pair.derived_from_use_cases:
            _require(ref in known,
                     f"capability pair references unknown use case {ref!r}",
                     "dangling_reference", details={"use_case_id": ref})
    session.capability_summary = copy.deepcopy(summary)
    _touch(session)
    return session


def upsert_assessment(session: Session, assessment: RiskAssessment,
                      bundle: TaxonomyBundle) -> Session:
    """Insert or replace a risk assessment; one assessment per risk type."""
    _require(bool(assessment.id), "assessment id must not be empty", "invalid_assessment")
    if assessment.risk_type not in bundle.ids():
        raise ValidationError(
            f"unknown risk type: {assessment.risk_type!r}", code="unknown_risk_type",
            details={"risk_type": assessment.risk_type},
        )
    for existing in session.assessments:
        if existing.id != assessment.id and existing.risk_type == assessment.risk_type:
            raise ValidationError(
                f"an assessment for risk type {assessment.risk_type!r} already exists",
                code="duplicate_risk_type",
                details={"risk_type": assessment.risk_type, "existing_id": existing.id},
            )
    stored = copy.deepcopy(assessment)
    for i, existing in enumerate(session.assessments):
        if existing.id == assessment.id:
            session.assessments[i] = stored
            break
    else:
        session.assessments.append(stored)
    if not stored.rated:
        _purge_assessment_refs(session, stored.id)
    _sync_ranking(session)
    _touch(session)
    return session


def delete_assessment(session: Session, assessment_id: str) -> Session:
    """Remove an assessment, cascading through ranking, strategies, confidence."""
    before = len(session.assessments)
    session.assessments = [a for a in session.assessments if a.id != assessment_id]
    if len(session.assessments) == before:
        raise NotFoundError(f"unknown assessment: {assessment_id!r}")
    _purge_assessment_refs(session, assessment_id)
    _sync_ranking(session)
    _touch(session)
    return session


def rank_risks(session: Session, ordered_ids: list[str]) -> Session:
    """Replace the ranking with an explicit permutation of rated assessment ids."""
    rated = {a.id for a in session.rated_assessments()}
    seen: set[str] = set()
    for assessment_id in ordered_ids:
        if assessment_id in seen:
            raise ValidationError(
                f"duplicate id in ranking: {assessment_id!r}",
                code="not_a_permutation", details={"duplicate": assessment_id},
            )
        seen.add(assessment_id)
        if assessment_id not in rated:
            known = session.assessment_by_id(assessment_id)
            if known is None:
                raise ValidationError(
                    f"unknown id in ranking: {assessment_id!r}",
                    code="not_a_permutation", details={"unknown": assessment_id},
                )
            raise ValidationError(
                f"assessment {assessment_id!r} is pending rating and cannot be ranked",
                code="not_a_permutation", details={"unrated": assessment_id},
            )
    missing = rated - seen
    if missing:
        offender = sorted(missing)[0]
        raise ValidationError(
            f"ranking omits rated assessment {offender!r}",
            code="not_a_permutation", details={"missing": offender},
        )
    session.ranking = RiskRanking(ordered_ids=list(ordered_ids), user_ranked=True)
    _touch(session)
    return session


def upsert_strategy(session: Session, strategy: MitigationStrategy) -> Session:
    """Insert or replace a mitigation strategy in the shared plan."""
    _require(bool(strategy.id), "strategy id must not be empty", "invalid_strategy")
    _require(bool(strategy.text.strip()),
             "strategy text must not be empty", "invalid_strategy")
    _require(len(strategy.addresses) > 0,
             "strategy must address at least one risk", "invalid_strategy")
    for assessment_id in sorted(strategy.addresses):
        assessment = session.assessment_by_id(assessment_id)
        if assessment is None:
            raise ValidationError(
                f"strategy references unknown assessment {assessment_id!r}",
                code="dangling_reference", details={"assessment_id": assessment_id},
            )
        if not assessment.rated:
            raise ValidationError(
                f"assessment {assessment_id!r} is pending rating and cannot be addressed",
                code="unrated_assessment", details={"assessment_id": assessment_id},
            )
    stored = MitigationStrategy(
        id=strategy.id, text=strategy.text, addresses=set(strategy.addresses)
    )
    for i, existing in enumerate(session.plan.strategies):
        if existing.id == strategy.id:
            session.plan.strategies[i] = stored
            break
    else:
        session.plan.strategies.append(stored)
    _touch(session)
    return session


def delete_strategy(session: Session, strategy_id: str) -> Session:
    before = len(session.plan.strategies)
    session.plan.strategies = [s for s in session.plan.strategies if s.id != strategy_id]
    if len(session.plan.strategies) == before:
        raise NotFoundError(f"unknown strategy: {strategy_id!r}")
    _touch(session)
    return session


def set_confidence(session: Session, assessment_id: str, value: int) -> Session:
    """Record the 1..5 confidence rating for one risk's mitigation plan."""
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
        raise ValidationError(
            f"confidence must be an integer in 1..5, got {value!r}",
            code="out_of_range", details={"value": value},
        )
    assessment = session.assessment_by_id(assessment_id)
    if assessment is None:
        raise NotFoundError(f"unknown assessment: {assessment_id!r}")
    if not assessment.rated:
        raise ValidationError(
            f"assessment {assessment_id!r} is pending rating",
            code="unrated_assessment", details={"assessment_id": assessment_id},
        )
    session.plan.confidence[assessment_id] = value
    _touch(session)
    return session


def snapshot(session: Session) -> SessionSnapshot:
    """Deep, isolated copy of the session at its current version."""
    return copy.deepcopy(session)


# ---------------------------------------------------------------------------
# Ranking maintenance
# ---------------------------------------------------------------------------

def default_order(assessments: list[RiskAssessment]) -> list[str]:
    """Severity desc, then relevancy desc, then insertion order.

    Tolerates missing ratings (sorted last) so it can order arbitrary lists;
    the session ranking itself only ever contains fully rated entries.
    """
    indexed = list(enumerate(assessments))
    indexed.sort(key=lambda pair: (
        _RATING_RANK[pair[1].severity], _RATING_RANK[pair[1].relevancy], pair[0]
    ))
    return [a.id for _, a in indexed]


def _sync_ranking(session: Session) -> None:
    """Keep ranking a permutation of rated assessments after any change.

    Before the user has ranked explicitly, the default order applies wholesale.
    Afterwards, the user's order is preserved for surviving entries and newly
    rated assessments are appended in insertion order.
    """
    rated = session.rated_assessments()
    rated_ids = {a.id for a in rated}
    if not session.ranking.user_ranked:
        session.ranking.ordered_ids = default_order(rated)
        return
    kept = [i for i in session.ranking.ordered_ids if i in rated_ids]
    present = set(kept)
    kept.extend(a.id for a in rated if a.id not in present)
    session.ranking.ordered_ids = kept


def _purge_assessment_refs(session: Session, assessment_id: str) -> None:
    """Drop every reference to an assessment that was deleted or un-rated."""
    session.ranking.ordered_ids = [
        i for i in session.ranking.ordered_ids if i != assessment_id
    ]
    surviving = []
    for strategy in session.plan.strategies:
        strategy.addresses.discard(assessment_id)
        if strategy.addresses:
            surviving.append(strategy)
    session.plan.strategies = surviving
    session.plan.confidence.pop(assessment_id, None)


# ---------------------------------------------------------------------------
# Serialization (versioned JSON document)
# ---------------------------------------------------------------------------

def _rfc3339(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _parse_ts(raw: str) -> datetime:
    return datetime.fromisoformat(raw.replace("Z", "+00:00"))


def session_to_dict(session: Session) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "created_at": _rfc3339(session.created_at),
        "updated_at": _rfc3339(session.updated_at),
        "version": session.version,
        "stage_hint": session.stage_hint.value,
        "concept": {
            "name": session.concept.name,
            "purpose": session.concept.purpose,
            "data_description": session.concept.data_description,
            "example_use_case": session.concept.example_use_case,
        },
        "use_cases": [
            {
                "id": u.id,
                "kind": u.kind.value,
                "stakes": u.stakes.value,
                "description": u.description,
                "party": u.party,
                "origin": u.origin.value,
            }
            for u in session.use_cases
        ],
        "capability_summary": {
            "text": session.capability_summary.text,
            "pairs": [
                {
                    "id": p.id,
                    "capability": p.capability,
                    "requirements": [
                        {"dimension": r.dimension.value, "text": r.text}
                        for r in p.requirements
                    ],
                    "derived_from_use_cases": list(p.derived_from_use_cases),
                    "origin": p.origin.value,
                }
                for p in session.capability_summary.pairs
            ],
        },
        "assessments": [
            {
                "id": a.id,
                "risk_type": a.risk_type,
                "manifestation": a.manifestation,
                "impacted_stakeholders": a.impacted_stakeholders,
                "relevancy": a.relevancy.value if a.relevancy else None,
                "severity": a.severity.value if a.severity else None,
                "origin": a.origin.value,
            }
            for a in session.assessments
        ],
        "ranking": {
            "ordered_ids": list(session.ranking.ordered_ids),
            "user_ranked": session.ranking.user_ranked,
        },
        "plan": {
            "strategies": [
                {"id": s.id, "text": s.text, "addresses": sorted(s.addresses)}
                for s in session.plan.strategies
            ],
            "confidence": dict(session.plan.confidence),
        },
    }


def _enum(value, enum_cls, label: str):
    try:
        return enum_cls(value)
    except ValueError:
        raise ValidationError(f"invalid {label}: {value!r}", code="parse_error")


def session_from_dict(raw: dict, bundle: TaxonomyBundle | None = None) -> Session:
    """Rebuild a session from its JSON form, re-checking every invariant."""
    if not isinstance(raw, dict):
        raise ValidationError("session document must be a JSON object", code="parse_error")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported session schema version: {raw.get('schema_version')!r}",
            code="parse_error",
        )
    try:
        concept_raw = raw["concept"]
        session = Session(
            id=raw["id"],
            concept=ProductConcept(
                name=concept_raw.get("name", ""),
                purpose=concept_raw["purpose"],
                data_description=concept_raw.get("data_description", ""),
                example_use_case=concept_raw.get("example_use_case", ""),
            ),
            created_at=_parse_ts(raw["created_at"]),
            updated_at=_parse_ts(raw["updated_at"]),
            version=int(raw["version"]),
            stage_hint=_enum(raw.get("stage_hint", "scaffold"), Stage, "stage_hint"),
        )
        for u in raw.get("use_cases", []):
            session.use_cases.append(UseCase(
                id=u["id"],
                kind=_enum(u["kind"], UseCaseKind, "use case kind"),
                stakes=_enum(u.get("stakes", "unspecified"), Stakes, "stakes"),
                description=u["description"],
                party=u["party"],
                origin=_enum(u.get("origin", "user"), Origin, "origin"),
            ))
        summary_raw = raw.get("capability_summary", {})
        pairs = []
        for p in summary_raw.get("pairs", []):
            pairs.append(CapabilityRequirement(
                id=p["id"],
                capability=p["capability"],
                requirements=[
                    Requirement(
                        dimension=_enum(r["dimension"], ReqDimension, "requirement dimension"),
                        text=r["text"],
                    )
                    for r in p["requirements"]
                ],
                derived_from_use_cases=list(p.get("derived_from_use_cases", [])),
                origin=_enum(p.get("origin", "user"), Origin, "origin"),
            ))
        session.capability_summary = CapabilitySummary(
            text=summary_raw.get("text", ""), pairs=pairs
        )
        for a in raw.get("assessments", []):
            session.assessments.append(RiskAssessment(
                id=a["id"],
                risk_type=a["risk_type"],
                manifestation=a.get("manifestation", ""),
                impacted_stakeholders=a.get("impacted_stakeholders", ""),
                relevancy=_enum(a["relevancy"], Rating, "relevancy") if a.get("relevancy") else None,
                severity=_enum(a["severity"], Rating, "severity") if a.get("severity") else None,
                origin=_enum(a.get("origin", "user"), Origin, "origin"),
            ))
        ranking_raw = raw.get("ranking", {})
        session.ranking = RiskRanking(
            ordered_ids=list(ranking_raw.get("ordered_ids", [])),
            user_ranked=bool(ranking_raw.get("user_ranked", False)),
        )
        plan_raw = raw.get("plan", {})
        for s in plan_raw.get("strategies", []):
            session.plan.strategies.append(MitigationStrategy(
                id=s["id"], text=s["text"], addresses=set(s["addresses"]),
            ))
        session.plan.confidence = {
            k: int(v) for k, v in plan_raw.get("confidence", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed session document: {exc!r}", code="parse_error")
    validate_session(session, bundle)
    return session


def validate_session(session: Session, bundle: TaxonomyBundle | None = None) -> None:
    """Assert the cross-cutting session invariants; raise ValidationError if broken."""
    _require(bool(session.concept.purpose.strip()),
             "concept purpose must not be empty", "invalid_concept")
    uc_ids = [u.id for u in session.use_cases]
    _require(len(uc_ids) == len(set(uc_ids)), "duplicate use case ids", "parse_error")
    for pair in session.capability_summary.pairs:
        for ref in pair.derived_from_use_cases:
            _require(ref in set(uc_ids),
                     f"capability pair references unknown use case {ref!r}",
                     "dangling_reference")
    a_ids = [a.id for a in session.assessments]
    _require(len(a_ids) == len(set(a_ids)), "duplicate assessment ids", "parse_error")
    types = [a.risk_type for a in session.assessments]
    _require(len(types) == len(set(types)),
             "multiple assessments share a risk type", "duplicate_risk_type")
    if bundle is not None:
        for a in session.assessments:
            _require(a.risk_type in bundle.ids(),
                     f"unknown risk type: {a.risk_type!r}", "unknown_risk_type")
    rated_ids = {a.id for a in session.rated_assessments()}
    ranked = session.ranking.ordered_ids
    _require(len(ranked) == len(set(ranked)), "ranking contains duplicates",
             "not_a_permutation")
    _require(set(ranked) == rated_ids,
             "ranking is not a permutation of rated assessments", "not_a_permutation")
    for strategy in session.plan.strategies:
        _require(bool(strategy.text.strip()), "strategy text must not be empty",
                 "invalid_strategy")
        _require(len(strategy.addresses) > 0, "strategy addresses no risks",
                 "invalid_strategy")
        for ref in strategy.addresses:
            _require(ref in rated_ids,
                     f"strategy references unrated or unknown assessment {ref!r}",
                     "dangling_reference")
    for ref, value in session.plan.confidence.items():
        _require(ref in rated_ids,
                 f"confidence recorded for unrated or unknown assessment {ref!r}",
                 "dangling_reference")
        _require(1 <= value <= 5, "confidence out of range", "out_of_range")
