"""The four LLM suggestion pipelines.

* use-case brainstorming (4 per request, covering intended/unintended x
  high/low stakes on the first batch),
* two-stage capability/requirement summarization (one pair per use case,
  then a merge pass),
* per-risk-type envisioning (exactly one suggestion per taxonomy type), and
* mitigation brainstorming provocations (one open-ended question per
  acceptance barrier: awareness, motivation, ability).

Pipelines run on immutable session snapshots and never mutate the session;
accepting a suggestion is a separate session operation. Each pipeline output
is schema-validated, and coverage violations trigger exactly one regeneration
round before surfacing an error.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import NotFoundError, ValidationError
from .gateway import ChatMessage, ChatRequest, LlmGateway, REGEN_PREFIX
from .session import (
    CapabilityRequirement,
    CapabilitySummary,
    Origin,
    Requirement,
    ReqDimension,
    RiskAssessment,
    SessionSnapshot,
    Stakes,
    UseCase,
    UseCaseKind,
    new_id,
)
from .taxonomy import TaxonomyBundle, get_risk

MISSING_SUMMARY_SENTINEL = "(not yet summarized)"

# Questions opening with these verbs read as yes/no rather than open-ended.
_CLOSED_OPENERS = re.compile(r"^(is|are|do|does|can)\b", re.IGNORECASE)

_PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")


class SpafBarrier(str, Enum):
    AWARENESS = "awareness"
    MOTIVATION = "motivation"
    ABILITY = "ability"


@dataclass(frozen=True)
class UseCaseSuggestion:
    kind: UseCaseKind
    stakes: Stakes
    description: str
    party: str


@dataclass(frozen=True)
class RiskSuggestion:
    risk_type: str
    manifestation: str
    impacted_stakeholders: str


@dataclass(frozen=True)
class Provocation:
    barrier: SpafBarrier
    question: str
    seed_feature: str  # the feature the question was flipped from, kept for audit

    def __post_init__(self):
        if not self.question.strip() or not self.question.rstrip().endswith("?"):
            raise ValidationError(
                f"provocation question must be interrogative: {self.question!r}",
                code="invalid_provocation",
            )


@dataclass
class FewShotExample:
    input: str
    output: dict


@dataclass
class PromptTemplate:
    pipeline: str
    version: str
    system_text: str
    user_text_template: str
    schema: dict
    temperature: float = 0.7
    few_shot_examples: list[FewShotExample] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Template loading and rendering
# ---------------------------------------------------------------------------

PIPELINES = ("use-cases", "capability-pair", "capability-merge", "risks", "provocations")


def load_templates(directory: str | Path | None = None) -> dict[str, PromptTemplate]:
    """Load the versioned prompt template files, one per pipeline."""
    templates: dict[str, PromptTemplate] = {}
    if directory is None:
        root = resources.files("privy.prompts")
        paths = [p for p in root.iterdir() if p.name.endswith(".json")]
    else:
        paths = sorted(Path(directory).glob("*.json"))
    for path in paths:
        raw = json.loads(path.read_text("utf-8") if hasattr(path, "read_text") else path.read_text())
        template = PromptTemplate(
            pipeline=raw["pipeline"],
            version=raw["version"],
            system_text=raw["system"],
            user_text_template=raw["user_template"],
            schema=raw["schema"],
            temperature=raw.get("temperature", 0.7),
            few_shot_examples=[
                FewShotExample(input=e["input"], output=e["output"])
                for e in raw.get("few_shot", [])
            ],
        )
        validator = jsonschema.Draft202012Validator(template.schema)
        for example in template.few_shot_examples:
            problems = [e.message for e in validator.iter_errors(example.output)]
            if problems:
                raise ValidationError(
                    f"few-shot example in template {template.pipeline!r} violates "
                    f"its schema: {problems[0]}", code="invalid_template",
                )
        templates[template.pipeline] = template
    missing = set(PIPELINES) - set(templates)
    if missing:
        raise ValidationError(
            f"missing prompt templates: {sorted(missing)}", code="invalid_template"
        )
    return templates


def _substitute(template_text: str, bindings: dict[str, str]) -> str:
    def replace(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise ValidationError(
                f"unbound placeholder {{{name}}} in prompt template",
                code="unbound_placeholder", details={"placeholder": name},
            )
        return str(bindings[name])

    return _PLACEHOLDER.sub(replace, template_text)


def render_prompt(template: PromptTemplate, bindings: dict[str, str], *,
                  model: str, temperature: float | None = None) -> ChatRequest:
    """Deterministically render a template into a full chat request.

    Few-shot examples become user/assistant turns ahead of the live input;
    the system turn carries the chain-of-thought instruction and pins the
    output to the declared JSON schema.
    """
    system = (
        template.system_text
        + "\n\nWork step by step and record your reasoning in the \"reasoning\" "
          "field of the output. Then respond with exactly one JSON object that "
          "conforms to this JSON schema, and output nothing except that JSON "
          "object:\n"
        + json.dumps(template.schema, sort_keys=True)
    )
    messages = [ChatMessage(role="system", content=system)]
    for example in template.few_shot_examples:
        messages.append(ChatMessage(role="user", content=example.input))
        messages.append(ChatMessage(
            role="assistant",
            content=json.dumps(example.output, sort_keys=True, ensure_ascii=False),
        ))
    messages.append(ChatMessage(role="user", content=_substitute(template.user_text_template, bindings)))
    return ChatRequest(
        model=model,
        messages=messages,
        temperature=template.temperature if temperature is None else temperature,
    )


def fixture_key(pipeline: str, bindings: dict[str, str]) -> str:
    """Mock fixture key: pipeline name + canonical hash of the prompt bindings."""
    canonical = json.dumps(bindings, sort_keys=True, ensure_ascii=False)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
    return f"{pipeline}/{digest}"


# ---------------------------------------------------------------------------
# Snapshot -> prompt bindings
# ---------------------------------------------------------------------------

def _concept_bindings(snapshot: SessionSnapshot) -> dict[str, str]:
    concept = snapshot.concept
    return {
        "product_name": concept.name or "(unnamed product)",
        "product_purpose": concept.purpose,
        "product_data": concept.data_description or "(not described)",
        "example_use_case": concept.example_use_case or "(none provided)",
    }


def _format_use_case_line(kind: str, stakes: str, description: str, party: str) -> str:
    return f"- ({kind}, {stakes} stakes) {description} [party: {party}]"


def use_case_bindings(snapshot: SessionSnapshot,
                      prior: list[UseCaseSuggestion]) -> dict[str, str]:
    bindings = _concept_bindings(snapshot)
    if prior:
        bindings["prior_use_cases"] = "\n".join(
            _format_use_case_line(p.kind.value, p.stakes.value, p.description, p.party)
            for p in prior
        )
    else:
        bindings["prior_use_cases"] = "(none)"
    return bindings


def pair_bindings(snapshot: SessionSnapshot, use_case: UseCase) -> dict[str, str]:
    return {
        "product_purpose": snapshot.concept.purpose,
        "use_case_description": use_case.description,
        "use_case_kind": use_case.kind.value,
        "use_case_party": use_case.party,
    }


def merge_bindings(snapshot: SessionSnapshot,
                   pairs: list[CapabilityRequirement]) -> dict[str, str]:
    serializable = [
        {
            "capability": p.capability,
            "requirements": [
                {"dimension": r.dimension.value, "text": r.text} for r in p.requirements
            ],
        }
        for p in pairs
    ]
    return {
        "product_purpose": snapshot.concept.purpose,
        "pairs_json": json.dumps(serializable, sort_keys=True, ensure_ascii=False),
    }


def risk_bindings(snapshot: SessionSnapshot, bundle: TaxonomyBundle) -> dict[str, str]:
    bindings = _concept_bindings(snapshot)
    if snapshot.use_cases:
        bindings["use_cases"] = "\n".join(
            _format_use_case_line(u.kind.value, u.stakes.value, u.description, u.party)
            for u in snapshot.use_cases
        )
    else:
        bindings["use_cases"] = "(none)"
    summary = snapshot.capability_summary.text.strip()
    bindings["capability_summary"] = summary or MISSING_SUMMARY_SENTINEL
    bindings["taxonomy_definitions"] = "\n".join(
        f"- {r.id}: {r.definition}" for r in bundle.risks
    )
    return bindings


def provocation_bindings(snapshot: SessionSnapshot, assessment: RiskAssessment,
                         bundle: TaxonomyBundle) -> dict[str, str]:
    risk = get_risk(bundle, assessment.risk_type)
    bindings = _concept_bindings(snapshot)
    bindings.update({
        "risk_type": risk.display_name,
        "risk_definition": risk.definition,
        "manifestation": assessment.manifestation or "(not described)",
        "impacted_stakeholders": assessment.impacted_stakeholders or "(not described)",
    })
    return bindings


# ---------------------------------------------------------------------------
# Duplicate detection for "get more" use cases
# ---------------------------------------------------------------------------

def _token_set(text: str) -> frozenset[str]:
    return frozenset(re.sub(r"[^a-z0-9 ]", " ", text.casefold()).split())


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union) if union else 0.0


def is_duplicate(a: str, b: str, threshold: float = 0.8) -> bool:
    return _jaccard(_token_set(a), _token_set(b)) >= threshold


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

class SuggestionEngine:
    """Runs the pipelines against a gateway using the loaded templates."""

    def __init__(self, gateway: LlmGateway, bundle: TaxonomyBundle,
                 templates: dict[str, PromptTemplate] | None = None):
        self.gateway = gateway
        self.bundle = bundle
        self.templates = templates or load_templates()

    # -- shared plumbing ----------------------------------------------------

    def _run(self, pipeline: str, bindings: dict[str, str], check) -> dict:
        """Render, call, schema-validate; one regeneration on a failed check."""
        template = self.templates[pipeline]
        request = render_prompt(template, bindings, model=self.gateway.config.model)
        key = fixture_key(pipeline, bindings)
        result = self.gateway.chat_structured(request, template.schema, fixture_key=key)
        problem = check(result.value)
        if problem is None:
            return result.value
        retry = ChatRequest(
            model=request.model,
            messages=list(request.messages) + [
                ChatMessage(role="assistant", content=result.raw),
                ChatMessage(role="user", content=(
                    f"{REGEN_PREFIX}: {problem}; generate a corrected set, JSON only"
                )),
            ],
            temperature=request.temperature,
        )
        result = self.gateway.chat_structured(retry, template.schema, fixture_key=key)
        problem = check(result.value)
        if problem is not None:
            raise ValidationError(
                f"{pipeline} pipeline output still invalid after regeneration: {problem}",
                code="coverage_violation",
            )
        return result.value

    def _require_concept(self, snapshot: SessionSnapshot) -> None:
        concept = snapshot.concept
        if not concept.purpose.strip() or not concept.data_description.strip():
            raise ValidationError(
                "concept purpose and data description must be filled in before "
                "requesting suggestions", code="invalid_concept",
            )

    # -- pipelines ----------------------------------------------------------

    def suggest_use_cases(self, snapshot: SessionSnapshot,
                          prior: list[UseCaseSuggestion] | None = None
                          ) -> list[UseCaseSuggestion]:
        """First batch covers the 2x2 kind/stakes matrix; later batches dedup."""
        self._require_concept(snapshot)
        prior = list(prior or [])
        bindings = use_case_bindings(snapshot, prior)

        def check(value: dict) -> str | None:
            if prior:
                return None  # follow-up batches are checked for duplicates below
            cells = {(s["kind"], s["stakes"]) for s in value["suggestions"]}
            if len(cells) != 4:
                missing = {(k, st) for k in ("intended", "unintended")
                           for st in ("high", "low")} - cells
                return f"suggestions must cover all kind/stakes cells; missing {sorted(missing)}"
            return None

        value = self._run("use-cases", bindings, check)
        suggestions = [
            UseCaseSuggestion(
                kind=UseCaseKind(s["kind"]), stakes=Stakes(s["stakes"]),
                description=s["description"], party=s["party"],
            )
            for s in value["suggestions"]
        ]
        if prior:
            suggestions = [
                s for s in suggestions
                if not any(is_duplicate(s.description, p.description) for p in prior)
            ]
        return suggestions

    def summarize_capabilities(self, snapshot: SessionSnapshot) -> CapabilitySummary:
        """Stage 1: one capability/requirement pair per use case. Stage 2: merge."""
        if not snapshot.use_cases:
            raise ValidationError(
                "at least one use case is needed before summarizing capabilities",
                code="no_use_cases",
            )
        pairs: list[CapabilityRequirement] = []
        for use_case in snapshot.use_cases:
            value = self._run("capability-pair",
                              pair_bindings(snapshot, use_case), lambda v: None)
            pairs.append(CapabilityRequirement(
                id=new_id(),
                capability=value["capability"],
                requirements=[
                    Requirement(dimension=ReqDimension(r["dimension"]), text=r["text"])
                    for r in value["requirements"]
                ],
                derived_from_use_cases=[use_case.id],
                origin=Origin.AI_SUGGESTED,
            ))
        merged = self._run("capability-merge",
                           merge_bindings(snapshot, pairs), lambda v: None)
        return CapabilitySummary(text=merged["summary"], pairs=pairs)

    def suggest_risks(self, snapshot: SessionSnapshot) -> list[RiskSuggestion]:
        """Exactly one suggestion per taxonomy risk type (12 in total)."""
        if not snapshot.concept.purpose.strip():
            raise ValidationError("concept purpose must not be empty",
                                  code="invalid_concept")
        expected = self.bundle.ids()

        def check(value: dict) -> str | None:
            types = [s["risk_type"] for s in value["suggestions"]]
            if sorted(types) != sorted(expected):
                extra = sorted(set(types) - expected)
                missing = sorted(expected - set(types))
                dupes = sorted({t for t in types if types.count(t) > 1})
                return (f"risk suggestions must cover each taxonomy type exactly once "
                        f"(missing {missing}, unknown {extra}, duplicated {dupes})")
            return None

        value = self._run("risks", risk_bindings(snapshot, self.bundle), check)
        return [
            RiskSuggestion(
                risk_type=s["risk_type"],
                manifestation=s["manifestation"],
                impacted_stakeholders=s["impacted_stakeholders"],
            )
            for s in value["suggestions"]
        ]

    def suggest_provocations(self, snapshot: SessionSnapshot,
                             assessment_id: str) -> list[Provocation]:
        """Three open-ended questions, one per SPAF barrier, for one rated risk."""
        assessment = snapshot.assessment_by_id(assessment_id)
        if assessment is None:
            raise NotFoundError(f"unknown assessment: {assessment_id!r}")
        if not assessment.rated:
            raise ValidationError(
                f"assessment {assessment_id!r} must be rated before requesting "
                f"provocations", code="unrated_assessment",
            )

        def check(value: dict) -> str | None:
            barriers = sorted(p["barrier"] for p in value["provocations"])
            if barriers != ["ability", "awareness", "motivation"]:
                return f"provocations must cover awareness, motivation, and ability exactly once (got {barriers})"
            for p in value["provocations"]:
                question = p["question"].strip()
                if not question.endswith("?"):
                    return f"not a question: {question!r}"
                if _CLOSED_OPENERS.match(question):
                    return f"question reads as yes/no rather than open-ended: {question!r}"
            return None

        value = self._run(
            "provocations",
            provocation_bindings(snapshot, assessment, self.bundle), check,
        )
        return [
            Provocation(
                barrier=SpafBarrier(p["barrier"]),
                question=p["question"],
                seed_feature=p["seed_feature"],
            )
            for p in value["provocations"]
        ]
