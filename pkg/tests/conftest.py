"""Shared fixtures: taxonomy bundle, mock-backed engine, scenario builders."""

from __future__ import annotations

import json
import random
from importlib import resources

import pytest

from privy.config import bundled_mock_dir
from privy.gateway import GatewayConfig, LlmGateway
from privy.session import (
    CapabilitySummary,
    MitigationStrategy,
    Origin,
    ProductConcept,
    Rating,
    RiskAssessment,
    Session,
    Stakes,
    UseCase,
    UseCaseKind,
    create_session,
    rank_risks,
    set_capability_summary,
    set_confidence,
    snapshot,
    upsert_assessment,
    upsert_strategy,
    upsert_use_case,
)
from privy.suggestions import SuggestionEngine
from privy.taxonomy import load_taxonomy


@pytest.fixture(scope="session")
def bundle():
    return load_taxonomy()


@pytest.fixture()
def mock_gateway():
    return LlmGateway(GatewayConfig(mock_dir=bundled_mock_dir()))


@pytest.fixture()
def engine(mock_gateway, bundle):
    return SuggestionEngine(mock_gateway, bundle)


def load_concept(name: str) -> ProductConcept:
    raw = json.loads(
        resources.files("privy.fixtures").joinpath(f"concepts/{name}.json").read_text("utf-8")
    )
    return ProductConcept(
        name=raw["name"], purpose=raw["purpose"],
        data_description=raw["data_description"],
        example_use_case=raw.get("example_use_case", ""),
    )


@pytest.fixture(scope="session")
def ama_concept():
    return load_concept("ai-meeting-assistant")


@pytest.fixture(scope="session")
def das_concept():
    return load_concept("dynamic-audience-selection")


@pytest.fixture(scope="session")
def textbook_concept():
    return ProductConcept(
        name="Textbook Tutor AI",
        purpose="An AI tutor that helps students study from their textbooks, answering "
                "questions and recommending readings tailored to each student.",
        data_description="Textbook content, students' coursework history, and their "
                         "interaction logs with the tutor.",
    )


def run_meeting_assistant_flow(engine: SuggestionEngine, bundle,
                               concept: ProductConcept,
                               session_id: str | None = None) -> Session:
    """Drive the whole workflow on the mock backend and return the session."""
    session = create_session(concept, session_id=session_id)
    suggestions = engine.suggest_use_cases(snapshot(session))
    for i, s in enumerate(suggestions, start=1):
        upsert_use_case(session, UseCase(
            id=f"uc{i}", kind=s.kind, stakes=s.stakes, description=s.description,
            party=s.party, origin=Origin.AI_SUGGESTED,
        ))
    set_capability_summary(session, engine.summarize_capabilities(snapshot(session)))
    risks = {r.risk_type: r for r in engine.suggest_risks(snapshot(session))}
    ratings = {"surveillance": (Rating.HIGH, Rating.HIGH),
               "disclosure": (Rating.HIGH, Rating.MEDIUM),
               "intrusion": (Rating.MEDIUM, Rating.HIGH)}
    for i, (risk_type, (relevancy, severity)) in enumerate(ratings.items(), start=1):
        suggestion = risks[risk_type]
        upsert_assessment(session, RiskAssessment(
            id=f"a{i}", risk_type=risk_type, manifestation=suggestion.manifestation,
            impacted_stakeholders=suggestion.impacted_stakeholders,
            relevancy=relevancy, severity=severity, origin=Origin.AI_SUGGESTED,
        ), bundle)
    rank_risks(session, ["a1", "a3", "a2"])
    upsert_strategy(session, MitigationStrategy(
        id="s1",
        text="Make the assistant's capture visible and obvious to all attendees, with "
             "an explicit announcement when recording starts.",
        addresses={"a1", "a3"},
    ))
    upsert_strategy(session, MitigationStrategy(
        id="s2",
        text="Let speakers preview and redact their attributed remarks before a "
             "summary is distributed beyond the attendees.",
        addresses={"a2"},
    ))
    for assessment_id, value in (("a1", 4), ("a2", 3), ("a3", 5)):
        set_confidence(session, assessment_id, value)
    return session


@pytest.fixture()
def ama_session(engine, bundle, ama_concept) -> Session:
    return run_meeting_assistant_flow(engine, bundle, ama_concept)


_WORDS = ("meeting", "audio", "summary", "students", "café", "naïve", "data",
          "post", "friends", "\"quoted\"", "line\nbreak", "emoji 🙂", "tab\tsep",
          "<script>", "plan", "risk")


def random_session(rng: random.Random, bundle) -> Session:
    """Build a random but valid session via the real operations."""
    def words(n):
        return " ".join(rng.choice(_WORDS) for _ in range(n))

    session = create_session(ProductConcept(
        name=words(2), purpose=words(rng.randint(1, 6)),
        data_description=words(rng.randint(0, 5)),
        example_use_case=words(rng.randint(0, 3)),
    ))
    uc_ids = []
    for i in range(rng.randint(0, 4)):
        uc_id = f"uc{i}"
        upsert_use_case(session, UseCase(
            id=uc_id, kind=rng.choice(list(UseCaseKind)),
            stakes=rng.choice(list(Stakes)), description=words(rng.randint(1, 8)),
            party=words(1), origin=rng.choice(list(Origin)),
        ))
        uc_ids.append(uc_id)
    if uc_ids and rng.random() < 0.7:
        from privy.session import CapabilityRequirement, ReqDimension, Requirement

        pairs = []
        for i in range(rng.randint(1, 3)):
            pairs.append(CapabilityRequirement(
                id=f"p{i}", capability=words(3),
                requirements=[Requirement(dimension=rng.choice(list(ReqDimension)),
                                          text=words(4))],
                derived_from_use_cases=rng.sample(uc_ids, rng.randint(0, len(uc_ids))),
                origin=rng.choice(list(Origin)),
            ))
        set_capability_summary(session, CapabilitySummary(text=words(6), pairs=pairs))
    risk_types = rng.sample(sorted(bundle.ids()), rng.randint(0, 5))
    rated_ids = []
    for i, risk_type in enumerate(risk_types):
        rated = rng.random() < 0.7
        assessment_id = f"a{i}"
        upsert_assessment(session, RiskAssessment(
            id=assessment_id, risk_type=risk_type,
            manifestation=words(rng.randint(1, 8)),
            impacted_stakeholders=words(rng.randint(1, 4)),
            relevancy=rng.choice(list(Rating)) if rated else None,
            severity=rng.choice(list(Rating)) if rated else None,
            origin=rng.choice(list(Origin)),
        ), bundle)
        if rated:
            rated_ids.append(assessment_id)
    if rated_ids and rng.random() < 0.5:
        order = rated_ids[:]
        rng.shuffle(order)
        rank_risks(session, order)
    for i in range(rng.randint(0, 2)):
        if not rated_ids:
            break
        upsert_strategy(session, MitigationStrategy(
            id=f"s{i}", text=words(rng.randint(2, 10)),
            addresses=set(rng.sample(rated_ids, rng.randint(1, len(rated_ids)))),
        ))
    for assessment_id in rated_ids:
        if rng.random() < 0.5:
            set_confidence(session, assessment_id, rng.randint(1, 5))
    return session
