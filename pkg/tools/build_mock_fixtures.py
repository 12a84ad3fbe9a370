#!/usr/bin/env python3
"""Regenerate the index.json files for the bundled mock fixtures.

The mock backend resolves fixtures by (pipeline, content hash of the prompt
bindings). This script replays the bundled scenarios through the real binding
builders and maps each resulting hash to its hand-authored fixture file, so
the fixtures stay reachable whenever prompt inputs change. Run from the repo
root after editing fixtures, templates, or binding logic:

    python3 tools/build_mock_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from privy.gateway import extract_json
from privy.session import (
    CapabilityRequirement,
    CapabilitySummary,
    Origin,
    ProductConcept,
    Rating,
    ReqDimension,
    Requirement,
    RiskAssessment,
    Stakes,
    UseCase,
    UseCaseKind,
    create_session,
    set_capability_summary,
    snapshot,
    upsert_assessment,
    upsert_use_case,
)
from privy.suggestions import (
    UseCaseSuggestion,
    fixture_key,
    merge_bindings,
    pair_bindings,
    provocation_bindings,
    risk_bindings,
    use_case_bindings,
)
from privy.taxonomy import load_taxonomy

ROOT = Path(__file__).resolve().parent.parent
MOCK = ROOT / "src" / "privy" / "fixtures" / "mock"
CONCEPTS = ROOT / "src" / "privy" / "fixtures" / "concepts"

TEXTBOOK_CONCEPT = ProductConcept(
    name="Textbook Tutor AI",
    purpose="An AI tutor that helps students study from their textbooks, answering "
            "questions and recommending readings tailored to each student.",
    data_description="Textbook content, students' coursework history, and their "
                     "interaction logs with the tutor.",
)

INDEX: dict[str, dict[str, str]] = {}


def register(key: str, name: str) -> None:
    pipeline, digest = key.split("/", 1)
    INDEX.setdefault(pipeline, {})[digest] = name


def read_fixture(pipeline: str, name: str) -> dict:
    return extract_json((MOCK / pipeline / f"{name}.txt").read_text("utf-8"))


def load_concept(name: str) -> ProductConcept:
    raw = json.loads((CONCEPTS / f"{name}.json").read_text("utf-8"))
    return ProductConcept(
        name=raw["name"], purpose=raw["purpose"],
        data_description=raw["data_description"],
        example_use_case=raw.get("example_use_case", ""),
    )


def suggestions_from(fixture: dict) -> list[UseCaseSuggestion]:
    return [
        UseCaseSuggestion(kind=UseCaseKind(s["kind"]), stakes=Stakes(s["stakes"]),
                          description=s["description"], party=s["party"])
        for s in fixture["suggestions"]
    ]


def accept_use_cases(session, suggestions: list[UseCaseSuggestion]) -> list[UseCase]:
    accepted = []
    for i, s in enumerate(suggestions, start=1):
        uc = UseCase(id=f"uc{i}", kind=s.kind, stakes=s.stakes,
                     description=s.description, party=s.party,
                     origin=Origin.AI_SUGGESTED)
        upsert_use_case(session, uc)
        accepted.append(uc)
    return accepted


def pair_from_fixture(name: str, derived_from: list[str]) -> CapabilityRequirement:
    raw = read_fixture("capability-pair", name)
    return CapabilityRequirement(
        id=f"pair-{name}",
        capability=raw["capability"],
        requirements=[Requirement(dimension=ReqDimension(r["dimension"]), text=r["text"])
                      for r in raw["requirements"]],
        derived_from_use_cases=derived_from,
        origin=Origin.AI_SUGGESTED,
    )


def build_textbook(bundle) -> None:
    session = create_session(TEXTBOOK_CONCEPT)
    snap = snapshot(session)
    register(fixture_key("use-cases", use_case_bindings(snap, [])), "textbook-tutor")
    batch1 = suggestions_from(read_fixture("use-cases", "textbook-tutor"))
    register(fixture_key("use-cases", use_case_bindings(snap, batch1)),
             "textbook-tutor-more")
    register(fixture_key("risks", risk_bindings(snap, bundle)), "textbook-tutor")

    # the worked reading-recommendation example: a one-use-case session
    readings = create_session(TEXTBOOK_CONCEPT)
    uc = UseCase(id="uc-readings", kind=UseCaseKind.INTENDED, stakes=Stakes.LOW,
                 description="A user requests recommended readings based on prior "
                             "coursework.",
                 party="students")
    upsert_use_case(readings, uc)
    rsnap = snapshot(readings)
    register(fixture_key("capability-pair", pair_bindings(rsnap, uc)),
             "textbook-tutor-readings")
    pair = pair_from_fixture("textbook-tutor-readings", [uc.id])
    register(fixture_key("capability-merge", merge_bindings(rsnap, [pair])),
             "textbook-tutor-readings")

    # surveillance provocations on the accepted risk suggestion
    risks = read_fixture("risks", "textbook-tutor")["suggestions"]
    surveillance = next(s for s in risks if s["risk_type"] == "surveillance")
    assessment = RiskAssessment(
        id="a-surveillance", risk_type="surveillance",
        manifestation=surveillance["manifestation"],
        impacted_stakeholders=surveillance["impacted_stakeholders"],
        relevancy=Rating.HIGH, severity=Rating.HIGH, origin=Origin.AI_SUGGESTED,
    )
    upsert_assessment(session, assessment, bundle)
    register(
        fixture_key("provocations",
                    provocation_bindings(snapshot(session), assessment, bundle)),
        "textbook-tutor-surveillance",
    )


def build_meeting_assistant(bundle) -> None:
    concept = load_concept("ai-meeting-assistant")
    session = create_session(concept)
    snap0 = snapshot(session)
    register(fixture_key("use-cases", use_case_bindings(snap0, [])),
             "ai-meeting-assistant")
    register(fixture_key("risks", risk_bindings(snap0, bundle)), "ai-meeting-assistant")

    batch = suggestions_from(read_fixture("use-cases", "ai-meeting-assistant"))
    accepted = accept_use_cases(session, batch)
    snap1 = snapshot(session)
    pairs = []
    for i, uc in enumerate(accepted, start=1):
        name = f"ai-meeting-assistant-uc{i}"
        register(fixture_key("capability-pair", pair_bindings(snap1, uc)), name)
        pairs.append(pair_from_fixture(name, [uc.id]))
    register(fixture_key("capability-merge", merge_bindings(snap1, pairs)),
             "ai-meeting-assistant")
    merged = read_fixture("capability-merge", "ai-meeting-assistant")["summary"]
    set_capability_summary(session, CapabilitySummary(text=merged, pairs=pairs))
    snap2 = snapshot(session)
    register(fixture_key("risks", risk_bindings(snap2, bundle)), "ai-meeting-assistant")

    risks = {s["risk_type"]: s
             for s in read_fixture("risks", "ai-meeting-assistant")["suggestions"]}
    ratings = {"surveillance": (Rating.HIGH, Rating.HIGH),
               "disclosure": (Rating.HIGH, Rating.MEDIUM),
               "intrusion": (Rating.MEDIUM, Rating.HIGH)}
    for risk_type, (relevancy, severity) in ratings.items():
        suggestion = risks[risk_type]
        assessment = RiskAssessment(
            id=f"a-{risk_type}", risk_type=risk_type,
            manifestation=suggestion["manifestation"],
            impacted_stakeholders=suggestion["impacted_stakeholders"],
            relevancy=relevancy, severity=severity, origin=Origin.AI_SUGGESTED,
        )
        upsert_assessment(session, assessment, bundle)
        register(
            fixture_key("provocations",
                        provocation_bindings(snapshot(session), assessment, bundle)),
            f"ai-meeting-assistant-{risk_type}",
        )


def build_audience_selection(bundle) -> None:
    concept = load_concept("dynamic-audience-selection")
    snap = snapshot(create_session(concept))
    register(fixture_key("use-cases", use_case_bindings(snap, [])),
             "dynamic-audience-selection")
    register(fixture_key("risks", risk_bindings(snap, bundle)),
             "dynamic-audience-selection")


def main() -> None:
    bundle = load_taxonomy()
    build_textbook(bundle)
    build_meeting_assistant(bundle)
    build_audience_selection(bundle)
    for pipeline, entries in sorted(INDEX.items()):
        path = MOCK / pipeline / "index.json"
        path.write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n", "utf-8")
        print(f"wrote {path.relative_to(ROOT)} ({len(entries)} entries)")


if __name__ == "__main__":
    main()
