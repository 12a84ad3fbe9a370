"""Report rendering, worksheet export, escaping, and golden comparisons."""

import dataclasses
from datetime import datetime, timezone
from pathlib import Path

import pytest

from privy.errors import ValidationError
from privy.report import (
    STATIC_PROVOCATION_PASSAGE,
    build_worksheet,
    export_worksheet,
    render_html,
    render_markdown,
    render_report,
    report_from_dict,
    report_to_dict,
)
from privy.session import (
    ProductConcept,
    Rating,
    RiskAssessment,
    create_session,
    snapshot,
    upsert_assessment,
)

GOLDEN = Path(__file__).parent / "golden"

FIXED_TS = datetime(2025, 6, 1, 12, 0, 0, tzinfo=timezone.utc)


def _frozen(report):
    return dataclasses.replace(report, report_id="golden-report",
                               generated_at=FIXED_TS)


# -- render_report ----------------------------------------------------------------

def test_report_section2_follows_ranking(ama_session, bundle):
    report = render_report(snapshot(ama_session), bundle)
    assert [row.assessment_id for row in report.risks] == \
        ama_session.ranking.ordered_ids
    assert [row.rank for row in report.risks] == [1, 2, 3]


def test_report_requires_a_rated_assessment(ama_concept, bundle):
    session = create_session(ama_concept)
    with pytest.raises(ValidationError) as exc:
        render_report(snapshot(session), bundle)
    assert exc.value.code == "nothing_to_report"


def test_report_counts_pending_assessments(ama_concept, bundle):
    session = create_session(ama_concept)
    upsert_assessment(session, RiskAssessment(
        id="r1", risk_type="surveillance", manifestation="m",
        impacted_stakeholders="s", relevancy=Rating.HIGH, severity=Rating.HIGH,
    ), bundle)
    upsert_assessment(session, RiskAssessment(
        id="r2", risk_type="intrusion", manifestation="m",
        impacted_stakeholders="s",
    ), bundle)
    report = render_report(snapshot(session), bundle)
    assert len(report.risks) == 1
    assert report.pending_count == 1
    assert "1 assessment pending rating" in render_markdown(report)


def test_multi_risk_strategy_listed_once_with_both_types(ama_session, bundle):
    report = render_report(snapshot(ama_session), bundle)
    entry = next(s for s in report.strategies if "visible and obvious" in s.text)
    assert entry.addressed_risk_types == ("Surveillance", "Intrusion")
    markdown = render_markdown(report)
    assert markdown.count("visible and obvious") == 1


def test_report_risk_types_exist_in_taxonomy(ama_session, bundle):
    report = render_report(snapshot(ama_session), bundle)
    for row in report.risks:
        assert row.risk_type in bundle.ids()


def test_report_round_trip(ama_session, bundle):
    report = render_report(snapshot(ama_session), bundle)
    raw = report_to_dict(report)
    assert report_to_dict(report_from_dict(raw)) == raw


# -- markdown / html -----------------------------------------------------------------

def test_render_markdown_deterministic(ama_session, bundle):
    report = render_report(snapshot(ama_session), bundle)
    assert render_markdown(report) == render_markdown(report)
    assert render_html(report) == render_html(report)


def test_sections_in_order(ama_session, bundle):
    markdown = render_markdown(render_report(snapshot(ama_session), bundle))
    s1 = markdown.index("## Section 1: Product Information")
    s2 = markdown.index("## Section 2: Privacy Risks")
    s3 = markdown.index("## Section 3: Mitigation Strategies")
    assert s1 < s2 < s3


def test_html_escapes_user_text(bundle, ama_concept):
    session = create_session(ama_concept)
    upsert_assessment(session, RiskAssessment(
        id="r1", risk_type="surveillance",
        manifestation="<script>alert('x')</script>",
        impacted_stakeholders="s", relevancy=Rating.HIGH, severity=Rating.HIGH,
    ), bundle)
    html_out = render_html(render_report(snapshot(session), bundle))
    assert "<script>alert" not in html_out
    assert "&lt;script&gt;" in html_out


def test_golden_report_markdown(engine, bundle, ama_concept):
    from conftest import run_meeting_assistant_flow

    session = run_meeting_assistant_flow(engine, bundle, ama_concept,
                                         session_id="golden-session")
    report = _frozen(render_report(snapshot(session), bundle))
    golden = (GOLDEN / "report_ai_meeting_assistant.md").read_text("utf-8")
    assert render_markdown(report) == golden


# -- worksheet -------------------------------------------------------------------------

def test_worksheet_blank_has_full_taxonomy_table(bundle):
    text = export_worksheet(bundle)
    for risk in bundle.risks:
        assert risk.display_name in text
    assert text.count("| data-") + text.count("| invasion") == 12


def test_worksheet_static_provocations_verbatim(bundle):
    text = export_worksheet(bundle)
    assert STATIC_PROVOCATION_PASSAGE in text
    assert "enhance users' awareness of the risk?" in text
    assert "enhance users' motivation to address the risk?" in text
    assert "provide users with the ability to manage the risk?" in text


def test_worksheet_sections_in_order(bundle):
    text = export_worksheet(bundle)
    s1 = text.index("## Section 1: Product Information")
    s2 = text.index("## Section 2: Privacy Risks")
    s3 = text.index("## Section 3: Mitigation Strategies")
    assert s1 < s2 < s3


def test_worksheet_byte_stable(bundle):
    assert export_worksheet(bundle) == export_worksheet(bundle)


def test_worksheet_prefilled_concept(bundle, das_concept):
    text = export_worksheet(bundle, das_concept)
    assert "Dynamic Audience Selection" in text
    assert "+friends in music groups, -relatives" in text
    blank = export_worksheet(bundle)
    assert "Dynamic Audience Selection" not in blank


def test_build_worksheet_structure(bundle, das_concept):
    ws = build_worksheet(bundle, das_concept)
    assert ws.sections == ("Product Information", "Privacy Risks",
                           "Mitigation Strategies")
    assert len(ws.taxonomy_table) == 12
    assert len(ws.static_provocations) == 3
