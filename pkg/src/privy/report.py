"""PIA report rendering and the static worksheet export.

A report is an immutable three-section snapshot of a session: (1) product
information, (2) ranked privacy risks, (3) mitigation strategies. Only fully
rated assessments are reported; pending ones are counted in a notice. The
worksheet is the no-LLM variant of the same workflow: a fillable Markdown
document with the full taxonomy reference table and the three fixed
brainstorming questions.
"""

from __future__ import annotations

import html
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import ValidationError
from .session import (
    CapabilitySummary,
    ProductConcept,
    Rating,
    SessionSnapshot,
    UseCase,
    new_id,
)
from .taxonomy import TaxonomyBundle, get_risk

STATIC_PROVOCATIONS = (
    "How can the product be designed to enhance users' awareness of the risk?",
    "How can the product be designed to enhance users' motivation to address the risk?",
    "How can the product be designed to provide users with the ability to manage the risk?",
)

STATIC_PROVOCATION_PASSAGE = (
    "How can the product be designed to "
    "1) enhance users' awareness of the risk? "
    "2) enhance users' motivation to address the risk? "
    "3) provide users with the ability to manage the risk?"
)

WORKSHEET_SECTIONS = ("Product Information", "Privacy Risks", "Mitigation Strategies")


@dataclass(frozen=True)
class RiskRow:
    rank: int
    assessment_id: str
    risk_type: str
    risk_display_name: str
    manifestation: str
    impacted_stakeholders: str
    relevancy: Rating
    severity: Rating


@dataclass(frozen=True)
class StrategyEntry:
    text: str
    addressed_risk_types: tuple[str, ...]  # display names, in ranking order


@dataclass(frozen=True)
class Report:
    report_id: str
    session_id: str
    session_version: int
    generated_at: datetime
    concept: ProductConcept
    use_cases: tuple[UseCase, ...]
    capability_summary: CapabilitySummary
    risks: tuple[RiskRow, ...]
    strategies: tuple[StrategyEntry, ...]
    confidence: dict[str, int]  # risk display name -> 1..5
    pending_count: int = 0


@dataclass(frozen=True)
class Worksheet:
    sections: tuple[str, ...]
    taxonomy_table: tuple
    static_provocations: tuple[str, ...]
    concept: ProductConcept | None = None


def render_report(snapshot: SessionSnapshot, bundle: TaxonomyBundle) -> Report:
    """Collate a session snapshot into the three-section report."""
    rated = {a.id: a for a in snapshot.rated_assessments()}
    if not rated:
        raise ValidationError(
            "nothing to report: the session has no fully rated risk assessment",
            code="nothing_to_report",
        )
    rows = []
    for rank, assessment_id in enumerate(snapshot.ranking.ordered_ids, start=1):
        assessment = rated[assessment_id]
        risk = get_risk(bundle, assessment.risk_type)
        rows.append(RiskRow(
            rank=rank,
            assessment_id=assessment.id,
            risk_type=risk.id,
            risk_display_name=risk.display_name,
            manifestation=assessment.manifestation,
            impacted_stakeholders=assessment.impacted_stakeholders,
            relevancy=assessment.relevancy,
            severity=assessment.severity,
        ))
    display_by_id = {row.assessment_id: row.risk_display_name for row in rows}
    rank_by_id = {row.assessment_id: row.rank for row in rows}
    strategies = tuple(
        StrategyEntry(
            text=strategy.text,
            addressed_risk_types=tuple(
                display_by_id[a] for a in sorted(strategy.addresses, key=rank_by_id.get)
            ),
        )
        for strategy in snapshot.plan.strategies
    )
    confidence = {
        display_by_id[assessment_id]: value
        for assessment_id, value in snapshot.plan.confidence.items()
    }
    return Report(
        report_id=new_id(),
        session_id=snapshot.id,
        session_version=snapshot.version,
        generated_at=datetime.now(timezone.utc).replace(microsecond=0),
        concept=snapshot.concept,
        use_cases=tuple(snapshot.use_cases),
        capability_summary=snapshot.capability_summary,
        risks=tuple(rows),
        strategies=strategies,
        confidence=confidence,
        pending_count=len(snapshot.assessments) - len(rated),
    )


# ---------------------------------------------------------------------------
# Markdown / HTML rendering
# ---------------------------------------------------------------------------

_CONFIDENCE_LABELS = {
    1: "strongly disagree", 2: "disagree", 3: "neither agree nor disagree",
    4: "agree", 5: "strongly agree",
}


def _timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def render_markdown(report: Report) -> str:
    lines: list[str] = []
    out = lines.append
    title = report.concept.name or "AI Product Concept"
    out(f"# Privacy Impact Assessment Report: {title}")
    out("")
    if report.session_id:
        out(f"Generated {_timestamp(report.generated_at)} from session "
            f"`{report.session_id}` (version {report.session_version}).")
    else:
        out(f"Generated {_timestamp(report.generated_at)} "
            f"(session version {report.session_version}).")
    out("")
    out("## Section 1: Product Information")
    out("")
    out(f"**Product purpose:** {report.concept.purpose}")
    out("")
    out(f"**Product data:** {report.concept.data_description or '(not described)'}")
    if report.concept.example_use_case:
        out("")
        out(f"**Example use case:** {report.concept.example_use_case}")
    out("")
    out("### Use cases")
    out("")
    if report.use_cases:
        for uc in report.use_cases:
            role = "beneficiary" if uc.kind.value == "intended" else "exploiter"
            stakes = f", {uc.stakes.value} stakes" if uc.stakes.value != "unspecified" else ""
            out(f"- **{uc.kind.value.capitalize()}**{stakes}: {uc.description} "
                f"({role}: {uc.party})")
    else:
        out("_No use cases recorded._")
    out("")
    out("### AI capabilities and requirements")
    out("")
    if report.capability_summary.text:
        out(report.capability_summary.text)
    else:
        out("_Not yet summarized._")
    for pair in report.capability_summary.pairs:
        out("")
        out(f"- **Capability:** {pair.capability}")
        for req in pair.requirements:
            out(f"  - {req.dimension.value}: {req.text}")
    out("")
    out("## Section 2: Privacy Risks")
    out("")
    if report.pending_count:
        noun = "assessment" if report.pending_count == 1 else "assessments"
        out(f"_Notice: {report.pending_count} {noun} pending rating, not included below._")
        out("")
    out("| Rank | Risk type | How the risk may arise | Impacted stakeholders | Relevancy | Severity |")
    out("| --- | --- | --- | --- | --- | --- |")
    for row in report.risks:
        out(f"| {row.rank} | {row.risk_display_name} | {row.manifestation} "
            f"| {row.impacted_stakeholders} | {row.relevancy.value} | {row.severity.value} |")
    out("")
    out("## Section 3: Mitigation Strategies")
    out("")
    if report.strategies:
        for i, strategy in enumerate(report.strategies, start=1):
            addressed = ", ".join(strategy.addressed_risk_types)
            out(f"{i}. {strategy.text}")
            out(f"   - Addresses: {addressed}")
    else:
        out("_No mitigation strategies recorded._")
    if report.confidence:
        out("")
        out("### Confidence in the mitigation plan")
        out("")
        for risk_name in sorted(report.confidence):
            value = report.confidence[risk_name]
            out(f"- {risk_name}: {value}/5 ({_CONFIDENCE_LABELS[value]})")
    out("")
    return "\n".join(lines)


_HTML_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ font-family: Georgia, serif; max-width: 52rem; margin: 2rem auto; padding: 0 1rem; color: #1c1c1c; }}
h1 {{ border-bottom: 3px solid #2b5876; padding-bottom: .4rem; }}
h2 {{ color: #2b5876; margin-top: 2rem; }}
table {{ border-collapse: collapse; width: 100%; }}
th, td {{ border: 1px solid #b8c4cc; padding: .45rem .6rem; text-align: left; vertical-align: top; }}
th {{ background: #eef3f6; }}
.meta {{ color: #5a6770; font-size: .9rem; }}
.notice {{ background: #fff6e0; border: 1px solid #e8d28a; padding: .5rem .8rem; }}
</style>
</head>
<body>
{body}
</body>
</html>
"""


def render_html(report: Report) -> str:
    """Standalone single-file HTML rendering; every user string is escaped."""
    e = html.escape
    parts: list[str] = []
    out = parts.append
    title = e(report.concept.name or "AI Product Concept")
    out(f"<h1>Privacy Impact Assessment Report: {title}</h1>")
    out(f'<p class="meta">Generated {e(_timestamp(report.generated_at))} from session '
        f"{e(report.session_id)} (version {report.session_version}).</p>")
    out("<h2>Section 1: Product Information</h2>")
    out(f"<p><strong>Product purpose:</strong> {e(report.concept.purpose)}</p>")
    out(f"<p><strong>Product data:</strong> {e(report.concept.data_description or '(not described)')}</p>")
    if report.concept.example_use_case:
        out(f"<p><strong>Example use case:</strong> {e(report.concept.example_use_case)}</p>")
    out("<h3>Use cases</h3>")
    if report.use_cases:
        out("<ul>")
        for uc in report.use_cases:
            role = "beneficiary" if uc.kind.value == "intended" else "exploiter"
            stakes = f", {uc.stakes.value} stakes" if uc.stakes.value != "unspecified" else ""
            out(f"<li><strong>{e(uc.kind.value)}</strong>{e(stakes)}: {e(uc.description)} "
                f"({role}: {e(uc.party)})</li>")
        out("</ul>")
    else:
        out("<p><em>No use cases recorded.</em></p>")
    out("<h3>AI capabilities and requirements</h3>")
    if report.capability_summary.text:
        out(f"<p>{e(report.capability_summary.text)}</p>")
    else:
        out("<p><em>Not yet summarized.</em></p>")
    if report.capability_summary.pairs:
        out("<ul>")
        for pair in report.capability_summary.pairs:
            reqs = "".join(
                f"<li>{e(r.dimension.value)}: {e(r.text)}</li>" for r in pair.requirements
            )
            out(f"<li><strong>Capability:</strong> {e(pair.capability)}<ul>{reqs}</ul></li>")
        out("</ul>")
    out("<h2>Section 2: Privacy Risks</h2>")
    if report.pending_count:
        noun = "assessment" if report.pending_count == 1 else "assessments"
        out(f'<p class="notice">{report.pending_count} {noun} pending rating, '
            f"not included below.</p>")
    out("<table><tr><th>Rank</th><th>Risk type</th><th>How the risk may arise</th>"
        "<th>Impacted stakeholders</th><th>Relevancy</th><th>Severity</th></tr>")
    for row in report.risks:
        out(f"<tr><td>{row.rank}</td><td>{e(row.risk_display_name)}</td>"
            f"<td>{e(row.manifestation)}</td><td>{e(row.impacted_stakeholders)}</td>"
            f"<td>{e(row.relevancy.value)}</td><td>{e(row.severity.value)}</td></tr>")
    out("</table>")
    out("<h2>Section 3: Mitigation Strategies</h2>")
    if report.strategies:
        out("<ol>")
        for strategy in report.strategies:
            addressed = e(", ".join(strategy.addressed_risk_types))
            out(f"<li>{e(strategy.text)}<br><em>Addresses: {addressed}</em></li>")
        out("</ol>")
    else:
        out("<p><em>No mitigation strategies recorded.</em></p>")
    if report.confidence:
        out("<h3>Confidence in the mitigation plan</h3><ul>")
        for risk_name in sorted(report.confidence):
            value = report.confidence[risk_name]
            out(f"<li>{e(risk_name)}: {value}/5 ({_CONFIDENCE_LABELS[value]})</li>")
        out("</ul>")
    return _HTML_PAGE.format(title=title, body="\n".join(parts))


# ---------------------------------------------------------------------------
# Worksheet export
# ---------------------------------------------------------------------------

def build_worksheet(bundle: TaxonomyBundle,
                    concept: ProductConcept | None = None) -> Worksheet:
    return Worksheet(
        sections=WORKSHEET_SECTIONS,
        taxonomy_table=bundle.risks,
        static_provocations=STATIC_PROVOCATIONS,
        concept=concept,
    )


def export_worksheet(bundle: TaxonomyBundle,
                     concept: ProductConcept | None = None) -> str:
    """Render the static worksheet as Markdown; byte-stable for a fixed taxonomy."""
    ws = build_worksheet(bundle, concept)
    lines: list[str] = []
    out = lines.append
    out("# AI Privacy Impact Assessment Worksheet")
    out("")
    out(f"_Taxonomy version {bundle.version}._")
    out("")
    out("## Section 1: Product Information")
    out("")
    c = ws.concept
    out(f"**Product name:** {c.name if c else ''}")
    out("")
    out(f"**Product purpose:** {c.purpose if c else ''}")
    out("")
    out(f"**Product data:** {c.data_description if c else ''}")
    out("")
    out(f"**Example use case:** {c.example_use_case if c else ''}")
    out("")
    out("**Use cases** (describe intended uses with their beneficiaries and "
        "unintended misuses with their exploiters):")
    out("")
    for i in range(1, 4):
        out(f"{i}. ")
    out("")
    out("**AI capabilities and requirements** (what the AI must do; what it must "
        "collect, process, disseminate, and integrate with):")
    out("")
    out("## Section 2: Privacy Risks")
    out("")
    out("Identify the risks most important to mitigate, describe how each may "
        "arise in your product and who may be impacted, and rate each risk's "
        "relevancy and severity (High / Medium / Low). Use the taxonomy reference "
        "table below.")
    out("")
    out("| Risk type | How the risk may arise | Impacted stakeholders | Relevancy | Severity |")
    out("| --- | --- | --- | --- | --- |")
    for i in range(1, 4):
        out("|  |  |  |  |  |")
    out("")
    out("### AI privacy taxonomy reference")
    out("")
    out("| Risk type | Category | Definition | Real-world incidents |")
    out("| --- | --- | --- | --- |")
    for risk in ws.taxonomy_table:
        links = "; ".join(f"[{l.title}]({l.url})" for l in risk.incident_links)
        out(f"| {risk.display_name} | {risk.category} | {risk.definition} | {links} |")
    out("")
    out("## Section 3: Mitigation Strategies")
    out("")
    out("Outline a mitigation plan for one identified risk at a time; the plan "
        "carries over between risks, and one part of the strategy may address "
        "multiple risks. For each risk, consider:")
    out("")
    out(STATIC_PROVOCATION_PASSAGE)
    out("")
    out("| Risk type | Mitigation strategy | Confidence in the plan (1-5) |")
    out("| --- | --- | --- |")
    for i in range(1, 4):
        out("|  |  |  |")
    out("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Report serialization (for the store)
# ---------------------------------------------------------------------------

def report_to_dict(report: Report) -> dict:
    return {
        "schema_version": "1",
        "report_id": report.report_id,
        "session_id": report.session_id,
        "session_version": report.session_version,
        "generated_at": _timestamp(report.generated_at),
        "concept": {
            "name": report.concept.name,
            "purpose": report.concept.purpose,
            "data_description": report.concept.data_description,
            "example_use_case": report.concept.example_use_case,
        },
        "use_cases": [
            {"id": u.id, "kind": u.kind.value, "stakes": u.stakes.value,
             "description": u.description, "party": u.party, "origin": u.origin.value}
            for u in report.use_cases
        ],
        "capability_summary": {
            "text": report.capability_summary.text,
            "pairs": [
                {
                    "id": p.id, "capability": p.capability,
                    "requirements": [
                        {"dimension": r.dimension.value, "text": r.text}
                        for r in p.requirements
                    ],
                    "derived_from_use_cases": list(p.derived_from_use_cases),
                    "origin": p.origin.value,
                }
                for p in report.capability_summary.pairs
            ],
        },
        "risks": [
            {
                "rank": r.rank, "assessment_id": r.assessment_id,
                "risk_type": r.risk_type, "risk_display_name": r.risk_display_name,
                "manifestation": r.manifestation,
                "impacted_stakeholders": r.impacted_stakeholders,
                "relevancy": r.relevancy.value, "severity": r.severity.value,
            }
            for r in report.risks
        ],
        "strategies": [
            {"text": s.text, "addressed_risk_types": list(s.addressed_risk_types)}
            for s in report.strategies
        ],
        "confidence": dict(report.confidence),
        "pending_count": report.pending_count,
    }


def report_from_dict(raw: dict) -> Report:
    from .session import Origin, ReqDimension, Requirement, CapabilityRequirement, UseCaseKind, Stakes

    try:
        concept = ProductConcept(
            name=raw["concept"].get("name", ""),
            purpose=raw["concept"]["purpose"],
            data_description=raw["concept"].get("data_description", ""),
            example_use_case=raw["concept"].get("example_use_case", ""),
        )
        use_cases = tuple(
            UseCase(
                id=u["id"], kind=UseCaseKind(u["kind"]), stakes=Stakes(u["stakes"]),
                description=u["description"], party=u["party"],
                origin=Origin(u["origin"]),
            )
            for u in raw.get("use_cases", [])
        )
        summary_raw = raw.get("capability_summary", {})
        summary = CapabilitySummary(
            text=summary_raw.get("text", ""),
            pairs=[
                CapabilityRequirement(
                    id=p["id"], capability=p["capability"],
                    requirements=[
                        Requirement(dimension=ReqDimension(r["dimension"]), text=r["text"])
                        for r in p["requirements"]
                    ],
                    derived_from_use_cases=list(p.get("derived_from_use_cases", [])),
                    origin=Origin(p.get("origin", "user")),
                )
                for p in summary_raw.get("pairs", [])
            ],
        )
        risks = tuple(
            RiskRow(
                rank=r["rank"], assessment_id=r["assessment_id"],
                risk_type=r["risk_type"], risk_display_name=r["risk_display_name"],
                manifestation=r["manifestation"],
                impacted_stakeholders=r["impacted_stakeholders"],
                relevancy=Rating(r["relevancy"]), severity=Rating(r["severity"]),
            )
            for r in raw.get("risks", [])
        )
        strategies = tuple(
            StrategyEntry(text=s["text"],
                          addressed_risk_types=tuple(s["addressed_risk_types"]))
            for s in raw.get("strategies", [])
        )
        generated = datetime.fromisoformat(raw["generated_at"].replace("Z", "+00:00"))
        return Report(
            report_id=raw["report_id"],
            session_id=raw["session_id"],
            session_version=int(raw["session_version"]),
            generated_at=generated,
            concept=concept,
            use_cases=use_cases,
            capability_summary=summary,
            risks=risks,
            strategies=strategies,
            confidence={k: int(v) for k, v in raw.get("confidence", {}).items()},
            pending_count=int(raw.get("pending_count", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed report document: {exc!r}", code="parse_error")
