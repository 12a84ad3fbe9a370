"""Quality-review instruments for generated PIA reports.

Ships the expert-evaluation rubric (per-risk and per-plan measures on a
6-point ordinal agreement scale) as a loadable data file, validates rater
responses for completeness and range, and provides descriptive aggregation
plus standard SUS scoring. Inferential statistics are deliberately out of
scope.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import NotFoundError, ValidationError
from .report import Report

LIKERT6_LABELS = {
    1: "strongly disagree", 2: "disagree", 3: "slightly disagree",
    4: "slightly agree", 5: "agree", 6: "strongly agree",
}

UNITS = ("per-risk", "per-plan")


@dataclass(frozen=True)
class RubricItem:
    unit: str     # "per-risk" | "per-plan"
    measure: str  # stable slug
    question: str


@dataclass(frozen=True)
class Rubric:
    version: str
    items: tuple[RubricItem, ...]

    def per_risk_measures(self) -> list[str]:
        return [i.measure for i in self.items if i.unit == "per-risk"]

    def per_plan_measures(self) -> list[str]:
        return [i.measure for i in self.items if i.unit == "per-plan"]


@dataclass
class RubricResponse:
    """One rater's answers for one report."""

    report_id: str
    rater_id: str
    per_risk: dict[tuple[str, str], int] = field(default_factory=dict)  # (assessment id, measure) -> 1..6
    per_plan: dict[str, int] = field(default_factory=dict)              # measure -> 1..6


@dataclass(frozen=True)
class ProductPerception:
    """The two 5-point pre/post items on a concept's benefit and intrusiveness."""

    phase: str  # "pre" | "post"
    benefit: int
    intrusiveness: int

    def __post_init__(self):
        if self.phase not in ("pre", "post"):
            raise ValidationError(f"phase must be pre or post, got {self.phase!r}",
                                  code="out_of_range")
        for label, value in (("benefit", self.benefit),
                             ("intrusiveness", self.intrusiveness)):
            if not isinstance(value, int) or not 1 <= value <= 5:
                raise ValidationError(f"{label} rating must be in 1..5, got {value!r}",
                                      code="out_of_range")


def load_rubric(path: str | Path | None = None) -> Rubric:
    """Load a rubric file; ``None`` loads the bundled default instrument."""
    if path is None:
        text = resources.files("privy.data").joinpath("rubric.json").read_text("utf-8")
    else:
        path = Path(path)
        if not path.exists():
            raise NotFoundError(f"rubric file not found: {path}")
        text = path.read_text("utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"rubric file is not valid JSON: {exc}", code="parse_error")
    items = []
    seen: set[str] = set()
    for entry in raw.get("items", []):
        if entry["unit"] not in UNITS:
            raise ValidationError(f"invalid rubric unit: {entry['unit']!r}",
                                  code="parse_error")
        if not entry.get("question", "").strip():
            raise ValidationError(f"rubric measure {entry['measure']!r} has an empty "
                                  f"question", code="parse_error")
        if entry["measure"] in seen:
            raise ValidationError(f"duplicate rubric measure: {entry['measure']!r}",
                                  code="parse_error")
        seen.add(entry["measure"])
        items.append(RubricItem(unit=entry["unit"], measure=entry["measure"],
                                question=entry["question"]))
    if not items:
        raise ValidationError("rubric has no items", code="parse_error")
    return Rubric(version=raw.get("version", "1"), items=tuple(items))


def response_from_dict(raw: dict) -> RubricResponse:
    try:
        per_risk = {
            (assessment_id, measure): int(value)
            for assessment_id, measures in raw.get("per_risk", {}).items()
            for measure, value in measures.items()
        }
        return RubricResponse(
            report_id=raw["report_id"],
            rater_id=raw["rater_id"],
            per_risk=per_risk,
            per_plan={m: int(v) for m, v in raw.get("per_plan", {}).items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed rubric response: {exc!r}", code="parse_error")


def validate_response(report: Report, response: RubricResponse,
                      rubric: Rubric | None = None) -> list[dict]:
    """Completeness and range checks; returns a list of problems (empty = ok)."""
    rubric = rubric or load_rubric()
    problems: list[dict] = []
    report_ids = {row.assessment_id for row in report.risks}

    for (assessment_id, measure), value in sorted(response.per_risk.items()):
        if assessment_id not in report_ids:
            problems.append({"error": "unknown_assessment", "assessment_id": assessment_id})
        if measure not in rubric.per_risk_measures():
            problems.append({"error": "unknown_measure", "measure": measure})
        if not 1 <= value <= 6:
            problems.append({"error": "out_of_range", "assessment_id": assessment_id,
                             "measure": measure, "value": value})
    for measure, value in sorted(response.per_plan.items()):
        if measure not in rubric.per_plan_measures():
            problems.append({"error": "unknown_measure", "measure": measure})
        if not 1 <= value <= 6:
            problems.append({"error": "out_of_range", "measure": measure, "value": value})

    for row in report.risks:
        for measure in rubric.per_risk_measures():
            if (row.assessment_id, measure) not in response.per_risk:
                problems.append({"error": "missing", "assessment_id": row.assessment_id,
                                 "risk_type": row.risk_type, "measure": measure})
    for measure in rubric.per_plan_measures():
        if measure not in response.per_plan:
            problems.append({"error": "missing", "measure": measure})
    return problems


@dataclass(frozen=True)
class Aggregate:
    mean: float
    sd: float
    n: int


def aggregate(responses: list[RubricResponse], measure: str) -> Aggregate:
    """Arithmetic mean and sample SD (n-1 denominator; 0.0 when n = 1)."""
    values: list[int] = []
    for response in responses:
        values.extend(v for (_, m), v in response.per_risk.items() if m == measure)
        if measure in response.per_plan:
            values.append(response.per_plan[measure])
    if not values:
        raise ValidationError(f"no ratings found for measure {measure!r}",
                              code="empty_input")
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return Aggregate(mean=mean, sd=sd, n=len(values))


def sus_score(items: list[int]) -> float:
    """Standard System Usability Scale score in [0, 100] from 10 items in 1..5.

    Odd-numbered items contribute (value - 1), even-numbered items (5 - value);
    the sum is scaled by 2.5.
    """
    if len(items) != 10:
        raise ValidationError(f"SUS needs exactly 10 items, got {len(items)}",
                              code="out_of_range")
    for i, value in enumerate(items, start=1):
        if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
            raise ValidationError(f"SUS item {i} must be an integer in 1..5, got {value!r}",
                                  code="out_of_range")
    total = 0
    for i, value in enumerate(items, start=1):
        total += (value - 1) if i % 2 == 1 else (5 - value)
    return total * 2.5
