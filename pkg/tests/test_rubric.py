"""Rubric instrument: validation, aggregation vs a brute-force oracle, SUS."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from privy.errors import ValidationError
from privy.rubric import (
    ProductPerception,
    RubricResponse,
    aggregate,
    load_rubric,
    response_from_dict,
    sus_score,
    validate_response,
)

PER_RISK = ["relevancy", "severity", "correctness", "clarity",
            "addressing-identified-risks"]
PER_PLAN = ["useful-conversation-starter", "product-specificity", "practicality",
            "overall-risk-envisioning", "overall-risk-mitigation",
            "overall-risk-impact-assessment"]


# -- the default instrument ---------------------------------------------------

def test_default_rubric_has_the_eleven_measures():
    rubric = load_rubric()
    assert rubric.per_risk_measures() == PER_RISK
    assert rubric.per_plan_measures() == PER_PLAN
    assert len(rubric.items) == 11


def test_rubric_questions_mention_their_subject():
    rubric = load_rubric()
    by_measure = {i.measure: i.question for i in rubric.items}
    assert "relevant to the product" in by_measure["relevancy"]
    assert "aligns with" in by_measure["correctness"]
    assert "good starting point" in by_measure["useful-conversation-starter"]
    assert "high quality privacy risk assessment" in \
        by_measure["overall-risk-impact-assessment"]


def test_custom_rubric_rejects_bad_units(tmp_path):
    path = tmp_path / "rubric.json"
    path.write_text('{"items": [{"unit": "per-universe", "measure": "m", '
                    '"question": "q"}]}', "utf-8")
    with pytest.raises(ValidationError):
        load_rubric(path)


# -- response validation ----------------------------------------------------------

def _complete_response(report, value=4):
    response = RubricResponse(report_id=report.report_id, rater_id="e1")
    for row in report.risks:
        for measure in PER_RISK:
            response.per_risk[(row.assessment_id, measure)] = value
    for measure in PER_PLAN:
        response.per_plan[measure] = value
    return response


def test_complete_response_over_three_risks_ok(ama_session, bundle):
    from privy.report import render_report
    from privy.session import snapshot

    report = render_report(snapshot(ama_session), bundle)
    assert len(report.risks) == 3
    assert validate_response(report, _complete_response(report)) == []


def test_out_of_range_value_reported(ama_session, bundle):
    from privy.report import render_report
    from privy.session import snapshot

    report = render_report(snapshot(ama_session), bundle)
    response = _complete_response(report)
    response.per_plan["practicality"] = 7
    problems = validate_response(report, response)
    assert any(p["error"] == "out_of_range" and p["measure"] == "practicality"
               for p in problems)


def test_missing_cell_named(ama_session, bundle):
    from privy.report import render_report
    from privy.session import snapshot

    report = render_report(snapshot(ama_session), bundle)
    response = _complete_response(report)
    victim = report.risks[1].assessment_id
    del response.per_risk[(victim, "severity")]
    problems = validate_response(report, response)
    assert any(p["error"] == "missing" and p.get("assessment_id") == victim
               and p["measure"] == "severity" for p in problems)


# -- aggregation ---------------------------------------------------------------------

def _plan_response(measure, value, rid="r"):
    return RubricResponse(report_id=rid, rater_id="x", per_plan={measure: value})


def test_aggregate_hand_arithmetic():
    responses = [_plan_response("practicality", v) for v in (4, 5, 6)]
    result = aggregate(responses, "practicality")
    assert result.mean == pytest.approx(5.0)
    assert result.sd == pytest.approx(1.0)
    assert result.n == 3


def test_aggregate_singleton_sd_zero():
    result = aggregate([_plan_response("clarity", 4)], "clarity")
    assert (result.mean, result.sd, result.n) == (4.0, 0.0, 1)


def test_aggregate_empty_errors():
    with pytest.raises(ValidationError):
        aggregate([], "clarity")
    with pytest.raises(ValidationError):
        aggregate([_plan_response("clarity", 4)], "unheard-of")


def test_aggregate_permutation_invariant():
    responses = [_plan_response("practicality", v) for v in (1, 6, 3, 3, 5)]
    shuffled = list(responses)
    random.Random(1).shuffle(shuffled)
    assert aggregate(responses, "practicality") == aggregate(shuffled, "practicality")


def _oracle_mean_sd(values):
    """Brute-force spreadsheet-style summation, independent of the implementation."""
    n = 0
    total = 0.0
    for v in values:
        n += 1
        total += v
    mean = total / n
    if n == 1:
        return mean, 0.0, n
    square_sum = 0.0
    for v in values:
        square_sum += (v - mean) * (v - mean)
    return mean, math.sqrt(square_sum / (n - 1)), n


def test_aggregate_matches_brute_force_oracle_on_24_response_fixture():
    rng = random.Random(2024)
    responses = []
    raw_values = {m: [] for m in PER_RISK + PER_PLAN}
    for i in range(24):
        response = RubricResponse(report_id=f"rep{i % 4}", rater_id=f"e{i}")
        for risk_index in range(3):
            for measure in PER_RISK:
                value = rng.randint(1, 6)
                response.per_risk[(f"a{risk_index}", measure)] = value
                raw_values[measure].append(value)
        for measure in PER_PLAN:
            value = rng.randint(1, 6)
            response.per_plan[measure] = value
            raw_values[measure].append(value)
        responses.append(response)
    for measure in PER_RISK + PER_PLAN:
        result = aggregate(responses, measure)
        mean, sd, n = _oracle_mean_sd(raw_values[measure])
        assert abs(result.mean - mean) < 1e-9
        assert abs(result.sd - sd) < 1e-9
        assert result.n == n == (72 if measure in PER_RISK else 24)


def test_response_from_dict_round_trip():
    raw = {"report_id": "r1", "rater_id": "e1",
           "per_risk": {"a1": {"relevancy": 5, "severity": 4}},
           "per_plan": {"practicality": 6}}
    response = response_from_dict(raw)
    assert response.per_risk[("a1", "relevancy")] == 5
    assert response.per_plan["practicality"] == 6


# -- SUS ---------------------------------------------------------------------------

def test_sus_maximal_case():
    assert sus_score([5, 1, 5, 1, 5, 1, 5, 1, 5, 1]) == 100.0


def test_sus_midpoint():
    assert sus_score([3] * 10) == 50.0


def test_sus_hand_computed_example():
    # odd items 4 -> 5*(4-1)=15; even items 2 -> 5*(5-2)=15; total 30 * 2.5 = 75
    assert sus_score([4, 2, 4, 2, 4, 2, 4, 2, 4, 2]) == 75.0


def test_sus_bounds():
    with pytest.raises(ValidationError):
        sus_score([3] * 9)
    with pytest.raises(ValidationError):
        sus_score([3] * 11)
    with pytest.raises(ValidationError):
        sus_score([0] + [3] * 9)
    with pytest.raises(ValidationError):
        sus_score([6] + [3] * 9)


@given(st.lists(st.integers(min_value=1, max_value=5), min_size=10, max_size=10),
       st.integers(min_value=0, max_value=9))
def test_sus_monotonicity(items, index):
    base = sus_score(items)
    if items[index] < 5:
        bumped = list(items)
        bumped[index] += 1
        if index % 2 == 0:  # odd-numbered item (1-based): non-decreasing
            assert sus_score(bumped) >= base
        else:               # even-numbered item: non-increasing
            assert sus_score(bumped) <= base


def test_sus_range():
    rng = random.Random(5)
    for _ in range(200):
        items = [rng.randint(1, 5) for _ in range(10)]
        assert 0.0 <= sus_score(items) <= 100.0


# -- benefit / intrusiveness items ------------------------------------------------------

def test_product_perception_validation():
    ProductPerception(phase="pre", benefit=4, intrusiveness=2)
    with pytest.raises(ValidationError):
        ProductPerception(phase="mid", benefit=4, intrusiveness=2)
    with pytest.raises(ValidationError):
        ProductPerception(phase="post", benefit=6, intrusiveness=2)
