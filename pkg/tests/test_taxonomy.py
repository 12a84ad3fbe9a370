"""Taxonomy loading, lookup, and strict-schema validation."""

import json

import pytest

from privy.errors import NotFoundError, ValidationError
from privy.taxonomy import CATEGORIES, get_risk, load_taxonomy, parse_bundle

REQUIRED_IDS = {"surveillance", "intrusion", "insecurity", "disclosure",
                "exposure", "distortion"}


def test_default_bundle_has_12_risks(bundle):
    assert len(bundle.risks) == 12


def test_ids_unique_and_required_present(bundle):
    ids = [r.id for r in bundle.risks]
    assert len(ids) == len(set(ids))
    assert REQUIRED_IDS <= set(ids)


def test_phrenology_physiognomy_present(bundle):
    risk = get_risk(bundle, "phrenology-physiognomy")
    assert risk.category == "data-processing"
    assert risk.definition


def test_definitions_nonempty_and_categories_closed(bundle):
    for risk in bundle.risks:
        assert risk.definition.strip()
        assert risk.category in CATEGORIES


def test_incident_links_absolute_urls(bundle):
    for risk in bundle.risks:
        for link in risk.incident_links:
            assert link.url.startswith("https://") or link.url.startswith("http://")
            assert link.title


def test_get_risk_round_trip(bundle):
    for risk in bundle.risks:
        assert get_risk(bundle, risk.id) is risk


def test_surveillance_lookup(bundle):
    assert get_risk(bundle, "surveillance").definition


def test_disclosure_category(bundle):
    assert get_risk(bundle, "disclosure").category == "data-dissemination"


def test_get_risk_unknown_and_empty(bundle):
    with pytest.raises(NotFoundError):
        get_risk(bundle, "")
    with pytest.raises(NotFoundError):
        get_risk(bundle, "mind-reading")


def _bundle_dict(bundle):
    return bundle.to_dict()


def test_wrong_count_rejected(bundle):
    raw = _bundle_dict(bundle)
    raw["risks"] = raw["risks"][:11]
    with pytest.raises(ValidationError) as exc:
        parse_bundle(raw)
    assert exc.value.code == "wrong_risk_count"


def test_duplicate_ids_rejected(bundle):
    raw = _bundle_dict(bundle)
    raw["risks"][1] = dict(raw["risks"][0])
    with pytest.raises(ValidationError) as exc:
        parse_bundle(raw)
    assert exc.value.code == "duplicate_risk_id"


def test_empty_definition_rejected(bundle):
    raw = _bundle_dict(bundle)
    raw["risks"][0]["definition"] = ""
    with pytest.raises(ValidationError) as exc:
        parse_bundle(raw)
    assert exc.value.code == "empty_definition"


def test_unknown_field_rejected(bundle):
    raw = _bundle_dict(bundle)
    raw["risks"][0]["severity"] = "high"
    with pytest.raises(ValidationError) as exc:
        parse_bundle(raw)
    assert exc.value.code == "unknown_field"

    raw = _bundle_dict(bundle)
    raw["extra_top_level"] = 1
    with pytest.raises(ValidationError):
        parse_bundle(raw)


def test_invalid_url_rejected(bundle):
    raw = _bundle_dict(bundle)
    raw["risks"][0]["incident_links"] = [{"title": "x", "url": "not a url"}]
    with pytest.raises(ValidationError) as exc:
        parse_bundle(raw)
    assert exc.value.code == "invalid_url"


def test_unknown_category_rejected(bundle):
    raw = _bundle_dict(bundle)
    raw["risks"][0]["category"] = "data-hoarding"
    with pytest.raises(ValidationError) as exc:
        parse_bundle(raw)
    assert exc.value.code == "unknown_category"


def test_load_from_path_and_parse_error(tmp_path, bundle):
    path = tmp_path / "taxonomy.json"
    path.write_text(json.dumps(bundle.to_dict()), "utf-8")
    loaded = load_taxonomy(path)
    assert loaded.ids() == bundle.ids()

    path.write_text("{not json", "utf-8")
    with pytest.raises(ValidationError) as exc:
        load_taxonomy(path)
    assert exc.value.code == "parse_error"

    with pytest.raises(NotFoundError):
        load_taxonomy(tmp_path / "missing.json")
