"""AI privacy risk taxonomy: the 12 risk types, their categories, definitions,
and curated links to real-world incidents.

The taxonomy ships as a versioned JSON data file (strict schema: unknown keys
are rejected so typos in curated data cannot slip through) and is immutable
after load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from urllib.parse import urlparse

from .errors import NotFoundError, ValidationError

RISK_COUNT = 12
CATEGORIES = ("data-collection", "data-processing", "data-dissemination", "invasion")

_RISK_KEYS = {"id", "display_name", "category", "definition", "incident_links"}
_LINK_KEYS = {"title", "url"}
_BUNDLE_KEYS = {"version", "source_citation", "risks"}


@dataclass(frozen=True)
class IncidentLink:
    title: str
    url: str


@dataclass(frozen=True)
class TaxonomyRiskType:
    """One risk type: stable slug id, category, definition, incident links."""

    id: str
    display_name: str
    category: str
    definition: str
    incident_links: tuple[IncidentLink, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class TaxonomyBundle:
    version: str
    source_citation: str
    risks: tuple[TaxonomyRiskType, ...]

    def ids(self) -> set[str]:
        return {r.id for r in self.risks}

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "source_citation": self.source_citation,
            "risks": [
                {
                    "id": r.id,
                    "display_name": r.display_name,
                    "category": r.category,
                    "definition": r.definition,
                    "incident_links": [
                        {"title": l.title, "url": l.url} for l in r.incident_links
                    ],
                }
                for r in self.risks
            ],
        }


def _valid_absolute_url(url: str) -> bool:
    parsed = urlparse(url)
    return parsed.scheme in ("http", "https") and bool(parsed.netloc)


def _parse_risk(raw: dict, index: int) -> TaxonomyRiskType:
    if not isinstance(raw, dict):
        raise ValidationError(f"risk #{index} is not an object", code="parse_error")
    unknown = set(raw) - _RISK_KEYS
    if unknown:
        raise ValidationError(
            f"risk #{index} has unknown fields: {sorted(unknown)}",
            code="unknown_field",
            details={"fields": sorted(unknown)},
        )
    missing = _RISK_KEYS - set(raw)
    if missing:
        raise ValidationError(
            f"risk #{index} is missing fields: {sorted(missing)}", code="parse_error"
        )
    risk_id = raw["id"]
    if not isinstance(risk_id, str) or not risk_id:
        raise ValidationError(f"risk #{index} id must be a non-empty string", code="parse_error")
    if risk_id != risk_id.lower() or " " in risk_id:
        raise ValidationError(
            f"risk id {risk_id!r} must be a lowercase hyphenated slug", code="parse_error"
        )
    if not raw["definition"] or not isinstance(raw["definition"], str):
        raise ValidationError(
            f"risk {risk_id!r} has an empty definition", code="empty_definition"
        )
    if raw["category"] not in CATEGORIES:
        raise ValidationError(
            f"risk {risk_id!r} has unknown category {raw['category']!r}",
            code="unknown_category",
        )
    links = []
    for link in raw["incident_links"]:
        unknown = set(link) - _LINK_KEYS
        if unknown:
            raise ValidationError(
                f"incident link in {risk_id!r} has unknown fields: {sorted(unknown)}",
                code="unknown_field",
            )
        if not _valid_absolute_url(link.get("url", "")):
            raise ValidationError(
                f"risk {risk_id!r} has an invalid incident URL: {link.get('url')!r}",
                code="invalid_url",
            )
        links.append(IncidentLink(title=link["title"], url=link["url"]))
    return TaxonomyRiskType(
        id=risk_id,
        display_name=raw["display_name"],
        category=raw["category"],
        definition=raw["definition"],
        incident_links=tuple(links),
    )


def parse_bundle(raw: dict) -> TaxonomyBundle:
    """Validate a decoded taxonomy document and build the bundle."""
    if not isinstance(raw, dict):
        raise ValidationError("taxonomy document must be a JSON object", code="parse_error")
    unknown = set(raw) - _BUNDLE_KEYS
    if unknown:
        raise ValidationError(
            f"taxonomy document has unknown fields: {sorted(unknown)}", code="unknown_field"
        )
    version = raw.get("version")
    if not version or not isinstance(version, str):
        raise ValidationError("taxonomy version must be a non-empty string", code="parse_error")
    risks_raw = raw.get("risks")
    if not isinstance(risks_raw, list):
        raise ValidationError("taxonomy risks must be a list", code="parse_error")
    if len(risks_raw) != RISK_COUNT:
        raise ValidationError(
            f"taxonomy must contain exactly {RISK_COUNT} risks, found {len(risks_raw)}",
            code="wrong_risk_count",
            details={"expected": RISK_COUNT, "found": len(risks_raw)},
        )
    risks = [_parse_risk(r, i) for i, r in enumerate(risks_raw)]
    seen: set[str] = set()
    for risk in risks:
        if risk.id in seen:
            raise ValidationError(
                f"duplicate risk id {risk.id!r}", code="duplicate_risk_id"
            )
        seen.add(risk.id)
    return TaxonomyBundle(
        version=version,
        source_citation=raw.get("source_citation", ""),
        risks=tuple(risks),
    )


def load_taxonomy(path: str | Path | None = None) -> TaxonomyBundle:
    """Load and validate a taxonomy file; ``None`` loads the bundled default."""
    if path is None:
        text = resources.files("privy.data").joinpath("taxonomy.json").read_text("utf-8")
    else:
        path = Path(path)
        if not path.exists():
            raise NotFoundError(f"taxonomy file not found: {path}")
        text = path.read_text("utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"taxonomy file is not valid JSON: {exc}", code="parse_error")
    return parse_bundle(raw)


def get_risk(bundle: TaxonomyBundle, risk_id: str) -> TaxonomyRiskType:
    """Look up a risk type by slug id."""
    for risk in bundle.risks:
        if risk.id == risk_id:
            return risk
    raise NotFoundError(f"unknown risk type: {risk_id!r}", code="unknown_risk_type")
