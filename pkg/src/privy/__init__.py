"""Privy: a self-hostable privacy-impact-assessment workbench for AI product
concepts — scaffold use cases and capabilities, explore and rank taxonomy-
grounded privacy risks, brainstorm mitigations, and share PIA reports."""

from .errors import (
    BackendError,
    ConfigError,
    LlmOutputInvalid,
    NotFoundError,
    PrivyError,
    ValidationError,
    VersionConflictError,
)
from .taxonomy import TaxonomyBundle, TaxonomyRiskType, get_risk, load_taxonomy

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "ConfigError",
    "LlmOutputInvalid",
    "NotFoundError",
    "PrivyError",
    "TaxonomyBundle",
    "TaxonomyRiskType",
    "ValidationError",
    "VersionConflictError",
    "get_risk",
    "load_taxonomy",
    "__version__",
]
