"""HTTP facade over the whole workflow.

Every mutating route takes the session version the client mutated from and
echoes the new version back. Domain errors map onto HTTP statuses via their
codes: validation 422, not-found 404, stale version 409, LLM failures 502,
suggestion timeout 504. The shared-report route is the only public one and
resolves by token alone.
"""

from __future__ import annotations

import asyncio
from pathlib import Path
from typing import Any, Literal

from fastapi import FastAPI, Query
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, ConfigDict
from starlette.concurrency import run_in_threadpool

from .config import AppConfig
from .errors import NotFoundError, PrivyError, ValidationError, VersionConflictError
from .gateway import LlmGateway
from .report import render_html, render_markdown, render_report, report_to_dict
from .session import (
    CapabilityRequirement,
    CapabilitySummary,
    MitigationStrategy,
    Origin,
    ProductConcept,
    Rating,
    ReqDimension,
    Requirement,
    Stakes,
    UseCase,
    UseCaseKind,
    create_session,
    delete_assessment,
    delete_strategy,
    delete_use_case,
    rank_risks,
    RiskAssessment,
    session_to_dict,
    set_capability_summary,
    set_confidence,
    snapshot,
    update_concept,
    upsert_assessment,
    upsert_strategy,
    upsert_use_case,
)
from .store import FileStore
from .suggestions import SuggestionEngine, UseCaseSuggestion
from .taxonomy import load_taxonomy

_STATUS_BY_CODE = {
    "not_found": 404,
    "unknown_risk_type": 422,
    "version_conflict": 409,
    "backend_error": 502,
    "auth_error": 502,
    "missing_fixture": 502,
    "config_error": 502,
    "llm_output_invalid": 502,
    "corrupt_file": 500,
}


def _status_for(error: PrivyError) -> int:
    if isinstance(error, NotFoundError):
        return 404
    if isinstance(error, VersionConflictError):
        return 409
    return _STATUS_BY_CODE.get(error.code, 422)


# -- request bodies ----------------------------------------------------------

class _Body(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConceptIn(_Body):
    name: str = ""
    purpose: str
    data_description: str = ""
    example_use_case: str = ""

    def to_domain(self) -> ProductConcept:
        return ProductConcept(
            name=self.name, purpose=self.purpose,
            data_description=self.data_description,
            example_use_case=self.example_use_case,
        )


class CreateSessionIn(_Body):
    concept: ConceptIn


class ConceptUpdateIn(_Body):
    version: int
    concept: ConceptIn


class UseCaseIn(_Body):
    kind: Literal["intended", "unintended"]
    stakes: Literal["high", "low", "unspecified"] = "unspecified"
    description: str
    party: str
    origin: Literal["user", "ai-suggested"] = "user"


class UseCaseUpdateIn(_Body):
    version: int
    use_case: UseCaseIn


class AssessmentIn(_Body):
    risk_type: str
    manifestation: str = ""
    impacted_stakeholders: str = ""
    relevancy: Literal["High", "Medium", "Low"] | None = None
    severity: Literal["High", "Medium", "Low"] | None = None
    origin: Literal["user", "ai-suggested"] = "user"


class AssessmentUpdateIn(_Body):
    version: int
    assessment: AssessmentIn


class StrategyIn(_Body):
    text: str
    addresses: list[str]


class StrategyUpdateIn(_Body):
    version: int
    strategy: StrategyIn


class RequirementIn(_Body):
    dimension: Literal["collection", "processing", "dissemination", "infrastructure"]
    text: str


class CapabilityPairIn(_Body):
    id: str
    capability: str
    requirements: list[RequirementIn]
    derived_from_use_cases: list[str] = []
    origin: Literal["user", "ai-suggested"] = "user"


class SummaryIn(_Body):
    text: str = ""
    pairs: list[CapabilityPairIn] = []


class SummaryUpdateIn(_Body):
    version: int
    summary: SummaryIn


class RankingIn(_Body):
    version: int
    ordered_ids: list[str]


class ConfidenceIn(_Body):
    version: int
    value: int


class PriorUseCaseIn(_Body):
    kind: Literal["intended", "unintended"]
    stakes: Literal["high", "low"]
    description: str
    party: str


class SuggestUseCasesIn(_Body):
    prior: list[PriorUseCaseIn] = []


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    bundle = load_taxonomy()
    store = FileStore(config.data_dir, bundle)
    app = FastAPI(title="Privy PIA workbench", version="0.1.0",
                  openapi_url="/api/openapi.json", docs_url="/api/docs",
                  redoc_url=None)

    if config.cors_origin:
        app.add_middleware(
            CORSMiddleware, allow_origins=[config.cors_origin],
            allow_methods=["*"], allow_headers=["*"],
        )

    engine_cache: dict[str, SuggestionEngine] = {}

    def engine() -> SuggestionEngine:
        if "engine" not in engine_cache:
            engine_cache["engine"] = SuggestionEngine(LlmGateway(config.llm), bundle)
        return engine_cache["engine"]

    @app.exception_handler(PrivyError)
    async def privy_error_handler(request, exc: PrivyError):
        return JSONResponse(status_code=_status_for(exc), content={"error": exc.to_dict()})

    @app.exception_handler(RequestValidationError)
    async def body_error_handler(request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "error": {"code": "validation_error", "message": "invalid request body",
                      "details": exc.errors()},
        })

    def mutate(session_id: str, base_version: int, fn):
        def apply(session):
            if session.version != base_version:
                raise VersionConflictError(
                    f"session {session_id!r} is at version {session.version}, "
                    f"but the mutation was based on version {base_version}",
                    details={"stored": session.version, "sent": base_version},
                )
            return fn(session)

        return session_to_dict(store.mutate_session(session_id, apply))

    async def suggest(fn) -> Any:
        try:
            return await asyncio.wait_for(run_in_threadpool(fn),
                                          timeout=config.suggest_timeout_s)
        except asyncio.TimeoutError:
            return JSONResponse(status_code=504, content={
                "error": {"code": "llm_timeout",
                          "message": "suggestion generation timed out; please retry"},
            })

    # -- sessions ------------------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    def create_session_route(body: CreateSessionIn):
        session = create_session(body.concept.to_domain())
        store.save_session(session)
        return session_to_dict(session)

    @app.get("/api/sessions/{session_id}")
    def get_session_route(session_id: str):
        return session_to_dict(store.load_session(session_id))

    @app.put("/api/sessions/{session_id}/concept")
    def update_concept_route(session_id: str, body: ConceptUpdateIn):
        return mutate(session_id, body.version,
                      lambda s: update_concept(s, body.concept.to_domain()))

    @app.put("/api/sessions/{session_id}/use-cases/{use_case_id}")
    def upsert_use_case_route(session_id: str, use_case_id: str, body: UseCaseUpdateIn):
        uc = UseCase(
            id=use_case_id, kind=UseCaseKind(body.use_case.kind),
            stakes=Stakes(body.use_case.stakes),
            description=body.use_case.description, party=body.use_case.party,
            origin=Origin(body.use_case.origin),
        )
        return mutate(session_id, body.version, lambda s: upsert_use_case(s, uc))

    @app.delete("/api/sessions/{session_id}/use-cases/{use_case_id}")
    def delete_use_case_route(session_id: str, use_case_id: str, version: int = Query()):
        return mutate(session_id, version, lambda s: delete_use_case(s, use_case_id))

    @app.put("/api/sessions/{session_id}/assessments/{assessment_id}")
    def upsert_assessment_route(session_id: str, assessment_id: str,
                                body: AssessmentUpdateIn):
        a = body.assessment
        assessment = RiskAssessment(
            id=assessment_id, risk_type=a.risk_type,
            manifestation=a.manifestation,
            impacted_stakeholders=a.impacted_stakeholders,
            relevancy=Rating(a.relevancy) if a.relevancy else None,
            severity=Rating(a.severity) if a.severity else None,
            origin=Origin(a.origin),
        )
        return mutate(session_id, body.version,
                      lambda s: upsert_assessment(s, assessment, bundle))

    @app.delete("/api/sessions/{session_id}/assessments/{assessment_id}")
    def delete_assessment_route(session_id: str, assessment_id: str,
                                version: int = Query()):
        return mutate(session_id, version, lambda s: delete_assessment(s, assessment_id))

    @app.put("/api/sessions/{session_id}/strategies/{strategy_id}")
    def upsert_strategy_route(session_id: str, strategy_id: str, body: StrategyUpdateIn):
        strategy = MitigationStrategy(id=strategy_id, text=body.strategy.text,
                                      addresses=set(body.strategy.addresses))
        return mutate(session_id, body.version, lambda s: upsert_strategy(s, strategy))

    @app.delete("/api/sessions/{session_id}/strategies/{strategy_id}")
    def delete_strategy_route(session_id: str, strategy_id: str, version: int = Query()):
        return mutate(session_id, version, lambda s: delete_strategy(s, strategy_id))

    @app.put("/api/sessions/{session_id}/capability-summary")
    def set_summary_route(session_id: str, body: SummaryUpdateIn):
        summary = CapabilitySummary(
            text=body.summary.text,
            pairs=[
                CapabilityRequirement(
                    id=p.id, capability=p.capability,
                    requirements=[Requirement(dimension=ReqDimension(r.dimension),
                                              text=r.text) for r in p.requirements],
                    derived_from_use_cases=list(p.derived_from_use_cases),
                    origin=Origin(p.origin),
                )
                for p in body.summary.pairs
            ],
        )
        return mutate(session_id, body.version,
                      lambda s: set_capability_summary(s, summary))

    @app.put("/api/sessions/{session_id}/ranking")
    def rank_route(session_id: str, body: RankingIn):
        return mutate(session_id, body.version, lambda s: rank_risks(s, body.ordered_ids))

    @app.put("/api/sessions/{session_id}/confidence/{assessment_id}")
    def confidence_route(session_id: str, assessment_id: str, body: ConfidenceIn):
        return mutate(session_id, body.version,
                      lambda s: set_confidence(s, assessment_id, body.value))

    # -- suggestion pipelines --------------------------------------------------

    @app.post("/api/sessions/{session_id}/suggest/use-cases")
    async def suggest_use_cases_route(session_id: str,
                                      body: SuggestUseCasesIn | None = None):
        snap = snapshot(store.load_session(session_id))
        prior = [
            UseCaseSuggestion(kind=UseCaseKind(p.kind), stakes=Stakes(p.stakes),
                              description=p.description, party=p.party)
            for p in (body.prior if body else [])
        ]
        items = await suggest(lambda: engine().suggest_use_cases(snap, prior))
        if isinstance(items, JSONResponse):
            return items
        return {
            "snapshot_version": snap.version,
            "suggestions": [
                {"kind": s.kind.value, "stakes": s.stakes.value,
                 "description": s.description, "party": s.party}
                for s in items
            ],
        }

    @app.post("/api/sessions/{session_id}/suggest/capabilities")
    async def suggest_capabilities_route(session_id: str):
        snap = snapshot(store.load_session(session_id))
        summary = await suggest(lambda: engine().summarize_capabilities(snap))
        if isinstance(summary, JSONResponse):
            return summary
        return {
            "snapshot_version": snap.version,
            "summary": {
                "text": summary.text,
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
                    for p in summary.pairs
                ],
            },
        }

    @app.post("/api/sessions/{session_id}/suggest/risks")
    async def suggest_risks_route(session_id: str):
        snap = snapshot(store.load_session(session_id))
        items = await suggest(lambda: engine().suggest_risks(snap))
        if isinstance(items, JSONResponse):
            return items
        return {
            "snapshot_version": snap.version,
            "suggestions": [
                {"risk_type": s.risk_type, "manifestation": s.manifestation,
                 "impacted_stakeholders": s.impacted_stakeholders}
                for s in items
            ],
        }

    @app.post("/api/sessions/{session_id}/suggest/provocations/{assessment_id}")
    async def suggest_provocations_route(session_id: str, assessment_id: str):
        snap = snapshot(store.load_session(session_id))
        items = await suggest(lambda: engine().suggest_provocations(snap, assessment_id))
        if isinstance(items, JSONResponse):
            return items
        return {
            "snapshot_version": snap.version,
            "provocations": [
                {"barrier": p.barrier.value, "question": p.question,
                 "seed_feature": p.seed_feature}
                for p in items
            ],
        }

    # -- reports, sharing, exports ---------------------------------------------

    @app.post("/api/sessions/{session_id}/report", status_code=201)
    def create_report_route(session_id: str):
        snap = snapshot(store.load_session(session_id))
        report = render_report(snap, bundle)
        store.save_report(report)
        return {"report_id": report.report_id, "report": report_to_dict(report),
                "markdown": render_markdown(report), "html": render_html(report)}

    @app.post("/api/reports/{report_id}/share", status_code=201)
    def share_report_route(report_id: str):
        report = store.load_report(report_id)
        link = store.publish_report(report)
        return {"token": link.token}

    @app.get("/api/shared/{token}")
    def shared_report_route(token: str):
        import dataclasses

        # public route: never leak the session behind the report
        report = dataclasses.replace(store.fetch_shared(token), session_id="")
        return {"report": report_to_dict(report), "markdown": render_markdown(report)}

    @app.get("/api/taxonomy")
    def taxonomy_route():
        return bundle.to_dict()

    @app.get("/api/export/worksheet")
    def worksheet_route(session: str | None = Query(default=None)):
        from .report import export_worksheet

        concept = store.load_session(session).concept if session else None
        return PlainTextResponse(export_worksheet(bundle, concept),
                                 media_type="text/markdown; charset=utf-8")

    if config.ui_dir and Path(config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


ROUTE_TABLE: set[tuple[str, str]] = {
    ("POST", "/api/sessions"),
    ("GET", "/api/sessions/{session_id}"),
    ("PUT", "/api/sessions/{session_id}/concept"),
    ("PUT", "/api/sessions/{session_id}/use-cases/{use_case_id}"),
    ("DELETE", "/api/sessions/{session_id}/use-cases/{use_case_id}"),
    ("PUT", "/api/sessions/{session_id}/assessments/{assessment_id}"),
    ("DELETE", "/api/sessions/{session_id}/assessments/{assessment_id}"),
    ("PUT", "/api/sessions/{session_id}/strategies/{strategy_id}"),
    ("DELETE", "/api/sessions/{session_id}/strategies/{strategy_id}"),
    ("PUT", "/api/sessions/{session_id}/capability-summary"),
    ("PUT", "/api/sessions/{session_id}/ranking"),
    ("PUT", "/api/sessions/{session_id}/confidence/{assessment_id}"),
    ("POST", "/api/sessions/{session_id}/suggest/use-cases"),
    ("POST", "/api/sessions/{session_id}/suggest/capabilities"),
    ("POST", "/api/sessions/{session_id}/suggest/risks"),
    ("POST", "/api/sessions/{session_id}/suggest/provocations/{assessment_id}"),
    ("POST", "/api/sessions/{session_id}/report"),
    ("POST", "/api/reports/{report_id}/share"),
    ("GET", "/api/shared/{token}"),
    ("GET", "/api/taxonomy"),
    ("GET", "/api/export/worksheet"),
}
