"""File-backed persistence for sessions and reports, plus share links.

One JSON document per entity under the data directory::

    sessions/{id}.json
    reports/{id}.json
    shares/{token}.json   (token -> report id)

Writes go through an atomic replace so readers never see torn files, and
session writes are serialized per id with an optimistic version check: a
write must carry a version strictly greater than the stored one.
"""

from __future__ import annotations

import json
import os
import re
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import NotFoundError, PrivyError, ValidationError, VersionConflictError
from .report import Report, report_from_dict, report_to_dict
from .session import Session, session_from_dict, session_to_dict
from .taxonomy import TaxonomyBundle

_SAFE_ID = re.compile(r"^[A-Za-z0-9_-]+$")

# 24 random bytes -> 32 url-safe chars, comfortably above 128 bits of entropy.
_TOKEN_BYTES = 24


def new_share_token() -> str:
    return secrets.token_urlsafe(_TOKEN_BYTES)


@dataclass(frozen=True)
class ShareLink:
    token: str
    report_id: str
    created_at: datetime


class FileStore:
    """Single-directory store; safe for concurrent use within one process."""

    def __init__(self, data_dir: str | Path, bundle: TaxonomyBundle | None = None,
                 share_ttl_s: float | None = None):
        self.root = Path(data_dir)
        self.bundle = bundle
        self.share_ttl_s = share_ttl_s
        for sub in ("sessions", "reports", "shares"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- internals -----------------------------------------------------------

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    @staticmethod
    def _check_id(entity_id: str, label: str) -> None:
        if not entity_id or not _SAFE_ID.match(entity_id):
            raise ValidationError(f"invalid {label}: {entity_id!r}", code="invalid_id")

    @staticmethod
    def _write_atomic(path: Path, payload: dict) -> None:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=2), "utf-8")
        os.replace(tmp, path)

    @staticmethod
    def _read(path: Path, label: str) -> dict:
        if not path.is_file():
            raise NotFoundError(f"{label} not found: {path.stem!r}")
        try:
            return json.loads(path.read_text("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise PrivyError(f"corrupt {label} file {path.name}: {exc}",
                             code="corrupt_file")

    # -- sessions --------------------------------------------------------------

    def save_session(self, session: Session) -> None:
        """Persist a session; rejects writes that do not advance the version."""
        self._check_id(session.id, "session id")
        path = self.root / "sessions" / f"{session.id}.json"
        with self._lock_for(session.id):
            if path.is_file():
                stored_version = self._read(path, "session").get("version", 0)
                if session.version <= stored_version:
                    raise VersionConflictError(
                        f"stale write for session {session.id!r}: stored version "
                        f"{stored_version}, attempted {session.version}",
                        details={"stored": stored_version, "attempted": session.version},
                    )
            self._write_atomic(path, session_to_dict(session))

    def load_session(self, session_id: str) -> Session:
        self._check_id(session_id, "session id")
        raw = self._read(self.root / "sessions" / f"{session_id}.json", "session")
        return session_from_dict(raw, self.bundle)

    def list_sessions(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "sessions").glob("*.json"))

    def mutate_session(self, session_id: str, mutate) -> Session:
        """Load-mutate-save under the session's write lock."""
        self._check_id(session_id, "session id")
        with self._lock_for(session_id):
            path = self.root / "sessions" / f"{session_id}.json"
            session = session_from_dict(self._read(path, "session"), self.bundle)
            session = mutate(session)
            self._write_atomic(path, session_to_dict(session))
            return session

    # -- reports and share links ----------------------------------------------

    def save_report(self, report: Report) -> None:
        self._check_id(report.report_id, "report id")
        path = self.root / "reports" / f"{report.report_id}.json"
        self._write_atomic(path, report_to_dict(report))

    def load_report(self, report_id: str) -> Report:
        self._check_id(report_id, "report id")
        raw = self._read(self.root / "reports" / f"{report_id}.json", "report")
        return report_from_dict(raw)

    def publish_report(self, report: Report) -> ShareLink:
        """Store the report (if new) and mint a fresh unguessable share link."""
        self.save_report(report)
        token = new_share_token()
        created = datetime.now(timezone.utc).replace(microsecond=0)
        link = ShareLink(token=token, report_id=report.report_id, created_at=created)
        self._write_atomic(self.root / "shares" / f"{token}.json", {
            "token": token,
            "report_id": report.report_id,
            "created_at": created.isoformat().replace("+00:00", "Z"),
        })
        return link

    def fetch_shared(self, token: str) -> Report:
        if not token or not _SAFE_ID.match(token):
            raise NotFoundError("unknown share token")
        path = self.root / "shares" / f"{token}.json"
        if not path.is_file():
            raise NotFoundError("unknown share token")
        raw = self._read(path, "share link")
        if self.share_ttl_s is not None:
            created = datetime.fromisoformat(raw["created_at"].replace("Z", "+00:00"))
            age = (datetime.now(timezone.utc) - created).total_seconds()
            if age > self.share_ttl_s:
                raise NotFoundError("share link expired")
        return self.load_report(raw["report_id"])
