"""HTTP/JSON surface over in-memory cohorts.

One process holds many cohorts; every mutation of a cohort goes through its
own lock, so interleaved advance/response calls serialize per cohort and the
first response to an alert wins.  Error bodies always carry a machine
`kind` plus a human `message`.
"""

from __future__ import annotations

import copy
import tempfile
import threading
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .bundle import build_archive, export
from .config import ConfigError, Mode, SimulationConfig, config_from_dict
from .domain import (
    Admission,
    Alert,
    AlertResponse,
    AlertStatus,
    ConflictError,
    Consultation,
    Measurement,
    MedicationChange,
    NotFoundError,
    ResponseAction,
    VITAL_UNITS,
    patient_timeline,
)
from .sim import DayReport, Simulation, inject_messiness
from .stats import cohort_stats, patient_summary


class ApiError(Exception):
    def __init__(self, status: int, kind: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.kind = kind
        self.message = message


@dataclass
class StoreEntry:
    sim: Simulation
    lock: threading.Lock = field(default_factory=threading.Lock)


class CohortStore:
    """Id-keyed registry of live simulations."""

    def __init__(self) -> None:
        self._entries: dict[str, StoreEntry] = {}
        self._seq = 0
        self._lock = threading.Lock()

    def add(self, sim: Simulation) -> str:
        with self._lock:
            self._seq += 1
            cohort_id = f"c-{self._seq:03d}"
            self._entries[cohort_id] = StoreEntry(sim=sim)
            return cohort_id

    def get(self, cohort_id: str) -> StoreEntry:
        entry = self._entries.get(cohort_id)
        if entry is None:
            raise NotFoundError(f"unknown cohort id {cohort_id!r}")
        return entry

    def ids(self) -> list[str]:
        return sorted(self._entries)


def _iso(ts) -> str:
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def _serialize_entity(obj: Any) -> dict:
    if isinstance(obj, Measurement):
        return {
            "id": obj.id, "patient_id": obj.patient_id,
            "timestamp": _iso(obj.timestamp), "vital": obj.vital.value,
            "value": obj.value, "unit": VITAL_UNITS[obj.vital],
            "comment": obj.comment,
        }
    if isinstance(obj, Alert):
        return {
            "id": obj.id, "patient_id": obj.patient_id,
            "measurement_id": obj.measurement_id,
            "rules": sorted(r.value for r in obj.rules),
            "severity": obj.severity.value, "created_at": _iso(obj.created_at),
            "status": obj.status.value, "assigned_hcp_id": obj.assigned_hcp_id,
        }
    if isinstance(obj, AlertResponse):
        return {
            "id": obj.id, "alert_id": obj.alert_id, "hcp_id": obj.hcp_id,
            "action": obj.action.value, "note": obj.note,
            "timestamp": _iso(obj.timestamp),
        }
    if isinstance(obj, MedicationChange):
        return {
            "id": obj.id, "patient_id": obj.patient_id, "drug": obj.drug,
            "change": obj.change.value, "timestamp": _iso(obj.timestamp),
            "effect": {
                "vital": obj.effect.vital.value,
                "direction": obj.effect.direction.value,
                "magnitude": obj.effect.magnitude,
                "onset_days": obj.effect.onset_days,
            },
        }
    if isinstance(obj, Admission):
        return {
            "id": obj.id, "patient_id": obj.patient_id,
            "start": obj.start.isoformat(), "end": obj.end.isoformat(),
            "reason": obj.reason,
        }
    if isinstance(obj, Consultation):
        return {
            "id": obj.id, "patient_id": obj.patient_id, "hcp_id": obj.hcp_id,
            "timestamp": _iso(obj.timestamp), "channel": obj.channel.value,
            "text": obj.text,
        }
    raise TypeError(f"no serializer for {type(obj).__name__}")


def _handle(cohort_id: str, sim: Simulation) -> dict:
    cohort = sim.cohort
    return {
        "cohort_id": cohort_id,
        "mode": sim.config.mode.value,
        "seed": sim.config.seed,
        "n_patients": sim.config.n_patients,
        "n_hcps": sim.config.n_hcps,
        "duration_days": sim.config.duration_days,
        "clock": cohort.clock.isoformat() if cohort.clock else None,
        "open_alert_count": sim.open_alert_count(),
        "complete": sim.complete,
    }


def _day_report(report: DayReport) -> dict:
    return {
        "days_advanced": report.days_advanced,
        "new_measurements": report.new_measurements,
        "new_alerts": report.new_alerts,
        "clock": report.clock.isoformat() if report.clock else None,
        "open_alerts": report.open_alerts,
        "complete": report.complete,
    }


def _alert_payload(sim: Simulation, alert: Alert) -> dict:
    """Alert plus everything the inbox needs without recomputing anything."""
    cohort = sim.cohort
    data = _serialize_entity(alert)
    patient = cohort.patient_by_id(alert.patient_id)
    measurement = cohort.measurement_by_id(alert.measurement_id)
    low, high = patient.thresholds[measurement.vital]
    recent = sorted(
        (m for m in cohort.truth_measurements()
         if m.patient_id == alert.patient_id
         and m.vital is measurement.vital
         and m.timestamp <= measurement.timestamp),
        key=lambda m: (m.timestamp, m.id),
    )[-8:]
    hcps = sorted(cohort.hcps, key=lambda h: h.id)
    data["patient_name"] = patient.display_name
    data["vital"] = measurement.vital.value
    data["value"] = measurement.value
    data["unit"] = VITAL_UNITS[measurement.vital]
    data["context"] = {
        "thresholds": {"low": low, "high": high},
        "recent": [{"timestamp": _iso(m.timestamp), "value": m.value}
                   for m in recent],
        "hcps": [{"id": h.id, "display_name": h.display_name} for h in hcps],
    }
    return data


class CreateCohortBody(BaseModel):
    config: dict = {}


class AdvanceBody(BaseModel):
    days: int = 1


class SubmitResponseBody(BaseModel):
    hcp_id: str
    action: str
    note: Optional[str] = None


def create_app(store: Optional[CohortStore] = None) -> FastAPI:
    app = FastAPI(title="rpmsim", docs_url=None, redoc_url=None)
    app.state.store = store if store is not None else CohortStore()
    # the browser UI is served separately, so cross-origin calls must work
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"],
        allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status,
                            content={"kind": exc.kind, "message": exc.message})

    @app.exception_handler(NotFoundError)
    async def _not_found(_request: Request, exc: NotFoundError) -> JSONResponse:
        # KeyError reprs its message; unwrap for a clean body
        message = exc.args[0] if exc.args else "not found"
        return JSONResponse(status_code=404,
                            content={"kind": "not_found", "message": message})

    @app.exception_handler(ConflictError)
    async def _conflict(_request: Request, exc: ConflictError) -> JSONResponse:
        return JSONResponse(status_code=409,
                            content={"kind": "conflict", "message": str(exc)})

    @app.exception_handler(ConfigError)
    async def _config_error(_request: Request, exc: ConfigError) -> JSONResponse:
        return JSONResponse(status_code=422,
                            content={"kind": "validation", "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _request_error(_request: Request,
                             exc: RequestValidationError) -> JSONResponse:
        parts = []
        for err in exc.errors():
            loc = ".".join(str(piece) for piece in err.get("loc", ())
                           if piece != "body")
            parts.append(f"{loc}: {err.get('msg')}" if loc else str(err.get("msg")))
        return JSONResponse(status_code=422,
                            content={"kind": "validation",
                                     "message": "; ".join(parts)})

    def _store() -> CohortStore:
        return app.state.store

    @app.post("/cohorts", status_code=201)
    def create_cohort(body: CreateCohortBody) -> dict:
        config = config_from_dict(body.config, base=SimulationConfig())
        sim = Simulation(config)  # validates, raises ConfigError
        sim.run()
        cohort_id = _store().add(sim)
        return _handle(cohort_id, sim)

    @app.get("/cohorts")
    def list_cohorts() -> list[dict]:
        store = _store()
        return [_handle(cid, store.get(cid).sim) for cid in store.ids()]

    @app.get("/cohorts/{cohort_id}")
    def get_cohort(cohort_id: str) -> dict:
        return _handle(cohort_id, _store().get(cohort_id).sim)

    @app.post("/cohorts/{cohort_id}/advance")
    def advance(cohort_id: str, body: AdvanceBody) -> dict:
        if body.days < 1:
            raise ApiError(422, "validation", "days: must be >= 1")
        entry = _store().get(cohort_id)
        with entry.lock:
            if entry.sim.config.mode is not Mode.INTERACTIVE:
                raise ApiError(409, "invalid_mode",
                               "cohort runs in batch mode; advance applies "
                               "to interactive cohorts only")
            report = entry.sim.run(max_days=body.days)
        return _day_report(report)

    @app.get("/cohorts/{cohort_id}/alerts")
    def list_alerts(cohort_id: str, status: str = "all") -> list[dict]:
        if status not in ("all", "open", "resolved"):
            raise ApiError(422, "validation",
                           "status: expected one of all, open, resolved")
        sim = _store().get(cohort_id).sim
        alerts = sorted(sim.cohort.alerts, key=lambda a: (a.created_at, a.id))
        if status != "all":
            alerts = [a for a in alerts if a.status.value == status]
        return [_alert_payload(sim, a) for a in alerts]

    @app.post("/cohorts/{cohort_id}/alerts/{alert_id}/response", status_code=201)
    def submit_response(cohort_id: str, alert_id: str,
                        body: SubmitResponseBody) -> dict:
        try:
            action = ResponseAction(body.action)
        except ValueError:
            raise ApiError(422, "validation",
                           f"action: unknown action {body.action!r}") from None
        entry = _store().get(cohort_id)
        with entry.lock:
            entry.sim.submit_response(alert_id, body.hcp_id, action,
                                      note=body.note)
            recorded = entry.sim.cohort.responses[-1]
            alert = entry.sim.cohort.alert_by_id(alert_id)
        return {
            "response": _serialize_entity(recorded),
            "alert": _serialize_entity(alert),
            "open_alert_count": entry.sim.open_alert_count(),
        }

    @app.get("/cohorts/{cohort_id}/patients")
    def list_patients(cohort_id: str) -> list[dict]:
        sim = _store().get(cohort_id).sim
        out = []
        for p in sorted(sim.cohort.patients, key=lambda p: p.id):
            row = patient_summary(sim.cohort, p.id)
            row["age"] = p.age
            row["comorbidities"] = list(p.comorbidities)
            out.append(row)
        return out

    @app.get("/cohorts/{cohort_id}/patients/{patient_id}/timeline")
    def get_timeline(cohort_id: str, patient_id: str) -> dict:
        sim = _store().get(cohort_id).sim
        events = patient_timeline(sim.cohort, patient_id)
        payload = []
        for e in events:
            row = {
                "kind": e.kind,
                "timestamp": _iso(e.timestamp),
                "entity_id": e.entity_id,
                "payload": _serialize_entity(e.payload),
            }
            if e.kind == "alert":
                row["measurement_id"] = e.measurement_id
                row["response_ids"] = list(e.response_ids)
            payload.append(row)
        patient = sim.cohort.patient_by_id(patient_id)
        return {
            "patient_id": patient_id,
            "display_name": patient.display_name,
            "thresholds": {
                v.value: {"low": patient.thresholds[v][0],
                          "high": patient.thresholds[v][1]}
                for v in patient.thresholds
            },
            "events": payload,
        }

    @app.get("/cohorts/{cohort_id}/patients/{patient_id}/summary")
    def get_summary(cohort_id: str, patient_id: str) -> dict:
        sim = _store().get(cohort_id).sim
        return patient_summary(sim.cohort, patient_id)

    @app.get("/cohorts/{cohort_id}/stats")
    def get_stats(cohort_id: str) -> dict:
        sim = _store().get(cohort_id).sim
        return cohort_stats(sim.cohort).to_dict()

    @app.get("/cohorts/{cohort_id}/export")
    def export_bundle(cohort_id: str) -> Response:
        entry = _store().get(cohort_id)
        with entry.lock:
            snapshot = copy.deepcopy(entry.sim.cohort)
        inject_messiness(snapshot)  # no-op when the ledger is already present
        with tempfile.TemporaryDirectory() as tmp:
            export(snapshot, tmp)
            payload = build_archive(tmp)
        return Response(
            content=payload,
            media_type="application/zip",
            headers={"Content-Disposition":
                     f'attachment; filename="cohort-{cohort_id}.zip"'},
        )

    return app


app = create_app()
