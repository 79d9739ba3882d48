"""HTTP facade: classification, order sessions and model lifecycle.

All responses are JSON. Errors carry {"code", "message"} with a code from a
closed set: bad_request, invalid_frame, unknown_session, model_not_loaded,
bad_model_file, version_mismatch. The served model is an immutable snapshot
swapped atomically on load, and each session serializes its own updates.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .dataset import DatasetError, GestureLabel, parse_label
from .estimators import (
    ModelFormatError,
    ModelVersionError,
    Prediction,
    load_model,
    model_kind_of,
)
from .frames import InvalidFrameError, extract_features, frame_from_dict
from .session import SessionStore, apply_gesture, apply_prediction
from .validation import check_feature_vector


class ApiError(Exception):
    """Maps application failures onto HTTP statuses and stable error codes."""

    def __init__(self, http_status: int, code: str, message: str):
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message


class ModelHolder:
    """Holds the currently served model; swapped as one atomic reference."""

    def __init__(self, model=None, source: str = ""):
        self._state = (model, source)

    def get(self):
        model, _ = self._state
        return model

    def describe(self) -> dict:
        model, source = self._state
        if model is None:
            return {"loaded": False, "kind": None, "trained_on": None, "class_list": None}
        return {
            "loaded": True,
            "kind": model_kind_of(model).value,
            "trained_on": getattr(model, "trained_on_", "") or source,
            "class_list": [label.name for label in GestureLabel],
        }

    def load_from(self, path: str) -> None:
        model = load_model(path)
        self._state = (model, str(path))


def _prediction_to_dict(prediction: Prediction) -> dict:
    return {"label": prediction.label.name, "scores": prediction.score_map()}


def _features_from_body(body: dict):
    """Accept either {"features": [10 reals]} or a raw frame object."""
    if not isinstance(body, dict):
        raise ApiError(400, "bad_request", "body must be a JSON object")
    if "features" in body:
        try:
            return check_feature_vector(body["features"])
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "invalid_frame", f"bad feature vector: {exc}") from exc
    if "left" in body and "right" in body:
        try:
            frame, _ = frame_from_dict(body)
            return extract_features(frame)
        except InvalidFrameError as exc:
            raise ApiError(400, "invalid_frame", str(exc)) from exc
    raise ApiError(400, "invalid_frame", "expected {'features': [...]} or a frame with 'left'/'right'")


def create_app(
    model_path: Optional[str] = None,
    static_dir: Optional[str] = None,
    min_confidence: float = 0.0,
    cors_origins: Optional[list] = None,
) -> FastAPI:
    app = FastAPI(title="gesture-bartender", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins) if cors_origins else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    holder = ModelHolder()
    if model_path:
        holder.load_from(model_path)
    store = SessionStore()
    app.state.models = holder
    app.state.sessions = store
    app.state.min_confidence = min_confidence

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.http_status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"code": "bad_request", "message": str(exc)}
        )

    def _require_model():
        model = holder.get()
        if model is None:
            raise ApiError(409, "model_not_loaded", "no model is loaded; POST /api/model/load first")
        return model

    @app.post("/api/classify")
    def classify(body: dict = Body(...)):
        model = _require_model()
        features = _features_from_body(body)
        return _prediction_to_dict(model.predict_one(features))

    @app.get("/api/model")
    def model_info():
        return holder.describe()

    @app.post("/api/model/load")
    def model_load(body: dict = Body(...)):
        path = body.get("path") if isinstance(body, dict) else None
        if not path or not isinstance(path, str):
            raise ApiError(400, "bad_request", "body must be {'path': '<model file>'}")
        try:
            holder.load_from(path)
        except ModelVersionError as exc:
            raise ApiError(422, "version_mismatch", str(exc)) from exc
        except ModelFormatError as exc:
            raise ApiError(400, "bad_model_file", str(exc)) from exc
        return {"status": "ok", **holder.describe()}

    @app.post("/api/sessions", status_code=201)
    def create_session():
        session = store.create()
        return {"id": session.id}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return session.to_dict()

    @app.post("/api/sessions/{session_id}/gesture")
    def session_gesture(session_id: str, body: dict = Body(...)):
        locked = store.with_session(session_id)
        if locked is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        if not isinstance(body, dict):
            raise ApiError(400, "bad_request", "body must be a JSON object")

        if "gesture" in body:
            try:
                gesture = parse_label(body["gesture"])
            except DatasetError as exc:
                raise ApiError(400, "bad_request", str(exc)) from exc
            with locked as session:
                outcome = apply_gesture(session, gesture)
                return {
                    "prediction": None,
                    "outcome": {"accepted": outcome.accepted, "reason": outcome.reason},
                    "session": session.to_dict(),
                }

        if "features" not in body and not ("left" in body and "right" in body):
            raise ApiError(
                400, "bad_request", "body must carry 'gesture', 'features' or a 'left'/'right' frame"
            )
        model = _require_model()
        features = _features_from_body(body)
        prediction = model.predict_one(features)
        with locked as session:
            outcome = apply_prediction(session, prediction, app.state.min_confidence)
            return {
                "prediction": _prediction_to_dict(prediction),
                "outcome": {"accepted": outcome.accepted, "reason": outcome.reason},
                "session": session.to_dict(),
            }

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
