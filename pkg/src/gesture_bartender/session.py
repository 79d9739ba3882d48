"""The bar-order state machine driven by classified gestures.

A session walks Idle -> Ordering -> CheckingOut -> Completed. Item gestures
append to the order, Undo steps backwards, and a payment gesture closes the
order. Rejected gestures are outcomes, not errors: every applied gesture is
recorded in an append-only event log either way.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from .dataset import ITEM_GESTURES, PAYMENT_GESTURES, GestureLabel
from .estimators import Prediction
from .frames import HandFrame, extract_features


class OrderPhase(str, Enum):
    Idle = "Idle"
    Ordering = "Ordering"
    CheckingOut = "CheckingOut"
    Completed = "Completed"


@dataclass(frozen=True)
class SessionEvent:
    timestamp_ms: int
    gesture: GestureLabel
    accepted: bool
    phase: OrderPhase

    def to_dict(self) -> dict:
        return {
            "timestamp_ms": self.timestamp_ms,
            "gesture": self.gesture.name,
            "accepted": self.accepted,
            "phase": self.phase.value,
        }


@dataclass(frozen=True)
class GestureOutcome:
    accepted: bool
    reason: str = ""


def _now_ms() -> int:
    return int(time.time() * 1000)


@dataclass
class OrderSession:
    """One customer interaction; mutated only through apply_gesture."""

    id: str = field(default_factory=lambda: uuid.uuid4().hex)
    phase: OrderPhase = OrderPhase.Idle
    items: List[GestureLabel] = field(default_factory=list)
    payment: Optional[GestureLabel] = None
    event_log: List[SessionEvent] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "phase": self.phase.value,
            "items": [item.name for item in self.items],
            "payment": self.payment.name if self.payment else None,
            "event_log": [event.to_dict() for event in self.event_log],
        }


def apply_gesture(session: OrderSession, gesture: GestureLabel) -> GestureOutcome:
    """Apply one gesture to a session; always logs, accepted or not."""
    gesture = GestureLabel(gesture)
    accepted = False
    reason = ""

    if session.phase == OrderPhase.Idle:
        if gesture == GestureLabel.Init:
            session.phase = OrderPhase.Ordering
            accepted = True
        else:
            reason = "only Init starts an order"
    elif session.phase == OrderPhase.Ordering:
        if gesture in ITEM_GESTURES:
            session.items.append(gesture)
            accepted = True
        elif gesture == GestureLabel.Undo:
            # Accepted even on an empty order; removing nothing keeps Undo total.
            if session.items:
                session.items.pop()
            accepted = True
        elif gesture == GestureLabel.Checkout:
            if session.items:
                session.phase = OrderPhase.CheckingOut
                accepted = True
            else:
                reason = "cannot check out an empty order"
        else:
            reason = f"{gesture.name} not valid while ordering"
    elif session.phase == OrderPhase.CheckingOut:
        if gesture in PAYMENT_GESTURES:
            session.payment = gesture
            session.phase = OrderPhase.Completed
            accepted = True
        elif gesture == GestureLabel.Undo:
            session.phase = OrderPhase.Ordering
            accepted = True
        else:
            reason = "choose Cash or Credit, or Undo to keep ordering"
    else:  # Completed
        reason = "order already completed"

    session.event_log.append(
        SessionEvent(
            timestamp_ms=_now_ms(),
            gesture=gesture,
            accepted=accepted,
            phase=session.phase,
        )
    )
    return GestureOutcome(accepted=accepted, reason=reason)


def apply_prediction(
    session: OrderSession, prediction: Prediction, min_confidence: float = 0.0
) -> GestureOutcome:
    """Feed a classified gesture into the session, honoring the confidence gate.

    A prediction whose top score falls below min_confidence is logged as a
    rejected event without changing the order state.
    """
    if prediction.top_score() < min_confidence:
        session.event_log.append(
            SessionEvent(
                timestamp_ms=_now_ms(),
                gesture=prediction.label,
                accepted=False,
                phase=session.phase,
            )
        )
        return GestureOutcome(
            accepted=False,
            reason=f"confidence {prediction.top_score():.2f} below threshold {min_confidence:.2f}",
        )
    return apply_gesture(session, prediction.label)


def classify_and_apply(
    session: OrderSession,
    frame: HandFrame,
    model,
    min_confidence: float = 0.0,
):
    """Classify a frame and feed the gesture into the session.

    Returns (Prediction, GestureOutcome).
    """
    features = extract_features(frame)
    prediction: Prediction = model.predict_one(features)
    return prediction, apply_prediction(session, prediction, min_confidence)


def replay(events: List[SessionEvent]) -> OrderSession:
    """Rebuild session state by replaying the accepted gestures of a log."""
    fresh = OrderSession()
    for event in events:
        if event.accepted:
            apply_gesture(fresh, event.gesture)
    return fresh


class SessionStore:
    """In-memory session registry; conflicting updates to one id serialize."""

    def __init__(self):
        self._sessions: Dict[str, OrderSession] = {}
        self._locks: Dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def create(self) -> OrderSession:
        session = OrderSession()
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        return session

    def get(self, session_id: str) -> Optional[OrderSession]:
        with self._registry_lock:
            return self._sessions.get(session_id)

    def with_session(self, session_id: str):
        """Context manager giving exclusive access to one session."""
        with self._registry_lock:
            session = self._sessions.get(session_id)
            lock = self._locks.get(session_id)
        if session is None:
            return None
        return _LockedSession(session, lock)


class _LockedSession:
    def __init__(self, session: OrderSession, lock: threading.Lock):
        self._session = session
        self._lock = lock

    def __enter__(self) -> OrderSession:
        self._lock.acquire()
        return self._session

    def __exit__(self, *exc):
        self._lock.release()
        return False
