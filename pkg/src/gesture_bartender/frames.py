"""Two-hand frame types and the fingertip-distance feature pipeline.

A frame holds the palm center and five fingertip positions of each hand in
sensor-plane coordinates (millimeters). The feature pipeline turns a frame
into 10 per-hand min-max normalized fingertip-to-palm distances, so the
result is invariant to hand size and to where the hands sit over the sensor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

FINGER_ORDER = ("thumb", "index", "middle", "ring", "pinky")

# Per-hand value assigned when all five distances coincide and min-max
# normalization is undefined. Midpoint keeps the output inside [0, 1]
# without asserting a fully-curled or fully-extended hand.
DEGENERATE_HAND_VALUE = 0.5


class InvalidFrameError(ValueError):
    """Raised when a frame or its coordinates cannot be processed."""


@dataclass(frozen=True)
class Point2D:
    """A sensor-plane position in millimeters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidFrameError(f"non-finite coordinate: ({self.x}, {self.y})")


@dataclass(frozen=True)
class HandObservation:
    """Palm center plus fingertips ordered [thumb, index, middle, ring, pinky]."""

    palm_center: Point2D
    fingertips: Tuple[Point2D, Point2D, Point2D, Point2D, Point2D]

    def __post_init__(self):
        if len(self.fingertips) != len(FINGER_ORDER):
            raise InvalidFrameError(
                f"expected {len(FINGER_ORDER)} fingertips, got {len(self.fingertips)}"
            )
        object.__setattr__(self, "fingertips", tuple(self.fingertips))


@dataclass(frozen=True)
class HandFrame:
    """One two-hand observation. Both hands must be present."""

    left: HandObservation
    right: HandObservation


def fingertip_distance(palm: Point2D, tip: Point2D) -> float:
    """Euclidean distance between a palm center and a fingertip, in mm."""
    return math.hypot(tip.x - palm.x, tip.y - palm.y)


def normalize_hand(distances: Sequence[float]) -> np.ndarray:
    """Min-max normalize one hand's five fingertip distances into [0, 1].

    The hand with all five distances equal maps to ``DEGENERATE_HAND_VALUE``
    everywhere; otherwise the smallest distance maps to 0 and the largest
    to 1.
    """
    d = np.asarray(distances, dtype=float)
    if d.shape != (len(FINGER_ORDER),):
        raise InvalidFrameError(f"expected 5 distances, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise InvalidFrameError("non-finite distance")
    if np.any(d < 0):
        raise InvalidFrameError("negative distance")
    lo = d.min()
    hi = d.max()
    if hi == lo:
        return np.full(len(FINGER_ORDER), DEGENERATE_HAND_VALUE)
    return (d - lo) / (hi - lo)


def hand_distances(hand: HandObservation) -> np.ndarray:
    """Raw fingertip-to-palm distances for one hand, finger order preserved."""
    return np.array(
        [fingertip_distance(hand.palm_center, tip) for tip in hand.fingertips]
    )


def extract_features(frame: HandFrame) -> np.ndarray:
    """Build the 10-value feature vector of a frame.

    Positions 0-4 hold the left hand [thumb..pinky], positions 5-9 the right
    hand. Each hand is normalized against its own min/max so the two hands
    stay independent.
    """
    left = normalize_hand(hand_distances(frame.left))
    right = normalize_hand(hand_distances(frame.right))
    return np.concatenate([left, right])


# --- frame (de)serialization -------------------------------------------------
#
# JSON Lines, one object per frame:
#   {"left": {"palm": [x, y], "tips": [[x, y] x5]},
#    "right": {...}, "label": "Init"}          # label optional


def _hand_to_dict(hand: HandObservation) -> dict:
    return {
        "palm": [hand.palm_center.x, hand.palm_center.y],
        "tips": [[p.x, p.y] for p in hand.fingertips],
    }


def _hand_from_dict(obj: dict) -> HandObservation:
    try:
        palm = obj["palm"]
        tips = obj["tips"]
    except (KeyError, TypeError) as exc:
        raise InvalidFrameError(f"missing hand field: {exc}") from exc
    if len(tips) != len(FINGER_ORDER):
        raise InvalidFrameError(f"expected {len(FINGER_ORDER)} tips, got {len(tips)}")
    try:
        return HandObservation(
            palm_center=Point2D(float(palm[0]), float(palm[1])),
            fingertips=tuple(Point2D(float(t[0]), float(t[1])) for t in tips),
        )
    except (IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidFrameError):
            raise
        raise InvalidFrameError(f"malformed hand object: {exc}") from exc


def frame_to_dict(frame: HandFrame, label: Optional[str] = None) -> dict:
    obj = {"left": _hand_to_dict(frame.left), "right": _hand_to_dict(frame.right)}
    if label is not None:
        obj["label"] = label
    return obj


def frame_from_dict(obj: dict) -> Tuple[HandFrame, Optional[str]]:
    if not isinstance(obj, dict) or "left" not in obj or "right" not in obj:
        raise InvalidFrameError("frame object must have 'left' and 'right' hands")
    frame = HandFrame(
        left=_hand_from_dict(obj["left"]), right=_hand_from_dict(obj["right"])
    )
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise InvalidFrameError("label must be a string")
    return frame, label


def read_frames_jsonl(path) -> list:
    """Read a frame JSONL file into [(HandFrame, label-or-None), ...]."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidFrameError(f"line {lineno}: invalid JSON ({exc})") from exc
            try:
                out.append(frame_from_dict(obj))
            except InvalidFrameError as exc:
                raise InvalidFrameError(f"line {lineno}: {exc}") from exc
    return out


def write_frames_jsonl(path, frames: Iterable[Tuple[HandFrame, Optional[str]]]) -> None:
    """Write [(HandFrame, label-or-None), ...] as frame JSONL."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for frame, label in frames:
            fh.write(json.dumps(frame_to_dict(frame, label)) + "\n")
