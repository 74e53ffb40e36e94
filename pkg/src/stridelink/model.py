"""Shared data model: detection logs, sensor streams, identities, ground truth.

Timestamps are integer microseconds since epoch so stream alignment and
tests stay bit-exact. All values here are immutable after construction and
safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

# Integer microseconds since epoch.
Timestamp = int

DEFAULT_FPS = 30.0


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle around one detected person, pixel units."""

    cx: float
    cy: float
    w: float
    h: float

    @property
    def ratio(self) -> float:
        return self.h / self.w


@dataclass(frozen=True)
class DetectionFrame:
    """One frame of a human-detection log: every box the detector produced."""

    frame_index: int
    timestamp: Timestamp
    boxes: tuple[BoundingBox, ...]

    def __init__(self, frame_index: int, timestamp: Timestamp, boxes: Sequence[BoundingBox] = ()):
        object.__setattr__(self, "frame_index", frame_index)
        object.__setattr__(self, "timestamp", timestamp)
        object.__setattr__(self, "boxes", tuple(boxes))


@dataclass(frozen=True)
class AccSampleRaw:
    """One raw 3-axis accelerometer sample, m/s² per axis."""

    timestamp: Timestamp
    ax: float
    ay: float
    az: float


@dataclass(frozen=True)
class SensorStream:
    """Raw accelerometer recording from a single phone."""

    sensor_id: str
    samples: tuple[AccSampleRaw, ...]
    nominal_rate: float

    def __init__(self, sensor_id: str, samples: Sequence[AccSampleRaw], nominal_rate: float):
        object.__setattr__(self, "sensor_id", sensor_id)
        object.__setattr__(self, "samples", tuple(samples))
        object.__setattr__(self, "nominal_rate", float(nominal_rate))


@dataclass(frozen=True)
class GroundTruth:
    """Who each trace and each sensor really belongs to.

    One phone per person: two sensors may not claim the same person.
    """

    trace_to_person: dict[str, str]
    sensor_to_person: dict[str, str]

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for sensor_id, person_id in self.sensor_to_person.items():
            if person_id in seen:
                raise ValueError(
                    f"person {person_id!r} carried by both {seen[person_id]!r} and {sensor_id!r}"
                )
            seen[person_id] = sensor_id


@dataclass
class ValidationReport:
    """Outcome of a structural check over a detection log."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_detection_log(frames: Sequence[DetectionFrame]) -> ValidationReport:
    """Check a detection log against its structural invariants.

    Pure report-style check: never raises, same input gives the same report.
    Flags non-monotone frame indices, non-monotone timestamps, and boxes
    with non-positive dimensions (named by frame_index and box ordinal).
    """
    report = ValidationReport()
    prev_index: int | None = None
    prev_ts: Timestamp | None = None
    for pos, frame in enumerate(frames):
        if prev_index is not None and frame.frame_index <= prev_index:
            report.violations.append(
                f"frame_index {frame.frame_index} at position {pos} does not increase past {prev_index}"
            )
        if frame.timestamp < 0:
            report.violations.append(f"frame_index {frame.frame_index}: negative timestamp")
        if prev_ts is not None and frame.timestamp <= prev_ts:
            report.violations.append(
                f"frame_index {frame.frame_index}: timestamp {frame.timestamp} does not increase past {prev_ts}"
            )
        for ordinal, box in enumerate(frame.boxes):
            if box.w <= 0:
                report.violations.append(
                    f"frame_index {frame.frame_index} box {ordinal}: w <= 0"
                )
            if box.h <= 0:
                report.violations.append(
                    f"frame_index {frame.frame_index} box {ordinal}: h <= 0"
                )
        prev_index = frame.frame_index
        prev_ts = frame.timestamp
    return report
