"""Frame-to-frame association of person boxes into traces.

A trace is the sequence of boxes believed to be one person. Matching is
movement-limited: between consecutive frames a walker cannot move further
than a fixed fraction of their own box height, so each trace searches for
its next box inside that radius. The radius grows linearly with the number
of frames a trace has gone unseen, letting it recapture its person after a
brief occlusion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .model import BoundingBox, DetectionFrame

TRACE_ID_FORMAT = "t{:04d}"


@dataclass(frozen=True)
class TracerParams:
    radius_factor: float = 0.1   # of box height, per elapsed frame
    max_gap: int = 15            # frames unseen before a trace terminates


@dataclass(frozen=True)
class Trace:
    trace_id: str
    entries: tuple[tuple[int, BoundingBox], ...]
    last_seen: int
    active: bool = True

    @property
    def last_box(self) -> BoundingBox:
        return self.entries[-1][1]

    @property
    def start_frame(self) -> int:
        return self.entries[0][0]


def search_radius(box: BoundingBox, gap: int, radius_factor: float = 0.1) -> float:
    """Pixel radius a person may have moved `gap` frames after `box` was seen."""
    if gap < 1:
        raise ValueError("gap must be >= 1")
    return radius_factor * box.h * gap


def _trace_ordinal(trace_id: str) -> int:
    return int(trace_id.lstrip("t"))


def next_trace_id(traces: dict[str, Trace]) -> str:
    ordinal = 1 + max((_trace_ordinal(t) for t in traces), default=-1)
    return TRACE_ID_FORMAT.format(ordinal)


def update_traces(
    traces: dict[str, Trace],
    frame: DetectionFrame,
    params: TracerParams = TracerParams(),
) -> tuple[dict[str, Trace], dict[int, str]]:
    """Advance all traces by one frame of detections.

    Candidate (trace, box) pairs inside the trace's search radius are matched
    greedily in ascending center-distance order, ties broken by older trace
    then lower box ordinal, so the partition is deterministic. Each trace
    gains at most one box and each box joins at most one trace. Unmatched
    boxes open new traces; traces unseen for more than max_gap frames are
    terminated.

    Returns the updated trace collection and a map of box ordinal -> trace_id
    covering every box of the frame.
    """
    f = frame.frame_index
    for trace in traces.values():
        if trace.active and trace.last_seen >= f:
            raise ValueError(
                f"frame {f} is not ahead of active trace {trace.trace_id} (last_seen {trace.last_seen})"
            )

    updated = dict(traces)
    candidates = []
    for trace in traces.values():
        if not trace.active:
            continue
        gap = f - trace.last_seen
        if gap > params.max_gap:
            continue
        last = trace.last_box
        radius = search_radius(last, gap, params.radius_factor)
        for ordinal, box in enumerate(frame.boxes):
            dist = math.hypot(box.cx - last.cx, box.cy - last.cy)
            if dist <= radius:
                candidates.append((dist, _trace_ordinal(trace.trace_id), ordinal))

    candidates.sort()
    assignments: dict[int, str] = {}
    taken_traces: set[int] = set()
    for dist, trace_ord, ordinal in candidates:
        if trace_ord in taken_traces or ordinal in assignments:
            continue
        trace_id = TRACE_ID_FORMAT.format(trace_ord)
        trace = updated[trace_id]
        updated[trace_id] = replace(
            trace,
            entries=trace.entries + ((f, frame.boxes[ordinal]),),
            last_seen=f,
        )
        taken_traces.add(trace_ord)
        assignments[ordinal] = trace_id

    for ordinal, box in enumerate(frame.boxes):
        if ordinal in assignments:
            continue
        trace_id = next_trace_id(updated)
        updated[trace_id] = Trace(trace_id, ((f, box),), last_seen=f)
        assignments[ordinal] = trace_id

    for trace_id, trace in updated.items():
        if trace.active and f - trace.last_seen > params.max_gap:
            updated[trace_id] = replace(trace, active=False)

    return updated, assignments


@dataclass
class Tracker:
    """Stateful wrapper around update_traces for one camera stream."""

    params: TracerParams = field(default_factory=TracerParams)
    traces: dict[str, Trace] = field(default_factory=dict)

    def update(self, frame: DetectionFrame) -> dict[int, str]:
        self.traces, assignments = update_traces(self.traces, frame, self.params)
        return assignments

    def active_traces(self) -> list[Trace]:
        return [t for t in self.traces.values() if t.active]
