"""Ratio features: the height/width time series of a trace's boxes.

While a person walks, the bounding box stretches and shrinks once per step
(stepping out lengthens the box along the walking axis; feet together
shrink it), so h/w oscillates in lock-step with gait and works from any
viewing angle without calibration. The signal is left unsmoothed; the
extremum window downstream provides the noise tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .tracer import Trace


@dataclass(frozen=True)
class RatioSample:
    frame_index: int
    ratio: float
    synthetic: bool = False  # filled by interpolation, not observed


@dataclass(frozen=True)
class RatioSequence:
    trace_id: str
    samples: tuple[RatioSample, ...]

    @property
    def start_frame(self) -> int:
        return self.samples[0].frame_index

    def values(self) -> list[float]:
        return [s.ratio for s in self.samples]

    def __len__(self) -> int:
        return len(self.samples)


def interpolate_gap(prev_ratio: float, next_ratio: float, gap: int) -> list[float]:
    """Ratios for the gap-1 missing frames strictly between two sightings."""
    step = (next_ratio - prev_ratio) / gap
    return [prev_ratio + step * k for k in range(1, gap)]


def ratio_sequence(trace: Trace) -> RatioSequence:
    """Per-frame h/w sequence of a trace, linearly filling unseen frames.

    Output covers every frame index from the trace's first to its last
    entry; filled samples are flagged synthetic. Linear fill cannot invent
    an extremum strictly inside a gap, so downstream matching is safe.
    """
    if not trace.entries:
        raise ValueError("trace has no entries")
    samples: list[RatioSample] = []
    prev_frame, prev_box = trace.entries[0]
    samples.append(RatioSample(prev_frame, prev_box.ratio))
    for frame, box in trace.entries[1:]:
        gap = frame - prev_frame
        if gap > 1:
            for k, r in enumerate(interpolate_gap(prev_box.ratio, box.ratio, gap), start=1):
                samples.append(RatioSample(prev_frame + k, r, synthetic=True))
        samples.append(RatioSample(frame, box.ratio))
        prev_frame, prev_box = frame, box
    return RatioSequence(trace.trace_id, tuple(samples))
