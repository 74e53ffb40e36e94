"""Accelerometer step features: magnitude -> low-pass -> frame-rate alignment.

The phone's orientation is unknown (pocket, hand), so direction is removed
by taking the magnitude of the 3-axis vector. Nearly all accelerometer
energy tied to human movement sits below 15 Hz, so the magnitude is
low-pass filtered by a 10th-order Butterworth at 15 Hz, then resampled
onto the camera's frame clock so both modalities share one sample grid.

Filtering is causal (single pass): the pipeline targets streaming, and the
constant passband group delay shifts every extremum of this modality by
the same amount, which the similarity search window absorbs. Gravity is
kept in the signal; a DC component creates no extremums so it cannot
disturb matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import butter, sosfilt

from .model import SensorStream, Timestamp


class NyquistViolation(ValueError):
    """Filter cutoff is not below half the stream's sampling rate."""


class EmptyOverlap(ValueError):
    """Sensor stream and frame clock do not overlap in time."""


@dataclass(frozen=True)
class FilterSpec:
    """Low-pass Butterworth design. Realized as second-order sections
    (bilinear transform); a direct-form order-10 filter is numerically
    fragile."""

    order: int = 10
    cutoff_hz: float = 15.0


@dataclass(frozen=True)
class MagnitudeSequence:
    """Acceleration magnitudes at the sensor's native rate."""

    sensor_id: str
    rate: float
    timestamps: tuple[Timestamp, ...]
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class AccFeatureSequence:
    """Step feature: filtered magnitude with one value per video frame."""

    sensor_id: str
    start_frame: int
    values: tuple[float, ...]

    @property
    def frame_indices(self) -> range:
        return range(self.start_frame, self.start_frame + len(self.values))

    def __len__(self) -> int:
        return len(self.values)


def magnitude(stream: SensorStream) -> MagnitudeSequence:
    """Direction-free acceleration: sqrt(ax^2 + ay^2 + az^2) per sample."""
    if not stream.samples:
        raise ValueError(f"sensor {stream.sensor_id!r} has no samples")
    ts = tuple(s.timestamp for s in stream.samples)
    vals = tuple(
        float(np.hypot(np.hypot(s.ax, s.ay), s.az)) for s in stream.samples
    )
    return MagnitudeSequence(stream.sensor_id, stream.nominal_rate, ts, vals)


def butter_sos(spec: FilterSpec, rate: float) -> np.ndarray:
    """Second-order-section coefficients for a filter design at a given rate."""
    if rate <= 2 * spec.cutoff_hz:
        raise NyquistViolation(
            f"cutoff {spec.cutoff_hz} Hz needs rate > {2 * spec.cutoff_hz} Hz, got {rate}"
        )
    return butter(spec.order, spec.cutoff_hz, btype="low", fs=rate, output="sos")


def lowpass(seq: MagnitudeSequence, spec: FilterSpec = FilterSpec()) -> MagnitudeSequence:
    """Causal low-pass over a magnitude sequence; length and timestamps kept."""
    sos = butter_sos(spec, seq.rate)
    filtered = sosfilt(sos, np.asarray(seq.values, dtype=float))
    return MagnitudeSequence(seq.sensor_id, seq.rate, seq.timestamps, tuple(float(v) for v in filtered))


def resample_to_frames(
    seq: MagnitudeSequence,
    frame_clock: Sequence[tuple[int, Timestamp]],
) -> AccFeatureSequence:
    """Linearly interpolate the filtered magnitude at each frame timestamp.

    Interpolation (rather than decimation by dropping) tolerates phone
    timestamp jitter against the frame clock. Frame timestamps outside the
    sensor's span clamp to its first/last value; fully disjoint spans are an
    error.
    """
    if not frame_clock:
        raise ValueError("empty frame clock")
    frames = [f for f, _ in frame_clock]
    frame_ts = np.asarray([t for _, t in frame_clock], dtype=float)
    if frames != list(range(frames[0], frames[0] + len(frames))):
        raise ValueError("frame clock indices must be contiguous and increasing")
    t = np.asarray(seq.timestamps, dtype=float)
    if frame_ts[-1] < t[0] or frame_ts[0] > t[-1]:
        raise EmptyOverlap(
            f"sensor {seq.sensor_id!r} spans [{seq.timestamps[0]}, {seq.timestamps[-1]}] us, "
            f"frames span [{frame_clock[0][1]}, {frame_clock[-1][1]}] us"
        )
    resampled = np.interp(frame_ts, t, np.asarray(seq.values, dtype=float))
    return AccFeatureSequence(seq.sensor_id, frames[0], tuple(float(v) for v in resampled))


def step_features(
    stream: SensorStream,
    frame_clock: Sequence[tuple[int, Timestamp]],
    spec: FilterSpec = FilterSpec(),
) -> AccFeatureSequence:
    """Full per-sensor pipeline: magnitude -> lowpass -> frame alignment."""
    return resample_to_frames(lowpass(magnitude(stream), spec), frame_clock)
