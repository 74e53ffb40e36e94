from stridelink.model import BoundingBox, DetectionFrame
from stridelink.similarity import detect_extremes
from stridelink.simulator import PersonSpec, ScenarioConfig, generate
from stridelink.tracer import Trace, Tracker
from stridelink.video_features import interpolate_gap, ratio_sequence

import pytest


def trace_of(entries):
    return Trace("t0000", tuple(entries), last_seen=entries[-1][0])


def test_single_entry_ratio():
    t = trace_of([(0, BoundingBox(0, 0, 50, 100))])
    seq = ratio_sequence(t)
    assert len(seq) == 1
    assert seq.samples[0].ratio == 2.0
    assert not seq.samples[0].synthetic


def test_gap_filled_linearly_and_flagged():
    t = trace_of([
        (1, BoundingBox(0, 0, 50, 100)),   # ratio 2.0
        (3, BoundingBox(0, 0, 50, 150)),   # ratio 3.0
    ])
    seq = ratio_sequence(t)
    assert [s.frame_index for s in seq.samples] == [1, 2, 3]
    assert seq.samples[1].ratio == 2.5
    assert seq.samples[1].synthetic
    assert not seq.samples[0].synthetic and not seq.samples[2].synthetic


def test_length_covers_full_span():
    t = trace_of([
        (10, BoundingBox(0, 0, 50, 100)),
        (14, BoundingBox(0, 0, 50, 120)),
        (15, BoundingBox(0, 0, 50, 110)),
    ])
    seq = ratio_sequence(t)
    assert len(seq) == 15 - 10 + 1
    assert seq.start_frame == 10


def test_interpolate_gap_endpoints_excluded():
    assert interpolate_gap(2.0, 3.0, 4) == [2.25, 2.5, 2.75]


def test_empty_trace_rejected():
    with pytest.raises(ValueError):
        ratio_sequence(Trace("t0000", (), last_seen=0))


def test_scaling_ratios_keeps_extremum_marks():
    t = trace_of([
        (f, BoundingBox(0, 0, 50, 100 + 30 * ((f * 7) % 5)))
        for f in range(40)
    ])
    values = ratio_sequence(t).values()
    scaled = [3.7 * v for v in values]
    assert detect_extremes(values, 10).values == detect_extremes(scaled, 10).values


def test_noise_free_walker_trace_peaks_once_per_step():
    # 1.8 steps/s over 100 frames at 30 fps is 6 step cycles
    cfg = ScenarioConfig(
        persons=(PersonSpec("p", 0.9, carry_noise=0.0, path=((100.0, 100.0), (300.0, 100.0))),),
        duration=100 / 30.0,
        box_noise=0.0,
        dropout_prob=0.0,
    )
    data = generate(cfg)
    tracker = Tracker()
    for frame in data.frames:
        tracker.update(frame)
    (trace,) = tracker.traces.values()
    marks = detect_extremes(ratio_sequence(trace).values(), 10)
    maxima = sum(1 for v in marks.values if v == 1)
    assert 5 <= maxima <= 7
