import math
import random

import pytest

from stridelink.acc_features import AccFeatureSequence
from stridelink.similarity import (
    ExtremeStream,
    PairScorer,
    SimilarityParams,
    TernarySequence,
    detect_extremes,
    dif,
    score_all,
    sim,
)
from stridelink.video_features import RatioSample, RatioSequence

from helpers import oracle_marks


def tern(length, **marks):
    """TernarySequence with marks given as position=value kwargs (p10=1)."""
    values = [0] * length
    for key, v in marks.items():
        values[int(key[1:])] = v
    return TernarySequence(tuple(values))


# extremum detection


def test_constant_sequence_has_no_extremes():
    assert detect_extremes([5.0] * 50, 10).values == (0,) * 50


def test_triangle_peak_marked_once():
    seq = list(range(21)) + list(range(19, 0, -1))
    t = detect_extremes(seq, 10)
    assert [i for i, v in enumerate(t.values) if v == 1] == [20]


def test_sampled_sinusoid_marks_every_crest_and_trough():
    # period 30 over 100 samples: crests near 7.5+30k, troughs near 22.5+30k;
    # the window truncation also marks the rising left edge as a minimum
    seq = [math.sin(2 * math.pi * x / 30) for x in range(100)]
    t = detect_extremes(seq, 10)
    maxima = [i for i, v in enumerate(t.values) if v == 1]
    minima = [i for i, v in enumerate(t.values) if v == -1]
    assert len(maxima) == 4
    assert len(minima) == 4
    crest_zones = [{7, 8}, {37, 38}, {67, 68}, {97, 98}]
    assert all(any(m in zone for zone in crest_zones) for m in maxima)
    trough_zones = [{0}, {22, 23}, {52, 53}, {82, 83}]
    assert all(any(m in zone for zone in trough_zones) for m in minima)


def test_matches_literal_neighbor_scan_on_random_input():
    rng = random.Random(101)
    for _ in range(300):
        n = rng.randint(1, 200)
        d = rng.randint(2, 12)
        if rng.random() < 0.5:
            seq = [rng.random() for _ in range(n)]
        else:
            seq = [float(rng.randint(0, 3)) for _ in range(n)]  # plateaus
        assert list(detect_extremes(seq, d).values) == oracle_marks(seq, d)


def test_marks_unchanged_under_increasing_transform():
    rng = random.Random(5)
    seq = [rng.uniform(-3, 3) for _ in range(120)]
    base = detect_extremes(seq, 10).values
    assert detect_extremes([math.exp(v) for v in seq], 10).values == base


def test_ternary_values_restricted():
    with pytest.raises(ValueError):
        TernarySequence((0, 2, 0))


def test_adjacent_same_sign_marks_rejected():
    with pytest.raises(ValueError):
        TernarySequence((0, 1, 1, 0))
    TernarySequence((0, 1, -1, 0))  # opposite signs may touch


def test_params_validation():
    with pytest.raises(ValueError):
        SimilarityParams(d=1)
    with pytest.raises(ValueError):
        SimilarityParams(no_match_penalty_factor=0.0)


# dif


def test_dif_zero_for_unmarked_position():
    t = tern(30, p10=1)
    a = tern(30, p12=1)
    assert dif(5, t, a) == 0.0


def test_dif_zero_on_exact_alignment():
    t = tern(30, p10=1)
    a = tern(30, p10=1)
    assert dif(10, t, a) == 0.0


def test_dif_penalty_when_no_match_in_window():
    t = tern(40, p15=1)
    a = tern(40, p15=-1)  # only an opposite mark nearby
    assert dif(15, t, a, d=10) == 15.0


def test_dif_search_clamped_to_short_sequence():
    t = tern(5, p0=1)
    a = TernarySequence((0, 0, 0))
    assert dif(0, t, a, d=10) == 15.0


def test_dif_finds_nearest_of_two_candidates():
    t = tern(40, p20=1)
    a = TernarySequence(tuple(1 if i in (17, 26) else 0 for i in range(40)))
    assert dif(20, t, a) == 3.0


# sim


def test_two_extremes_offset_by_two_score_one():
    t = tern(30, p10=1, p25=-1)
    a = tern(30, p12=1, p25=-1)
    assert sim(t, a) == 1.0


def test_identical_marks_hit_denominator_floor():
    t = tern(30, p5=1, p12=-1, p19=1, p26=-1)
    assert sim(t, t) == 8.0


def test_no_marks_scores_zero():
    t = TernarySequence((0,) * 30)
    a = tern(30, p5=1)
    assert sim(t, a) == 0.0


def test_sim_is_asymmetric():
    t = tern(40, p10=1)
    a = tern(40, p10=1, p20=-1, p30=1)
    assert sim(t, a) == 2.0
    assert sim(a, t) == pytest.approx(3 / 30.0)


def test_alignment_by_absolute_frame_not_list_position():
    t = TernarySequence((0, 0, 1, 0, 0), start_frame=100)
    a = TernarySequence((0, 0, 0, 0, 1, 0), start_frame=98)
    # t's mark sits at frame 102, a's at frame 102 as well
    assert sim(t, a) == 2.0  # dif 0, floor 0.5 -> 1/0.5


def test_uniform_shift_costs_exactly_marks_times_shift():
    length = 140
    positions = (30, 60, 90)
    values = [0] * length
    for p in positions:
        values[p] = 1
    t = TernarySequence(tuple(values))
    params = SimilarityParams()
    for k in range(1, 6):
        a = TernarySequence(tuple(values), start_frame=k)
        total = sum(dif(x, t, a, params.dif_d) for x in range(length))
        assert total == len(positions) * k


# streaming engine


def test_streaming_matches_batch_on_random_interleavings():
    rng = random.Random(77)
    params = SimilarityParams()
    for _ in range(120):
        n_t, n_a = rng.randint(1, 120), rng.randint(1, 120)
        t_vals = [rng.random() for _ in range(n_t)]
        a_vals = [rng.random() for _ in range(n_a)]
        t_start, a_start = rng.randint(0, 5), rng.randint(0, 5)
        ts = ExtremeStream(params.d, t_start)
        as_ = ExtremeStream(params.d, a_start)
        scorer = PairScorer(ts, as_, params)
        i = j = 0
        while i < n_t or j < n_a:
            if i < n_t and (j >= n_a or rng.random() < 0.5):
                ts.push(t_vals[i])
                i += 1
            else:
                as_.push(a_vals[j])
                j += 1
            scorer.advance()
        ts.flush()
        as_.flush()
        scorer.advance()
        batch = sim(
            detect_extremes(t_vals, params.d, t_start),
            detect_extremes(a_vals, params.d, a_start),
            params,
        )
        assert scorer.score() == batch


def test_finalized_marks_are_a_prefix_of_batch_marks():
    rng = random.Random(13)
    values = [rng.random() for _ in range(90)]
    stream = ExtremeStream(10)
    for v in values:
        stream.push(v)
    full = oracle_marks(values, 10)
    assert stream.marks == full[: len(stream.marks)]
    stream.flush()
    assert stream.marks == full


def test_push_after_flush_rejected():
    stream = ExtremeStream(10)
    stream.push(1.0)
    stream.flush()
    with pytest.raises(ValueError):
        stream.push(2.0)


# score_all


def ratio_seq(trace_id, values, start=0):
    return RatioSequence(
        trace_id, tuple(RatioSample(start + k, v) for k, v in enumerate(values))
    )


def acc_seq(sensor_id, values, start=0):
    return AccFeatureSequence(sensor_id, start, tuple(values))


def wave(n, period, phase=0.0):
    return [math.cos(2 * math.pi * (k + phase) / period) for k in range(n)]


def test_full_matrix_when_everything_gated_in():
    ratios = [ratio_seq("tA", wave(70, 20)), ratio_seq("tB", wave(70, 30))]
    accs = [acc_seq("s1", wave(70, 20)), acc_seq("s2", wave(70, 30))]
    m = score_all(ratios, accs, ts_gate=2.0, fps=30.0)
    assert set(m.scores) == {("tA", "s1"), ("tA", "s2"), ("tB", "s1"), ("tB", "s2")}
    assert m.as_of_frame == 69


def test_short_trace_row_absent():
    ratios = [ratio_seq("tA", wave(70, 20)), ratio_seq("tB", wave(50, 30))]
    accs = [acc_seq("s1", wave(70, 20))]
    m = score_all(ratios, accs, ts_gate=2.0, fps=30.0)
    assert set(m.scores) == {("tA", "s1")}


def test_matching_rhythm_outscores_mismatched():
    ratios = [ratio_seq("tA", wave(150, 20)), ratio_seq("tB", wave(150, 34))]
    accs = [acc_seq("s1", wave(150, 20)), acc_seq("s2", wave(150, 34))]
    m = score_all(ratios, accs, ts_gate=2.0, fps=30.0)
    assert m.scores[("tA", "s1")] > m.scores[("tA", "s2")]
    assert m.scores[("tB", "s2")] > m.scores[("tB", "s1")]
