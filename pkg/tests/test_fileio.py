import math

import pytest

from stridelink.evaluation import TsSweepRow
from stridelink.fileio import (
    FormatError,
    format_sweep_table,
    read_detections,
    read_sensor_csv,
    read_summary,
    read_truth,
    write_assignments,
    write_detections,
    write_sensor_csv,
    write_summary,
    write_sweep_csv,
    write_truth,
)
from stridelink.pairing import Assignment
from stridelink.pipeline import FrameResult, MatchRun
from stridelink.simulator import generate

from conftest import two_person_config


@pytest.fixture(scope="module")
def data():
    return generate(two_person_config(duration=3.0))


def test_detections_round_trip_exactly(tmp_path, data):
    path = str(tmp_path / "detections.jsonl")
    write_detections(path, data.frames)
    assert tuple(read_detections(path)) == data.frames


def test_sensor_csv_round_trip_exactly(tmp_path, data):
    path = str(tmp_path / "p0-acc.csv")
    write_sensor_csv(path, data.streams[0])
    back = read_sensor_csv(path)
    assert back.sensor_id == "p0-acc"  # from the filename
    assert back.samples == data.streams[0].samples


def test_inferred_rate_recovers_regular_sampling(tmp_path, data):
    path = str(tmp_path / "s.csv")
    write_sensor_csv(path, data.streams[0])
    # 100 Hz stream: 10000 us spacing, n-1 gaps over (n-1)*10000 us
    assert read_sensor_csv(path).nominal_rate == pytest.approx(100.0, rel=1e-12)


def test_truth_round_trip(tmp_path, data):
    path = str(tmp_path / "truth.json")
    write_truth(path, data.sensor_owners, data.box_owners)
    sensors, owners = read_truth(path)
    assert sensors == data.sensor_owners
    assert owners == data.box_owners


def test_malformed_detection_line_named_with_position(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(
        '{"frame":0,"ts_us":0,"boxes":[]}\n{"frame":1,"boxes":[]}\n'
    )
    with pytest.raises(FormatError, match=r"bad\.jsonl:2"):
        read_detections(str(path))


def test_wrong_csv_header_rejected(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("time,x,y,z\n0,0,0,0\n")
    with pytest.raises(FormatError, match=r"s\.csv:1"):
        read_sensor_csv(str(path))


def test_nonincreasing_timestamp_rejected(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("ts_us,ax,ay,az\n0,0,0,9.8\n10000,0,0,9.8\n10000,0,0,9.8\n")
    with pytest.raises(FormatError, match=r"s\.csv:4.*does not increase"):
        read_sensor_csv(str(path))


def test_single_sample_stream_rejected(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("ts_us,ax,ay,az\n0,0,0,9.8\n")
    with pytest.raises(FormatError, match="at least 2 samples"):
        read_sensor_csv(str(path))


def test_assignments_one_line_per_frame_per_stage(tmp_path):
    a = Assignment(frozenset({("t0001", "s1"), ("t0000", "s0")}), 2.0)
    run = MatchRun([FrameResult(7, {}, a, a)], {}, 0.0)
    path = tmp_path / "assignments.jsonl"
    write_assignments(str(path), run)
    lines = path.read_text().splitlines()
    assert lines == [
        '{"frame":7,"stage":"raw","pairs":[["t0000","s0"],["t0001","s1"]]}',
        '{"frame":7,"stage":"refined","pairs":[["t0000","s0"],["t0001","s1"]]}',
    ]


def test_summary_round_trip(tmp_path):
    path = str(tmp_path / "summary.json")
    payload = {"frames": 90, "r_cd": {"raw": 0.5, "refined": 1.0}}
    write_summary(path, payload)
    assert read_summary(path) == payload


def test_sweep_csv_layout(tmp_path):
    rows = [
        TsSweepRow(1.0, "raw", 0.75),
        TsSweepRow(1.0, "refined", math.nan),
    ]
    path = tmp_path / "sweep.csv"
    write_sweep_csv(str(path), rows, seed=11)
    assert path.read_text().splitlines() == [
        "ts_seconds,stage,r_cd,seed",
        "1.0,raw,0.7500,11",
        "1.0,refined,nan,11",
    ]
    write_sweep_csv(str(path), rows)
    assert path.read_text().splitlines()[1] == "1.0,raw,0.7500,"


def test_sweep_table_shape():
    rows = [
        TsSweepRow(1.0, "raw", 0.5),
        TsSweepRow(1.0, "refined", 0.75),
        TsSweepRow(2.0, "raw", 0.625),
        TsSweepRow(2.0, "refined", 1.0),
    ]
    lines = format_sweep_table(rows).splitlines()
    assert lines[0].split() == ["TS(s)", "1", "2"]
    assert lines[1].split() == ["raw", "0.5000", "0.6250"]
    assert lines[2].split() == ["refined", "0.7500", "1.0000"]
