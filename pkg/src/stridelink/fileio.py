"""On-disk formats: detection logs, sensor CSVs, ground truth, results.

Floats are written with repr (shortest round-trip form), so write-read is
exact and identical inputs produce identical bytes. Detection logs are
JSON lines, one frame per line; sensor streams are CSV with a fixed
header; truth and summaries are ordinary JSON with sorted keys.
"""

from __future__ import annotations

import csv
import json
import math
import os
from typing import Iterable, Sequence

from .evaluation import TsSweepRow
from .model import AccSampleRaw, BoundingBox, DetectionFrame, SensorStream
from .pipeline import MatchRun

SENSOR_HEADER = ["ts_us", "ax", "ay", "az"]


class FormatError(ValueError):
    """Malformed input file; message names the file and position."""


def write_detections(path: str, frames: Iterable[DetectionFrame]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for frame in frames:
            fh.write(json.dumps({
                "frame": frame.frame_index,
                "ts_us": frame.timestamp,
                "boxes": [
                    {"cx": b.cx, "cy": b.cy, "w": b.w, "h": b.h} for b in frame.boxes
                ],
            }, separators=(",", ":")))
            fh.write("\n")


def read_detections(path: str) -> list[DetectionFrame]:
    frames: list[DetectionFrame] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                boxes = tuple(
                    BoundingBox(float(b["cx"]), float(b["cy"]), float(b["w"]), float(b["h"]))
                    for b in rec["boxes"]
                )
                frames.append(DetectionFrame(int(rec["frame"]), int(rec["ts_us"]), boxes))
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return frames


def write_sensor_csv(path: str, stream: SensorStream) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SENSOR_HEADER)
        for s in stream.samples:
            writer.writerow([s.timestamp, repr(s.ax), repr(s.ay), repr(s.az)])


def read_sensor_csv(path: str, sensor_id: str | None = None) -> SensorStream:
    """Load one phone's samples. The format carries no rate field; the
    nominal rate is inferred from the first and last timestamps."""
    if sensor_id is None:
        sensor_id = os.path.splitext(os.path.basename(path))[0]
    samples: list[AccSampleRaw] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SENSOR_HEADER:
            raise FormatError(f"{path}:1: expected header {','.join(SENSOR_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                ts = int(row[0])
                ax, ay, az = (float(v) for v in row[1:4])
            except (IndexError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
            if samples and ts <= samples[-1].timestamp:
                raise FormatError(f"{path}:{lineno}: timestamp {ts} does not increase")
            samples.append(AccSampleRaw(ts, ax, ay, az))
    if len(samples) < 2:
        raise FormatError(f"{path}: need at least 2 samples to infer a rate")
    span_s = (samples[-1].timestamp - samples[0].timestamp) / 1e6
    rate = (len(samples) - 1) / span_s
    return SensorStream(sensor_id, tuple(samples), rate)


def write_truth(path: str, sensor_owners: dict[str, str],
                box_owners: dict[int, Sequence[str]]) -> None:
    payload = {
        "sensor_to_person": dict(sorted(sensor_owners.items())),
        "box_owners": {str(f): list(owners) for f, owners in sorted(box_owners.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_truth(path: str) -> tuple[dict[str, str], dict[int, tuple[str, ...]]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
            sensors = {str(k): str(v) for k, v in payload["sensor_to_person"].items()}
            owners = {int(f): tuple(str(p) for p in ps) for f, ps in payload["box_owners"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return sensors, owners


def write_assignments(path: str, run: MatchRun, stages: Sequence[str] = ("raw", "refined")) -> None:
    """One JSON line per frame per stage: its pairs, sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        for fr in run.frames:
            for stage in stages:
                assignment = fr.raw if stage == "raw" else fr.refined
                fh.write(json.dumps({
                    "frame": fr.frame_index,
                    "stage": stage,
                    "pairs": [list(p) for p in assignment.sorted_pairs()],
                }, separators=(",", ":")))
                fh.write("\n")


def write_summary(path: str, summary: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_summary(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _fmt_rate(r: float) -> str:
    return "nan" if math.isnan(r) else f"{r:.4f}"


def write_sweep_csv(path: str, rows: Iterable[TsSweepRow], seed: int | None = None) -> None:
    """Seed column stays empty when the scenario came from files rather
    than the simulator."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ts_seconds", "stage", "r_cd", "seed"])
        for row in rows:
            writer.writerow([repr(row.ts), row.stage, _fmt_rate(row.r_cd),
                             "" if seed is None else seed])


def format_sweep_table(rows: Sequence[TsSweepRow]) -> str:
    """Stages as rows, gates as columns, rates in the cells."""
    ts_values = sorted({r.ts for r in rows})
    stages = []
    for r in rows:
        if r.stage not in stages:
            stages.append(r.stage)
    cell = {(r.ts, r.stage): r.r_cd for r in rows}
    lines = ["TS(s)".ljust(10) + "".join(f"{ts:>9g}" for ts in ts_values)]
    for stage in stages:
        line = stage.ljust(10)
        for ts in ts_values:
            r = cell.get((ts, stage))
            line += f"{_fmt_rate(r):>9}" if r is not None else f"{'-':>9}"
        lines.append(line)
    return "\n".join(lines) + "\n"
