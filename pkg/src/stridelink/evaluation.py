"""Correct-decision rate against ground truth, and the length-gate sweep.

A sensor is "claimed" in a frame when the pairing stage assigns it to any
trace; the claim is correct when that trace belongs to the sensor's owner.
R_cd is total correct claims over total claims, pooled across sensors and
frames. Frames where a sensor stays unpaired count toward neither side, so
R_cd measures precision of the claims actually made.

Trace-level truth does not exist up front (trace ids are a pipeline
artifact); it is derived per trace by majority vote over the owners of the
boxes the trace absorbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .model import GroundTruth
from .pairing import Assignment
from .pipeline import MatchRun, PipelineParams, run_pipeline
from .simulator import ScenarioData

STAGES = ("raw", "refined")


class UnknownId(KeyError):
    """An assignment referenced an id that ground truth does not cover."""


class UndefinedRate(ValueError):
    """R_cd requested although no claims were ever made."""


@dataclass
class EvalCounters:
    """Per-person claim tallies. n_id[p] counts frames p's sensor was
    paired to some trace (the claim reading used by r_cd); n_id_trace[p]
    counts frames a trace of p was paired to some sensor (the alternative
    reading, kept for inspection); n_cd[p] counts frames both sides of a
    pair agree on p, identical under either reading."""

    n_id: dict[str, int] = field(default_factory=dict)
    n_id_trace: dict[str, int] = field(default_factory=dict)
    n_cd: dict[str, int] = field(default_factory=dict)

    @property
    def persons_seen(self) -> int:
        return len(set(self.n_id) | set(self.n_id_trace))

    @property
    def total_id(self) -> int:
        return sum(self.n_id.values())

    @property
    def total_cd(self) -> int:
        return sum(self.n_cd.values())

    def r_cd(self) -> float:
        if self.total_id == 0:
            raise UndefinedRate("no sensor was ever paired")
        return self.total_cd / self.total_id


def accumulate(counters: EvalCounters, assignment: Assignment, truth: GroundTruth) -> EvalCounters:
    """Fold one frame's pairing into the tallies."""
    for trace_id, sensor_id in assignment.pairs:
        if sensor_id not in truth.sensor_to_person:
            raise UnknownId(f"sensor {sensor_id!r} not in ground truth")
        if trace_id not in truth.trace_to_person:
            raise UnknownId(f"trace {trace_id!r} not in ground truth")
        person = truth.sensor_to_person[sensor_id]
        trace_person = truth.trace_to_person[trace_id]
        counters.n_id[person] = counters.n_id.get(person, 0) + 1
        counters.n_id_trace[trace_person] = counters.n_id_trace.get(trace_person, 0) + 1
        if trace_person == person:
            counters.n_cd[person] = counters.n_cd.get(person, 0) + 1
    return counters


def derive_trace_truth(
    frame_box_traces: Mapping[int, Mapping[int, str]],
    box_owners: Mapping[int, Sequence[str]],
) -> dict[str, str]:
    """Owner of each trace by majority vote over its absorbed boxes.

    frame_box_traces[f][k] is the trace that took box k of frame f;
    box_owners[f][k] is who that box really showed. Vote ties break to the
    lexicographically smallest person so derived truth is reproducible.
    """
    votes: dict[str, dict[str, int]] = {}
    for f, assignments in frame_box_traces.items():
        owners = box_owners.get(f, ())
        for ordinal, trace_id in assignments.items():
            if ordinal >= len(owners):
                raise UnknownId(f"frame {f} box {ordinal} has no recorded owner")
            per_trace = votes.setdefault(trace_id, {})
            person = owners[ordinal]
            per_trace[person] = per_trace.get(person, 0) + 1
    return {
        trace_id: min(p for p, c in per.items() if c == max(per.values()))
        for trace_id, per in votes.items()
    }


def evaluate_run(
    run: MatchRun,
    sensor_owners: Mapping[str, str],
    box_owners: Mapping[int, Sequence[str]],
    stages: Sequence[str] = STAGES,
) -> dict[str, EvalCounters]:
    """Tally every frame of a finished run for the requested stages."""
    trace_truth = derive_trace_truth(
        {fr.frame_index: fr.box_traces for fr in run.frames}, box_owners
    )
    truth = GroundTruth(trace_truth, dict(sensor_owners))
    out: dict[str, EvalCounters] = {}
    for stage in stages:
        if stage not in STAGES:
            raise ValueError(f"unknown stage {stage!r}")
        counters = EvalCounters()
        for fr in run.frames:
            accumulate(counters, fr.raw if stage == "raw" else fr.refined, truth)
        out[stage] = counters
    return out


@dataclass(frozen=True)
class TsSweepRow:
    ts: float
    stage: str
    r_cd: float  # nan when the stage never paired anything at this gate


def ts_sweep(
    scenario: ScenarioData,
    ts_values: Iterable[float] = (0.33, 1.0, 2.0, 3.0, 4.0),
    params: PipelineParams = PipelineParams(),
    stages: Sequence[str] = STAGES,
) -> list[TsSweepRow]:
    """R_cd at each length gate, one full pipeline pass per gate.

    Longer gates delay a pair's first claim but make every claim rest on
    more extremums, so the rate typically rises with ts.
    """
    rows: list[TsSweepRow] = []
    for ts in ts_values:
        if ts <= 0:
            raise ValueError(f"ts gate must be positive, got {ts}")
        run = run_pipeline(scenario.frames, scenario.streams, replace(params, ts_gate=ts))
        evals = evaluate_run(run, scenario.sensor_owners, scenario.box_owners, stages)
        for stage in stages:
            try:
                rate = evals[stage].r_cd()
            except UndefinedRate:
                rate = math.nan
            rows.append(TsSweepRow(ts, stage, rate))
    return rows
