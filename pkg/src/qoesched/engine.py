"""Deterministic TTI loop: arrivals, expiry, channel, QoE, scheduling, drain.

A single run is strictly single-threaded; the whole trace is a pure
function of (scenario, seed). Each (ue, purpose) pair gets its own
counter-based RNG substream so changing one flow's parameters never
perturbs another flow's arrival sequence.

Per-TTI event order is fixed:
  1. generate arrivals and enqueue
  2. expire past-deadline packets
  3. step CQI
  4. update QoE demand and q (honoring the feedback delay)
  5. compute priorities and select one UE
  6. drain the winner with budget rate * TTI
  7. update served-rate EMAs and metrics
  8. evaluate the service-adjustment trigger
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .buffering import UeBuffer
from .channel import ChannelParams, CqiState, cqi_step, rate_of
from .metrics import MetricsWindow, WindowRecord, jfi, qoe_fi
from .qoe import QoeState
from .scheduler import (
    PRIORITY_FN,
    Policy,
    SchedDecision,
    TTI_SECONDS,
    UeSchedInput,
    select,
    update_avg_rate,
)
from .traffic import FlowSpec, apply_adjustment, arrivals

# Default CQI stagger applied cyclically when a scenario gives no initial CQIs.
DEFAULT_CQI_PATTERN = (13, 11, 9, 11, 13)


@dataclass
class AdjustmentParams:
    enabled: bool = False
    occupancy_threshold: float = 0.8
    starvation_tti: int = 100
    factor: float = 0.75

    def __post_init__(self):
        if not 0.0 < self.occupancy_threshold < 1.0:
            raise ValueError("occupancy_threshold must be in (0, 1)")
        if self.starvation_tti < 1:
            raise ValueError("starvation_tti must be >= 1")
        if not 0.0 < self.factor <= 1.0:
            raise ValueError("factor must be in (0, 1]")


@dataclass
class Scenario:
    name: str
    duration_tti: int
    flows: list[FlowSpec]
    channel: ChannelParams
    buffersize_bits: int
    policy: Policy = Policy.BCQQ
    seed: int = 0
    qoe_feedback_delay_tti: int = 0
    q_max: float = 100.0
    window_tti: int | None = None  # None = one window spanning the full run
    adjustment: AdjustmentParams = field(default_factory=AdjustmentParams)
    annotations: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.duration_tti < 1:
            raise ValueError("duration_tti must be >= 1")
        if not self.flows:
            raise ValueError("scenario needs at least one flow")
        ids = [f.ue_id for f in self.flows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate ue_id in flows")
        if self.buffersize_bits <= 0:
            raise ValueError("buffersize_bits must be positive")
        if self.qoe_feedback_delay_tti < 0:
            raise ValueError("qoe_feedback_delay_tti must be >= 0")
        if self.window_tti is not None and self.window_tti < 1:
            raise ValueError("window_tti must be >= 1")


@dataclass
class UeState:
    spec: FlowSpec
    buffer: UeBuffer
    cqi: CqiState
    qoe: QoeState
    avg_rate_bps: float = 1.0
    last_served_tti: int = -1
    last_adjust_tti: int | None = None
    delays_tti: list[int] = field(default_factory=list)
    sched_count: int = 0
    # per-TTI drop deltas, kept for trace emission
    _overflow_this_tti: int = 0
    _deadline_this_tti: int = 0


@dataclass
class AdjustmentEvent:
    tti: int
    ue_id: int
    occupancy_ratio: float
    starved_tti: int
    old_load_bps: float
    new_load_bps: float


@dataclass
class UeReport:
    ue_id: int
    traffic_class: str
    arrived_bits: int
    delivered_bits: int
    dropped_overflow_bits: int
    dropped_deadline_bits: int
    buffered_bits: int
    throughput_bps: float
    sched_count: int
    mean_delay_ms: float | None
    p99_delay_ms: float | None
    loss_rate: float | None


@dataclass
class SimReport:
    policy: str
    seed: int
    duration_tti: int
    per_ue: list[UeReport]
    total_arrived_bits: int
    total_delivered_bits: int
    total_throughput_bps: float
    jfi: float | None
    qoe_fi: float | None
    windows: list[WindowRecord]
    adjustment_events: list[AdjustmentEvent]
    trace_rows: list[tuple] | None = None


def _substream(seed: int, ue_id: int, purpose: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(ue_id, purpose))
    return np.random.Generator(np.random.Philox(ss))


_PURPOSE_TRAFFIC = 0
_PURPOSE_CQI = 1


class Simulation:
    """Mutable state for one run; step() executes one TTI."""

    def __init__(self, scenario: Scenario, policy: Policy | None = None,
                 seed: int | None = None, collect_trace: bool = False):
        self.scenario = scenario
        self.policy = policy if policy is not None else scenario.policy
        self.seed = seed if seed is not None else scenario.seed
        self.collect_trace = collect_trace

        init_cqis = scenario.channel.initial_cqi_per_ue or tuple(
            DEFAULT_CQI_PATTERN[i % len(DEFAULT_CQI_PATTERN)]
            for i in range(len(scenario.flows))
        )
        if len(init_cqis) != len(scenario.flows):
            raise ValueError("initial_cqi_per_ue length must match flow count")

        self.ues: list[UeState] = []
        self.traffic_rng: dict[int, np.random.Generator] = {}
        self.cqi_rng: dict[int, np.random.Generator] = {}
        for flow, cqi0 in zip(scenario.flows, init_cqis):
            self.ues.append(
                UeState(
                    spec=flow,
                    buffer=UeBuffer(scenario.buffersize_bits),
                    cqi=CqiState(cqi0),
                    qoe=QoeState(ue_id=flow.ue_id, q_max=scenario.q_max),
                )
            )
            self.traffic_rng[flow.ue_id] = _substream(self.seed, flow.ue_id, _PURPOSE_TRAFFIC)
            self.cqi_rng[flow.ue_id] = _substream(self.seed, flow.ue_id, _PURPOSE_CQI)

        self.window = MetricsWindow([u.spec.ue_id for u in self.ues], TTI_SECONDS)
        self.window_records: list[WindowRecord] = []
        self.adjustment_events: list[AdjustmentEvent] = []
        self.trace_rows: list[tuple] = []
        # q feedback pipeline: index 0 is the value the scheduler sees now.
        delay = scenario.qoe_feedback_delay_tti
        self.q_pipe: dict[int, deque[float]] = {
            u.spec.ue_id: deque([1.0] * (delay + 1), maxlen=delay + 1) for u in self.ues
        }

    def step(self, tti: int) -> SchedDecision:
        sc = self.scenario

        # 1. arrivals
        for u in self.ues:
            pkts = arrivals(u.spec, tti, self.traffic_rng[u.spec.ue_id])
            arrived = 0
            overflow_before = u.buffer.dropped_overflow_bits
            for p in pkts:
                arrived += p.size_bits
                u.buffer.enqueue(p)
            if arrived:
                u.qoe.update_requirement(arrived)
                self.window.record_arrival(u.spec.ue_id, arrived)
            overflow_delta = u.buffer.dropped_overflow_bits - overflow_before
            if overflow_delta:
                self.window.record_drops(u.spec.ue_id, overflow_delta, 0)
            u._overflow_this_tti = overflow_delta

        # 2. deadline expiry
        for u in self.ues:
            dropped = u.buffer.expire(tti)
            if dropped:
                self.window.record_drops(u.spec.ue_id, 0, dropped)
            u._deadline_this_tti = dropped

        # 3. channel
        for u in self.ues:
            u.cqi = cqi_step(u.cqi, sc.channel, self.cqi_rng[u.spec.ue_id])

        # 4. QoE feedback (possibly delayed)
        q_eff: dict[int, float] = {}
        for u in self.ues:
            pipe = self.q_pipe[u.spec.ue_id]
            pipe.append(u.qoe.q_of())
            q_eff[u.spec.ue_id] = pipe[0]

        # 5. selection
        inputs = [
            UeSchedInput(
                ue_id=u.spec.ue_id,
                buffer_bits=u.buffer.occupied_bits,
                buffersize_bits=sc.buffersize_bits,
                alpha=u.spec.alpha,
                beta_s=u.spec.beta_ms / 1000.0,
                q=q_eff[u.spec.ue_id],
                rate_bps=rate_of(u.cqi.cqi, sc.channel),
                hol_delay_s=u.buffer.hol_delay_tti(tti) * TTI_SECONDS,
                avg_rate_bps=u.avg_rate_bps,
                last_served_tti=u.last_served_tti,
            )
            for u in self.ues
        ]
        decision = select(inputs, self.policy)

        # 6. transmission
        tx_by_ue: dict[int, int] = {}
        if decision.selected_ue is not None:
            winner = next(u for u in self.ues if u.spec.ue_id == decision.selected_ue)
            tx, delays = winner.buffer.drain(decision.budget_bits, tti)
            tx_by_ue[winner.spec.ue_id] = tx
            winner.qoe.record_delivered(tx)
            winner.delays_tti.extend(delays)
            winner.sched_count += 1
            winner.last_served_tti = tti
            self.window.record_delivery(winner.spec.ue_id, tx, delays)

        # 7. served-rate EMAs
        for u in self.ues:
            u.avg_rate_bps = update_avg_rate(
                u.avg_rate_bps, tx_by_ue.get(u.spec.ue_id, 0)
            )

        # 8. adjustment trigger
        if sc.adjustment.enabled:
            self._adjustment_check(tti)

        if self.collect_trace:
            by_id = {i.ue_id: i for i in inputs}
            pfn = PRIORITY_FN[self.policy]
            for u in self.ues:
                i = by_id[u.spec.ue_id]
                self.trace_rows.append(
                    (
                        tti,
                        u.spec.ue_id,
                        u.cqi.cqi,
                        i.rate_bps,
                        u.buffer.occupied_bits,
                        i.q,
                        pfn(i),
                        1 if decision.selected_ue == u.spec.ue_id else None,
                        tx_by_ue.get(u.spec.ue_id, 0),
                        u._deadline_this_tti,
                        u._overflow_this_tti,
                    )
                )

        if sc.window_tti is not None and (tti + 1 - self.window.start_tti) >= sc.window_tti:
            self._close_window(tti + 1)
        return decision

    def _adjustment_check(self, tti: int) -> None:
        adj = self.scenario.adjustment
        for u in self.ues:
            if not u.spec.adaptive:
                continue
            ratio = u.buffer.occupied_bits / self.scenario.buffersize_bits
            starved = tti - u.last_served_tti
            if ratio <= adj.occupancy_threshold or starved < adj.starvation_tti:
                continue
            if u.last_adjust_tti is not None and tti - u.last_adjust_tti < adj.starvation_tti:
                continue
            old_load = u.spec.offered_load_bps
            u.spec = apply_adjustment(u.spec, adj.factor)
            u.last_adjust_tti = tti
            self.adjustment_events.append(
                AdjustmentEvent(
                    tti=tti,
                    ue_id=u.spec.ue_id,
                    occupancy_ratio=ratio,
                    starved_tti=starved,
                    old_load_bps=old_load,
                    new_load_bps=u.spec.offered_load_bps,
                )
            )

    def _close_window(self, end_tti: int) -> None:
        self.window_records.append(self.window.close(end_tti))
        for u in self.ues:
            u.qoe.reset_window()

    def run(self) -> SimReport:
        for tti in range(self.scenario.duration_tti):
            self.step(tti)
        if self.window.start_tti < self.scenario.duration_tti:
            self._close_window(self.scenario.duration_tti)
        return self._report()

    def _report(self) -> SimReport:
        duration_s = self.scenario.duration_tti * TTI_SECONDS
        per_ue = []
        for u in self.ues:
            b = u.buffer
            delays = sorted(u.delays_tti)
            mean_delay = (sum(delays) / len(delays)) if delays else None
            p99 = delays[min(len(delays) - 1, int(0.99 * len(delays)))] if delays else None
            dropped = b.dropped_overflow_bits + b.dropped_deadline_bits
            per_ue.append(
                UeReport(
                    ue_id=u.spec.ue_id,
                    traffic_class=u.spec.traffic_class.value,
                    arrived_bits=b.arrived_bits,
                    delivered_bits=b.delivered_bits,
                    dropped_overflow_bits=b.dropped_overflow_bits,
                    dropped_deadline_bits=b.dropped_deadline_bits,
                    buffered_bits=b.occupied_bits,
                    throughput_bps=b.delivered_bits / duration_s,
                    sched_count=u.sched_count,
                    mean_delay_ms=mean_delay,
                    p99_delay_ms=float(p99) if p99 is not None else None,
                    loss_rate=(dropped / b.arrived_bits) if b.arrived_bits else None,
                )
            )
        delivered = [r.delivered_bits for r in per_ue]
        arrived = [r.arrived_bits for r in per_ue]
        jfi_val = jfi([float(d) for d in delivered]) if any(delivered) else None
        pairs = [
            (float(d), float(a)) for d, a in zip(delivered, arrived) if a > 0
        ]
        fi_val = qoe_fi(pairs) if len(pairs) >= 2 else None
        return SimReport(
            policy=self.policy.value,
            seed=self.seed,
            duration_tti=self.scenario.duration_tti,
            per_ue=per_ue,
            total_arrived_bits=sum(arrived),
            total_delivered_bits=sum(delivered),
            total_throughput_bps=sum(delivered) / duration_s,
            jfi=jfi_val,
            qoe_fi=fi_val,
            windows=self.window_records,
            adjustment_events=self.adjustment_events,
            trace_rows=self.trace_rows if self.collect_trace else None,
        )


def run(scenario: Scenario, policy: Policy | None = None, seed: int | None = None,
        collect_trace: bool = False) -> SimReport:
    """Execute one deterministic run of the scenario."""
    return Simulation(scenario, policy=policy, seed=seed, collect_trace=collect_trace).run()
