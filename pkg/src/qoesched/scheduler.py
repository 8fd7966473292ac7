"""Per-TTI user selection policies behind a common interface.

Policies:

* BCQQ  — buffer occupancy ratio x QoS weight x QoE multiplier x rate
* MLWDF — QoS weight x head-of-line delay x rate / average rate
* PF    — rate / average rate
* RR    — least recently served non-empty UE

The QoS weight is -ln(alpha) / beta_s: stricter loss targets and tighter
delay bounds raise priority. Exactly one UE is granted the full slot per
TTI; an idle decision is returned when every buffer is empty.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TTI_SECONDS = 0.001
AVG_RATE_TC = 1000       # EMA time constant, in TTIs
AVG_RATE_FLOOR = 1.0     # bps, keeps rate ratios finite


class Policy(str, Enum):
    BCQQ = "BCQQ"
    MLWDF = "MLWDF"
    PF = "PF"
    RR = "RR"


@dataclass(slots=True)
class UeSchedInput:
    ue_id: int
    buffer_bits: int
    buffersize_bits: int
    alpha: float
    beta_s: float
    q: float
    rate_bps: float
    hol_delay_s: float
    avg_rate_bps: float
    last_served_tti: int


def qos_weight(alpha: float, beta_s: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if beta_s <= 0.0:
        raise ValueError("beta_s must be positive")
    return -math.log(alpha) / beta_s


def bcqq_priority(u: UeSchedInput) -> float:
    if u.buffer_bits == 0:
        return 0.0
    occupancy = u.buffer_bits / u.buffersize_bits
    return occupancy * qos_weight(u.alpha, u.beta_s) * u.q * u.rate_bps


def mlwdf_priority(u: UeSchedInput) -> float:
    if u.buffer_bits == 0:
        return 0.0
    return qos_weight(u.alpha, u.beta_s) * u.hol_delay_s * u.rate_bps / u.avg_rate_bps


def pf_priority(u: UeSchedInput) -> float:
    if u.buffer_bits == 0:
        return 0.0
    return u.rate_bps / u.avg_rate_bps


def rr_priority(u: UeSchedInput) -> float:
    # Argmax over -last_served picks the least recently served UE.
    if u.buffer_bits == 0:
        return 0.0
    return -float(u.last_served_tti)


PRIORITY_FN = {
    Policy.BCQQ: bcqq_priority,
    Policy.MLWDF: mlwdf_priority,
    Policy.PF: pf_priority,
    Policy.RR: rr_priority,
}


@dataclass
class SchedDecision:
    selected_ue: int | None
    priority: float
    budget_bits: int


def select(inputs: list[UeSchedInput], policy: Policy,
           tti_s: float = TTI_SECONDS) -> SchedDecision:
    """Pick the highest-priority UE among those with queued data.

    Ties break deterministically: least recently served first, then lowest
    ue_id. All buffers empty gives an idle decision.
    """
    if not inputs:
        raise ValueError("need at least one UE")
    priority_fn = PRIORITY_FN[policy]
    best = None
    best_key = None
    for u in inputs:
        if u.buffer_bits == 0:
            continue
        key = (priority_fn(u), -u.last_served_tti, -u.ue_id)
        if best_key is None or key > best_key:
            best, best_key = u, key
    if best is None:
        return SchedDecision(None, 0.0, 0)
    return SchedDecision(best.ue_id, best_key[0], int(best.rate_bps * tti_s))


def update_avg_rate(avg_rate_bps: float, served_bits: int,
                    tti_s: float = TTI_SECONDS, t_c: int = AVG_RATE_TC) -> float:
    """EMA of served rate over t_c TTIs, floored at AVG_RATE_FLOOR."""
    updated = (1.0 - 1.0 / t_c) * avg_rate_bps + (1.0 / t_c) * (served_bits / tti_s)
    return max(updated, AVG_RATE_FLOOR)
