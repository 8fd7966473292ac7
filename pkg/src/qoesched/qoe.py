"""Per-UE QoE tracking: the scheduler multiplier q and window demand volume.

Within a metrics window each UE accumulates y_bits (bits actually delivered)
and y_req_bits (bits that arrived, i.e. the volume that would have to cross
the air interface to fully satisfy the user). The scheduler multiplier is
the unmet-demand ratio, clamped to [1, q_max]: fully served users get 1,
underserved users get proportionally more, capped.

The default model lives behind q_of() so alternative QoE models can be
swapped in without touching the scheduler.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass
class QoeState:
    ue_id: int
    q_max: float = 100.0
    y_bits: int = 0
    y_req_bits: int = 0

    def update_requirement(self, arrived_bits_this_tti: int) -> None:
        if arrived_bits_this_tti < 0:
            raise ValueError("arrived bits must be non-negative")
        self.y_req_bits += arrived_bits_this_tti

    def record_delivered(self, bits: int) -> None:
        if bits < 0:
            raise ValueError("delivered bits must be non-negative")
        self.y_bits += bits

    def q_of(self) -> float:
        """Scheduler multiplier: clamp(y_req / max(y, 1), 1, q_max)."""
        raw = self.y_req_bits / max(self.y_bits, 1)
        return min(max(raw, 1.0), self.q_max)

    def satisfaction(self) -> float | None:
        """QoE satisfaction ratio y / y_req; None when nothing arrived."""
        if self.y_req_bits == 0:
            return None
        return self.y_bits / self.y_req_bits

    def reset_window(self) -> None:
        self.y_bits = 0
        self.y_req_bits = 0
