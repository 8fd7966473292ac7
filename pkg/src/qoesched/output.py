"""Byte-stable result emission and cross-policy comparison.

All files are deterministic for a given (scenario, seed): JSON is dumped
with sorted keys, CSV columns are fixed, integers are written verbatim and
reals with 9 significant digits.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Any

from .engine import SimReport
from .scenario import scenario_to_dict
from .engine import Scenario

TRACE_COLUMNS = (
    "tti,ue,cqi,rate_bps,buffer_bits,q,priority,selected,"
    "tx_bits,dropped_deadline_bits,dropped_overflow_bits"
)
METRICS_COLUMNS = "policy,seed,window,start_tti,end_tti,tx_bits,throughput_bps,jfi,qoe_fi"


def fmt_real(x: float) -> str:
    """Reals with 9 significant digits; lossless to reparse at this width."""
    return f"{x:.9g}"


def fmt_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_real(v)
    return str(v)


def _round_reals(obj: Any) -> Any:
    """Recursively round floats to 9 significant digits for stable JSON."""
    if isinstance(obj, float):
        return float(fmt_real(obj))
    if isinstance(obj, dict):
        return {k: _round_reals(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_reals(v) for v in obj]
    return obj


def _dump_json(obj: Any, path: Path) -> None:
    path.write_text(json.dumps(_round_reals(obj), indent=2, sort_keys=True) + "\n")


def run_to_dict(report: SimReport) -> dict:
    return {
        "policy": report.policy,
        "seed": report.seed,
        "duration_tti": report.duration_tti,
        "total_arrived_bits": report.total_arrived_bits,
        "total_delivered_bits": report.total_delivered_bits,
        "total_throughput_bps": report.total_throughput_bps,
        "jfi": report.jfi,
        "qoe_fi": report.qoe_fi,
        "per_ue": [asdict(r) for r in report.per_ue],
        "adjustment_events": [asdict(e) for e in report.adjustment_events],
    }


def emit(reports: list[SimReport], scenario: Scenario, out_dir: str | Path,
         trace: bool = False) -> list[Path]:
    """Write summary.json, metrics.csv, and optional per-run traces.

    A single traced run writes trace.csv; multiple traced runs write
    trace_<policy>_<seed>.csv each.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    summary = {
        "scenario": scenario_to_dict(scenario),
        "runs": [run_to_dict(r) for r in reports],
    }
    summary_path = out / "summary.json"
    _dump_json(summary, summary_path)
    written.append(summary_path)

    lines = [METRICS_COLUMNS]
    for r in reports:
        for w in r.windows:
            lines.append(
                ",".join(
                    fmt_value(v)
                    for v in (
                        r.policy, r.seed, w.index, w.start_tti, w.end_tti,
                        w.tx_bits, w.throughput_bps, w.jfi, w.qoe_fi,
                    )
                )
            )
    metrics_path = out / "metrics.csv"
    metrics_path.write_text("\n".join(lines) + "\n")
    written.append(metrics_path)

    if trace:
        traced = [r for r in reports if r.trace_rows is not None]
        for r in traced:
            name = "trace.csv" if len(traced) == 1 else f"trace_{r.policy}_{r.seed}.csv"
            rows = [TRACE_COLUMNS]
            rows.extend(",".join(fmt_value(v) for v in row) for row in r.trace_rows)
            p = out / name
            p.write_text("\n".join(rows) + "\n")
            written.append(p)
    return written


class CompareError(ValueError):
    pass


def load_summaries(in_dir: str | Path) -> list[dict]:
    paths = sorted(Path(in_dir).glob("**/summary.json"))
    if not paths:
        raise CompareError(f"no summary.json found under {in_dir}")
    return [json.loads(p.read_text()) for p in paths]


def compare(summaries: list[dict]) -> dict:
    """Compare policies run on the identical scenario.

    Emits per-seed and mean-over-seeds throughput ratios and fairness
    indices, plus flags for BCQQ beating MLWDF on throughput and on the
    QoE fairness index (lower is better).
    """
    base = summaries[0]["scenario"]
    for s in summaries[1:]:
        sc = dict(s["scenario"])
        ref = dict(base)
        # per-run seed/policy overrides are not scenario mismatches
        for k in ("seed", "policy"):
            sc.pop(k, None)
            ref.pop(k, None)
        if sc != ref:
            raise CompareError("summaries come from mismatched scenarios")

    by_policy: dict[str, dict[int, dict]] = {}
    for s in summaries:
        for run in s["runs"]:
            by_policy.setdefault(run["policy"], {})[run["seed"]] = run
    if len(by_policy) < 2:
        raise CompareError("compare requires at least two policies")

    policies = sorted(by_policy)
    seeds = sorted(set.intersection(*(set(v) for v in by_policy.values())))
    if not seeds:
        raise CompareError("no common seeds across policies")

    def mean(xs):
        xs = [x for x in xs if x is not None]
        return sum(xs) / len(xs) if xs else None

    policy_stats = {
        p: {
            "mean_total_throughput_bps": mean(
                [by_policy[p][s]["total_throughput_bps"] for s in seeds]
            ),
            "mean_jfi": mean([by_policy[p][s]["jfi"] for s in seeds]),
            "mean_qoe_fi": mean([by_policy[p][s]["qoe_fi"] for s in seeds]),
        }
        for p in policies
    }

    per_seed = []
    for s in seeds:
        row = {
            "seed": s,
            "throughput_bps": {p: by_policy[p][s]["total_throughput_bps"] for p in policies},
            "jfi": {p: by_policy[p][s]["jfi"] for p in policies},
            "qoe_fi": {p: by_policy[p][s]["qoe_fi"] for p in policies},
        }
        if "MLWDF" in by_policy:
            ref = by_policy["MLWDF"][s]["total_throughput_bps"]
            if ref:
                row["throughput_ratio_vs_mlwdf"] = {
                    p: by_policy[p][s]["total_throughput_bps"] / ref for p in policies
                }
        per_seed.append(row)

    result = {
        "policies": policy_stats,
        "seeds": seeds,
        "per_seed": per_seed,
    }
    if "MLWDF" in by_policy:
        ref = policy_stats["MLWDF"]["mean_total_throughput_bps"]
        result["mean_throughput_ratio_vs_mlwdf"] = {
            p: policy_stats[p]["mean_total_throughput_bps"] / ref for p in policies
        }
    flags = {"bcqq_throughput_exceeds_mlwdf": False, "bcqq_qoefi_below_mlwdf": False}
    if "BCQQ" in by_policy and "MLWDF" in by_policy:
        b, m = policy_stats["BCQQ"], policy_stats["MLWDF"]
        flags["bcqq_throughput_exceeds_mlwdf"] = (
            b["mean_total_throughput_bps"] > m["mean_total_throughput_bps"]
        )
        if b["mean_qoe_fi"] is not None and m["mean_qoe_fi"] is not None:
            flags["bcqq_qoefi_below_mlwdf"] = b["mean_qoe_fi"] < m["mean_qoe_fi"]
    result["flags"] = flags
    return result


def comparison_table(result: dict) -> str:
    lines = [
        f"{'policy':<8} {'mean tput (Mbps)':>18} {'mean JFI':>10} {'mean QoE_FI':>12}"
    ]
    for p, st in sorted(result["policies"].items()):
        tput = st["mean_total_throughput_bps"] / 1e6
        jfi_s = fmt_real(st["mean_jfi"]) if st["mean_jfi"] is not None else "-"
        fi_s = fmt_real(st["mean_qoe_fi"]) if st["mean_qoe_fi"] is not None else "-"
        lines.append(f"{p:<8} {tput:>18.3f} {jfi_s:>10} {fi_s:>12}")
    ratios = result.get("mean_throughput_ratio_vs_mlwdf")
    if ratios:
        lines.append("throughput ratio vs MLWDF: " + ", ".join(
            f"{p}={fmt_real(v)}" for p, v in sorted(ratios.items())
        ))
    for k, v in result["flags"].items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def write_comparison(result: dict, out_dir: str | Path) -> Path:
    p = Path(out_dir) / "comparison.json"
    _dump_json(result, p)
    return p
