"""Batch experiment runner: estimators vs. exact oracles over seeded trials.

A campaign is described by one declarative JSON config (schema below), runs
a fixed number of trials with per-trial seeds derived from a base seed, and
writes a CSV table plus a JSON mirror. Replaying the same config produces
byte-identical outputs; wall time is reported on stderr only, never in the
artifacts.

Config schema (JSON object):

    {
      "estimator": "rle-additive" | "rle-bucketed" | "rle-search" |
                   "rle-refined" | "colors" | "colors-amplified" | "lz",
      "params":    {estimator keyword args, e.g. "epsilon": 0.05},
      "instance":  {"kind": "file", "path": "..."}
                 | {"kind": "generator", "family": "wk|coin|lztight|col2lz",
                    "params": {...}, "seed": 1}
                 | {"kind": "builtin", "name": "ones|alternating|"
                    "random-binary|random-bytes|run-mix", "n": 100000,
                    "seed": 1},
      "trials":    100,
      "base_seed": 7,
      "per_trial_instances": false,   # derive a fresh instance seed per trial
      "min_success_rate": 0.9,
      "output": "out/campaign"        # writes out/campaign.csv / .json
    }
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from ._rng import derive_seed
from .accessor import EstimateReport, QueryCountedString, meets_contract
from .colors import colors_estimate, colors_estimate_amplified
from .config import DEFAULT_CONFIG, EstimatorConfig
from .generators import GeneratorSpec
from .lz import lz_estimate
from .oracles import exact_color_count, exact_lz_cost, exact_rle_cost
from .rle import (
    rle_additive_estimate,
    rle_bucketed_estimate,
    rle_multiplicative_search,
    rle_refined_search,
)

CSV_FIELDS = ["trial", "seed", "estimate", "exact", "queries", "contract_pass", "valid", "error"]


def _run_estimator(name: str, acc: QueryCountedString, params: dict, seed: int) -> EstimateReport:
    if name == "rle-additive":
        return rle_additive_estimate(acc, float(params["epsilon"]), seed)
    if name == "rle-bucketed":
        return rle_bucketed_estimate(
            acc, float(params["epsilon"]), float(params.get("delta", 1 / 3)), seed
        )
    if name == "rle-search":
        return rle_multiplicative_search(acc, seed)
    if name == "rle-refined":
        return rle_refined_search(acc, float(params["gamma"]), seed)
    if name == "colors":
        return colors_estimate(acc, float(params["lambda"]), seed)
    if name == "colors-amplified":
        return colors_estimate_amplified(
            acc, float(params["lambda"]), float(params.get("delta", 1 / 3)), seed
        )
    if name == "lz":
        return lz_estimate(acc, float(params["A"]), float(params["epsilon"]), seed)
    raise ValueError(f"unknown estimator {name!r}")


def _exact_for(name: str, acc: QueryCountedString) -> float:
    if name.startswith("rle"):
        return float(exact_rle_cost(acc.materialize(), acc.alphabet_size).total_cost)
    if name.startswith("colors"):
        return float(exact_color_count(acc.materialize()))
    return float(exact_lz_cost(acc.materialize()).total_cost)


def build_builtin(name: str, n: int, seed: int) -> np.ndarray:
    """Reference inputs used by campaigns and the test corpora."""
    from ._rng import make_rng

    if name == "ones":
        return np.ones(n, dtype=np.uint8)
    if name == "alternating":
        return (np.arange(n) % 2).astype(np.uint8)
    if name == "random-binary":
        return make_rng(seed).integers(0, 2, size=n).astype(np.uint8)
    if name == "random-bytes":
        return make_rng(seed).integers(0, 256, size=n).astype(np.uint8)
    if name == "run-mix":
        # Half the runs unit length, half length 8, randomly interleaved.
        rng = make_rng(seed)
        n_runs = math.ceil(n / 4.5)
        lengths = np.where(rng.random(n_runs) < 0.5, 1, 8)
        lengths = lengths[np.cumsum(lengths) <= n]
        total = int(lengths.sum())
        if total < n:
            lengths = np.concatenate([lengths, [n - total]])
        bits = (np.arange(lengths.size) % 2).astype(np.uint8)
        return np.repeat(bits, lengths)
    raise ValueError(f"unknown builtin instance {name!r}")


def build_instance(spec: dict, seed: int | None = None) -> QueryCountedString:
    """Materialize the instance description from a campaign config."""
    kind = spec["kind"]
    if kind == "file":
        return QueryCountedString.from_file(spec["path"], spec.get("alphabet_size"))
    if kind == "builtin":
        use_seed = spec.get("seed", 0) if seed is None else seed
        data = build_builtin(spec["name"], int(spec["n"]), int(use_seed))
        return QueryCountedString.from_tokens(data, spec.get("alphabet_size"))
    if kind == "generator":
        use_seed = spec.get("seed", 0) if seed is None else seed
        built = GeneratorSpec(spec["family"], spec.get("params", {}), int(use_seed)).build()
        if isinstance(built, QueryCountedString):
            return built
        return QueryCountedString.from_tokens(built, spec.get("alphabet_size"))
    raise ValueError(f"unknown instance kind {kind!r}")


@dataclass(frozen=True)
class CampaignConfig:
    estimator: str
    params: dict
    instance: dict
    trials: int
    base_seed: int
    per_trial_instances: bool = False
    min_success_rate: float = 0.9
    output: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    @staticmethod
    def from_json_file(path) -> "CampaignConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return CampaignConfig(
            estimator=raw["estimator"],
            params=raw.get("params", {}),
            instance=raw["instance"],
            trials=int(raw["trials"]),
            base_seed=int(raw["base_seed"]),
            per_trial_instances=bool(raw.get("per_trial_instances", False)),
            min_success_rate=float(raw.get("min_success_rate", 0.9)),
            output=raw.get("output"),
        )


@dataclass
class CampaignResult:
    config: CampaignConfig
    rows: list = field(default_factory=list)  # dicts with CSV_FIELDS keys
    success_rate: float = 0.0
    mean_queries: float = 0.0
    wall_time_s: float = 0.0  # stderr-only; excluded from artifacts for replayability

    @property
    def passed(self) -> bool:
        return self.success_rate >= self.config.min_success_rate

    def to_json_dict(self) -> dict:
        return {
            "estimator": self.config.estimator,
            "params": self.config.params,
            "instance": self.config.instance,
            "trials": self.config.trials,
            "base_seed": self.config.base_seed,
            "min_success_rate": self.config.min_success_rate,
            "success_rate": self.success_rate,
            "mean_queries": self.mean_queries,
            "rows": self.rows,
        }

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """Execute all trials; exact costs are computed once per distinct instance."""
    t0 = time.perf_counter()
    rows = []
    passes = 0
    shared_instance = None
    shared_exact = None
    if not config.per_trial_instances:
        shared_instance = build_instance(config.instance)
        shared_exact = _exact_for(config.estimator, shared_instance)
    for trial in range(config.trials):
        seed = derive_seed(config.base_seed, trial)
        if config.per_trial_instances:
            acc = build_instance(config.instance, seed=derive_seed(config.base_seed, trial, "inst"))
            exact = _exact_for(config.estimator, acc)
        else:
            acc, exact = shared_instance, shared_exact
        row = {
            "trial": trial,
            "seed": seed,
            "estimate": None,
            "exact": exact,
            "queries": None,
            "contract_pass": None,
            "valid": 1,
            "error": "",
        }
        try:
            report = _run_estimator(config.estimator, acc, config.params, seed)
        except (ValueError, IndexError) as exc:
            row["valid"] = 0
            row["error"] = str(exc)
            rows.append(row)
            continue
        ok = meets_contract(report, exact, acc.length)
        passes += ok
        row.update(estimate=report.estimate, queries=report.queries_used, contract_pass=int(ok))
        rows.append(row)
    result = CampaignResult(config=config, rows=rows)
    valid_rows = [r for r in rows if r["valid"]]
    result.success_rate = passes / config.trials
    result.mean_queries = (
        float(np.mean([r["queries"] for r in valid_rows])) if valid_rows else 0.0
    )
    result.wall_time_s = time.perf_counter() - t0
    return result


def write_result(result: CampaignResult, output_prefix: str) -> tuple[str, str]:
    csv_path = output_prefix + ".csv"
    json_path = output_prefix + ".json"
    parent = os.path.dirname(output_prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(result.to_csv_text())
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(result.to_json_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return csv_path, json_path


@dataclass(frozen=True)
class AuditRow:
    label: str
    queries_used: int
    ceiling: float

    @property
    def within(self) -> bool:
        return self.queries_used <= self.ceiling


def audit_queries(entries: list, config: EstimatorConfig = DEFAULT_CONFIG) -> list[AuditRow]:
    """Check measured reads against the configured asymptotic ceilings.

    Each entry is a dict with keys ``estimator``, ``n``, ``queries_used``,
    plus the estimator's parameters (``epsilon``, ``delta``, ``A``,
    ``exact`` for the search). Rows exceeding their ceiling are flagged; the
    caller decides whether that is fatal.
    """
    rows = []
    for e in entries:
        name = e["estimator"]
        n = int(e["n"])
        used = int(e["queries_used"])
        if name == "rle-additive":
            ceiling = config.additive_query_ceiling(float(e["epsilon"]), int(e.get("sigma", 2)))
        elif name == "rle-bucketed":
            from .rle import additive_probe_cap

            ell0 = additive_probe_cap(float(e["epsilon"]), int(e.get("sigma", 2)))
            ceiling = config.bucketed_query_ceiling(
                float(e["epsilon"]), float(e.get("delta", 1 / 3)), ell0
            )
        elif name == "rle-search":
            ceiling = config.search_query_ceiling(n, float(e["exact"]))
        elif name == "lz":
            ceiling = config.lz_query_ceiling(n, float(e["A"]), float(e["epsilon"]))
        elif name in ("colors", "colors-amplified"):
            from .colors import amplification_runs, sample_count

            k = amplification_runs(float(e["delta"])) if name == "colors-amplified" else 1
            ceiling = float(k * sample_count(n, float(e["lambda"])))
        else:
            raise ValueError(f"unknown estimator {name!r}")
        rows.append(AuditRow(label=name, queries_used=used, ceiling=ceiling))
    return rows
