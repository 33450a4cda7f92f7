"""Serialization of orbit-degree reports (JSON primary, CSV secondary).

JSON layout::

    {"node": ..., "mode": ..., "budgets": {...}, "seed": ...,
     "orbits": [{"id": i, "estimate": x, "estimate_clamped": x,
                 "variance": s, "source": tag}, ...],
     "covariances": [{"i": a, "j": b, "value": c}, ...]}

Serialization is byte-stable: keys are sorted and floats use their shortest
round-trip representation, so identical reports dump to identical bytes.
"""

from __future__ import annotations

import csv
import json
from typing import IO

from .estimators import Estimate, OrbitReport


def report_to_dict(report: OrbitReport, node_label: int | None = None) -> dict:
    return {
        "node": report.node if node_label is None else node_label,
        "mode": report.mode,
        "budgets": dict(report.budgets),
        "seed": report.seed,
        "orbits": [
            {
                "id": i,
                "estimate": float(e.value),
                "estimate_clamped": float(e.clamped),
                "variance": float(e.variance),
                "source": e.source,
            }
            for i, e in sorted(report.estimates.items())
        ],
        "covariances": [
            {"i": i, "j": j, "value": float(c)}
            for (i, j), c in sorted(report.covariances.items())
        ],
    }


def report_from_dict(data: dict) -> OrbitReport:
    estimates = {
        int(row["id"]): Estimate(
            float(row["estimate"]), float(row["variance"]), str(row["source"])
        )
        for row in data["orbits"]
    }
    covariances = {
        (int(row["i"]), int(row["j"])): float(row["value"])
        for row in data.get("covariances", [])
    }
    return OrbitReport(
        node=int(data["node"]),
        mode=str(data["mode"]),
        budgets={str(k): int(v) for k, v in data["budgets"].items()},
        seed=None if data.get("seed") is None else int(data["seed"]),
        estimates=estimates,
        covariances=covariances,
    )


def dumps(payload: dict) -> str:
    """Deterministic JSON text for any report payload."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def write_report_csv(report: OrbitReport, fh: IO[str], node_label: int | None = None) -> None:
    """Flat one-row-per-orbit table."""
    node = report.node if node_label is None else node_label
    writer = csv.writer(fh)
    writer.writerow(
        ["node", "mode", "orbit", "estimate", "estimate_clamped", "variance", "source"]
    )
    for i, e in sorted(report.estimates.items()):
        writer.writerow([node, report.mode, i, e.value, e.clamped, e.variance, e.source])
