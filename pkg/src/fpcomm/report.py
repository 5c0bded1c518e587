"""Run reports shared by the CLI ``run``, ``score`` and ``bench`` commands."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from importlib import resources

from ._accel import backend_name
from .graph import Graph
from .quality import Partition, fp, modularity


@dataclass
class RunReport:
    dataset: str
    algorithm: str
    parameters: dict
    n: int
    m: int
    fp: float
    fp_fraction: str
    fp_correct: int
    fp_total: int
    modularity: float | None
    modules: int
    size_histogram: dict[str, int]
    wall_time_ms: float
    backend: str = field(default_factory=backend_name)

    def to_dict(self) -> dict:
        return asdict(self)


def scores(g: Graph, p: Partition) -> dict:
    """fp (rounded and exact), modularity and module count for a partition."""
    s = fp(g, p)
    hist = Counter(len(c) for c in p.members.values())
    return {
        "fp": round(s.value, 4),
        "fp_fraction": str(s),
        "fp_correct": s.correct,
        "fp_total": s.total,
        "modularity": modularity(g, p) if g.m else None,
        "modules": len(p),
        "size_histogram": {str(k): hist[k] for k in sorted(hist)},
    }


def make_report(dataset: str, algorithm: str, parameters: dict, g: Graph, p: Partition, wall_time_ms: float) -> RunReport:
    return RunReport(
        dataset=dataset,
        algorithm=algorithm,
        parameters=parameters,
        n=g.n,
        m=g.m,
        wall_time_ms=round(wall_time_ms, 3),
        **scores(g, p),
    )


def report_schema() -> dict:
    return json.loads((resources.files("fpcomm") / "report.schema.json").read_text())
