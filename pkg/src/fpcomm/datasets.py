"""Bundled fixture graphs and lookup of downloaded benchmark edge lists."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .graph import Graph, load_edge_list

BUNDLED = ("karate", "florentine", "lesmis", "football")

# name -> (file name in the data directory, source URL)
EXTERNAL = {
    "dolphins": ("dolphins.txt", "http://www-personal.umich.edu/~mejn/netdata/dolphins.zip"),
    "email-eu-core": ("email-Eu-core.txt.gz", "https://snap.stanford.edu/data/email-Eu-core.txt.gz"),
    "facebook": ("facebook_combined.txt.gz", "https://snap.stanford.edu/data/facebook_combined.txt.gz"),
    "arxiv": ("ca-GrQc.txt.gz", "https://snap.stanford.edu/data/ca-GrQc.txt.gz"),
    "wikivote": ("wiki-Vote.txt.gz", "https://snap.stanford.edu/data/wiki-Vote.txt.gz"),
    "ca-condmat": ("ca-CondMat.txt.gz", "https://snap.stanford.edu/data/ca-CondMat.txt.gz"),
    "epinions": ("soc-Epinions1.txt.gz", "https://snap.stanford.edu/data/soc-Epinions1.txt.gz"),
    "slashdot0902": ("soc-Slashdot0902.txt.gz", "https://snap.stanford.edu/data/soc-Slashdot0902.txt.gz"),
    "dblp": ("com-dblp.ungraph.txt.gz", "https://snap.stanford.edu/data/bigdata/communities/com-dblp.ungraph.txt.gz"),
    "web-notredame": ("web-NotreDame.txt.gz", "https://snap.stanford.edu/data/web-NotreDame.txt.gz"),
    "youtube": ("com-youtube.ungraph.txt.gz", "https://snap.stanford.edu/data/bigdata/communities/com-youtube.ungraph.txt.gz"),
    "livejournal": ("com-lj.ungraph.txt.gz", "https://snap.stanford.edu/data/bigdata/communities/com-lj.ungraph.txt.gz"),
}


def data_dir() -> Path:
    """``$FPCOMM_DATA`` if set, else ``./data``."""
    return Path(os.environ.get("FPCOMM_DATA", "data"))


def bundled_path(name: str):
    if name not in BUNDLED:
        raise KeyError(f"no bundled dataset {name!r}; bundled: {', '.join(BUNDLED)}")
    return resources.files("fpcomm") / "data" / f"{name}.txt"


def external_path(name: str) -> Path | None:
    """Path of a downloaded dataset, or ``None`` when it is not present."""
    fname, _ = EXTERNAL[name]
    for cand in (data_dir() / fname, data_dir() / fname.removesuffix(".gz")):
        if cand.exists():
            return cand
    return None


def load(name: str) -> tuple[Graph, object]:
    if name in BUNDLED:
        with bundled_path(name).open("rb") as fh:
            return load_edge_list(fh)
    if name in EXTERNAL:
        path = external_path(name)
        if path is None:
            raise FileNotFoundError(
                f"dataset {name!r} not found in {data_dir()}; run scripts/fetch_datasets.py {name}"
            )
        return load_edge_list(path)
    raise KeyError(f"unknown dataset {name!r}")
