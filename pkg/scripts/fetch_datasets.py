"""Download benchmark graphs into the data directory.

    python scripts/fetch_datasets.py [name ...]        # default: dolphins facebook arxiv
    python scripts/fetch_datasets.py --all
    FPCOMM_DATA=/big/disk python scripts/fetch_datasets.py youtube

SNAP files are stored as published (gzipped edge lists). The dolphins network
ships as GML inside a zip, so it is converted to a plain edge list.
"""

import argparse
import io
import re
import sys
import urllib.request
import zipfile

from fpcomm import datasets

DEFAULT = ("dolphins", "facebook", "arxiv")


def gml_edges(text: str):
    for block in re.finditer(r"edge\s*\[(.*?)\]", text, re.S):
        body = block.group(1)
        s = re.search(r"source\s+(-?\d+)", body)
        t = re.search(r"target\s+(-?\d+)", body)
        if s and t:
            yield int(s.group(1)), int(t.group(1))


def fetch(name: str, force: bool = False) -> None:
    fname, url = datasets.EXTERNAL[name]
    dest = datasets.data_dir() / fname
    if dest.exists() and not force:
        print(f"{name}: already at {dest}")
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    print(f"{name}: fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as resp:
        payload = resp.read()
    if url.endswith(".zip"):
        with zipfile.ZipFile(io.BytesIO(payload)) as zf:
            gml = next(n for n in zf.namelist() if n.endswith(".gml"))
            text = zf.read(gml).decode("utf-8", "replace")
        lines = [f"# converted from {gml}\n"] + [f"{u} {v}\n" for u, v in gml_edges(text)]
        dest.write_text("".join(lines))
    else:
        dest.write_bytes(payload)
    g, _ = datasets.load(name)
    print(f"{name}: n={g.n} m={g.m} -> {dest}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="download benchmark graphs")
    ap.add_argument("names", nargs="*", help=f"any of: {', '.join(datasets.EXTERNAL)}")
    ap.add_argument("--all", action="store_true")
    ap.add_argument("--force", action="store_true", help="download again even if present")
    args = ap.parse_args(argv)
    names = list(datasets.EXTERNAL) if args.all else (args.names or list(DEFAULT))
    failed = 0
    for name in names:
        if name not in datasets.EXTERNAL:
            print(f"unknown dataset {name!r}", file=sys.stderr)
            failed += 1
            continue
        try:
            fetch(name, args.force)
        except OSError as exc:
            print(f"{name}: download failed: {exc}", file=sys.stderr)
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
