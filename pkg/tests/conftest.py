import numpy as np
import pytest

from fpcomm import _kernels
from fpcomm.graph import Graph


def brute_fp_correct(g: Graph, labels) -> int:
    """Direct pair-by-pair count of correctly interpreted pairs."""
    labels = np.asarray(labels)
    n = g.n
    a = np.zeros((n, n), dtype=bool)
    e = g.edges()
    a[e[:, 0], e[:, 1]] = True
    a[e[:, 1], e[:, 0]] = True
    iu, ju = np.triu_indices(n, 1)
    same = labels[iu] == labels[ju]
    return int(np.count_nonzero(same == a[iu, ju]))


def random_graph(rng, n, p=None) -> Graph:
    if p is None:
        p = rng.uniform(0.05, 0.9)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.shape[0]) < p
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]))


def two_k4_graph() -> Graph:
    """Two K4 blocks {0..3}, {4..7} with 9 cross edges, no node having more
    than 3 neighbours in the other block."""
    k4a = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    k4b = [(a + 4, b + 4) for a, b in k4a]
    cross = [(0, 4), (0, 5), (0, 6), (1, 4), (1, 5), (2, 6), (2, 7), (3, 6), (3, 7)]
    return Graph.from_edges(8, k4a + k4b + cross)


def hub_clique_graph() -> Graph:
    """K10 on 0..9, K5s on 10..14 and 15..19 with 13 edges between the K5s;
    node 0 is adjacent to every other node."""
    edges = [(a, b) for a in range(10) for b in range(a + 1, 10)]
    for lo in (10, 15):
        edges += [(a, b) for a in range(lo, lo + 5) for b in range(a + 1, lo + 5)]
    edges += [(0, x) for x in range(10, 20)]
    between = [(a, b) for a in range(10, 15) for b in range(15, 20)][:13]
    return Graph.from_edges(20, edges + between)


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    _kernels.warmup()


# -- acceptance summary ---------------------------------------------------

_ACCEPTANCE: dict[str, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        key = marker.args[0]
        detail = dict(item.user_properties).get("detail", "")
        if rep.skipped:
            status, detail = "NOT RUN", str(rep.longrepr[-1]).removeprefix("Skipped: ")
        elif rep.passed:
            status = "PASS"
        else:
            status = "FAIL"
            if not detail:
                detail = rep.longreprtext.strip().splitlines()[-1][:160] if rep.longreprtext else ""
        _ACCEPTANCE[f"{key}::{item.callspec.id if hasattr(item, 'callspec') else ''}"] = (status, marker.args[1], detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: (int(k.split("::")[0].split(".")[0]), k)):
        status, title, detail = _ACCEPTANCE[key]
        crit, param = key.split("::")
        label = f"{title} [{param}]" if param else title
        terminalreporter.write_line(f"{status:7} criterion {crit:>2}: {label}" + (f" -- {detail}" if detail else ""))
