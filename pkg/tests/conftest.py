import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from vrsp import Graph, Label, Vertex
from vrsp.document import load

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "vrsp" / "fixtures"
FIGURES = ("fig1", "fig1_left", "fig1_right", "fig2", "fig3", "fig4", "fig5")


def fixture_doc(name):
    return load(FIXTURES / f"{name}.json")


@pytest.fixture(scope="session")
def fig1():
    return fixture_doc("fig1")


@pytest.fixture(scope="session")
def fig2():
    return fixture_doc("fig2")


@pytest.fixture(scope="session")
def fig4():
    return fixture_doc("fig4")


@pytest.fixture(scope="session")
def fig5():
    return fixture_doc("fig5")


def path(*actions, prefix="p"):
    verts = [f"{prefix}{k}" for k in range(len(actions) + 1)]
    return Graph(verts, [(verts[k], verts[k + 1], Label(a)) for k, a in enumerate(actions)])


def single_arc(action="a", weight=1, tail="u", head="v"):
    return Graph([tail, head], [(tail, head, Label(action, weight))])


@st.composite
def dags(draw, max_vertices=6, actions="abc", weights=("1",), min_vertices=0):
    """Random labelled DAG; arcs go from lower to higher position, ids are shuffled."""
    n = draw(st.integers(min_vertices, max_vertices))
    verts = [f"g{k}" for k in range(n)]
    order = draw(st.permutations(verts))
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            for act in actions:
                if draw(st.integers(0, 9)) < 2:
                    arcs.append((order[i], order[j], Label(act, draw(st.sampled_from(weights)))))
    return Graph([Vertex(v) for v in verts], arcs)


def renamed(g, seed=0, prefix="r"):
    """Copy of ``g`` with shuffled fresh ids."""
    ids = list(g.vertex_ids)
    fresh = [f"{prefix}{k}" for k in range(len(ids))]
    random.Random(seed).shuffle(fresh)
    ren = dict(zip(ids, fresh))
    return Graph(fresh, [(ren[a.tail], ren[a.head], a.label) for a in g.arcs])


# acceptance criteria report: one pass/fail line per criterion after the run
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(number)
    _CRITERIA[number] = (title, ok and (prev is None or prev[1]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
