import dataclasses
import random

import pytest

from vrsp import (
    Graph,
    Label,
    MatrixIndexing,
    RowColumnCover,
    T7Partition,
    cartesian_product,
    contraction_images,
    decompose_fully,
    decompose_t1,
    decompose_t2,
    decompose_t5,
    decompose_t6,
    decompose_t7,
    is_isomorphic,
    verify,
)
from vrsp.decompose import LEAF_NOTE, certificates_agree, t5_violations
from vrsp.errors import PreconditionFailed
from vrsp.iso import IsoWitness
from vrsp.products import pair_id

from .conftest import path, single_arc


def _check(cert, G):
    assert verify(cert, G)
    assert is_isomorphic(cert.recompose(), G) is not None


# --- Theorem 1

def test_t1_fig1(fig1):
    cert = decompose_t1(fig1.graph, fig1.set("X"))
    _check(cert, fig1.graph)
    assert len(cert.recompose()) == 9
    assert cert.theorem == "T1"


def test_t1_sync_clause():
    g = path("a", "a")
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(g, {"p0"})
    assert "only-synchronising" in exc.value.clauses


def test_t1_single_arc():
    g = single_arc()
    cert = decompose_t1(g, {"u"})
    _check(cert, g)
    # contracting a single vertex only renames it
    assert len(cert.factor_left) == len(cert.factor_right) == 2


def test_t1_other_clauses(fig1):
    g = fig1.graph
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(g, {"u1_1", "u1_2"})
    assert "source" in exc.value.clauses
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(g, set(g.vertex_ids))
    assert "proper-subset" in exc.value.clauses
    arcs = [a for a in g.arcs if (a.tail, a.head) != ("u1_1", "v2_2")]
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(Graph(g.vertices, arcs), fig1.set("X"))
    assert "complete-bipartite" in exc.value.clauses
    v = exc.value.violations[exc.value.clauses.index("complete-bipartite")]
    assert v.witness["missing"] == [("u1_1", "v2_2")]


def test_t1_backward_and_sink_clauses():
    a, b = Label("a", 1), Label("b", 1)
    g = Graph(list("sxy"), [("s", "x", a), ("y", "x", b)])
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(g, {"s", "x"})
    assert "backward" in exc.value.clauses
    g = Graph(list("sty"), [("s", "y", a), ("s", "t", b)])
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(g, {"s", "t"})
    assert "sink" in exc.value.clauses


def test_violation_serialises():
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t1(path("a", "a"), {"p0"})
    d = exc.value.violations[0].to_dict()
    assert set(d) == {"clause", "message", "witness"}


# --- Theorem 2

def _chain(shared=False):
    a, b, c = Label("a", 1), Label("b", 1), Label("c", 1)
    arcs = [("w", "x", a), ("x", "y", b), ("y", "z", c)]
    if shared:
        arcs.append(("w", "z", a))
    return Graph(list("wxyz"), arcs)


def test_t2_chain():
    g = _chain()
    cert = decompose_t2(g, {"w"}, {"z"})
    _check(cert, g)
    assert cert.theorem == "T2"


def test_t2_label_clash():
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t2(_chain(shared=True), {"w"}, {"z"})
    assert "label-disjoint" in exc.value.clauses


def test_t2_empty_x2_points_to_t1():
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t2(_chain(), {"w"}, set())
    assert exc.value.clauses == ["x2-empty"]
    assert "1" in exc.value.violations[0].message


# --- Theorem 5

def test_t5_fig1(fig1):
    cert = decompose_t5(fig1.graph, fig1.indexing)
    _check(cert, fig1.graph)
    assert (len(cert.factor_left), len(cert.factor_right)) == (6, 7)


def test_t5_witness_is_row_column_pair(fig1):
    g = fig1.graph
    cert = decompose_t5(g, fig1.indexing)
    left = contraction_images(g, cert.spec_left, allow_whole=cert.allow_whole)
    right = contraction_images(g, cert.spec_right, allow_whole=cert.allow_whole)
    for v in g.vertex_ids:
        assert cert.witness.vertex_map[v] == pair_id(left[v], right[v])
    assert _groups(left) == [["u1_1", "u1_2"], ["v1_1", "v2_1"], ["v1_2", "v2_2"]]
    assert _groups(right) == [["v1_1", "v1_2"], ["v2_1", "v2_2"]]


def _groups(images):
    # nontrivial preimage classes of a contraction
    out = {}
    for v, img in images.items():
        out.setdefault(img, []).append(v)
    return sorted(sorted(vs) for vs in out.values() if len(vs) > 1)


def test_t5_fig2(fig2):
    cert = decompose_t5(fig2.graph, fig2.indexing)
    _check(cert, fig2.graph)


def test_t5_trivial_block_idempotent():
    g = single_arc()
    cert = decompose_t5(g, MatrixIndexing({"u": (1, 1), "v": (2, 2)}))
    _check(cert, g)
    assert is_isomorphic(cert.factor_left, g) and is_isomorphic(cert.factor_right, g)


def test_t5_rejects_incomplete_block(fig1):
    g = fig1.graph
    for arc in [a for a in g.arcs if a.label.action == "d"]:
        h = Graph(g.vertices, [a for a in g.arcs if a != arc])
        with pytest.raises(PreconditionFailed) as exc:
            decompose_t5(h, fig1.indexing)
        assert "requirement-1" in exc.value.clauses or "requirement-2" in exc.value.clauses
        assert t5_violations(h, fig1.indexing)


# --- Theorem 6

def test_t6_fig4(fig4):
    cover = RowColumnCover(dict(enumerate(fig4.family("R"), 1)), dict(enumerate(fig4.family("C"), 1)))
    cert = decompose_t6(fig4.graph, cover)
    _check(cert, fig4.graph)
    sizes = sorted([(len(cert.factor_left), len(cert.factor_left.arcs)), (len(cert.factor_right), len(cert.factor_right.arcs))])
    assert sizes == [(3, 2), (4, 3)]
    assert is_isomorphic(cert.factor_left, path("b", "c")) is not None
    assert is_isomorphic(cert.factor_right, path("d", "e", "f")) is not None


def test_t6_factor_sizes(fig4):
    cover = RowColumnCover.from_indexing(fig4.indexing)
    cert = decompose_t6(fig4.graph, cover)
    assert len(cert.factor_left) == len(cover.rows) and len(cert.factor_right) == len(cover.cols)
    assert len(cert.factor_left) * len(cert.factor_right) == len(fig4.graph)


def test_t6_single_row():
    g = path("a", "b")
    idx = MatrixIndexing({"p0": (1, 1), "p1": (1, 2), "p2": (1, 3)})
    cert = decompose_t6(g, idx)
    _check(cert, g)
    assert len(cert.factor_left) == 1
    assert is_isomorphic(cert.factor_right, g) is not None


def test_t6_random_products():
    rng = random.Random(7)
    for _ in range(10):
        n, m = rng.randint(2, 4), rng.randint(2, 4)
        r = path(*[rng.choice("ab") for _ in range(n - 1)], prefix="r")
        c = path(*[rng.choice("cd") for _ in range(m - 1)], prefix="c")
        g = cartesian_product(r, c)
        idx = MatrixIndexing({f"(r{i},c{j})": (j + 1, i + 1) for i in range(n) for j in range(m)})
        cert = decompose_t6(g, idx)
        _check(cert, g)


def test_t6_rejects_label_clash(fig4):
    arcs = list(fig4.graph.arcs)
    idx = fig4.indexing
    k = next(n for n, a in enumerate(arcs) if idx[a.tail][0] == idx[a.head][0])
    a = arcs[k]
    arcs[k] = (a.tail, a.head, Label("b", 1))
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t6(Graph(fig4.graph.vertices, arcs), idx)
    assert "cartesian-labels" in exc.value.clauses


# --- Theorem 7

def test_t7_fig5(fig5):
    cert = decompose_t7(fig5.graph, fig5.indexing, T7Partition(fig5.family("M")))
    _check(cert, fig5.graph)
    assert cert.warnings == ()


def test_t7_only_bipartite_matches_t5(fig1):
    a = decompose_t7(fig1.graph, fig1.indexing, T7Partition(()))
    b = decompose_t5(fig1.graph, fig1.indexing)
    _check(a, fig1.graph)
    assert certificates_agree(a, b)


def test_t7_only_cartesian_matches_t6(fig4):
    a = decompose_t7(fig4.graph, fig4.indexing, [set(fig4.graph.vertex_ids)])
    b = decompose_t6(fig4.graph, fig4.indexing)
    _check(a, fig4.graph)
    assert certificates_agree(a, b)


def test_t7_maximality_warning():
    b = Label("b", 1)
    g = Graph(["p", "r", "s"], [("p", "s", b), ("r", "s", b)])
    idx = MatrixIndexing({"p": (1, 1), "r": (1, 2), "s": (2, 3)})
    cert = decompose_t7(g, idx, [{"p"}])
    _check(cert, g)
    assert cert.warnings and "column 2" in cert.warnings[0]


def test_t7_part_too_small(fig4):
    # a single row as the Cartesian part leaves row arcs on the bipartite side
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t7(fig4.graph, fig4.indexing, [fig4.family("R")[0]])
    assert "crossing" in exc.value.clauses or "bipartite" in exc.value.clauses


def test_t7_overlapping_parts(fig4):
    rows = fig4.family("R")
    with pytest.raises(PreconditionFailed) as exc:
        decompose_t7(fig4.graph, fig4.indexing, [rows[0] | rows[1], rows[1] | rows[2]])
    assert "cartesian-disjoint" in exc.value.clauses


# --- verify

def test_verify_detects_swapped_witness(fig1):
    cert = decompose_t5(fig1.graph, fig1.indexing)
    m = dict(cert.witness.vertex_map)
    m["v3"], m["v4"] = m["v4"], m["v3"]
    bad = dataclasses.replace(cert, witness=IsoWitness(m))
    assert not verify(bad, fig1.graph)


def test_verify_detects_relabelled_graph(fig1):
    cert = decompose_t5(fig1.graph, fig1.indexing)
    arcs = [(a.tail, a.head, Label("zz", 1) if a.label.action == "e" else a.label) for a in fig1.graph.arcs]
    assert not verify(cert, Graph(fig1.graph.vertices, arcs))


def test_verify_detects_tampered_factor(fig4):
    cert = decompose_t6(fig4.graph, fig4.indexing)
    bad = dataclasses.replace(cert, factor_left=path("b", "b"))
    assert not verify(bad, fig4.graph)
    assert not verify(bad, fig4.graph, check_specs=False)


# --- decompose_fully

def test_fully_fig4(fig4):
    tree = decompose_fully(fig4.graph)
    assert tree.kind == "T6" and tree.depth() == 1
    assert all(c.kind == "leaf" for c in tree.children)
    assert verify(tree.certificate, fig4.graph)


def test_fully_single_arc():
    tree = decompose_fully(single_arc())
    assert tree.kind == "leaf" and tree.note == LEAF_NOTE


def test_fully_fig1(fig1):
    tree = decompose_fully(fig1.graph)
    assert tree.kind in ("T1", "T5")
    assert verify(tree.certificate, fig1.graph)
    tree = decompose_fully(fig1.graph, fig1.indexing)
    assert tree.kind in ("T1", "T5")
    assert verify(tree.certificate, fig1.graph)


def test_fully_components(fig4):
    from vrsp import disjoint_union

    g = disjoint_union([fig4.graph, single_arc()])
    tree = decompose_fully(g)
    assert tree.kind == "components" and len(tree.children) == 2
    assert sorted(c["kind"] for c in tree.to_dict()["children"]) == ["T6", "leaf"]


def test_fully_certificates_all_verify():
    rng = random.Random(3)
    from vrsp.generate import random_graph

    def walk(t):
        if t.certificate is not None:
            assert verify(t.certificate, t.graph)
        for c in t.children:
            walk(c)

    for _ in range(25):
        walk(decompose_fully(random_graph(rng, rng.randint(2, 7), p=0.4)))
