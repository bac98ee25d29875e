"""Decomposition of a graph into two VRSP factors, with certificates.

Every procedure checks the hypotheses of its theorem, builds the two
factors by contraction, and then recomposes them: the certificate is only
returned when the product of the factors is isomorphic to the input under
the map ``v -> (image of v in left factor, image of v in right factor)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .bipartite import classify_block, label_blocks
from .errors import GraphError, NotBipartite, PreconditionFailed, Violation
from .graph import (
    ContractionSpec,
    Graph,
    arc_induced_subgraph,
    components,
    contract_seq,
    contraction_images,
    cut,
    induced_subgraph,
    level_assignment,
    sink_set,
    sort_ids,
    source_set,
)
from .iso import IsoWitness, is_isomorphic
from .matrix import (
    MatrixIndexing,
    RowColumnCover,
    grid_intersections,
    infer_cartesian_cover,
    is_grid,
    validate_bipartite_matrix_graph,
    validate_cartesian_matrix_graph,
)
from .products import pair_id, vrsp

THEOREMS = ("T1", "T2", "T5", "T6", "T7")


@dataclass(frozen=True)
class DecompositionCertificate:
    """Two factors, the contractions that produced them, and a witness.

    ``witness`` maps every vertex of the decomposed graph to the product
    vertex ``(left image, right image)`` of ``vrsp(factor_left, factor_right)``.
    """

    theorem: str
    factor_left: Graph
    factor_right: Graph
    spec_left: ContractionSpec
    spec_right: ContractionSpec
    witness: IsoWitness
    allow_whole: bool = False
    warnings: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=False)

    @property
    def product_to_graph(self) -> IsoWitness:
        return self.witness.inverse()

    def recompose(self) -> Graph:
        return vrsp(self.factor_left, self.factor_right)


def _fail(theorem, violations):
    if violations:
        raise PreconditionFailed(theorem, violations)


def _certify(theorem, G: Graph, spec_left, spec_right, *, allow_whole=False, warnings=(), details=None):
    try:
        left = contract_seq(G, spec_left, allow_whole=allow_whole)
        right = contract_seq(G, spec_right, allow_whole=allow_whole)
    except GraphError as exc:
        raise PreconditionFailed(theorem, [Violation("contraction", str(exc))]) from exc
    img_l = contraction_images(G, spec_left, allow_whole=allow_whole)
    img_r = contraction_images(G, spec_right, allow_whole=allow_whole)
    phi = {v: pair_id(img_l[v], img_r[v]) for v in G.vertex_ids}
    prod = vrsp(left, right)
    Z = set(phi.values())
    problems = []
    if len(Z) != len(G):
        clash = {}
        for v, z in phi.items():
            clash.setdefault(z, []).append(v)
        problems.append(Violation("z-set", "distinct vertices share a product vertex",
                                  [sort_ids(vs) for vs in clash.values() if len(vs) > 1]))
    else:
        extra = set(prod.vertex_ids) - Z
        missing = Z - set(prod.vertex_ids)
        if extra or missing:
            problems.append(Violation("z-set", "product vertices differ from the images of V(G)",
                                      {"surviving_extra": extra, "pruned": missing}))
        elif not IsoWitness(phi).validates(G, prod):
            problems.append(Violation("z-set", "arcs of the product differ from the arcs of G"))
    _fail(theorem, problems)
    return DecompositionCertificate(theorem, left, right, ContractionSpec(spec_left.sets, spec_left.names),
                                    ContractionSpec(spec_right.sets, spec_right.names), IsoWitness(phi),
                                    allow_whole, tuple(warnings), details or {})


def _check_ids(theorem, G, sets: dict):
    bad = {k: sort_ids(set(s) - set(G.vertex_ids)) for k, s in sets.items() if set(s) - set(G.vertex_ids)}
    if bad:
        raise PreconditionFailed(theorem, [Violation("unknown-vertex", "vertices not in G", bad)])


def _complete_by_label(arcs, where) -> list[Violation]:
    out = []
    groups = {}
    for a in arcs:
        groups.setdefault(a.label, []).append(a)
    for lab, arcs_l in sorted(groups.items()):
        tails = {a.tail for a in arcs_l}
        heads = {a.head for a in arcs_l}
        have = {(a.tail, a.head) for a in arcs_l}
        missing = [(t, h) for t in sort_ids(tails) for h in sort_ids(heads) if (t, h) not in have]
        if missing:
            out.append(Violation("complete-bipartite",
                                 f"arcs labelled {lab} in {where} do not form a complete bipartite graph",
                                 {"label": str(lab), "missing": missing[:5]}))
    return out


def _labels(arcs):
    return {a.label for a in arcs}


def t1_violations(G: Graph, X: Iterable[str]) -> list[Violation]:
    """Hypotheses of the single-cut decomposition that ``(G, X)`` violates."""
    X = frozenset(X)
    _check_ids("T1", G, {"X": X})
    V = frozenset(G.vertex_ids)
    Y = V - X
    if not X or not Y:
        return [Violation("proper-subset", "X must be a nonempty proper subset of V(G)")]
    c = cut(G, X, Y)
    v = _complete_by_label(c.forward | c.backward, "[X,Y]")
    cut_l = _labels(c.arcs)
    in_x = _labels(induced_subgraph(G, X).arcs)
    in_y = _labels(induced_subgraph(G, Y).arcs)
    clash = (in_x & (cut_l | in_y)) | (in_y & cut_l)
    if clash:
        v.append(Violation("only-synchronising", "labels inside X or Y also occur elsewhere",
                           sorted(map(str, clash))))
    src = source_set(G) - X
    if src:
        v.append(Violation("source", "sources outside X", src))
    # out-degree pruning would remove (x, ~X) for a sink x of G inside X
    dead = sink_set(G) & X
    if dead:
        v.append(Violation("sink", "sinks of G inside X", dead))
    if c.backward:
        v.append(Violation("backward", "[X,Y] has backward arcs", sorted(c.backward)))
    return v


def decompose_t1(G: Graph, X: Iterable[str]) -> DecompositionCertificate:
    """Split along a cut ``[X, V - X]``; factors are ``(G/Y, G/X)``."""
    X = frozenset(X)
    _fail("T1", t1_violations(G, X))
    Y = frozenset(G.vertex_ids) - X
    return _certify("T1", G, ContractionSpec([Y], ["~Y"]), ContractionSpec([X], ["~X"]))


def t2_violations(G: Graph, X1: Iterable[str], X2: Iterable[str]) -> list[Violation]:
    """Hypotheses of the three-cut decomposition that ``(G, X1, X2)`` violates."""
    X1, X2 = frozenset(X1), frozenset(X2)
    _check_ids("T2", G, {"X1": X1, "X2": X2})
    if not X2:
        return [Violation("x2-empty", "X2 is empty; use decompose_t1 instead")]
    V = frozenset(G.vertex_ids)
    Y = V - X1 - X2
    if not X1 or not Y or X1 & X2:
        return [Violation("partition", "X1, X2 and Y must be disjoint and nonempty", {"X1&X2": X1 & X2})]
    c1y, cy2, c12 = cut(G, X1, Y), cut(G, Y, X2), cut(G, X1, X2)
    v = _complete_by_label(c1y.arcs, "[X1,Y]") + _complete_by_label(cy2.arcs, "[Y,X2]")
    outer = _labels(c1y.arcs | cy2.arcs)
    inner = _labels(c12.arcs)
    if inner & outer:
        v.append(Violation("label-disjoint", "[X1,X2] shares labels with [X1,Y] or [Y,X2]",
                           sorted(map(str, inner & outer))))
    cut_l = outer | inner
    in_x = _labels(induced_subgraph(G, X1).arcs) | _labels(induced_subgraph(G, X2).arcs)
    in_y = _labels(induced_subgraph(G, Y).arcs)
    clash = (in_x & (cut_l | in_y)) | (in_y & cut_l)
    if clash:
        v.append(Violation("only-synchronising", "labels inside X1, X2 or Y also occur elsewhere",
                           sorted(map(str, clash))))
    src = source_set(G) - X1
    if src:
        v.append(Violation("source", "sources outside X1", src))
    dead = sink_set(G) & X1
    if cy2.arcs:
        dead |= sink_set(G) & Y
    if dead:
        v.append(Violation("sink", "sinks of G inside X1, or inside Y while [Y,X2] has arcs", dead))
    back = c1y.backward | cy2.backward | c12.backward
    if back:
        v.append(Violation("backward", "a cut has backward arcs", sorted(back)))
    return v


def decompose_t2(G: Graph, X1: Iterable[str], X2: Iterable[str]) -> DecompositionCertificate:
    """Split along three cuts around ``Y``; factors are ``(G/Y, G/X1/X2)``."""
    X1, X2 = frozenset(X1), frozenset(X2)
    _fail("T2", t2_violations(G, X1, X2))
    Y = frozenset(G.vertex_ids) - X1 - X2
    return _certify("T2", G, ContractionSpec([Y], ["~Y"]), ContractionSpec([X1, X2], ["~X1", "~X2"]))


def _grid_specs(grids):
    # contract every grid row (resp. column); repeated sets are listed once
    rows, cols = [], []
    rn, cn = [], []
    for gr in grids:
        for i, r in gr.rows.items():
            if r not in rows:
                rows.append(r)
                rn.append(f"R{i}")
        for j, c in gr.cols.items():
            if c not in cols:
                cols.append(c)
                cn.append(f"C{j}")
    return ContractionSpec(rows, rn), ContractionSpec(cols, cn)


def t5_violations(G: Graph, indexing: MatrixIndexing) -> list[Violation]:
    rep = validate_bipartite_matrix_graph(G, indexing)
    v = [Violation(f"requirement-{c.name}", c.message, c.witness) for c in rep.failed()]
    if not v:
        bad = grid_intersections(G, indexing)
        if bad:
            v.append(Violation("intersection", "partite grids meet in a set that is not a grid", bad))
    return v


def decompose_t5(G: Graph, indexing: MatrixIndexing) -> DecompositionCertificate:
    """Decompose a bipartite matrix graph by contracting grid rows and grid columns."""
    _fail("T5", t5_violations(G, indexing))
    rep = validate_bipartite_matrix_graph(G, indexing)
    grids, seen, info = [], set(), []
    for b in label_blocks(G):
        tg, hg = is_grid(indexing, b.tails), is_grid(indexing, b.heads)
        info.append({"label": str(b.label), "tails": list(tg.shape), "heads": list(hg.shape)})
        for gr in (tg, hg):
            if gr.vertices not in seen:
                seen.add(gr.vertices)
                grids.append(gr)
    left, right = _grid_specs(grids)
    return _certify("T5", G, left, right, details={"blocks": info, "x": rep.info["x"], "z": rep.info["z"]})


def t6_violations(G: Graph, cover: RowColumnCover) -> list[Violation]:
    rep = validate_cartesian_matrix_graph(G, cover)
    return [Violation(f"cartesian-{c.name}", c.message, c.witness) for c in rep.failed()]


def decompose_t6(G: Graph, cover: RowColumnCover | MatrixIndexing) -> DecompositionCertificate:
    """Decompose a Cartesian matrix graph into ``(G/rows, G/columns)``."""
    if isinstance(cover, MatrixIndexing):
        cover = RowColumnCover.from_indexing(cover)
    _fail("T6", t6_violations(G, cover))
    left = ContractionSpec(list(cover.rows.values()), [f"R{k}" for k in cover.rows])
    right = ContractionSpec(list(cover.cols.values()), [f"C{k}" for k in cover.cols])
    return _certify("T6", G, left, right, allow_whole=True,
                    details={"rows": len(cover.rows), "cols": len(cover.cols)})


@dataclass(frozen=True)
class T7Partition:
    """Vertex sets of the Cartesian matrix subgraphs; every arc outside
    them belongs to the bipartite part."""

    cartesian: tuple[frozenset[str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cartesian", tuple(frozenset(s) for s in self.cartesian))


def _cartesian_extends(G: Graph, M: frozenset[str], indexing: MatrixIndexing, by) -> bool:
    sub = induced_subgraph(G, M | by)
    return validate_cartesian_matrix_graph(sub, RowColumnCover.from_indexing(indexing.restrict(sub.vertex_ids))).ok


def t7_violations(G: Graph, indexing: MatrixIndexing, partition: T7Partition | Sequence) -> list[Violation]:
    """Hypotheses of the mixed decomposition that the input violates.

    Checked: coordinates on every vertex, the Cartesian parts are
    vertex-disjoint Cartesian matrix graphs whose labels are unique to
    them, the remaining arcs form complete bipartite label blocks between
    grids, and no such arc stays within one row or one column.
    """
    if not isinstance(partition, T7Partition):
        partition = T7Partition(tuple(partition))
    parts = partition.cartesian
    _check_ids("T7", G, {f"M{k}": s for k, s in enumerate(parts, 1)})
    v: list[Violation] = []
    unindexed = [x for x in G.vertex_ids if x not in indexing]
    if unindexed:
        return [Violation("indexing", "vertices without coordinates", unindexed)]
    for (a, A), (b, B) in combinations(enumerate(parts, 1), 2):
        if A & B:
            v.append(Violation("cartesian-disjoint", f"parts M{a} and M{b} share vertices", A & B))
    owner = {x: k for k, s in enumerate(parts) for x in s}
    gm_arcs = [a for a in G.arcs if a.tail in owner and owner[a.tail] == owner.get(a.head)]
    gb_arcs = [a for a in G.arcs if not (a.tail in owner and owner[a.tail] == owner.get(a.head))]

    label_home: dict = {}
    for a in gm_arcs:
        label_home.setdefault(a.label, set()).add(f"M{owner[a.tail] + 1}")
    for a in gb_arcs:
        label_home.setdefault(a.label, set()).add("B")
    shared = {str(lab): homes for lab, homes in label_home.items() if len(homes) > 1}
    if shared:
        v.append(Violation("labels", "labels shared between parts", shared))

    for k, M in enumerate(parts, 1):
        sub = induced_subgraph(G, M)
        rep = validate_cartesian_matrix_graph(sub, RowColumnCover.from_indexing(indexing.restrict(M)))
        v += [Violation(f"cartesian-M{k}-{c.name}", c.message, c.witness) for c in rep.failed()]

    touched = set(owner) | {a.tail for a in gb_arcs} | {a.head for a in gb_arcs}
    loose = set(G.vertex_ids) - touched
    if loose and G.arcs:
        v.append(Violation("coverage", "vertices in no part", loose))

    blocks = label_blocks(arc_induced_subgraph(G, gb_arcs)) if gb_arcs else []
    for b in blocks:
        try:
            cls = classify_block(b)
        except NotBipartite as exc:
            v.append(Violation("bipartite", str(exc), exc.witness))
            continue
        if not cls.complete:
            v.append(Violation("semicomplete", f"label {b.label} is not complete between its ends",
                               str(b.label)))
        for side in (b.tails, b.heads):
            if is_grid(indexing, side) is None:
                v.append(Violation("grid", f"an end set of label {b.label} is not a grid", side))
    cross = [a for a in gb_arcs
             if indexing[a.tail][0] == indexing[a.head][0] or indexing[a.tail][1] == indexing[a.head][1]]
    if cross:
        v.append(Violation("crossing", "bipartite arcs within one row or one column", cross[:5]))
    if blocks:
        ends = sorted({b.tails for b in blocks} | {b.heads for b in blocks}, key=sort_ids)
        bad = [(sort_ids(p), sort_ids(q)) for p, q in combinations(ends, 2)
               if p & q and is_grid(indexing, p & q) is None]
        if bad:
            v.append(Violation("intersection", "end grids meet in a set that is not a grid", bad))
    return v


def decompose_t7(G: Graph, indexing: MatrixIndexing, partition: T7Partition | Sequence) -> DecompositionCertificate:
    """Decompose a mix of Cartesian matrix subgraphs and bipartite blocks.

    Factors are ``(G/rows, G/columns)`` for the rows and columns of the
    whole indexing.  Maximality of the Cartesian parts is only probed by
    trying to extend each by one full row or column; a possible extension
    becomes a warning on the certificate.
    """
    if not isinstance(partition, T7Partition):
        partition = T7Partition(tuple(partition))
    parts = partition.cartesian
    _fail("T7", t7_violations(G, indexing, partition))
    owner = {x: k for k, s in enumerate(parts) for x in s}
    gb_labels = {a.label for a in G.arcs if not (a.tail in owner and owner[a.tail] == owner.get(a.head))}

    warnings = []
    rws, cls_ = {}, {}
    for x, (i, j) in indexing.coord.items():
        if x in G:
            rws.setdefault(i, set()).add(x)
            cls_.setdefault(j, set()).add(x)
    for k, M in enumerate(parts, 1):
        I = {indexing[x][0] for x in M}
        J = {indexing[x][1] for x in M}
        ext = []
        for i in sorted(set(rws) - I):
            row = {x for x in rws[i] if indexing[x][1] in J}
            if len(row) == len(J) and not row & set(owner) and _cartesian_extends(G, M, indexing, row):
                ext.append(f"row {i}")
        for j in sorted(set(cls_) - J):
            col = {x for x in cls_[j] if indexing[x][0] in I}
            if len(col) == len(I) and not col & set(owner) and _cartesian_extends(G, M, indexing, col):
                ext.append(f"column {j}")
        if ext:
            warnings.append(f"maximality not verified: M{k} extends by {', '.join(ext)}")

    left = ContractionSpec([frozenset(rws[i]) for i in sorted(rws)], [f"R{i}" for i in sorted(rws)])
    right = ContractionSpec([frozenset(cls_[j]) for j in sorted(cls_)], [f"C{j}" for j in sorted(cls_)])
    return _certify("T7", G, left, right, allow_whole=True, warnings=warnings,
                    details={"cartesian_parts": len(parts), "bipartite_labels": len(gb_labels)})


def verify(cert: DecompositionCertificate, G: Graph, check_specs: bool = True) -> bool:
    """Recompose the factors and re-check the witness arc by arc against ``G``."""
    try:
        if check_specs:
            if contract_seq(G, cert.spec_left, allow_whole=cert.allow_whole) != cert.factor_left:
                return False
            if contract_seq(G, cert.spec_right, allow_whole=cert.allow_whole) != cert.factor_right:
                return False
        prod = vrsp(cert.factor_left, cert.factor_right)
        return cert.witness.validates(G, prod)
    except GraphError:
        return False


LEAF_NOTE = "not decomposable by T1/T2/T5/T6/T7 with discovered parameters"


@dataclass
class DecompositionTree:
    graph: Graph
    kind: str
    certificate: DecompositionCertificate | None = None
    children: list["DecompositionTree"] = field(default_factory=list)
    note: str = ""

    def leaves(self) -> list[Graph]:
        if not self.children:
            return [self.graph]
        return [g for c in self.children for g in c.leaves()]

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0) if self.children else 0

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "vertices": len(self.graph), "arcs": len(self.graph.arcs)}
        if self.certificate is not None:
            d["theorem"] = self.certificate.theorem
        if self.note:
            d["note"] = self.note
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d


def _smaller(cert, G) -> bool:
    return len(cert.factor_left) < len(G) and len(cert.factor_right) < len(G)


def _compresses(cert, G) -> bool:
    # cut splits of a path into overlapping sub-paths duplicate arcs; keep a
    # cut split only when the factors together carry at most |A(G)| arcs
    return _smaller(cert, G) and len(cert.factor_left.arcs) + len(cert.factor_right.arcs) <= len(G.arcs)


def _cut_candidates(G: Graph):
    layers = level_assignment(G).layers()
    prefixes = []
    for k in range(1, len(layers)):
        prefixes.append(frozenset().union(*layers[:k]))
    seen = set()
    for X in prefixes:
        if X not in seen:
            seen.add(X)
            yield X


def _t2_candidates(G: Graph):
    layers = level_assignment(G).layers()
    t = len(layers)
    for a in range(1, t - 1):
        for b in range(t - 1, a, -1):
            X1 = frozenset().union(*layers[:a])
            X2 = frozenset().union(*layers[b:])
            yield X1, X2


def _try(fn, *args):
    try:
        return fn(*args)
    except PreconditionFailed:
        return None


def decompose_fully(G: Graph, indexing: MatrixIndexing | None = None) -> DecompositionTree:
    """Greedy recursive decomposition.

    Components are split first.  On a connected graph the strategies run
    in the order T6 (with an inferred cover), T5 (only when ``indexing`` is
    given, at the top level), T1 over level-prefix cuts, then T2 over
    level prefix/suffix pairs.  A decomposition is kept only when both
    factors are strictly smaller, and a cut split (T1/T2) only when the
    factors together have no more arcs than the graph; factors are
    decomposed recursively.
    Leaves are graphs where no strategy applied, which is not a claim
    that they admit no decomposition at all.
    """
    comps = components(G)
    if len(comps) > 1:
        return DecompositionTree(G, "components", children=[decompose_fully(c) for c in comps])
    if len(G) <= 1 or not G.arcs:
        return DecompositionTree(G, "leaf", note=LEAF_NOTE)

    cert = None
    cover = infer_cartesian_cover(G)
    if cover is not None:
        cert = _try(decompose_t6, G, cover)
    if cert is None and indexing is not None:
        cert = _try(decompose_t5, G, indexing)
    if cert is None or not _smaller(cert, G):
        cert = None
        for X in _cut_candidates(G):
            c = _try(decompose_t1, G, X)
            if c is not None and _compresses(c, G):
                cert = c
                break
    if cert is None:
        for X1, X2 in _t2_candidates(G):
            c = _try(decompose_t2, G, X1, X2)
            if c is not None and _compresses(c, G):
                cert = c
                break
    if cert is None:
        return DecompositionTree(G, "leaf", note=LEAF_NOTE)
    return DecompositionTree(G, cert.theorem, cert,
                             [decompose_fully(cert.factor_left), decompose_fully(cert.factor_right)])


def certificates_agree(a: DecompositionCertificate, b: DecompositionCertificate) -> bool:
    """Factors of ``a`` and ``b`` are pairwise isomorphic."""
    return (is_isomorphic(a.factor_left, b.factor_left) is not None
            and is_isomorphic(a.factor_right, b.factor_right) is not None)
