"""Row/column coordinates on vertices: grids, bipartite matrix graphs and
Cartesian matrix graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .bipartite import classify_block, label_blocks
from .errors import GraphError, NotBipartite, UnindexedVertex
from .graph import Graph, components, induced_subgraph, natural_key, sort_ids
from .iso import is_isomorphic


@dataclass(frozen=True)
class MatrixIndexing:
    """Injective map from vertex id to ``(row, col)``, both 1-based."""

    coord: Mapping[str, tuple[int, int]]

    def __post_init__(self):
        coord = {str(v): (int(i), int(j)) for v, (i, j) in self.coord.items()}
        seen = {}
        for v, ij in coord.items():
            if ij[0] < 1 or ij[1] < 1:
                raise GraphError(f"coordinates of {v!r} must be positive, got {ij}")
            if ij in seen:
                raise GraphError(f"vertices {seen[ij]!r} and {v!r} share coordinates {ij}")
            seen[ij] = v
        object.__setattr__(self, "coord", coord)

    @property
    def m(self) -> int:
        return max((i for i, _ in self.coord.values()), default=0)

    @property
    def n(self) -> int:
        return max((j for _, j in self.coord.values()), default=0)

    def __getitem__(self, vid):
        try:
            return self.coord[vid]
        except KeyError:
            raise UnindexedVertex(f"vertex {vid!r} has no coordinates") from None

    def __contains__(self, vid):
        return vid in self.coord

    def at(self, i: int, j: int) -> str | None:
        for v, ij in self.coord.items():
            if ij == (i, j):
                return v
        return None

    def restrict(self, X: Iterable[str]) -> "MatrixIndexing":
        return MatrixIndexing({v: self[v] for v in X})


def rows(indexing: MatrixIndexing) -> dict[int, frozenset[str]]:
    out: dict[int, set] = {}
    for v, (i, _) in indexing.coord.items():
        out.setdefault(i, set()).add(v)
    return {i: frozenset(out[i]) for i in sorted(out)}


def cols(indexing: MatrixIndexing) -> dict[int, frozenset[str]]:
    out: dict[int, set] = {}
    for v, (_, j) in indexing.coord.items():
        out.setdefault(j, set()).add(v)
    return {j: frozenset(out[j]) for j in sorted(out)}


@dataclass(frozen=True)
class GridSet:
    vertices: frozenset[str]
    row_ids: tuple[int, ...]
    col_ids: tuple[int, ...]
    rows: Mapping[int, frozenset[str]]
    cols: Mapping[int, frozenset[str]]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_ids), len(self.col_ids)


def is_grid(indexing: MatrixIndexing, X: Iterable[str]) -> GridSet | None:
    """Grid decomposition of ``X`` when it is a full row-set x col-set rectangle."""
    X = frozenset(X)
    coords = {v: indexing[v] for v in X}
    if not X:
        return None
    I = sorted({i for i, _ in coords.values()})
    J = sorted({j for _, j in coords.values()})
    if len(X) != len(I) * len(J):
        return None
    rws = {i: frozenset(v for v, (a, _) in coords.items() if a == i) for i in I}
    cls = {j: frozenset(v for v, (_, b) in coords.items() if b == j) for j in J}
    return GridSet(X, tuple(I), tuple(J), rws, cls)


@dataclass(frozen=True)
class RowColumnCover:
    rows: Mapping[object, frozenset[str]]
    cols: Mapping[object, frozenset[str]]

    def __post_init__(self):
        object.__setattr__(self, "rows", {k: frozenset(v) for k, v in self.rows.items()})
        object.__setattr__(self, "cols", {k: frozenset(v) for k, v in self.cols.items()})

    @classmethod
    def from_indexing(cls, indexing: MatrixIndexing) -> "RowColumnCover":
        return cls(rows(indexing), cols(indexing))

    def well_formed(self, g: Graph) -> list[str]:
        problems = []
        for name, fam in (("rows", self.rows), ("cols", self.cols)):
            seen: dict[str, object] = {}
            for k, s in fam.items():
                if not s:
                    problems.append(f"{name} entry {k!r} is empty")
                for v in s:
                    if v in seen:
                        problems.append(f"vertex {v!r} is in {name} {seen[v]!r} and {k!r}")
                    seen[v] = k
            if set(seen) != set(g.vertex_ids):
                missing = sort_ids(set(g.vertex_ids) ^ set(seen))
                problems.append(f"{name} do not cover V(G) exactly: {missing}")
        for r, R in self.rows.items():
            for c, C in self.cols.items():
                if len(R & C) > 1:
                    problems.append(f"row {r!r} and column {c!r} share {len(R & C)} vertices")
        return problems


@dataclass
class Check:
    name: str
    ok: bool
    message: str = ""
    witness: object = None

    def to_dict(self):
        from .errors import _plain

        return {"name": self.name, "ok": self.ok, "message": self.message, "witness": _plain(self.witness)}


@dataclass
class Report:
    """Ordered list of named checks; passes when every check passes."""

    kind: str
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, name, ok, message="", witness=None):
        self.checks.append(Check(name, bool(ok), "" if ok else message, None if ok else witness))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        from .errors import _plain

        return {"kind": self.kind, "ok": self.ok, "checks": [c.to_dict() for c in self.checks], "info": _plain(self.info)}


def _connected(nodes: list[frozenset[str]]) -> list[list[frozenset[str]]]:
    # groups of sets linked by pairwise intersection
    groups: list[list[frozenset[str]]] = []
    for s in nodes:
        hit = [g for g in groups if any(s & t for t in g)]
        merged = [s]
        for g in hit:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def partite_grids(g: Graph, indexing: MatrixIndexing):
    """Blocks with their partite sets as grids; ``None`` where not a grid."""
    out = []
    for b in label_blocks(g):
        out.append((b, is_grid(indexing, b.tails), is_grid(indexing, b.heads)))
    return out


def validate_bipartite_matrix_graph(g: Graph, indexing: MatrixIndexing) -> Report:
    """Check the six bipartite-matrix requirements plus arc crossing.

    Requirements 4 and 6 are checked as connectivity: the grid rows with
    row index ``i`` must be linked to each other through shared vertices
    (and likewise for columns).  The extra ``crossing`` check demands that
    every arc changes both its row and its column index.
    """
    rep = Report("bipartite-matrix")
    unindexed = [v for v in g.vertex_ids if v not in indexing]
    blocks = label_blocks(g)

    # requirement 1: semicomplete bipartite label blocks, bookkeeping z <= 2x
    bad = []
    for b in blocks:
        try:
            if not classify_block(b).semicomplete:
                bad.append(str(b.label))
        except NotBipartite:
            bad.append(str(b.label))
    covered = set()
    for b in blocks:
        covered |= b.tails | b.heads
    isolated = sort_ids(set(g.vertex_ids) - covered) if blocks else []
    parts = {b.tails for b in blocks} | {b.heads for b in blocks}
    x, z = len(blocks), len(parts)
    rep.info.update(x=x, z=z)
    if unindexed:
        rep.add("1", False, "vertices without coordinates", unindexed)
    elif bad:
        rep.add("1", False, "label blocks that are not semicomplete bipartite", bad)
    elif isolated:
        rep.add("1", False, "vertices outside every label block", isolated)
    else:
        rep.add("1", z <= 2 * x or x == 0, f"z={z} exceeds 2x={2 * x}", {"z": z, "x": x})
    if unindexed:
        for name in ("2", "3", "4", "5", "6", "crossing"):
            rep.add(name, False, "skipped: indexing incomplete", unindexed)
        return rep

    # requirement 2: grids, one direction per cut, no arc inside a partite set
    not_grid = [sort_ids(p) for p in parts if is_grid(indexing, p) is None]
    inside = [a for a in g.arcs for p in parts if a.tail in p and a.head in p]
    directions = []
    for b in blocks:
        fwd = {(a.tail in b.tails) for a in b.arcs}
        if len(fwd) > 1:
            directions.append(str(b.label))
    if not_grid:
        rep.add("2", False, "partite sets that are not grids", not_grid)
    elif inside:
        rep.add("2", False, "arcs with both ends in one partite set", inside[:5])
    else:
        rep.add("2", not directions, "cuts with arcs in both directions", directions)

    grids = [is_grid(indexing, p) for p in parts]
    grids = [gr for gr in grids if gr is not None]
    grid_rows = {i: set() for i in rows(indexing)}
    grid_cols = {j: set() for j in cols(indexing)}
    for gr in grids:
        for i, r in gr.rows.items():
            grid_rows[i].add(r)
        for j, c in gr.cols.items():
            grid_cols[j].add(c)

    for req_share, req_conn, fam, axis, what in (
        ("3", "4", grid_rows, 0, "row"),
        ("5", "6", grid_cols, 1, "column"),
    ):
        wrong = []
        for k, sets in fam.items():
            for s in sets:
                if any(indexing[v][axis] != k for v in s):
                    wrong.append(sort_ids(s))
        rep.add(req_share, not wrong, f"grid {what}s spanning several {what} indices", wrong)
        split = {}
        for k, sets in fam.items():
            groups = _connected(sorted(sets, key=lambda s: sort_ids(s)))
            if len(groups) > 1:
                split[k] = [sort_ids(frozenset().union(*grp)) for grp in groups]
        rep.add(req_conn, not split, f"{what}s whose grid {what}s fall apart into unlinked groups", split)

    cross = [a for a in g.arcs
             if indexing[a.tail][0] == indexing[a.head][0] or indexing[a.tail][1] == indexing[a.head][1]]
    rep.add("crossing", not cross, "arcs that stay within one row or one column", cross[:5])
    return rep


def grid_intersections(g: Graph, indexing: MatrixIndexing) -> list[tuple[list[str], list[str]]]:
    """Pairs of partite grids whose intersection is nonempty but not a grid."""
    parts = sorted({b.tails for b in label_blocks(g)} | {b.heads for b in label_blocks(g)}, key=sort_ids)
    bad = []
    for p, q in combinations(parts, 2):
        common = p & q
        if common and is_grid(indexing, common) is None:
            bad.append((sort_ids(p), sort_ids(q)))
    return bad


def _aligned(g: Graph, A: frozenset[str], B: frozenset[str], other: Mapping[str, object]) -> bool:
    # A and B are two rows (or two columns); match v in A with the vertex of
    # B lying in the same crossing column (or row) and compare arcs
    key_b = {other[v]: v for v in B}
    phi = {}
    for v in A:
        w = key_b.get(other[v])
        if w is None:
            return False
        phi[v] = w
    if len(phi) != len(B):
        return False
    ga, gb = induced_subgraph(g, A), induced_subgraph(g, B)
    return {(phi[a.tail], phi[a.head], a.label) for a in ga.arcs} == {(a.tail, a.head, a.label) for a in gb.arcs}


def validate_cartesian_matrix_graph(g: Graph, cover: RowColumnCover) -> Report:
    """Check rows and columns form a Cartesian matrix graph.

    Besides pairwise isomorphism of rows and of columns, label
    disjointness and arc containment, the report checks that the row
    isomorphisms respect column membership (``aligned``) and that every
    row meets every column (``rectangle``).
    """
    rep = Report("cartesian-matrix")
    problems = cover.well_formed(g)
    rep.add("cover", not problems, "cover is not a partition into rows and columns", problems)
    if problems:
        return rep
    row_of = {v: k for k, s in cover.rows.items() for v in s}
    col_of = {v: k for k, s in cover.cols.items() for v in s}

    stray, row_labels, col_labels = [], set(), set()
    for a in g.arcs:
        if row_of[a.tail] == row_of[a.head]:
            row_labels.add(a.label)
        elif col_of[a.tail] == col_of[a.head]:
            col_labels.add(a.label)
        else:
            stray.append(a)
    rep.add("containment", not stray, "arcs lying in no single row or column", stray[:5])
    common = row_labels & col_labels
    rep.add("labels", not common, "labels used inside rows and inside columns", sorted(map(str, common)))

    for what, fam in (("rows", cover.rows), ("cols", cover.cols)):
        keys = list(fam)
        subs = {k: induced_subgraph(g, fam[k]) for k in keys}
        bad = [(keys[0], k) for k in keys[1:] if is_isomorphic(subs[keys[0]], subs[k]) is None]
        rep.add(f"{what}-isomorphic", not bad, f"{what} not isomorphic to the first one", bad)

    misaligned = []
    for fam, other in ((cover.rows, col_of), (cover.cols, row_of)):
        keys = list(fam)
        for k in keys[1:]:
            if not _aligned(g, fam[keys[0]], fam[k], other):
                misaligned.append((keys[0], k))
    rep.add("aligned", not misaligned, "row or column isomorphisms do not respect the crossing lines", misaligned)

    full = len(cover.rows) * len(cover.cols) == len(g)
    rep.add("rectangle", full, "some row misses some column",
            {"rows": len(cover.rows), "cols": len(cover.cols), "vertices": len(g)})
    return rep


def infer_cartesian_cover(g: Graph, max_labels: int = 12) -> RowColumnCover | None:
    """Heuristic search for a nontrivial Cartesian row/column cover.

    Tries every split of the label set into row labels and column labels
    (up to ``max_labels`` labels), takes rows as the weakly connected
    pieces of the row-label arcs and columns likewise, and returns the
    first split that validates with at least two rows and two columns.
    """
    labels = sorted(g.labels)
    if not labels or len(labels) > max_labels or len(components(g)) != 1:
        return None
    first, rest = labels[0], labels[1:]
    for mask in range(1 << len(rest)):
        col_set = {first} | {lab for k, lab in enumerate(rest) if mask >> k & 1}
        if len(col_set) == len(labels):
            continue
        R = _pieces(g, set(labels) - col_set)
        C = _pieces(g, col_set)
        if len(R) < 2 or len(C) < 2 or len(R) * len(C) != len(g):
            continue
        cover = RowColumnCover({k + 1: s for k, s in enumerate(R)}, {k + 1: s for k, s in enumerate(C)})
        if cover.well_formed(g):
            continue
        if validate_cartesian_matrix_graph(g, cover).ok:
            return cover
    return None


def _pieces(g: Graph, keep) -> list[frozenset[str]]:
    parent = {v: v for v in g.vertex_ids}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in g.arcs:
        if a.label in keep:
            ra, rb = find(a.tail), find(a.head)
            if ra != rb:
                parent[ra] = rb
    out: dict[str, set] = {}
    for v in g.vertex_ids:
        out.setdefault(find(v), set()).add(v)
    return sorted((frozenset(s) for s in out.values()), key=lambda s: min(map(natural_key, s)))


def cover_indexing(cover: RowColumnCover) -> MatrixIndexing:
    """Coordinates from a cover: rows and columns numbered in their given order."""
    ri = {v: n for n, k in enumerate(cover.rows, 1) for v in cover.rows[k]}
    ci = {v: n for n, k in enumerate(cover.cols, 1) for v in cover.cols[k]}
    return MatrixIndexing({v: (ri[v], ci[v]) for v in ri})
