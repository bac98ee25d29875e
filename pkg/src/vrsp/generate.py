"""Seeded random instances that satisfy a decomposition theorem's hypotheses.

Every instance is checked against the matching hypothesis check before it
is returned; a failed draw is retried with the same random stream, so the
output depends on the GeneratorSpec alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidSpec
from .graph import Arc, Graph, Label, Vertex, sort_ids
from .matrix import MatrixIndexing, RowColumnCover, validate_cartesian_matrix_graph

KINDS = ("cartesian-matrix", "bipartite-matrix", "t1-cut", "t2-cut", "mixed-t7")
MAX_ATTEMPTS = 50
_WEIGHTS = ("1", "1", "2", "0.5")


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``rows``/``cols`` bound the matrix extents (for the cut kinds they are
    the sizes of the source side and of the middle side), ``blocks`` is the
    number of bipartite blocks, cut labels or chained parts, ``labels`` the
    size of each private label pool.
    """

    kind: str
    rows: int = 3
    cols: int = 3
    blocks: int = 2
    labels: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        for name in ("rows", "cols", "blocks", "labels"):
            val = getattr(self, name)
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise InvalidSpec(f"{name} must be a positive integer, got {val!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be an integer in [0, 2**64)")

    def meta(self) -> dict:
        return {"generator": self.kind, "rows": self.rows, "cols": self.cols,
                "blocks": self.blocks, "labels": self.labels, "seed": self.seed}


def _pool(prefix, k, rng):
    return [Label(f"{prefix}{x}", rng.choice(_WEIGHTS)) for x in range(1, k + 1)]


def _pattern(rng, n, pool) -> list[tuple[int, int, Label]]:
    """Connected DAG on positions ``0..n-1``: a random tree plus extra forward arcs."""
    arcs = {}
    for j in range(1, n):
        arcs[(rng.randrange(j), j)] = rng.choice(pool)
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in arcs and rng.random() < 0.2:
                arcs[(i, j)] = rng.choice(pool)
    return [(i, j, lab) for (i, j), lab in sorted(arcs.items())]


def _subset(rng, items, lo=1):
    items = list(items)
    k = rng.randint(lo, len(items))
    return sorted(rng.sample(items, k))


def generate(spec: GeneratorSpec):
    """Build a :class:`~vrsp.document.GraphDocument` for ``spec``."""
    from .document import GraphDocument

    rng = random.Random(spec.seed)
    build = _BUILDERS[spec.kind]
    for _ in range(MAX_ATTEMPTS):
        out = build(rng, spec)
        if out is not None:
            g, indexing, sets = out
            return GraphDocument(g, indexing, sets, spec.meta())
    raise InvalidSpec(f"no valid {spec.kind} instance found in {MAX_ATTEMPTS} draws")


def _cartesian(rng, spec):
    m, n = spec.rows, spec.cols
    P = _pattern(rng, n, _pool("r", spec.labels, rng))
    Q = _pattern(rng, m, _pool("c", spec.labels, rng))
    vid = lambda i, j: f"v{i}_{j}"
    verts = [Vertex(vid(i, j)) for i in range(1, m + 1) for j in range(1, n + 1)]
    arcs = [Arc(vid(i, a + 1), vid(i, b + 1), lab) for i in range(1, m + 1) for a, b, lab in P]
    arcs += [Arc(vid(a + 1, j), vid(b + 1, j), lab) for j in range(1, n + 1) for a, b, lab in Q]
    g = Graph(verts, arcs)
    idx = MatrixIndexing({vid(i, j): (i, j) for i in range(1, m + 1) for j in range(1, n + 1)})
    cover = RowColumnCover.from_indexing(idx)
    if not validate_cartesian_matrix_graph(g, cover).ok:
        return None
    return g, idx, {"R": tuple(cover.rows.values()), "C": tuple(cover.cols.values())}


def _row_col_linked(rects, axis):
    # for every row (axis 0) the rectangles using it must be chained by column overlap
    other = 1 - axis
    lines = sorted({x for r in rects for x in r[axis]})
    for line in lines:
        using = [set(r[other]) for r in rects if line in r[axis]]
        reach = set(using[0])
        grown = True
        left = using[1:]
        while grown:
            grown = False
            for s in list(left):
                if s & reach:
                    reach |= s
                    left.remove(s)
                    grown = True
        if left:
            return False
    return True


def _bipartite(rng, spec):
    from .decompose import t5_violations

    m, n, K = spec.rows, spec.cols, spec.blocks
    rects = [(_subset(rng, range(1, m + 1)), _subset(rng, range(1, n + 1))) for _ in range(K)]
    if {i for r in rects for i in r[0]} != set(range(1, m + 1)):
        return None
    if {j for r in rects for j in r[1]} != set(range(1, n + 1)):
        return None
    if not (_row_col_linked(rects, 0) and _row_col_linked(rects, 1)):
        return None
    coord = {}
    for I, J in rects:
        for i in I:
            for j in J:
                coord[f"u{i}_{j}"] = (i, j)
    shared = m * n == 1 or rng.random() < 0.5
    heads = []
    if shared:
        coord[f"u{m + 1}_{n + 1}"] = (m + 1, n + 1)
        heads = [[f"u{m + 1}_{n + 1}"]] * K
    else:
        r0, c0 = m, n
        for _ in range(K):
            a, b = rng.randint(1, 2), rng.randint(1, 2)
            cells = [(r0 + x, c0 + y) for x in range(1, a + 1) for y in range(1, b + 1)]
            for i, j in cells:
                coord[f"u{i}_{j}"] = (i, j)
            heads.append([f"u{i}_{j}" for i, j in cells])
            r0, c0 = r0 + a, c0 + b
    labels = _pool("b", K, rng)
    arcs = []
    for (I, J), H, lab in zip(rects, heads, labels):
        for i in I:
            for j in J:
                arcs += [Arc(f"u{i}_{j}", h, lab) for h in H]
    g = Graph([Vertex(v) for v in coord], arcs)
    idx = MatrixIndexing(coord)
    if t5_violations(g, idx):
        return None
    grids = tuple(frozenset(f"u{i}_{j}" for i in I for j in J) for I, J in rects)
    return g, idx, {"X": grids}


def _dag_arcs(rng, names, pool, p=0.7):
    arcs = []
    for k in range(1, len(names)):
        if rng.random() < p:
            arcs.append(Arc(names[rng.randrange(k)], names[k], rng.choice(pool)))
    return arcs


def _complete(tails, heads, lab):
    return [Arc(t, h, lab) for t in tails for h in heads]


def _fix_heads(rng, blocks, needy):
    # extend head sets of random blocks so every needy vertex gets an in-arc
    for v in needy:
        k = rng.randrange(len(blocks))
        blocks[k][1].append(v)


def _fix_tails(rng, blocks, needy):
    for v in needy:
        k = rng.randrange(len(blocks))
        blocks[k][0].append(v)


def _t1(rng, spec):
    from .decompose import t1_violations

    X = [f"x{k}" for k in range(1, spec.rows + 1)]
    Y = [f"y{k}" for k in range(1, spec.cols + 1)]
    arcs = _dag_arcs(rng, X, _pool("p", spec.labels, rng)) + _dag_arcs(rng, Y, _pool("q", spec.labels, rng))
    blocks = [(_subset(rng, X), _subset(rng, Y)) for _ in range(spec.blocks)]
    has_in = {a.head for a in arcs} | {h for _, H in blocks for h in H}
    _fix_heads(rng, blocks, [y for y in Y if y not in has_in])
    has_out = {a.tail for a in arcs} | {t for T, _ in blocks for t in T}
    _fix_tails(rng, blocks, [x for x in X if x not in has_out])
    for (T, H), lab in zip(blocks, _pool("k", spec.blocks, rng)):
        arcs += _complete(sorted(set(T)), sorted(set(H)), lab)
    g = Graph([Vertex(v) for v in X + Y], arcs)
    if t1_violations(g, X):
        return None
    return g, None, {"X": frozenset(X)}


def _t2(rng, spec):
    from .decompose import t2_violations

    X1 = [f"x{k}" for k in range(1, spec.rows + 1)]
    Y = [f"y{k}" for k in range(1, spec.cols + 1)]
    X2 = [f"z{k}" for k in range(1, spec.rows + 1)]
    arcs = (_dag_arcs(rng, X1, _pool("p", spec.labels, rng)) + _dag_arcs(rng, X2, _pool("s", spec.labels, rng))
            + _dag_arcs(rng, Y, _pool("q", spec.labels, rng)))
    b1 = [(_subset(rng, X1), _subset(rng, Y)) for _ in range(spec.blocks)]
    b2 = [(_subset(rng, Y), _subset(rng, X2)) for _ in range(spec.blocks)]
    mids = _pool("m", spec.blocks, rng)
    for lab in mids:
        if rng.random() < 0.5:
            arcs.append(Arc(rng.choice(X1), rng.choice(X2), lab))
    has_in = {a.head for a in arcs} | {h for _, H in b1 + b2 for h in H}
    _fix_heads(rng, b1, [y for y in Y if y not in has_in])
    _fix_heads(rng, b2, [z for z in X2 if z not in has_in])
    has_out = {a.tail for a in arcs} | {t for T, _ in b1 + b2 for t in T}
    _fix_tails(rng, b1, [x for x in X1 if x not in has_out])
    _fix_tails(rng, b2, [y for y in Y if y not in has_out])
    for (T, H), lab in zip(b1, _pool("k", spec.blocks, rng)):
        arcs += _complete(sorted(set(T)), sorted(set(H)), lab)
    for (T, H), lab in zip(b2, _pool("l", spec.blocks, rng)):
        arcs += _complete(sorted(set(T)), sorted(set(H)), lab)
    g = Graph([Vertex(v) for v in X1 + Y + X2], arcs)
    if t2_violations(g, X1, X2):
        return None
    return g, None, {"X1": frozenset(X1), "X2": frozenset(X2)}


def _mixed(rng, spec):
    from .decompose import t7_violations

    parts = []
    r0 = c0 = 0
    coord, arcs, cart = {}, [], []
    for t in range(spec.blocks):
        m, n = rng.randint(1, spec.rows), rng.randint(1, spec.cols)
        cartesian = spec.blocks == 1 or (m * n > 1 and rng.random() < 0.6)
        vid = lambda i, j, t=t: f"w{t}_{i}_{j}"
        cells = {vid(i, j): (r0 + i, c0 + j) for i in range(1, m + 1) for j in range(1, n + 1)}
        coord.update(cells)
        own = []
        if cartesian:
            P = _pattern(rng, n, _pool(f"r{t}_", spec.labels, rng))
            Q = _pattern(rng, m, _pool(f"c{t}_", spec.labels, rng))
            own += [Arc(vid(i, a + 1), vid(i, b + 1), lab) for i in range(1, m + 1) for a, b, lab in P]
            own += [Arc(vid(a + 1, j), vid(b + 1, j), lab) for j in range(1, n + 1) for a, b, lab in Q]
            cart.append(frozenset(cells))
        arcs += own
        heads = {a.head for a in own}
        tails = {a.tail for a in own}
        srcs = sort_ids(v for v in cells if v not in heads)
        sinks = sort_ids(v for v in cells if v not in tails)
        parts.append((srcs, sinks))
        r0, c0 = r0 + m, c0 + n
    for t, lab in zip(range(len(parts) - 1), _pool("b", max(1, len(parts) - 1), rng)):
        arcs += _complete(parts[t][1], parts[t + 1][0], lab)
    g = Graph([Vertex(v) for v in coord], arcs)
    idx = MatrixIndexing(coord)
    if t7_violations(g, idx, cart):
        return None
    return g, idx, {"M": tuple(cart)}


_BUILDERS = {
    "cartesian-matrix": _cartesian,
    "bipartite-matrix": _bipartite,
    "t1-cut": _t1,
    "t2-cut": _t2,
    "mixed-t7": _mixed,
}


def random_graph(rng: random.Random, n: int, p: float = 0.4, actions: str = "abc",
                 weights=("1",)) -> Graph:
    """Random labelled DAG on ``n`` vertices ``g0..g{n-1}`` (arcs go forward)."""
    verts = [f"g{k}" for k in range(n)]
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                arcs.append(Arc(verts[i], verts[j], Label(rng.choice(actions), rng.choice(weights))))
    order = verts[:]
    rng.shuffle(order)
    ren = dict(zip(verts, order))
    return Graph([Vertex(v) for v in verts], [Arc(ren[a.tail], ren[a.head], a.label) for a in arcs])
