"""Command line interface.

Exit codes: 0 success, 1 negative result (not isomorphic, hypotheses
violated, invalid document under ``validate``), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import document as docmod
from .decompose import (
    T7Partition,
    decompose_fully,
    decompose_t1,
    decompose_t2,
    decompose_t5,
    decompose_t6,
    decompose_t7,
    verify,
)
from .errors import (
    DocumentSyntaxError,
    DocumentValidationError,
    GraphError,
    InvalidSpec,
    PreconditionFailed,
    _plain,
)
from .generate import KINDS, GeneratorSpec, generate
from .graph import ContractionSpec, components, contract_seq, sink_set, sort_ids, source_set
from .iso import is_isomorphic
from .matrix import RowColumnCover, validate_bipartite_matrix_graph, validate_cartesian_matrix_graph
from .products import cartesian_product, intermediate_product, vrsp


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _load(path):
    try:
        return docmod.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(out, data: bytes | str):
    if out in (None, "-"):
        sys.stdout.write(data.decode("utf-8") if isinstance(data, bytes) else data)
        return
    try:
        docmod.write_atomic(out, data)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from exc


def cmd_validate(args):
    try:
        doc = docmod.load(args.file)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror or exc}") from exc
    except (DocumentSyntaxError, DocumentValidationError) as exc:
        print(_dump({"valid": False, "error": str(exc)}))
        return 1
    g = doc.graph
    info = {
        "valid": True,
        "vertices": len(g),
        "arcs": len(g.arcs),
        "components": len(components(g)),
        "sources": sort_ids(source_set(g)),
        "sinks": sort_ids(sink_set(g)),
        "sets": sorted(doc.sets),
    }
    if doc.indexing is not None:
        info["bipartite_matrix"] = validate_bipartite_matrix_graph(g, doc.indexing).to_dict()
        if all(v in doc.indexing for v in g.vertex_ids):
            cover = RowColumnCover.from_indexing(doc.indexing)
            info["cartesian_matrix"] = validate_cartesian_matrix_graph(g, cover).to_dict()
    print(_dump(info))
    return 0


_OPS = {"cartesian": cartesian_product, "intermediate": intermediate_product, "vrsp": vrsp}


def cmd_product(args):
    a, b = _load(args.a).graph, _load(args.b).graph
    try:
        g = _OPS[args.op](a, b)
    except GraphError as exc:
        raise UsageError(str(exc)) from exc
    _write(args.output, docmod.emit(g))
    return 0


def cmd_contract(args):
    doc = _load(args.file)
    sets = []
    for name in args.sets:
        sets.extend(doc.family(name))
    try:
        g = contract_seq(doc.graph, ContractionSpec(sets))
    except GraphError as exc:
        print(_dump({"contracted": False, "error": str(exc), "step": getattr(exc, "step", None)}))
        return 1
    _write(args.output, docmod.emit(g))
    return 0


def cmd_iso(args):
    a, b = _load(args.a).graph, _load(args.b).graph
    w = is_isomorphic(a, b)
    if w is None:
        print(_dump({"isomorphic": False}))
        return 1
    print(_dump({"isomorphic": True, "witness": [list(p) for p in w.pairs()]}))
    return 0


def _need_indexing(doc):
    if doc.indexing is None:
        raise UsageError("document has no vertex coordinates")
    return doc.indexing


def cmd_decompose(args):
    doc = _load(args.file)
    g = doc.graph
    t = args.theorem
    if t == "auto":
        tree = decompose_fully(g, doc.indexing)
        out = Path(args.output) if args.output else None
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            docmod.write_atomic(out / "tree.json", _dump(tree.to_dict()) + "\n")
            if tree.certificate is not None:
                docmod.write_certificate(tree.certificate, out)
        print(_dump(tree.to_dict()))
        return 0
    try:
        if t == "1":
            cert = decompose_t1(g, doc.set(args.X))
        elif t == "2":
            cert = decompose_t2(g, doc.set(args.X1), doc.set(args.X2))
        elif t == "5":
            cert = decompose_t5(g, _need_indexing(doc))
        elif t == "6":
            if args.rows and args.cols:
                rws, cls = doc.family(args.rows), doc.family(args.cols)
                cover = RowColumnCover({k: s for k, s in enumerate(rws, 1)}, {k: s for k, s in enumerate(cls, 1)})
            else:
                cover = RowColumnCover.from_indexing(_need_indexing(doc))
            cert = decompose_t6(g, cover)
        else:
            parts = doc.family(args.cartesian) if args.cartesian in doc.sets else ()
            cert = decompose_t7(g, _need_indexing(doc), T7Partition(parts))
    except DocumentValidationError as exc:
        raise UsageError(str(exc)) from exc
    except PreconditionFailed as exc:
        print(_dump({"decomposed": False, "theorem": exc.theorem,
                     "violations": [v.to_dict() for v in exc.violations]}))
        return 1
    if args.output:
        docmod.write_certificate(cert, args.output)
    print(_dump({
        "decomposed": True,
        "theorem": cert.theorem,
        "left": {"vertices": len(cert.factor_left), "arcs": len(cert.factor_left.arcs)},
        "right": {"vertices": len(cert.factor_right), "arcs": len(cert.factor_right.arcs)},
        "warnings": list(cert.warnings),
        "details": _plain(cert.details),
    }))
    return 0


def cmd_verify(args):
    cert = docmod.read_certificate(args.certdir)
    g = _load(args.file).graph
    ok = verify(cert, g)
    print(_dump({"verified": ok, "theorem": cert.theorem}))
    return 0 if ok else 1


def cmd_gen(args):
    try:
        spec = GeneratorSpec(args.kind, args.rows, args.cols, args.blocks, args.labels, args.seed)
        doc = generate(spec)
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from exc
    _write(args.output, docmod.emit(doc))
    return 0


def cmd_export_dot(args):
    doc = _load(args.file)
    _write(args.output, docmod.emit_dot(doc.graph, Path(args.file).stem))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vrsp", description="Vertex-removing synchronised products and decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="load a document and report its structure")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("product", help="combine two graphs")
    s.add_argument("--op", choices=sorted(_OPS), required=True)
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("contract", help="contract named vertex sets in order")
    s.add_argument("file")
    s.add_argument("--sets", nargs="+", required=True, metavar="NAME")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_contract)

    s = sub.add_parser("iso", help="test two graphs for isomorphism")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("decompose", help="decompose a graph and write a certificate directory")
    s.add_argument("file")
    s.add_argument("--theorem", choices=["1", "2", "5", "6", "7", "auto"], required=True)
    s.add_argument("--X", default="X", help="set name for theorem 1 (default X)")
    s.add_argument("--X1", default="X1")
    s.add_argument("--X2", default="X2")
    s.add_argument("--rows", help="family of row sets for theorem 6 (default: from coordinates)")
    s.add_argument("--cols", help="family of column sets for theorem 6")
    s.add_argument("--cartesian", default="M", help="family of Cartesian parts for theorem 7 (default M)")
    s.add_argument("-o", "--output", metavar="CERTDIR")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="re-check a certificate directory against a graph")
    s.add_argument("certdir")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="generate a seeded instance")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rows", type=int, default=3)
    s.add_argument("--cols", type=int, default=3)
    s.add_argument("--blocks", type=int, default=2)
    s.add_argument("--labels", type=int, default=3)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("export-dot", help="write Graphviz DOT")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vrsp: error: {exc}", file=sys.stderr)
        return 2
    except (DocumentSyntaxError, DocumentValidationError) as exc:
        print(f"vrsp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
