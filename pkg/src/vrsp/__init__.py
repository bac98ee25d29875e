"""Vertex-removing synchronised products of labelled acyclic multigraphs and
the decompositions they admit."""

from .bipartite import LabelBlock, classify_block, label_blocks
from .decompose import (
    DecompositionCertificate,
    DecompositionTree,
    T7Partition,
    decompose_fully,
    decompose_t1,
    decompose_t2,
    decompose_t5,
    decompose_t6,
    decompose_t7,
    verify,
)
from .document import GraphDocument, emit, emit_dot, load, parse
from .errors import *  # noqa: F401,F403
from .errors import PreconditionFailed, Violation
from .generate import GeneratorSpec, generate
from .graph import (
    Arc,
    ContractionSpec,
    CutSet,
    Graph,
    Label,
    LevelAssignment,
    Vertex,
    arc_induced_subgraph,
    build_graph,
    components,
    contract,
    contract_seq,
    contraction_images,
    cut,
    degrees,
    disjoint_union,
    induced_subgraph,
    level_assignment,
    sink_set,
    source_set,
)
from .iso import IsoWitness, is_isomorphic
from .matrix import (
    GridSet,
    MatrixIndexing,
    RowColumnCover,
    cols,
    infer_cartesian_cover,
    is_grid,
    rows,
    validate_bipartite_matrix_graph,
    validate_cartesian_matrix_graph,
)
from .products import (
    ProductVertex,
    SyncClassification,
    cartesian_fold,
    cartesian_product,
    classify_sync,
    intermediate_product,
    vrsp,
    vrsp_fold,
)

__version__ = "0.1.0"
