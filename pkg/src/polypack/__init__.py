"""Densest double-lattice packings of convex polygons, with machine-checkable
certificates that the packing is a local density maximum among all packings.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateInput,
    ExceptionalConfiguration,
    GradientNotInRowSpace,
    NonConvexInput,
    PivotalConfiguration,
    PolypackError,
    RankDeficiencyUnexpected,
    SweepStall,
    VertexCoincidence,
)
from .geom import (
    Chord,
    ConvexPolygon,
    EdgeOrVertexRef,
    SimilarityTransform,
    longest_chord,
    normalize_polygon,
    regular_polygon,
    signed_area,
    similarity_to_canonical,
)
from .sweep import (
    AreaMinimization,
    LocalMinimum,
    MinimizerClassification,
    ParallelogramConfig,
    SweepPiece,
    classify,
    config_at_direction,
    config_from_points,
    evolution_velocities,
    minimize_area,
    sweep,
)
from .lattice import (
    DoubleLattice,
    Isometry2,
    PackingWindow,
    build_double_lattice,
    density,
    enumerate_packing,
    verify_admissible,
)
from .cellproblem import (
    CellFunctions,
    Contact,
    LinearizedProblem,
    build_cell_functions,
    cell_functions_from_triples,
    contact_list,
    linearize,
    prepare_reference,
)
from .certify import (
    AngleData,
    Certificate,
    CertificateEntry,
    DualCertificate,
    Tolerances,
    balance_mu,
    certify,
    certify_config,
    closed_form_group_sums,
    closed_form_null_vector,
    determinant_identity_residual,
    grouped_positivity,
    null_spaces,
    perturbation_oracle,
    second_order_and_stationarity,
    solve_eta,
)
from .svgout import render_svg

__all__ = [name for name in dir() if not name.startswith("_")]
