"""linfree: exact freeness certification for linear graph embeddings in
3-space, and generators for knotted families whose embeddings are not free.

The package is organized around six modules:

* `exactgeom` -- exact rational predicates (orientation, half-spaces,
  segment/triangle piercing, general position, projection);
* `spatialgraph` -- graphs, linear embeddings, validation, Hamiltonian
  cycles, vertex connectivity, enumeration, seeded sampling, JSON I/O;
* `knotlink` -- generic projection diagrams, linking number, knot
  determinant, and the mod-2 triangle-pair linking sum of K6;
* `freeness` -- canonical labeling, trivial hulls, the chord isotopy
  graph, and the certificate-producing freeness checker;
* `certcheck` -- an independent re-checker replaying certificates with
  separate geometric routines;
* `constructions` -- the knotted-core families and the frozen hexagonal
  trefoil.
"""

__version__ = "0.1.0"

from .exactgeom import (
    DegenerateTriangleError,
    GeneralPositionError,
    Point3,
    Rational,
    Segment,
    Side,
    Triangle,
    general_position,
    halfspace_side,
    orient3d,
    pierces,
    project,
    segment_pierces_triangle,
    segments_cross_2d,
)
from .spatialgraph import (
    AbstractGraph,
    EmbeddingFormatError,
    LinearEmbedding,
    RetryBudgetError,
    ValidationReport,
    complete_graph,
    cycle_graph,
    enumerate_graphs,
    hamiltonian_cycles,
    load_embedding,
    make_graph,
    min_valency,
    sample_embedding,
    save_embedding,
    validate_embedding,
    vertex_connectivity,
)
from .knotlink import (
    Diagram,
    DirectionSearchError,
    NonGenericError,
    PolygonalCycle,
    build_diagram,
    conway_gordon_sum,
    generic_direction,
    knot_determinant,
    linking_number,
    polygonal_cycle,
)
from .freeness import (
    GUARANTEED_TRIVIAL_HULLS,
    FreenessCertificate,
    Inconclusive,
    IsotopyGraph,
    PreconditionError,
    build_isotopy_graph,
    canonical_labeling,
    certify,
    certify_six,
    certify_small,
    trivial_hulls,
)
from .certcheck import verify_certificate
from .constructions import (
    ConstructionError,
    Thm3Params,
    Thm4Params,
    cube_embedding,
    hexagonal_trefoil,
    search_hexagonal_trefoil,
    theorem3_graph,
    theorem4_graph,
)
