"""Freeness certification for linear embeddings of small graphs.

The engine reduces a valid linear embedding of a simple connected graph
with at most 6 vertices and minimum valency >= 3 to the complete graph on
the same vertices by a replayable sequence of chord additions, each
witnessed by an isotopy across exact trivial triangles.  Linear embeddings
of complete graphs have free complements (Nicholson's theorem, taken as
the terminal axiom), so a successful reduction certifies freeness.

Pipeline for 6 vertices:

1. `canonical_labeling` relabels the vertices 1..6 so that the triangles
   {1,2,3} and {4,5,6} form a Hopf link with a fixed piercing and
   half-space normal form (such a labeling always exists because every K6
   embedding contains a nonsplit 2-component link, the Conway-Gordon
   theorem).
2. `trivial_hulls` computes which of the 20 vertex triangles have interiors
   meeting no segment between vertices: these are the isotopy disks.
3. `build_isotopy_graph` relates the 9 chords off a Hamiltonian cycle P by
   one-edge slides (M1) and two-edge slides (M2) across trivial disks, and
   marks rescue chords that cobound a trivial disk with a 2-edge arc of P.
4. `certify_six` greedily adds absent chords (rescue first, then slides
   from present chords) until the complete graph is reached, recording one
   witness per addition.

4- and 5-vertex graphs are handled by `certify_small` via an exact
classification of the fifth vertex against the tetrahedron spanned by the
other four.

The only verdicts are a certificate or `Inconclusive`; the engine never
claims non-freeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .exactgeom import orient3d, pierces, scaled_int_points
from .knotlink import linking_number, triangle_pairs_of_k6
from .spatialgraph import (
    AbstractGraph,
    LinearEmbedding,
    is_connected,
    hamiltonian_cycles,
    min_valency,
    validate_embedding,
)

AXIOM_COMPLETE_GRAPH = "complete-graph-axiom"
FIVE_VERTEX_TAG = "five-vertex-planar-types"
CERTIFICATE_FORMAT = "linfree-certificate-v1"

#: Labelled triangles that are trivial in every canonically labelled K6
#: embedding.  The geometric computation must always reproduce at least
#: these twelve; the acceptance suite enforces it.
GUARANTEED_TRIVIAL_HULLS = frozenset(frozenset(t) for t in [
    (1, 2, 4), (1, 2, 5), (1, 3, 5), (1, 3, 6), (1, 4, 6), (1, 5, 6),
    (2, 3, 4), (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)])


class PreconditionError(ValueError):
    """An input violates a stated precondition; the message names it."""


class LabelingError(RuntimeError):
    """No canonical labeling exists: internal consistency failure, since a
    valid K6 embedding always admits one."""


@dataclass(frozen=True)
class Inconclusive:
    reason: str


# ---------------------------------------------------------------------------
# canonical labeling

def _int_points(e: LinearEmbedding) -> dict[int, tuple[int, int, int]]:
    ids = list(e.graph.vertices)
    scaled = scaled_int_points([e.coords[v] for v in ids])
    return dict(zip(ids, scaled))


def _require_valid_six(e: LinearEmbedding) -> dict[int, tuple[int, int, int]]:
    if len(e.graph.vertices) != 6:
        raise PreconditionError("embedding must have exactly 6 vertices")
    report = validate_embedding(e)
    if not report.ok:
        raise PreconditionError(f"invalid embedding: {report.violations[0]}")
    return _int_points(e)


def _hopf_partitions(pts: dict[int, tuple]) -> dict[frozenset, int]:
    """|lk| per unordered partition of the 6 ids into disjoint triples."""
    out = {}
    for tri, other in triangle_pairs_of_k6(sorted(pts)):
        lk = linking_number([pts[v] for v in tri], [pts[v] for v in other])
        out[frozenset((tri, other))] = abs(lk)
    return out


def _conditions_hold(pts, v, hopf, pierce_cache) -> bool:
    """The five normal-form conditions for labeling v (v[l-1] = id of label l).

    Order is cheap-to-expensive: Hopf lookup, half-space signs, piercings.
    """
    key = frozenset((tuple(sorted(v[:3])), tuple(sorted(v[3:]))))
    if hopf[key] != 1:
        return False
    p1, p2, p3, p4, p5, p6 = (pts[i] for i in v)
    # 4, 6 on the positive side of the plane oriented by (1,3,2); 5 negative
    if orient3d(p1, p3, p2, p4) != 1:
        return False
    if orient3d(p1, p3, p2, p6) != 1:
        return False
    if orient3d(p1, p3, p2, p5) != -1:
        return False
    # 6 positive for (1,3,4); 2, 5 negative
    if orient3d(p1, p3, p4, p6) != 1:
        return False
    if orient3d(p1, p3, p4, p2) != -1:
        return False
    if orient3d(p1, p3, p4, p5) != -1:
        return False
    # segment 45 pierces triangle 123, segment 13 pierces triangle 456
    if not _cached_pierce(pts, pierce_cache, (v[3], v[4]), (v[0], v[1], v[2])):
        return False
    if not _cached_pierce(pts, pierce_cache, (v[0], v[2]), (v[3], v[4], v[5])):
        return False
    return True


def _cached_pierce(pts, cache, seg, tri) -> bool:
    key = (frozenset(seg), frozenset(tri))
    hit = cache.get(key)
    if hit is None:
        hit = pierces(pts[seg[0]], pts[seg[1]],
                      pts[tri[0]], pts[tri[1]], pts[tri[2]])
        cache[key] = hit
    return hit


def canonical_labeling(e: LinearEmbedding) -> tuple[int, ...]:
    """Lexicographically least labeling (id of label 1, ..., id of label 6)
    satisfying the five normal-form conditions.

    Raises LabelingError if none exists, which cannot happen for a valid
    embedding and therefore signals an internal inconsistency.
    """
    pts = _require_valid_six(e)
    hopf = _hopf_partitions(pts)
    cache: dict = {}
    for v in permutations(sorted(pts)):
        if _conditions_hold(pts, v, hopf, cache):
            return v
    raise LabelingError("no canonical labeling found for a valid embedding")


def labeling_conditions_hold(e: LinearEmbedding, labeling) -> bool:
    """Re-check the five conditions for a given labeling."""
    pts = _require_valid_six(e)
    v = tuple(labeling)
    if sorted(v) != sorted(pts):
        raise PreconditionError("labeling is not a permutation of the vertices")
    hopf = _hopf_partitions(pts)
    return _conditions_hold(pts, v, hopf, {})


# ---------------------------------------------------------------------------
# trivial hulls

def trivial_hulls(e: LinearEmbedding, labeling) -> frozenset[frozenset[int]]:
    """Label triples whose triangles are trivial: the open triangle meets no
    segment between vertices of the extended K6.

    Only the three segments fully disjoint from a triangle can pierce it: a
    segment sharing a vertex would have to lie inside the triangle's plane
    to reach the open interior, which general position forbids.
    """
    pts = _require_valid_six(e)
    v = tuple(labeling)
    by_label = {l: pts[v[l - 1]] for l in range(1, 7)}
    out = set()
    for tri in combinations(range(1, 7), 3):
        rest = [l for l in range(1, 7) if l not in tri]
        t1, t2, t3 = (by_label[l] for l in tri)
        if not any(pierces(by_label[a], by_label[b], t1, t2, t3)
                   for a, b in combinations(rest, 2)):
            out.add(frozenset(tri))
    return frozenset(out)


# ---------------------------------------------------------------------------
# isotopy graph

Chord = tuple[int, int]


@dataclass(frozen=True)
class IsotopyEdge:
    chord_a: Chord
    chord_b: Chord
    kind: str                      # "M1" or "M2"
    triangles: tuple[frozenset, ...]


@dataclass(frozen=True)
class IsotopyGraph:
    """Slide relations among the 9 chords of K6 off a Hamiltonian cycle."""

    cycle: tuple[int, ...]
    chords: tuple[Chord, ...]
    edges: tuple[IsotopyEdge, ...]
    rescue: dict[Chord, frozenset]

    def neighbors(self) -> dict[Chord, list[IsotopyEdge]]:
        adj: dict[Chord, list[IsotopyEdge]] = {c: [] for c in self.chords}
        for edge in self.edges:
            adj[edge.chord_a].append(edge)
            adj[edge.chord_b].append(edge)
        return adj

    def components(self) -> list[frozenset]:
        parent = {c: c for c in self.chords}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for edge in self.edges:
            ra, rb = find(edge.chord_a), find(edge.chord_b)
            if ra != rb:
                parent[ra] = rb
        comps: dict[Chord, set] = {}
        for c in self.chords:
            comps.setdefault(find(c), set()).add(c)
        return [frozenset(s) for s in comps.values()]

    @property
    def is_connected(self) -> bool:
        return len(self.components()) == 1


def _two_edge_arcs(p) -> list[tuple[int, int, int]]:
    """All arcs a-m-b of two consecutive cycle edges."""
    n = len(p)
    return [(p[(i - 1) % n], p[i], p[(i + 1) % n]) for i in range(n)]


def build_isotopy_graph(p, hulls) -> IsotopyGraph:
    """Isotopy graph of the cycle p (a 6-tuple over labels 1..6) given a set
    of trivial triangles.

    Nodes are the 9 chords off p.  Chords {a,x} and {b,x} are joined by an
    M1 edge when ab is a cycle edge and the triangle abx is trivial, and by
    an M2 edge when a and b are two cycle steps apart through m with both
    amb and abx trivial.  A chord {a,b} two steps apart through m is a
    rescue chord when amb is trivial: it cobounds a trivial disk with an
    arc of p and can therefore be added at any stage.
    """
    p = tuple(p)
    if sorted(p) != list(range(1, 7)):
        raise ValueError("cycle must visit the labels 1..6 exactly once")
    hulls = {frozenset(t) for t in hulls}
    cycle_edges = {frozenset((p[i], p[(i + 1) % 6])) for i in range(6)}
    chords = tuple(sorted(
        tuple(sorted(c)) for c in combinations(range(1, 7), 2)
        if frozenset(c) not in cycle_edges))
    arcs = _two_edge_arcs(p)
    arc_through = {frozenset((a, b)): m for a, m, b in arcs}
    edges = []
    for c1, c2 in combinations(chords, 2):
        shared = set(c1) & set(c2)
        if len(shared) != 1:
            continue
        x = shared.pop()
        a = (set(c1) - {x}).pop()
        b = (set(c2) - {x}).pop()
        slide_disk = frozenset((a, b, x))
        if frozenset((a, b)) in cycle_edges:
            if slide_disk in hulls:
                edges.append(IsotopyEdge(c1, c2, "M1", (slide_disk,)))
        elif frozenset((a, b)) in arc_through:
            m = arc_through[frozenset((a, b))]
            arc_disk = frozenset((a, m, b))
            if arc_disk in hulls and slide_disk in hulls:
                edges.append(IsotopyEdge(c1, c2, "M2", (arc_disk, slide_disk)))
    rescue = {}
    for a, m, b in arcs:
        chord = tuple(sorted((a, b)))
        if frozenset((a, m, b)) in hulls:
            rescue[chord] = frozenset((a, m, b))
    return IsotopyGraph(p, chords, tuple(edges), rescue)


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class Addition:
    chord: Chord
    witness_kind: str              # "rescue", "slide_m1", "slide_m2"
    triangles: tuple[frozenset, ...]
    neighbor: Chord | None = None


@dataclass(frozen=True)
class FreenessCertificate:
    """A replayable reduction of the embedded graph to the complete graph.

    For 6 vertices: `labeling[l-1]` is the vertex id carrying label l; the
    cycle, bridges and additions are all expressed in labels.  For 4 and 5
    vertices the certificate carries the classification data instead.
    """

    kind: str                      # "four_vertex", "five_vertex", "six_vertex"
    vertices: tuple[int, ...]
    justification: str
    labeling: tuple[int, ...] | None = None
    cycle: tuple[int, ...] | None = None
    bridges: tuple[Chord, ...] = ()
    additions: tuple[Addition, ...] = ()
    classification: dict | None = None

    def to_dict(self) -> dict:
        data = {
            "format": CERTIFICATE_FORMAT,
            "kind": self.kind,
            "vertices": list(self.vertices),
            "justification": self.justification,
        }
        if self.labeling is not None:
            data["labeling"] = list(self.labeling)
        if self.cycle is not None:
            data["cycle"] = list(self.cycle)
            data["bridges"] = [list(c) for c in self.bridges]
            data["additions"] = [
                {
                    "chord": list(a.chord),
                    "witness_kind": a.witness_kind,
                    "witness_triangles": [sorted(t) for t in a.triangles],
                    "neighbor": list(a.neighbor) if a.neighbor else None,
                }
                for a in self.additions
            ]
        if self.classification is not None:
            data["classification"] = self.classification
        return data


def certificate_from_dict(data: dict) -> FreenessCertificate:
    if data.get("format") != CERTIFICATE_FORMAT:
        raise ValueError("unrecognized certificate format")
    additions = tuple(
        Addition(
            chord=tuple(a["chord"]),
            witness_kind=a["witness_kind"],
            triangles=tuple(frozenset(t) for t in a["witness_triangles"]),
            neighbor=tuple(a["neighbor"]) if a.get("neighbor") else None,
        )
        for a in data.get("additions", ()))
    return FreenessCertificate(
        kind=data["kind"],
        vertices=tuple(data["vertices"]),
        justification=data["justification"],
        labeling=tuple(data["labeling"]) if "labeling" in data else None,
        cycle=tuple(data["cycle"]) if "cycle" in data else None,
        bridges=tuple(tuple(c) for c in data.get("bridges", ())),
        additions=additions,
        classification=data.get("classification"),
    )


# ---------------------------------------------------------------------------
# six-vertex certification

def _check_preconditions(g: AbstractGraph, e: LinearEmbedding, size: int):
    if e.graph != g:
        raise PreconditionError("embedding does not belong to the given graph")
    if len(g.vertices) != size:
        raise PreconditionError(f"graph must have {size} vertices")
    if not is_connected(g):
        raise PreconditionError("graph is not connected")
    dmin = min_valency(g)
    if dmin < 3:
        raise PreconditionError(f"min valency {dmin} < 3")
    report = validate_embedding(e)
    if not report.ok:
        raise PreconditionError(f"invalid embedding: {report.violations[0]}")


def _greedy_closure(ig: IsotopyGraph, present: set[Chord]):
    """Add absent chords via rescues then slides; None if stuck."""
    absent = [c for c in ig.chords if c not in present]
    adj = ig.neighbors()
    additions: list[Addition] = []
    while absent:
        step = None
        for c in sorted(absent):
            if c in ig.rescue:
                step = Addition(c, "rescue", (ig.rescue[c],))
                break
        if step is None:
            for c in sorted(absent):
                options = []
                for edge in adj[c]:
                    other = edge.chord_b if edge.chord_a == c else edge.chord_a
                    if other in present:
                        options.append((edge.kind != "M1", other,
                                        tuple(sorted(tuple(sorted(t))
                                                     for t in edge.triangles)),
                                        edge))
                if options:
                    options.sort(key=lambda o: o[:3])
                    edge = options[0][3]
                    other = (edge.chord_b if edge.chord_a == c
                             else edge.chord_a)
                    kind = "slide_m1" if edge.kind == "M1" else "slide_m2"
                    step = Addition(c, kind, edge.triangles, neighbor=other)
                    break
        if step is None:
            return None
        additions.append(step)
        present.add(step.chord)
        absent.remove(step.chord)
    return additions


def certify_six(g: AbstractGraph, e: LinearEmbedding):
    """Certificate of freeness for a 6-vertex graph, or Inconclusive.

    The labeling and trivial hulls are computed once for the extension of
    the embedding to K6 (all 15 segments).  Each Hamiltonian cycle of g is
    tried in lexicographic order; the first whose greedy chord closure
    completes all 9 chords yields the certificate.
    """
    _check_preconditions(g, e, 6)
    labeling = canonical_labeling(e)
    label_of = {v: l for l, v in enumerate(labeling, start=1)}
    hulls = trivial_hulls(e, labeling)
    g_label_edges = {frozenset((label_of[a], label_of[b])) for a, b in g.edges}
    for cycle_ids in hamiltonian_cycles(g):
        p = tuple(label_of[v] for v in cycle_ids)
        ig = build_isotopy_graph(p, hulls)
        bridges = tuple(c for c in ig.chords if frozenset(c) in g_label_edges)
        additions = _greedy_closure(ig, set(bridges))
        if additions is not None:
            return FreenessCertificate(
                kind="six_vertex",
                vertices=tuple(g.vertices),
                justification=AXIOM_COMPLETE_GRAPH,
                labeling=labeling,
                cycle=p,
                bridges=bridges,
                additions=tuple(additions),
            )
    return Inconclusive("no Hamiltonian cycle admits a complete chord closure")


# ---------------------------------------------------------------------------
# four- and five-vertex certification

def _tet_faces(tet):
    """(face, opposite vertex) for all 4 faces of a 4-tuple of ids."""
    a, b, c, d = tet
    return [((b, c, d), a), ((a, c, d), b), ((a, b, d), c), ((a, b, c), d)]


def _inside_tetrahedron(pts, tet, w) -> bool:
    for (f1, f2, f3), opp in _tet_faces(tet):
        if orient3d(pts[f1], pts[f2], pts[f3], pts[w]) != \
                orient3d(pts[f1], pts[f2], pts[f3], pts[opp]):
            return False
    return True


def _edge_meets_interior(pts, tet, w, x) -> bool:
    """Open segment from outside point w to tetrahedron vertex x meets the
    open interior iff w lies strictly on the interior side of the three
    faces through x."""
    for (f1, f2, f3), opp in _tet_faces(tet):
        if x == opp:
            continue
        if orient3d(pts[f1], pts[f2], pts[f3], pts[w]) != \
                orient3d(pts[f1], pts[f2], pts[f3], pts[opp]):
            return False
    return True


def _five_vertex_type(pts, g, v, tet):
    """(type_tag, piercing edge targets) for the fifth vertex v against the
    tetrahedron on `tet`."""
    if _inside_tetrahedron(pts, tet, v):
        return "vertex-in-interior", []
    targets = [x for x in tet if g.has_edge(v, x)]
    meeting = [x for x in targets if _edge_meets_interior(pts, tet, v, x)]
    if len(meeting) == 0:
        return "no-edge-meets-interior", []
    if len(meeting) == 1:
        return "one-edge-meets-interior", meeting
    return None, meeting


def certify_small(g: AbstractGraph, e: LinearEmbedding):
    """Certificates for 4- and 5-vertex graphs with min valency >= 3.

    4 vertices forces K4 (axiom).  A complete K5 is likewise an axiom
    instance.  The two remaining 5-vertex graphs are classified by the
    exact position of a minimal-id valency-3 vertex relative to the
    tetrahedron on the other four: interior, exterior with no incident
    edge meeting the interior, or exterior with exactly one.  Any other
    outcome would fall outside the known trichotomy and yields
    Inconclusive (geometrically impossible for valid input, because the
    interior cones at two tetrahedron vertices only overlap inside it).
    """
    size = len(g.vertices)
    if size not in (4, 5):
        raise PreconditionError("certify_small handles 4 or 5 vertices")
    _check_preconditions(g, e, size)
    n_edges = len(g.edges)
    if size == 4:
        # min valency 3 on 4 vertices forces the complete graph
        return FreenessCertificate(
            kind="four_vertex",
            vertices=tuple(g.vertices),
            justification=AXIOM_COMPLETE_GRAPH,
            classification={"complete_graph": True},
        )
    if n_edges == 10:
        return FreenessCertificate(
            kind="five_vertex",
            vertices=tuple(g.vertices),
            justification=AXIOM_COMPLETE_GRAPH,
            classification={"complete_graph": True},
        )
    pts = _int_points(e)
    degrees = {v: g.degree(v) for v in g.vertices}
    valencies = sorted(degrees.values(), reverse=True)
    v = min(u for u in g.vertices if degrees[u] == 3)
    tet = tuple(sorted(u for u in g.vertices if u != v))
    type_tag, meeting = _five_vertex_type(pts, g, v, tet)
    if type_tag is None:
        return Inconclusive(
            f"vertex {v} has {len(meeting)} incident edges meeting the "
            f"tetrahedron interior; outside the classification")
    classification = {
        "valencies": valencies,
        "fifth_vertex": v,
        "tetrahedron": list(tet),
        "type": type_tag,
        "edges_meeting_interior": sorted(meeting),
    }
    if valencies == [4, 3, 3, 3, 3]:
        survey = []
        for sub in combinations(sorted(g.vertices), 4):
            w = next(u for u in g.vertices if u not in sub)
            inside = _inside_tetrahedron(pts, sub, w)
            targets = [x for x in sub if g.has_edge(w, x)]
            meets = ([] if inside else
                     [x for x in targets
                      if _edge_meets_interior(pts, sub, w, x)])
            survey.append({
                "hull": list(sub),
                "apex": w,
                "apex_in_interior": inside,
                "edges_meeting_interior": sorted(meets),
            })
        classification["hull_survey"] = survey
    return FreenessCertificate(
        kind="five_vertex",
        vertices=tuple(g.vertices),
        justification=FIVE_VERTEX_TAG,
        classification=classification,
    )


def certify(g: AbstractGraph, e: LinearEmbedding):
    """Dispatch on vertex count: 4, 5 -> certify_small; 6 -> certify_six."""
    size = len(g.vertices)
    if size in (4, 5):
        return certify_small(g, e)
    if size == 6:
        return certify_six(g, e)
    raise PreconditionError("certification handles 4 to 6 vertices only")
