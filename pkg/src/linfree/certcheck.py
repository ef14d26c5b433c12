"""Independent re-checking of freeness certificates.

This module deliberately avoids the predicate and diagram machinery used to
*produce* certificates.  Every geometric fact is re-established here from
scratch with rational linear algebra:

* triangle piercing is decided by solving the 3x3 plane/line system and
  testing barycentric coordinates;
* the Hopf condition is re-checked by counting signed piercings of one
  triangle's disk by the other triangle's edges;
* half-space conditions are evaluated directly from the defining triple
  product;
* tetrahedron containment uses barycentric coordinates, and edge/interior
  contact an exact parameter-interval intersection.

`verify_certificate` replays a certificate against the embedding it claims
to certify and returns a list of problems; an empty list means the
certificate is sound.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .freeness import (
    AXIOM_COMPLETE_GRAPH,
    CERTIFICATE_FORMAT,
    FIVE_VERTEX_TAG,
)
from .spatialgraph import LinearEmbedding, validate_embedding


def _frac_point(p):
    return tuple(Fraction(c) for c in p)


def _solve3(m, rhs):
    """Solve a 3x3 rational system by Cramer; None if singular."""
    def det3(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))

    d = det3(m)
    if d == 0:
        return None
    sols = []
    for col in range(3):
        mm = [row[:] for row in m]
        for r in range(3):
            mm[r][col] = rhs[r]
        sols.append(Fraction(det3(mm), d))
    return sols


def pierce_by_solving(a, b, t1, t2, t3) -> bool:
    """Open segment ab crosses the open triangle t1 t2 t3.

    Solves a + t(b-a) = t1 + u(t2-t1) + w(t3-t1) and demands
    0 < t < 1, u > 0, w > 0, u + w < 1.
    """
    a, b = _frac_point(a), _frac_point(b)
    t1, t2, t3 = _frac_point(t1), _frac_point(t2), _frac_point(t3)
    m = [[b[i] - a[i], t1[i] - t2[i], t1[i] - t3[i]] for i in range(3)]
    rhs = [t1[i] - a[i] for i in range(3)]
    sol = _solve3(m, rhs)
    if sol is None:
        return False  # segment parallel to the plane: no transverse crossing
    t, u, w = sol
    return 0 < t < 1 and u > 0 and w > 0 and u + w < 1


def _plane_normal(t1, t2, t3):
    t1, t2, t3 = _frac_point(t1), _frac_point(t2), _frac_point(t3)
    u = tuple(t2[i] - t1[i] for i in range(3))
    v = tuple(t3[i] - t1[i] for i in range(3))
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def disk_linking(tri, cycle) -> int:
    """Signed count of piercings of the triangle's disk by the cycle's
    edges; equals the linking number of the two curves when disjoint."""
    t1, t2, t3 = tri
    n = _plane_normal(t1, t2, t3)
    total = 0
    m = len(cycle)
    for i in range(m):
        a, b = _frac_point(cycle[i]), _frac_point(cycle[(i + 1) % m])
        if pierce_by_solving(a, b, t1, t2, t3):
            d = tuple(b[j] - a[j] for j in range(3))
            dn = sum(d[j] * n[j] for j in range(3))
            total += 1 if dn > 0 else -1
    return total


def halfspace_sign(i, j, k, p) -> int:
    """Sign of ((j-i) x (k-j)) . (p-j), straight from the definition."""
    i, j, k, p = (_frac_point(q) for q in (i, j, k, p))
    u = tuple(j[t] - i[t] for t in range(3))
    v = tuple(k[t] - j[t] for t in range(3))
    cr = (u[1] * v[2] - u[2] * v[1],
          u[2] * v[0] - u[0] * v[2],
          u[0] * v[1] - u[1] * v[0])
    w = tuple(p[t] - j[t] for t in range(3))
    val = sum(cr[t] * w[t] for t in range(3))
    return (val > 0) - (val < 0)


def barycentric_in_tetrahedron(tet_pts, p):
    """Barycentric coordinates of p in the tetrahedron, or None if flat."""
    a, b, c, d = (_frac_point(q) for q in tet_pts)
    p = _frac_point(p)
    m = [[b[i] - a[i], c[i] - a[i], d[i] - a[i]] for i in range(3)]
    rhs = [p[i] - a[i] for i in range(3)]
    sol = _solve3(m, rhs)
    if sol is None:
        return None
    l1, l2, l3 = sol
    return (1 - l1 - l2 - l3, l1, l2, l3)


def point_in_tetrahedron(tet_pts, p) -> bool:
    bary = barycentric_in_tetrahedron(tet_pts, p)
    return bary is not None and all(c > 0 for c in bary)


def segment_meets_tet_interior(tet_pts, a, b) -> bool:
    """Does the open segment ab meet the open tetrahedron interior?

    Each barycentric coordinate of a + t(b-a) is affine in t; the segment
    meets the interior iff the four strict positivity intervals and (0, 1)
    have a common point.
    """
    ba = barycentric_in_tetrahedron(tet_pts, a)
    bb = barycentric_in_tetrahedron(tet_pts, b)
    if ba is None or bb is None:
        return False
    lo, hi = Fraction(0), Fraction(1)
    for c0, c1 in zip(ba, bb):
        slope = c1 - c0
        if slope == 0:
            if c0 <= 0:
                return False
            continue
        root = Fraction(-c0, slope)
        if slope > 0:
            lo = max(lo, root)
        else:
            hi = min(hi, root)
    return lo < hi


# ---------------------------------------------------------------------------
# certificate verification

def _triangle_trivial(pts_by_label, tri) -> bool:
    """Re-check triviality: no segment between any two of the six vertices
    (other than the triangle's own edges) crosses the open triangle."""
    t = [pts_by_label[l] for l in sorted(tri)]
    for a, b in combinations(range(1, 7), 2):
        if a in tri and b in tri:
            continue
        if pierce_by_solving(pts_by_label[a], pts_by_label[b], *t):
            return False
    return True


def labeling_problems(e: LinearEmbedding, labeling) -> list[str]:
    """Independent re-check of the five canonical-labeling conditions."""
    problems = []
    labeling = tuple(labeling)
    if sorted(labeling) != sorted(e.graph.vertices):
        return ["labeling is not a permutation of the vertex ids"]
    pts = {l: tuple(e.coords[v]) for l, v in enumerate(labeling, start=1)}
    lk = disk_linking((pts[1], pts[2], pts[3]), [pts[4], pts[5], pts[6]])
    if abs(lk) != 1:
        problems.append(f"triangles 123/456 are not a Hopf link (lk={lk})")
    if not pierce_by_solving(pts[4], pts[5], pts[1], pts[2], pts[3]):
        problems.append("segment 45 does not pierce triangle 123")
    if not pierce_by_solving(pts[1], pts[3], pts[4], pts[5], pts[6]):
        problems.append("segment 13 does not pierce triangle 456")
    for label, want in ((4, 1), (6, 1), (5, -1)):
        if halfspace_sign(pts[1], pts[3], pts[2], pts[label]) != want:
            problems.append(f"vertex {label} on wrong side of plane 132")
    for label, want in ((6, 1), (2, -1), (5, -1)):
        if halfspace_sign(pts[1], pts[3], pts[4], pts[label]) != want:
            problems.append(f"vertex {label} on wrong side of plane 134")
    return problems


def _verify_six(cert: dict, e: LinearEmbedding) -> list[str]:
    problems = []
    g = e.graph
    labeling = tuple(cert.get("labeling", ()))
    if sorted(labeling) != sorted(g.vertices):
        return ["labeling does not match the vertex set"]
    problems += labeling_problems(e, labeling)
    pts = {l: tuple(e.coords[v]) for l, v in enumerate(labeling, start=1)}
    label_of = {v: l for l, v in enumerate(labeling, start=1)}
    cycle = tuple(cert.get("cycle", ()))
    if sorted(cycle) != list(range(1, 7)):
        return problems + ["cycle is not a permutation of labels 1..6"]
    cycle_edges = {frozenset((cycle[i], cycle[(i + 1) % 6])) for i in range(6)}
    g_label_edges = {frozenset((label_of[a], label_of[b])) for a, b in g.edges}
    for ce in cycle_edges:
        if ce not in g_label_edges:
            problems.append(f"cycle edge {sorted(ce)} is not an edge of the graph")
    chords = {tuple(sorted(c)) for c in combinations(range(1, 7), 2)
              if frozenset(c) not in cycle_edges}
    bridges = [tuple(c) for c in cert.get("bridges", ())]
    want_bridges = sorted(c for c in chords if frozenset(c) in g_label_edges)
    if sorted(bridges) != want_bridges:
        problems.append("bridge set is not the set of graph chords off the cycle")
    arc_through = {}
    for i in range(6):
        a, m, b = cycle[(i - 1) % 6], cycle[i], cycle[(i + 1) % 6]
        arc_through[frozenset((a, b))] = m
    present = set(bridges)
    for pos, add in enumerate(cert.get("additions", ())):
        chord = tuple(add["chord"])
        kind = add["witness_kind"]
        tris = [frozenset(t) for t in add["witness_triangles"]]
        where = f"addition {pos} ({chord})"
        if chord not in chords:
            problems.append(f"{where}: not a chord of the cycle")
            continue
        if chord in present:
            problems.append(f"{where}: chord already present")
            continue
        for tri in tris:
            if not _triangle_trivial(pts, tri):
                problems.append(f"{where}: witness triangle {sorted(tri)} "
                                f"is not trivial")
        if kind == "rescue":
            a, b = chord
            m = arc_through.get(frozenset((a, b)))
            if m is None:
                problems.append(f"{where}: no 2-edge cycle arc joins {a}, {b}")
            elif tris != [frozenset((a, m, b))]:
                problems.append(f"{where}: rescue witness should be triangle "
                                f"{sorted((a, m, b))}")
        elif kind in ("slide_m1", "slide_m2"):
            neighbor = tuple(add.get("neighbor") or ())
            if neighbor not in present:
                problems.append(f"{where}: slide neighbor {neighbor} not present")
            shared = set(chord) & set(neighbor)
            if len(shared) != 1:
                problems.append(f"{where}: neighbor shares {len(shared)} labels")
            else:
                x = shared.pop()
                a = (set(chord) - {x}).pop()
                b = (set(neighbor) - {x}).pop()
                slide_disk = frozenset((a, b, x))
                if kind == "slide_m1":
                    if frozenset((a, b)) not in cycle_edges:
                        problems.append(f"{where}: {a}{b} is not a cycle edge")
                    if tris != [slide_disk]:
                        problems.append(f"{where}: M1 witness should be "
                                        f"{sorted(slide_disk)}")
                else:
                    m = arc_through.get(frozenset((a, b)))
                    if m is None:
                        problems.append(f"{where}: no 2-edge arc joins {a}, {b}")
                    elif tris != [frozenset((a, m, b)), slide_disk]:
                        problems.append(f"{where}: M2 witnesses should be "
                                        f"{sorted((a, m, b))}, {sorted(slide_disk)}")
        else:
            problems.append(f"{where}: unknown witness kind {kind!r}")
        present.add(chord)
    if present != chords:
        missing = sorted(chords - present)
        problems.append(f"chords never added: {missing}")
    if cert.get("justification") != AXIOM_COMPLETE_GRAPH:
        problems.append("missing terminal complete-graph axiom tag")
    return problems


def _verify_small(cert: dict, e: LinearEmbedding) -> list[str]:
    problems = []
    g = e.graph
    n = len(g.vertices)
    cls = cert.get("classification") or {}
    if cls.get("complete_graph"):
        want = n * (n - 1) // 2
        if len(g.edges) != want:
            problems.append("certificate claims a complete graph; it is not")
        if cert.get("justification") != AXIOM_COMPLETE_GRAPH:
            problems.append("complete graph certificate missing the axiom tag")
        return problems
    if cert.get("kind") == "four_vertex":
        return ["four-vertex certificate must be a complete-graph axiom"]
    if cert.get("justification") != FIVE_VERTEX_TAG:
        problems.append("five-vertex certificate missing its justification tag")
    v = cls.get("fifth_vertex")
    tet = tuple(cls.get("tetrahedron", ()))
    if v not in g.vertices or sorted(tet + (v,)) != sorted(g.vertices):
        return problems + ["classification vertices do not match the graph"]
    if g.degree(v) != 3:
        problems.append(f"fifth vertex {v} does not have valency 3")
    tet_pts = [tuple(e.coords[u]) for u in tet]
    inside = point_in_tetrahedron(tet_pts, tuple(e.coords[v]))
    meets = []
    if not inside:
        for x in tet:
            if not g.has_edge(v, x):
                continue
            if segment_meets_tet_interior(tet_pts, tuple(e.coords[v]),
                                          tuple(e.coords[x])):
                meets.append(x)
    want_type = ("vertex-in-interior" if inside else
                 "no-edge-meets-interior" if not meets else
                 "one-edge-meets-interior" if len(meets) == 1 else None)
    if want_type is None:
        problems.append(f"recomputed classification is outside the trichotomy "
                        f"({len(meets)} edges meet the interior)")
    elif cls.get("type") != want_type:
        problems.append(f"classification type {cls.get('type')!r} does not "
                        f"match recomputed {want_type!r}")
    if sorted(cls.get("edges_meeting_interior", [])) != sorted(meets):
        problems.append("recorded piercing edges do not match recomputation")
    return problems


def verify_certificate(cert: dict, e: LinearEmbedding) -> list[str]:
    """Replay a certificate against its embedding; [] means sound."""
    problems = []
    if cert.get("format") != CERTIFICATE_FORMAT:
        return [f"unknown certificate format {cert.get('format')!r}"]
    if tuple(cert.get("vertices", ())) != tuple(e.graph.vertices):
        return ["certificate vertex list does not match the embedding"]
    report = validate_embedding(e)
    if not report.ok:
        return [f"embedding invalid: {report.violations[0]}"]
    kind = cert.get("kind")
    if kind == "six_vertex":
        problems += _verify_six(cert, e)
    elif kind in ("four_vertex", "five_vertex"):
        problems += _verify_small(cert, e)
    else:
        problems.append(f"unknown certificate kind {kind!r}")
    return problems
