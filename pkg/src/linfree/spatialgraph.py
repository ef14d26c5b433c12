"""Abstract graphs, linear embeddings, and the combinatorial services the
certification pipeline consumes: validation, Hamiltonian cycles, valency,
vertex connectivity, isomorphism-free enumeration and seeded sampling.

A linear embedding is determined entirely by its vertex coordinates; edges
are straight segments between them.  Embeddings are carried by
:class:`LinearEmbedding` and checked by :func:`validate_embedding`; all
other operations assume (and where cheap, re-assert) validity.

Embedding interchange format (UTF-8 JSON)::

    {"vertices": {"<id>": ["<num>/<den>", "<num>/<den>", "<num>/<den>"], ...},
     "edges": [[id, id], ...]}

Ids are integers (JSON object keys are their decimal strings); coordinates
are exact rationals serialized as strings.  Extra top-level keys (e.g. a
"metadata" block written by the generators) are preserved by the loader.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping

from .exactgeom import (
    Point3,
    collinear,
    general_position,
    orient3d,
    scaled_int_points,
    sign,
    vcross,
    vdot,
    vsub,
)


class EmbeddingFormatError(ValueError):
    """Raised by the JSON loader on malformed input."""


class RetryBudgetError(RuntimeError):
    """Raised when rejection sampling exhausts its retry budget."""


@dataclass(frozen=True)
class AbstractGraph:
    """A simple graph: ordered vertex ids and a set of unordered edges."""

    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"loop edge at {a}")
            if a > b:
                raise ValueError(f"edge ({a},{b}) not in sorted order")
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a},{b}) uses unknown vertex")

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for v in adj:
            adj[v].sort()
        return adj

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges


def make_graph(vertices: Iterable[int], edges: Iterable) -> AbstractGraph:
    """Build an AbstractGraph, normalizing edge order."""
    vs = tuple(sorted(vertices))
    es = frozenset((min(a, b), max(a, b)) for a, b in edges)
    return AbstractGraph(vs, es)


def complete_graph(n_or_ids) -> AbstractGraph:
    ids = list(range(n_or_ids)) if isinstance(n_or_ids, int) else list(n_or_ids)
    return make_graph(ids, combinations(sorted(ids), 2))


def cycle_graph(n_or_ids) -> AbstractGraph:
    ids = list(range(n_or_ids)) if isinstance(n_or_ids, int) else list(n_or_ids)
    edges = [(ids[i], ids[(i + 1) % len(ids)]) for i in range(len(ids))]
    return make_graph(ids, edges)


def is_connected(g: AbstractGraph) -> bool:
    if not g.vertices:
        return False
    adj = g.adjacency()
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.vertices)


def min_valency(g: AbstractGraph) -> int:
    """Minimum vertex degree over the graph."""
    if not g.vertices:
        raise ValueError("min_valency of empty graph")
    return min(g.degree(v) for v in g.vertices)


@dataclass
class LinearEmbedding:
    """A graph together with exact vertex coordinates.

    The class itself is a plain carrier; whether the data actually is an
    embedding (injective coordinates, general position, hence pairwise
    disjoint open edges) is decided by :func:`validate_embedding`.
    """

    graph: AbstractGraph
    coords: dict[int, Point3]

    def point(self, v: int) -> Point3:
        return self.coords[v]

    def points(self) -> list[Point3]:
        return [self.coords[v] for v in self.graph.vertices]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(self.violations)


def _segments_intersect_3d(a, b, c, d) -> bool:
    """Exact intersection test for vertex-disjoint closed segments ab, cd."""
    if orient3d(a, b, c, d) != 0:
        return False
    ab, cd = vsub(b, a), vsub(d, c)
    n = vcross(ab, cd)
    if n == (0, 0, 0):
        # parallel segments in a common plane: overlap iff collinear and
        # the parameter ranges overlap
        if vcross(ab, vsub(c, a)) != (0, 0, 0):
            return False
        ta, tb = 0, vdot(ab, ab)
        tc, td = vdot(vsub(c, a), ab), vdot(vsub(d, a), ab)
        lo, hi = min(tc, td), max(tc, td)
        return not (hi < ta or lo > tb)
    # coplanar and non-parallel: closed segments meet iff c, d do not lie
    # strictly on one side of line ab and a, b not strictly on one side of cd
    s1 = sign(vdot(vcross(ab, vsub(c, a)), n))
    s2 = sign(vdot(vcross(ab, vsub(d, a)), n))
    s3 = sign(vdot(vcross(cd, vsub(a, c)), n))
    s4 = sign(vdot(vcross(cd, vsub(b, c)), n))
    return s1 * s2 <= 0 and s3 * s4 <= 0


def validate_embedding(e: LinearEmbedding) -> ValidationReport:
    """List every violated embedding invariant; an empty report means valid.

    Checks, in order: coordinate map covers exactly the vertex set, no
    duplicate coordinates, no collinear vertex triple, no coplanar vertex
    quadruple, and (redundantly, since general position already implies it)
    that no two vertex-disjoint edges intersect.
    """
    rep = ValidationReport()
    g = e.graph
    if set(e.coords) != set(g.vertices):
        rep.violations.append("coordinate map does not match vertex set")
        return rep
    ids = list(g.vertices)
    # work on a common integer scaling: every check below is invariant
    # under positive scaling, and integer arithmetic is much cheaper
    scaled = scaled_int_points([e.coords[v] for v in ids])
    pts = dict(zip(ids, scaled))
    for a, b in combinations(ids, 2):
        if pts[a] == pts[b]:
            rep.violations.append(f"duplicate coordinate: vertices {a}, {b}")
    if rep.violations:
        return rep
    for a, b, c in combinations(ids, 3):
        if collinear(pts[a], pts[b], pts[c]):
            rep.violations.append(f"collinear triple: {a}, {b}, {c}")
    for a, b, c, d in combinations(ids, 4):
        if orient3d(pts[a], pts[b], pts[c], pts[d]) == 0:
            rep.violations.append(f"coplanar quadruple: {a}, {b}, {c}, {d}")
    if rep.violations:
        return rep
    edges = sorted(g.edges)
    for (a, b), (c, d) in combinations(edges, 2):
        if len({a, b, c, d}) < 4:
            continue
        if _segments_intersect_3d(pts[a], pts[b], pts[c], pts[d]):
            rep.violations.append(f"segments intersect: ({a},{b}) x ({c},{d})")
    return rep


# ---------------------------------------------------------------------------
# Hamiltonian cycles

def hamiltonian_cycles(g: AbstractGraph) -> list[tuple[int, ...]]:
    """All Hamiltonian cycles in canonical form, lexicographically sorted.

    Canonical form starts at the minimal vertex id and orients the cycle so
    the second element is smaller than the last, which kills the rotation
    and reflection duplicates.
    """
    n = len(g.vertices)
    if n < 3:
        return []
    adj = g.adjacency()
    start = min(g.vertices)
    out: list[tuple[int, ...]] = []

    def extend(path: list[int], used: set[int]):
        if len(path) == n:
            if g.has_edge(path[-1], start) and path[1] < path[-1]:
                out.append(tuple(path))
            return
        for w in adj[path[-1]]:
            if w not in used:
                used.add(w)
                path.append(w)
                extend(path, used)
                path.pop()
                used.remove(w)

    extend([start], {start})
    return out


# ---------------------------------------------------------------------------
# vertex connectivity (Menger via unit-capacity max-flow)

def _max_flow_vertex(g: AbstractGraph, s: int, t: int) -> int:
    """Minimum number of internal vertices separating non-adjacent s, t.

    Standard vertex-splitting: every vertex v becomes v_in -> v_out with
    capacity 1 (infinite for s, t); each edge contributes two directed arcs
    of effectively infinite capacity.  Max flow = min vertex cut by Menger.
    """
    ids = list(g.vertices)
    idx = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    big = n + 1
    # node 2i = v_in, 2i+1 = v_out
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, list[int]] = {i: [] for i in range(2 * n)}

    def add(u, v, c):
        if (u, v) not in cap:
            cap[(u, v)] = 0
            cap[(v, u)] = cap.get((v, u), 0)
            adj[u].append(v)
            adj[v].append(u)
        cap[(u, v)] += c

    for v in ids:
        c = big if v in (s, t) else 1
        add(2 * idx[v], 2 * idx[v] + 1, c)
    for a, b in g.edges:
        add(2 * idx[a] + 1, 2 * idx[b], big)
        add(2 * idx[b] + 1, 2 * idx[a], big)
    source, sink = 2 * idx[s] + 1, 2 * idx[t]
    flow = 0
    while True:
        # BFS augmenting path
        prev = {source: None}
        queue = [source]
        while queue and sink not in prev:
            u = queue.pop(0)
            for v in adj[u]:
                if v not in prev and cap.get((u, v), 0) > 0:
                    prev[v] = u
                    queue.append(v)
        if sink not in prev:
            return flow
        v = sink
        while prev[v] is not None:
            u = prev[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


def vertex_connectivity(g: AbstractGraph) -> int:
    """Exact vertex connectivity.

    0 for disconnected graphs, |V|-1 for complete graphs, otherwise the
    minimum over all non-adjacent pairs of the minimum vertex cut.
    """
    n = len(g.vertices)
    if n < 2:
        raise ValueError("vertex_connectivity needs at least 2 vertices")
    if not is_connected(g):
        return 0
    non_adjacent = [(a, b) for a, b in combinations(g.vertices, 2)
                    if not g.has_edge(a, b)]
    if not non_adjacent:
        return n - 1
    return min(_max_flow_vertex(g, a, b) for a, b in non_adjacent)


# ---------------------------------------------------------------------------
# enumeration up to isomorphism

def enumerate_graphs(num_vertices: int, min_val: int) -> list[AbstractGraph]:
    """All connected simple graphs on `num_vertices` labeled 0..n-1 with
    minimum valency >= min_val, one representative per isomorphism class.

    Dedup is by explicit orbit computation over all n! vertex permutations,
    which is trivial at n <= 6; the returned representative is the orbit's
    lexicographically least edge set.
    """
    if num_vertices > 6:
        raise ValueError("enumeration is restricted to at most 6 vertices")
    n = num_vertices
    pairs = list(combinations(range(n), 2))
    pair_idx = {p: i for i, p in enumerate(pairs)}
    perm_maps = []
    for pm in permutations(range(n)):
        perm_maps.append(tuple(pair_idx[tuple(sorted((pm[a], pm[b])))]
                               for a, b in pairs))

    def mask_connected(mask: int) -> bool:
        adj = [[] for _ in range(n)]
        for i, (a, b) in enumerate(pairs):
            if mask >> i & 1:
                adj[a].append(b)
                adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    reps = []
    done: set[int] = set()
    for mask in range(1 << len(pairs)):
        if mask in done:
            continue
        deg = [0] * n
        for i, (a, b) in enumerate(pairs):
            if mask >> i & 1:
                deg[a] += 1
                deg[b] += 1
        if n and min(deg) < min_val:
            continue
        if not mask_connected(mask):
            continue
        orbit = set()
        for mp in perm_maps:
            m2 = 0
            mm = mask
            while mm:
                low = mm & -mm
                m2 |= 1 << mp[low.bit_length() - 1]
                mm ^= low
            orbit.add(m2)
        done |= orbit
        reps.append(min(orbit))
    reps.sort()
    out = []
    for mask in reps:
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        out.append(make_graph(range(n), edges))
    return out


def are_isomorphic(g1: AbstractGraph, g2: AbstractGraph) -> bool:
    """Brute-force isomorphism test (fine at <= 6 vertices)."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    v1, v2 = list(g1.vertices), list(g2.vertices)
    for pm in permutations(v2):
        m = dict(zip(v1, pm))
        if all((min(m[a], m[b]), max(m[a], m[b])) in g2.edges for a, b in g1.edges):
            return True
    return False


# ---------------------------------------------------------------------------
# seeded sampling

def sample_embedding(g: AbstractGraph, coordinate_bound: int, seed: int,
                     retry_budget: int = 1000) -> LinearEmbedding:
    """Deterministic rejection sampler for general-position embeddings.

    Draws all vertex coordinates uniformly from the integer grid
    [0, coordinate_bound]^3 with random.Random(seed) and redraws the whole
    set until general position holds.  The same (graph, bound, seed) always
    yields the same embedding.
    """
    rng = random.Random(seed)
    n = len(g.vertices)
    for _ in range(retry_budget):
        pts = [tuple(rng.randint(0, coordinate_bound) for _ in range(3))
               for _ in range(n)]
        if general_position(pts):
            coords = {v: Point3(*p) for v, p in zip(g.vertices, pts)}
            return LinearEmbedding(g, coords)
    raise RetryBudgetError(
        f"no general-position draw in {retry_budget} attempts "
        f"(bound {coordinate_bound} too small for {n} vertices?)")


# ---------------------------------------------------------------------------
# JSON interchange

def embedding_to_dict(e: LinearEmbedding, metadata: dict | None = None) -> dict:
    data = {
        "vertices": {
            str(v): [f"{c.numerator}/{c.denominator}" for c in e.coords[v]]
            for v in e.graph.vertices
        },
        "edges": [[a, b] for a, b in sorted(e.graph.edges)],
    }
    if metadata is not None:
        data["metadata"] = metadata
    return data


def embedding_from_dict(data) -> LinearEmbedding:
    if not isinstance(data, dict):
        raise EmbeddingFormatError("top-level JSON value must be an object")
    try:
        raw_vertices = data["vertices"]
        raw_edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise EmbeddingFormatError(f"missing key: {exc}") from exc
    coords: dict[int, Point3] = {}
    try:
        for key, triple in raw_vertices.items():
            vid = int(key)
            x, y, z = (Fraction(str(c)) for c in triple)
            coords[vid] = Point3(x, y, z)
        edges = [(int(a), int(b)) for a, b in raw_edges]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise EmbeddingFormatError(f"malformed embedding data: {exc}") from exc
    try:
        g = make_graph(coords.keys(), edges)
    except ValueError as exc:
        raise EmbeddingFormatError(str(exc)) from exc
    return LinearEmbedding(g, coords)


def save_embedding(e: LinearEmbedding, path, metadata: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(embedding_to_dict(e, metadata), fh, indent=1)
        fh.write("\n")


def load_embedding(path) -> LinearEmbedding:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise EmbeddingFormatError(f"invalid JSON: {exc}") from exc
    return embedding_from_dict(data)


def load_embedding_with_metadata(path) -> tuple[LinearEmbedding, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise EmbeddingFormatError(f"invalid JSON: {exc}") from exc
    e = embedding_from_dict(data)
    meta = data.get("metadata", {}) if isinstance(data, dict) else {}
    return e, meta
