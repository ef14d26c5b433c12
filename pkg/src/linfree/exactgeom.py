"""Exact rational geometric predicates in 3-space.

Every predicate in this module is decided by the sign of an integer or
rational expression.  There are no tolerances and no floating point:
coordinates are `fractions.Fraction` values (or plain ints, which behave
identically under the arithmetic used here), so all answers are exact.

Degenerate inputs are rejected, never repaired.  A collinear triple handed
to a triangle predicate, or a segment endpoint lying on a triangle's plane,
raises an error: downstream code treats such configurations as violations
of the general-position requirement and discards the embedding.

Points are triples and may be passed as :class:`Point3`, as plain tuples of
ints, or as tuples of Fractions; the predicates only index and do ring
arithmetic, so all three work interchangeably.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

Rational = Fraction


class DegenerateTriangleError(ValueError):
    """Raised when three supposedly independent points are collinear."""


class GeneralPositionError(ValueError):
    """Raised when a predicate meets a configuration it cannot decide
    transversally (e.g. a segment endpoint on a triangle's plane)."""


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class Point3(tuple):
    """An exact point of 3-space.  Behaves as a plain (x, y, z) tuple."""

    __slots__ = ()

    def __new__(cls, x, y, z):
        return tuple.__new__(cls, (_coerce(x), _coerce(y), _coerce(z)))

    @property
    def x(self) -> Fraction:
        return self[0]

    @property
    def y(self) -> Fraction:
        return self[1]

    @property
    def z(self) -> Fraction:
        return self[2]

    def __repr__(self) -> str:
        return f"Point3({self[0]}, {self[1]}, {self[2]})"


@dataclass(frozen=True)
class Segment:
    """A nondegenerate straight segment between two points."""

    a: Point3
    b: Point3

    def __post_init__(self):
        if tuple(self.a) == tuple(self.b):
            raise ValueError("segment endpoints coincide")


@dataclass(frozen=True)
class Triangle:
    """An ordered nondegenerate triangle (i, j, k)."""

    i: Point3
    j: Point3
    k: Point3

    def __post_init__(self):
        if collinear(self.i, self.j, self.k):
            raise DegenerateTriangleError("triangle vertices are collinear")


class Side(enum.Enum):
    PLUS = 1
    MINUS = -1
    ON_PLANE = 0


# ---------------------------------------------------------------------------
# raw vector helpers (work on any 3-sequences of ints/Fractions)

def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vcross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def vdot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# predicates

def orient3d(p, q, r, s) -> int:
    """Sign of det[q-p; r-p; s-p]: +1, -1, or 0 iff the points are coplanar.

    Antisymmetric under every transposition of its four arguments.
    """
    return sign(vdot(vsub(q, p), vcross(vsub(r, p), vsub(s, p))))


def collinear(p, q, r) -> bool:
    return vcross(vsub(q, p), vsub(r, p)) == (0, 0, 0)


def halfspace_side(i, j, k, p) -> Side:
    """Which side of the oriented plane through i, j, k the point p lies on.

    The plane is oriented by the normal (j-i) x (k-j); the PLUS side is
    where ((j-i) x (k-j)) . (p-j) > 0.  This sign equals orient3d(i, j, k, p).
    """
    if collinear(i, j, k):
        raise DegenerateTriangleError("halfspace_side: collinear base points")
    return Side(orient3d(i, j, k, p))


def pierces(a, b, t1, t2, t3) -> bool:
    """True iff the open segment ab crosses the open triangle t1 t2 t3
    transversally in a single interior point.

    Raw-point variant of :func:`segment_pierces_triangle`.  Raises
    GeneralPositionError when an endpoint lies on the triangle's plane or
    when the crossing would touch the triangle's boundary; callers must
    treat that as a violation of general position, not as an answer.
    """
    sa = orient3d(t1, t2, t3, a)
    sb = orient3d(t1, t2, t3, b)
    if sa == 0 or sb == 0:
        raise GeneralPositionError("segment endpoint on triangle plane")
    if sa == sb:
        return False
    s1 = orient3d(a, b, t1, t2)
    s2 = orient3d(a, b, t2, t3)
    s3 = orient3d(a, b, t3, t1)
    if 0 in (s1, s2, s3):
        raise GeneralPositionError("segment meets triangle boundary")
    return s1 == s2 == s3


def segment_pierces_triangle(s: Segment, t: Triangle) -> bool:
    """True iff the open segment crosses the open triangle interior once."""
    return pierces(s.a, s.b, t.i, t.j, t.k)


def general_position(points: Sequence) -> bool:
    """No two points equal, no three collinear, no four coplanar."""
    pts = [tuple(p) for p in points]
    n = len(pts)
    for i, j in combinations(range(n), 2):
        if pts[i] == pts[j]:
            return False
    for i, j, k in combinations(range(n), 3):
        if collinear(pts[i], pts[j], pts[k]):
            return False
    for i, j, k, l in combinations(range(n), 4):
        if orient3d(pts[i], pts[j], pts[k], pts[l]) == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# projection along an integer direction

def projection_frame(direction) -> tuple[int, int, int]:
    """Axis indices (i, j, k) for projecting along `direction`.

    i is the smallest axis with a nonzero component of the direction; the
    image plane is spanned by the canonical vectors e_j, e_k of the two
    remaining axes, j < k.  This fixed rule makes diagrams reproducible.
    """
    d = tuple(direction)
    if d == (0, 0, 0):
        raise ValueError("zero direction")
    i = min(t for t in range(3) if d[t] != 0)
    j, k = (t for t in range(3) if t != i)
    return i, j, k


def project(p, direction) -> tuple[Fraction, Fraction]:
    """Coordinates of p in the basis (e_j, e_k, direction), dropping the
    direction component.  Points differing by a multiple of `direction`
    project to the same image point.
    """
    i, j, k = projection_frame(direction)
    d = tuple(direction)
    g = Fraction(p[i], d[i])
    return (_coerce(p[j]) - d[j] * g, _coerce(p[k]) - d[k] * g)


def segments_cross_2d(s1, s2):
    """Exact crossing point of two open 2D segments, or None.

    Returns the intersection only when the open segments cross
    transversally in a single interior point; parallel, collinear and
    endpoint-touching configurations give None.
    """
    (a1, b1), (a2, b2) = s1, s2
    d1 = (b1[0] - a1[0], b1[1] - a1[1])
    d2 = (b2[0] - a2[0], b2[1] - a2[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if denom == 0:
        return None
    w = (a2[0] - a1[0], a2[1] - a1[1])
    t1 = Fraction(w[0] * d2[1] - w[1] * d2[0], denom)
    t2 = Fraction(w[0] * d1[1] - w[1] * d1[0], denom)
    if not (0 < t1 < 1 and 0 < t2 < 1):
        return None
    return (_coerce(a1[0]) + t1 * d1[0], _coerce(a1[1]) + t1 * d1[1])


# ---------------------------------------------------------------------------
# integer scaling

def scaled_int_points(points: Sequence) -> list[tuple[int, int, int]]:
    """Scale a point set by the lcm of all coordinate denominators.

    Returns integer triples.  Every predicate above is invariant under a
    common positive scaling, so downstream sign computations are unaffected
    while the arithmetic gets much cheaper.
    """
    pts = [tuple(_coerce(c) for c in p) for p in points]
    scale = 1
    for p in pts:
        for c in p:
            scale = lcm(scale, c.denominator)
    return [tuple(int(c * scale) for c in p) for p in pts]
