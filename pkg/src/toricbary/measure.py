"""Lattice-normalized face volumes, centroids and barycenter profiles.

Each k-face carries the Lebesgue measure of its direction space scaled so
that a fundamental parallelotope of the induced lattice has measure 1.
``B_k`` is the centroid of the sum of these measures over all k-faces and
``Vol_k`` its total mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .exact import RatVector, det, inverse, rref
from .polytope import DelzantPolytope, Face

ApexRule = Callable[[Sequence[int]], int]


@dataclass(frozen=True)
class BarycenterProfile:
    n: int
    vol: tuple[Fraction, ...]
    bary: tuple[RatVector, ...]


def _lattice_coordinates(face: Face) -> Callable[[Sequence[Fraction]], list[Fraction]]:
    """Map a direction vector of ``face`` to its coordinates in ``direction_basis``."""
    basis = face.direction_basis
    k = len(basis)
    # k ambient coordinates on which the basis is invertible: the pivot
    # columns of the basis written as rows
    _, rows = rref(basis)
    minv = inverse([[b[r] for b in basis] for r in rows])
    return lambda d: [sum(row[j] * d[rows[j]] for j in range(k)) for row in minv]


def triangulate(p: DelzantPolytope, face: Face, apex: ApexRule = min) -> list[tuple[int, ...]]:
    """Pulling triangulation of ``face`` into simplices of vertex ids.

    The apex of every face visited is ``apex(vertex_ids)``; the default pulls
    from the lexicographically smallest vertex.
    """
    if face.dim == 0:
        return [face.vertex_ids]
    a = apex(face.vertex_ids)
    out = []
    for g in p.subfaces(face):
        if a in g.vertex_ids:
            continue
        out.extend((a,) + s for s in triangulate(p, g, apex))
    return out


def _simplex_data(p: DelzantPolytope, face: Face, apex: ApexRule):
    coords = _lattice_coordinates(face)
    k = face.dim
    for simplex in triangulate(p, face, apex):
        pts = [p.vertices[i] for i in simplex]
        base = pts[0]
        m = [coords([x - y for x, y in zip(q, base)]) for q in pts[1:]]
        vol = abs(det(m)) / factorial(k)
        centroid = tuple(sum(c) / (k + 1) for c in zip(*pts))
        yield Fraction(vol), centroid


def face_lattice_volume(p: DelzantPolytope, face: Face, apex: ApexRule = min) -> Fraction:
    if face.dim == 0:
        return Fraction(1)
    return sum((v for v, _ in _simplex_data(p, face, apex)), Fraction(0))


def face_centroid(p: DelzantPolytope, face: Face, apex: ApexRule = min) -> RatVector:
    if face.dim == 0:
        return p.vertices[face.vertex_ids[0]]
    total = Fraction(0)
    acc = [Fraction(0)] * p.dimension
    for v, c in _simplex_data(p, face, apex):
        total += v
        acc = [a + v * x for a, x in zip(acc, c)]
    return tuple(a / total for a in acc)


def barycenter_profile(p: DelzantPolytope) -> BarycenterProfile:
    """``Vol_k`` and ``B_k`` for ``k = 0..n``."""
    n = p.dimension
    vol = [Fraction(0)] * (n + 1)
    moment = [[Fraction(0)] * n for _ in range(n + 1)]
    for f in p.faces:
        vol[f.dim] += f.lattice_volume
        moment[f.dim] = [m + f.lattice_volume * c for m, c in zip(moment[f.dim], f.centroid)]
    bary = tuple(tuple(m / v for m in row) for row, v in zip(moment, vol))
    return BarycenterProfile(n=n, vol=tuple(vol), bary=bary)


def symplectic_volume(p: DelzantPolytope) -> Fraction:
    """Symplectic volume ``n! * Vol_n`` of the toric manifold over ``p``."""
    return factorial(p.dimension) * p.profile.vol[p.dimension]
