"""Delzant polytopes in H-representation.

A polytope is ``{x : <l_j, x> <= kappa_j}`` for primitive integer conormals
``l_j`` and rational supports ``kappa_j``. :func:`build` validates the input
and caches vertices, vertex-facet incidence and the face lattice.

Facets are 0-based in the Python API; messages and reports number them
``1..F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .errors import InvariantViolation, PolytopeError
from .exact import (
    IntVector,
    RatVector,
    affine_dimension,
    det,
    dot,
    integer_kernel_basis,
    inverse,
    is_primitive,
    rank,
    solve,
    transpose,
)


@dataclass(frozen=True)
class Face:
    """A nonempty face, identified by the facets containing it.

    ``direction_basis`` generates the lattice ``Z^n`` intersected with the
    face's direction space. ``lattice_volume`` and ``centroid`` are filled in
    by :attr:`DelzantPolytope.faces`; the skeletal faces used during
    construction leave them as ``None``.
    """

    dim: int
    active: frozenset[int]
    vertex_ids: tuple[int, ...]
    direction_basis: tuple[IntVector, ...]
    lattice_volume: Fraction | None = None
    centroid: RatVector | None = None


@dataclass(frozen=True)
class MonotoneNormalization:
    """Translation ``t`` with ``kappa_j - <l_j, t> == kappa`` for every facet."""

    translation: RatVector
    kappa: Fraction
    unique: bool = True


@dataclass(frozen=True)
class DelzantReport:
    ok: bool
    # (vertex, determinant of active conormals or None if not simple, active count)
    offending: tuple[tuple[RatVector, int | None, int], ...] = ()


@dataclass(frozen=True)
class DelzantPolytope:
    dimension: int
    conormals: tuple[IntVector, ...]
    supports: tuple[Fraction, ...]
    vertices: tuple[RatVector, ...]
    incidence: tuple[frozenset[int], ...]
    skeleton: tuple[Face, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.dimension

    @property
    def num_facets(self) -> int:
        return len(self.conormals)

    @cached_property
    def _by_active(self) -> dict[frozenset[int], int]:
        return {f.active: i for i, f in enumerate(self.skeleton)}

    def face_index(self, active: frozenset[int]) -> int:
        return self._by_active[frozenset(active)]

    def subfaces(self, face: Face) -> list[Face]:
        """Faces of dimension ``face.dim - 1`` contained in ``face``."""
        out = []
        for j in range(self.num_facets):
            if j in face.active:
                continue
            i = self._by_active.get(face.active | {j})
            if i is not None and self.skeleton[i].dim == face.dim - 1:
                out.append(self.skeleton[i])
        return out

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """Face lattice sorted by dimension, then by vertex ids."""
        from .measure import face_centroid, face_lattice_volume

        return tuple(
            replace(f, lattice_volume=face_lattice_volume(self, f), centroid=face_centroid(self, f))
            for f in self.skeleton
        )

    def faces_of_dim(self, k: int) -> list[Face]:
        return [f for f in self.faces if f.dim == k]

    def face_counts(self) -> tuple[int, ...]:
        counts = [0] * (self.dimension + 1)
        for f in self.skeleton:
            counts[f.dim] += 1
        return tuple(counts)

    @cached_property
    def profile(self):
        from .measure import barycenter_profile

        return barycenter_profile(self)

    def contains(self, x: Sequence) -> bool:
        return all(dot(l, x) <= k for l, k in zip(self.conormals, self.supports))

    def with_supports(self, supports: Sequence) -> DelzantPolytope:
        return build(self.conormals, supports)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point supports are not accepted")
    return Fraction(x)


def _check_shapes(conormals, supports) -> tuple[int, tuple[IntVector, ...], tuple[Fraction, ...]]:
    if not conormals:
        raise PolytopeError("no facets given")
    n = len(conormals[0])
    if n == 0:
        raise PolytopeError("dimension must be positive")
    if len(conormals) != len(supports):
        raise PolytopeError(f"{len(conormals)} conormals but {len(supports)} supports")
    ls = []
    for j, l in enumerate(conormals, 1):
        if len(l) != n:
            raise PolytopeError(f"dimension mismatch in conormal {j}")
        if any(int(x) != x for x in l):
            raise PolytopeError(f"non-integer conormal {j}")
        if not is_primitive(l):
            raise PolytopeError(f"non-primitive conormal {j}")
        ls.append(tuple(int(x) for x in l))
    return n, tuple(ls), tuple(_as_fraction(k) for k in supports)


def _recession_direction(conormals: Sequence[IntVector], n: int) -> IntVector | None:
    """A nonzero ``d`` with ``<l_j, d> <= 0`` for all j, if one exists."""
    if rank(conormals) < n:
        return integer_kernel_basis(conormals)[0]
    # a pointed cone {L x <= 0} is nonzero iff it has an extreme ray, i.e. a
    # direction tight on n-1 independent constraints
    for subset in combinations(range(len(conormals)), n - 1):
        rows = [conormals[j] for j in subset]
        basis = integer_kernel_basis(rows, ncols=n)
        if len(basis) != 1:
            continue
        d = basis[0]
        for s in (d, tuple(-x for x in d)):
            if all(dot(l, s) <= 0 for l in conormals):
                return s
    return None


def _enumerate_vertices(conormals, supports, n) -> list[RatVector]:
    found = set()
    for subset in combinations(range(len(conormals)), n):
        a = [conormals[j] for j in subset]
        if det(a) == 0:
            continue
        x, _ = solve(a, [supports[j] for j in subset])
        if all(dot(l, x) <= k for l, k in zip(conormals, supports)):
            found.add(x)
    return sorted(found)


def _active(conormals, supports, x) -> frozenset[int]:
    return frozenset(j for j, (l, k) in enumerate(zip(conormals, supports)) if dot(l, x) == k)


def _fmt_point(x: Sequence[Fraction]) -> str:
    return "(" + ",".join(str(c) for c in x) + ")"


def is_delzant(conormals, supports) -> DelzantReport:
    """Smoothness report: at each vertex the active conormals must form a lattice basis."""
    n, ls, ks = _check_shapes(conormals, supports)
    bad = []
    for v in _enumerate_vertices(ls, ks, n):
        act = sorted(_active(ls, ks, v))
        if len(act) != n:
            bad.append((v, None, len(act)))
            continue
        d = det([ls[j] for j in act])
        if abs(d) != 1:
            bad.append((v, d, n))
    return DelzantReport(ok=not bad, offending=tuple(bad))


def _face_skeleton(ls, vertices, incidence, n) -> tuple[Face, ...]:
    by_vertices: dict[tuple[int, ...], frozenset[int]] = {}
    seen_subsets: set[frozenset[int]] = set()
    for act in incidence:
        for r in range(len(act) + 1):
            for s in combinations(sorted(act), r):
                s = frozenset(s)
                if s in seen_subsets:
                    continue
                seen_subsets.add(s)
                vids = tuple(i for i, a in enumerate(incidence) if s <= a)
                closure = frozenset.intersection(*(incidence[i] for i in vids))
                by_vertices[vids] = closure
    faces = []
    for vids, act in by_vertices.items():
        basis = integer_kernel_basis([ls[j] for j in sorted(act)], ncols=n)
        dim = len(basis)
        if affine_dimension([vertices[i] for i in vids]) != dim:
            raise InvariantViolation(f"face {sorted(vids)}: rank and affine dimension disagree")
        faces.append(Face(dim=dim, active=act, vertex_ids=vids, direction_basis=tuple(basis)))
    faces.sort(key=lambda f: (f.dim, f.vertex_ids))
    return tuple(faces)


def build(conormals: Sequence[Sequence[int]], supports: Sequence) -> DelzantPolytope:
    """Validate an H-representation and return the cached polytope.

    Raises:
        PolytopeError: for non-primitive conormals, unbounded, empty or
            lower-dimensional input, redundant facets, or a vertex where the
            active conormals do not form a lattice basis.
    """
    n, ls, ks = _check_shapes(conormals, supports)
    if _recession_direction(ls, n) is not None:
        raise PolytopeError("unbounded")
    vertices = _enumerate_vertices(ls, ks, n)
    if not vertices:
        raise PolytopeError("empty")
    centre = tuple(sum(c) / len(vertices) for c in zip(*vertices))
    if any(dot(l, centre) == k for l, k in zip(ls, ks)):
        raise PolytopeError("not full-dimensional")
    incidence = tuple(_active(ls, ks, v) for v in vertices)
    for j in range(len(ls)):
        on = [v for v, a in zip(vertices, incidence) if j in a]
        if not on or affine_dimension(on) != n - 1:
            raise PolytopeError(f"redundant facet {j + 1}")
    for v, act in zip(vertices, incidence):
        if len(act) != n:
            raise PolytopeError(f"non-Delzant at vertex {_fmt_point(v)} (not simple: {len(act)} active facets)")
        d = det([ls[j] for j in sorted(act)])
        if abs(d) != 1:
            raise PolytopeError(f"non-Delzant at vertex {_fmt_point(v)} (determinant {d})")
    return DelzantPolytope(
        dimension=n,
        conormals=ls,
        supports=ks,
        vertices=tuple(vertices),
        incidence=incidence,
        skeleton=_face_skeleton(ls, vertices, incidence, n),
    )


def vertices(p: DelzantPolytope) -> tuple[RatVector, ...]:
    return p.vertices


def face_lattice(p: DelzantPolytope) -> list[list[Face]]:
    """Faces grouped by dimension ``0..n``."""
    return [p.faces_of_dim(k) for k in range(p.dimension + 1)]


def monotone_normalization(p: DelzantPolytope) -> MonotoneNormalization | None:
    """Solve ``kappa_j - <l_j, t> = kappa`` for ``(t, kappa)``; None if inconsistent or ``kappa <= 0``."""
    a = [list(l) + [1] for l in p.conormals]
    x, nullity = solve(a, p.supports)
    if x is None or x[-1] <= 0:
        return None
    return MonotoneNormalization(translation=tuple(x[:-1]), kappa=x[-1], unique=nullity == 0)


def transform(p: DelzantPolytope, a: Sequence[Sequence[int]], t: Sequence = None) -> DelzantPolytope:
    """Image of ``p`` under ``x -> A x + t`` for unimodular ``A``.

    Conormals move by the inverse transpose, supports shift by ``<l'_j, t>``.
    """
    n = p.dimension
    t = tuple(Fraction(c) for c in (t if t is not None else [0] * n))
    if abs(det(a)) != 1:
        raise ValueError("transformation is not unimodular")
    ainv_t = transpose(inverse(a))
    new_l = [tuple(int(dot(row, l)) for row in ainv_t) for l in p.conormals]
    new_k = [k + dot(l, t) for l, k in zip(new_l, p.supports)]
    return build(new_l, new_k)


def scaled(p: DelzantPolytope, s) -> DelzantPolytope:
    s = Fraction(s)
    if s <= 0:
        raise ValueError("scale must be positive")
    return build(p.conormals, [s * k for k in p.supports])
