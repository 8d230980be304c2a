"""Loop invariants of toric Hamiltonian loops, read off barycenter profiles.

A toric loop is an integer vector ``l`` in the Lie algebra lattice of the
torus. Every invariant here is the pairing of a covector built from the
barycenters ``B_k`` with ``l``; formulas follow the covector identities
verbatim, including their sign convention for moment maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import InvariantViolation, NotMonotoneError, PreconditionError
from .exact import RatVector, affine_dimension, dot, rank
from .polytope import DelzantPolytope, MonotoneNormalization, monotone_normalization


@dataclass(frozen=True)
class MonotoneValues:
    kappa: Fraction
    action_maslov: Fraction
    futaki: Fraction
    c1_powers: tuple[Fraction, ...]  # L = 1..n+1


@dataclass(frozen=True)
class InvariantReport:
    loop: tuple[int, ...]
    values: tuple[Fraction, ...]  # I_{c_L u^{n+1-L}}, L = 0..n
    monotone: MonotoneValues | None


@dataclass(frozen=True)
class EulerCheck:
    lhs: Fraction
    rhs: Fraction
    vertex_count: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class CollinearityReport:
    affine_dimension: int
    c_delta: Fraction | None
    monotone_identity: bool | None  # None when the polytope is not monotone
    triples: tuple[tuple[int, int, int, bool], ...]  # (L, n, n-L-1, collinear)


def _loop(p: DelzantPolytope, loop: Sequence[int]) -> tuple[int, ...]:
    l = tuple(int(x) for x in loop)
    if len(l) != p.dimension:
        raise PreconditionError(f"loop has length {len(l)}, expected {p.dimension}")
    return l


def _diff(a: RatVector, b: RatVector) -> RatVector:
    return tuple(x - y for x, y in zip(a, b))


def _require_monotone(p: DelzantPolytope) -> MonotoneNormalization:
    m = monotone_normalization(p)
    if m is None:
        raise NotMonotoneError()
    return m


def action_maslov_covector(p: DelzantPolytope, L: int) -> tuple[Fraction, RatVector]:
    """``(c, B_{n-L} - B_n)`` with ``I_{c_L u^{n+1-L}} = c * <B_{n-L} - B_n, .>``."""
    n = p.dimension
    if not 0 <= L <= n:
        raise PreconditionError(f"L = {L} out of range 0..{n}")
    prof = p.profile
    c = -(n + 1 - L) * factorial(n - L) * prof.vol[n - L]
    return Fraction(c), _diff(prof.bary[n - L], prof.bary[n])


def generalized_action_maslov(p: DelzantPolytope, L: int, loop: Sequence[int]) -> Fraction:
    c, v = action_maslov_covector(p, L)
    return c * dot(v, _loop(p, loop))


def _mass_defect(p: DelzantPolytope, loop) -> Fraction:
    """``<B_n - B_0, l>``."""
    prof = p.profile
    return dot(_diff(prof.bary[p.dimension], prof.bary[0]), _loop(p, loop))


def action_maslov_monotone(p: DelzantPolytope, loop: Sequence[int]) -> Fraction:
    _require_monotone(p)
    return _mass_defect(p, loop)


def futaki_monotone(p: DelzantPolytope, loop: Sequence[int]) -> Fraction:
    _require_monotone(p)
    n = p.dimension
    return -factorial(n) * p.profile.vol[n] * _mass_defect(p, loop)


def c1_power_invariant(p: DelzantPolytope, L: int, loop: Sequence[int]) -> Fraction:
    """``I_{(c_1)^L u^{n+1-L}}`` on a monotone polytope, ``1 <= L <= n+1``."""
    kappa = _require_monotone(p).kappa
    n = p.dimension
    if not 1 <= L <= n + 1:
        raise PreconditionError(f"L = {L} out of range 1..{n + 1}")
    vol = factorial(n) * p.profile.vol[n]
    return -Fraction(L) / kappa**L * vol * _mass_defect(p, loop)


def euler_identity_check(p: DelzantPolytope, loop: Sequence[int]) -> EulerCheck:
    n = p.dimension
    return EulerCheck(
        lhs=generalized_action_maslov(p, n, loop),
        rhs=p.profile.vol[0] * _mass_defect(p, loop),
        vertex_count=len(p.vertices),
    )


def invariant_report(p: DelzantPolytope, loop: Sequence[int]) -> InvariantReport:
    l = _loop(p, loop)
    n = p.dimension
    values = tuple(generalized_action_maslov(p, L, l) for L in range(n + 1))
    if values[0] != 0:
        raise InvariantViolation("I at L = 0 must vanish")
    mono = None
    norm = monotone_normalization(p)
    if norm is not None:
        mono = MonotoneValues(
            kappa=norm.kappa,
            action_maslov=action_maslov_monotone(p, l),
            futaki=futaki_monotone(p, l),
            c1_powers=tuple(c1_power_invariant(p, L, l) for L in range(1, n + 2)),
        )
    return InvariantReport(loop=l, values=values, monotone=mono)


def collinearity_report(p: DelzantPolytope) -> CollinearityReport:
    n = p.dimension
    b = p.profile.bary
    vol = p.profile.vol
    triples = []
    for L in range(n):
        m = n - L - 1
        collinear = rank([_diff(b[L], b[n]), _diff(b[m], b[n])]) <= 1
        triples.append((L, n, m, collinear))
    norm = monotone_normalization(p)
    c_delta = identity = None
    if norm is not None:
        c_delta = norm.kappa * vol[n - 1] / vol[n]
        identity = _diff(b[0], b[n]) == tuple(-c_delta * x for x in _diff(b[n - 1], b[n]))
    return CollinearityReport(
        affine_dimension=affine_dimension(list(b)),
        c_delta=c_delta,
        monotone_identity=identity,
        triples=tuple(triples),
    )
