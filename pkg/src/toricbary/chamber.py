"""Support-number deformations within a fixed combinatorial type.

The chamber of a reference polytope is the set of support vectors ``kappa``
whose polytope has the same conormals, the same vertex-facet incidence and
is still Delzant. Mass-linearity verdicts are probabilistic identity tests:
every evaluation is exact, and the sample points are random rationals, so a
nonlinear barycenter pairing passes a check only by landing on the zero set
of a nonzero polynomial.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import PolytopeError, PreconditionError, SamplingError
from .exact import dot, rank, solve
from .polytope import DelzantPolytope, build

NUMERATOR_RANGE = 10**6
MAX_FAILURES = 10**4
SHRINK_EVERY = 100


@dataclass(frozen=True)
class ChamberPoint:
    kappa: tuple[Fraction, ...]


@dataclass(frozen=True)
class MassLinearReport:
    """Outcome of :func:`mass_linear_test`.

    ``constant`` and ``gradient`` hold the affine form fitted on the first
    ``F + 1`` samples; for a nonlinear verdict ``witness`` is a chamber point
    where the pairing differs from that form.
    """

    verdict: str  # "linear" | "nonlinear" | "inconclusive"
    k_index: int
    constant: Fraction | None
    gradient: tuple[Fraction, ...] | None
    integral: bool | None
    samples_used: int
    seed: int
    witness: tuple[Fraction, ...] | None = None
    witness_value: Fraction | None = None
    witness_fitted: Fraction | None = None


@dataclass(frozen=True)
class ObstructionReport:
    obstructed: bool
    reference_pairings: tuple[Fraction, ...]  # <B_k - B_n, l> for k = 0..n-1
    points_checked: int
    seed: int
    witness: tuple[Fraction, ...] | None = None
    witness_k: int | None = None
    witness_value: Fraction | None = None

    @property
    def verdict(self) -> str:
        return "obstruction" if self.obstructed else "no obstruction found"


@lru_cache(maxsize=8192)
def _build(conormals: tuple, kappa: tuple) -> DelzantPolytope:
    return build(conormals, kappa)


def polytope_at(ref: DelzantPolytope, kappa: Sequence) -> DelzantPolytope:
    return _build(ref.conormals, tuple(Fraction(k) for k in kappa))


def in_chamber(ref: DelzantPolytope, kappa: Sequence) -> bool:
    if len(kappa) != ref.num_facets:
        return False
    try:
        p = polytope_at(ref, kappa)
    except PolytopeError:
        return False
    return frozenset(p.incidence) == frozenset(ref.incidence)


def _initial_radius(ref: DelzantPolytope) -> Fraction:
    shortest = min(f.lattice_volume for f in ref.faces_of_dim(1))
    return min(Fraction(1), shortest) / 10


def _draw(ref: DelzantPolytope, seed: int, index: int, radius: Fraction) -> ChamberPoint:
    rng = random.Random(f"{seed}:{index}")
    for failures in range(MAX_FAILURES):
        if failures and failures % SHRINK_EVERY == 0:
            radius /= 2
        kappa = tuple(
            k + radius * Fraction(rng.randint(-NUMERATOR_RANGE, NUMERATOR_RANGE), NUMERATOR_RANGE)
            for k in ref.supports
        )
        if in_chamber(ref, kappa):
            return ChamberPoint(kappa)
    raise SamplingError("chamber sampling failed")


def sample_chamber(
    ref: DelzantPolytope, count: int, seed: int = 0, start: int = 0, threads: int = 1
) -> list[ChamberPoint]:
    """Random chamber points ``start .. start+count-1`` for ``seed``.

    Point ``i`` depends only on ``(seed, i)``, so results do not depend on
    ``threads``.
    """
    if count < 1:
        raise PreconditionError("sample count must be at least 1")
    radius = _initial_radius(ref)
    indices = range(start, start + count)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda i: _draw(ref, seed, i, radius), indices))
    return [_draw(ref, seed, i, radius) for i in indices]


def _pairing(ref: DelzantPolytope, kappa, k: int, loop) -> Fraction:
    return dot(polytope_at(ref, kappa).profile.bary[k], loop)


def _check_loop(ref: DelzantPolytope, loop) -> tuple[int, ...]:
    l = tuple(int(x) for x in loop)
    if len(l) != ref.dimension:
        raise PreconditionError(f"loop has length {len(l)}, expected {ref.dimension}")
    return l


def mass_linear_test(
    ref: DelzantPolytope,
    loop: Sequence[int],
    k_index: int | None = None,
    samples: int | None = None,
    seed: int = 0,
    threads: int = 1,
) -> MassLinearReport:
    """Test whether ``kappa -> <B_k(kappa), l>`` is affine on the chamber.

    Fits an affine form through ``F + 1`` affinely independent chamber points
    and checks it exactly at ``max(F, samples)`` further points.
    """
    n, F = ref.dimension, ref.num_facets
    k = n if k_index is None else k_index
    if not 0 <= k <= n:
        raise PreconditionError(f"k = {k} out of range 0..{n}")
    l = _check_loop(ref, loop)
    samples = 4 * F if samples is None else samples

    # fit; allow one extra batch in case a draw is affinely dependent
    candidates = sample_chamber(ref, 2 * (F + 1), seed, threads=threads)
    rows: list[list[Fraction]] = []
    chosen: list[ChamberPoint] = []
    for c in candidates:
        row = [Fraction(1), *c.kappa]
        if rank(rows + [row]) > len(rows):
            rows.append(row)
            chosen.append(c)
        if len(rows) == F + 1:
            break
    used = len(candidates)
    if len(rows) < F + 1:
        return MassLinearReport("inconclusive", k, None, None, None, used, seed)
    values = [_pairing(ref, c.kappa, k, l) for c in chosen]
    coeffs, _ = solve(rows, values)
    constant, gradient = coeffs[0], tuple(coeffs[1:])

    checks = sample_chamber(ref, max(F, samples), seed, start=len(candidates), threads=threads)
    used += len(checks)
    for c in checks:
        actual = _pairing(ref, c.kappa, k, l)
        fitted = constant + dot(gradient, c.kappa)
        if actual != fitted:
            return MassLinearReport(
                "nonlinear", k, constant, gradient, None, used, seed,
                witness=c.kappa, witness_value=actual, witness_fitted=fitted,
            )
    integral = constant.denominator == 1 and all(g.denominator == 1 for g in gradient)
    return MassLinearReport("linear", k, constant, gradient, integral, used, seed)


def contractibility_obstruction(
    ref: DelzantPolytope,
    loop: Sequence[int],
    samples: int | None = None,
    seed: int = 0,
    threads: int = 1,
) -> ObstructionReport:
    """Search for ``kappa`` with ``<B_k(kappa) - B_n(kappa), l> != 0``.

    A nonzero pairing shows the toric loop is not contractible in the
    Hamiltonian group. Finding none proves nothing.
    """
    n, F = ref.dimension, ref.num_facets
    l = _check_loop(ref, loop)
    samples = 4 * F if samples is None else samples

    def pairings(p: DelzantPolytope) -> list[Fraction]:
        b = p.profile.bary
        return [dot([x - y for x, y in zip(b[k], b[n])], l) for k in range(n)]

    ref_values = tuple(pairings(ref))
    for k, v in enumerate(ref_values):
        if v != 0:
            return ObstructionReport(True, ref_values, 1, seed, ref.supports, k, v)
    points = sample_chamber(ref, samples, seed, threads=threads)
    for i, c in enumerate(points, 2):
        for k, v in enumerate(pairings(polytope_at(ref, c.kappa))):
            if v != 0:
                return ObstructionReport(True, ref_values, i, seed, c.kappa, k, v)
    return ObstructionReport(False, ref_values, 1 + len(points), seed)
