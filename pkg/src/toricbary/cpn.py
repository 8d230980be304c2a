"""Diagonal circle loops on CP^n and their lifts to the prequantization S^{2n+1}.

A weight vector ``m = (m_0, ..., m_n)`` gives the loop
``z_j -> exp(2 pi i m_j t) z_j`` on ``C^{n+1}``, which descends to a
Hamiltonian loop on CP^n and is its own lift to a quantomorphism loop. Its
contact Hamiltonian is ``sum_j m_j |z_j|^2`` on the unit sphere; in moment
coordinates of the standard simplex this is the affine function
``m_0 (1 - sum_i x_i) + sum_{i>=1} m_i x_i``. The contact form is normalized
so the Reeb loop ``m = (1, ..., 1)`` has Hamiltonian 1, and the ``1/(2 pi)``
length factor is not applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .documents import fixture
from .measure import BarycenterProfile


@dataclass(frozen=True)
class WeightLoop:
    weights: tuple[int, ...]
    scale: Fraction = Fraction(1)
    n: int = field(init=False)

    def __post_init__(self):
        if len(self.weights) < 2:
            raise ValueError("need at least two weights (n >= 1)")
        object.__setattr__(self, "weights", tuple(int(m) for m in self.weights))
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "n", len(self.weights) - 1)

    def shifted(self, c: int) -> WeightLoop:
        return WeightLoop(tuple(m + c for m in self.weights), self.scale)


@dataclass(frozen=True)
class GiventalReport:
    lhs: Fraction  # cw / Vol
    rhs: Fraction  # mu / (2(n+1))
    volume: Fraction
    calabi_weinstein: Fraction
    maslov: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@lru_cache(maxsize=None)
def _simplex_profile(n: int, scale: Fraction) -> BarycenterProfile:
    return fixture("simplex", [n, scale]).build().profile


def moment_volume(n: int, scale=1) -> Fraction:
    """``Vol(CP^n, omega^n) = n! Vol_n`` of the scaled moment simplex."""
    return factorial(n) * _simplex_profile(n, Fraction(scale)).vol[n]


def maslov_index(wl: WeightLoop) -> int:
    """Maslov index of the linearized lift; weight 1 on one coordinate contributes 2."""
    return 2 * sum(wl.weights)


def _contact_hamiltonian(weights: Sequence[int], x: Sequence[Fraction], scale: Fraction) -> Fraction:
    y = [c / scale for c in x]
    return weights[0] * (1 - sum(y)) + sum(m * c for m, c in zip(weights[1:], y))


def calabi_weinstein(wl: WeightLoop) -> Fraction:
    """Integral of the contact Hamiltonian against ``omega^n`` over CP^n.

    The Hamiltonian is affine in moment coordinates, so the integral is the
    symplectic volume times its value at the top-dimensional barycenter.
    """
    prof = _simplex_profile(wl.n, wl.scale)
    vol = factorial(wl.n) * prof.vol[wl.n]
    return vol * _contact_hamiltonian(wl.weights, prof.bary[wl.n], wl.scale)


def verify_givental(wl: WeightLoop) -> GiventalReport:
    vol = moment_volume(wl.n, wl.scale)
    cw = calabi_weinstein(wl)
    mu = maslov_index(wl)
    return GiventalReport(lhs=cw / vol, rhs=Fraction(mu, 2 * (wl.n + 1)), volume=vol, calabi_weinstein=cw, maslov=mu)


def torsion_class(wl: WeightLoop) -> int:
    """Class of the projective loop in ``Z/(n+1)``."""
    return sum(wl.weights) % (wl.n + 1)
