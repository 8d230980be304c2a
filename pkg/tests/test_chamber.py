from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from oracles import trapezoid_mean_x
from toricbary import chamber
from toricbary.chamber import (
    contractibility_obstruction,
    in_chamber,
    mass_linear_test,
    polytope_at,
    sample_chamber,
)
from toricbary.documents import fixture
from toricbary.errors import DocumentError, PolytopeError, SamplingError
from toricbary.polytope import build

F = Fraction
SQUARE = fixture("cube", [2, 1]).build()
TRAP = fixture("trapezoid", [3, 1, 1]).build()
DP = fixture("delpezzo1").build()


def simplex_pairing_oracle(n, loop):
    """Affine form of <B(kappa), l> for {x_i >= -kappa_i, sum x_i <= kappa_{n+1}}, solved symbolically."""
    ks = sympy.symbols(f"k1:{n + 2}")
    xs = sympy.symbols(f"x1:{n + 1}")
    eqs = [-x - k for x, k in zip(xs, ks[:n])] + [sum(xs) - ks[n]]
    verts = [sympy.solve([eqs[j] for j in s], xs, dict=True)[0] for s in combinations(range(n + 1), n)]
    f = sympy.expand(sum(sum(l * v[x] for l, x in zip(loop, xs)) for v in verts) / (n + 1))
    return F(str(f.subs({k: 0 for k in ks}))), tuple(F(str(f.coeff(k))) for k in ks)


def test_in_chamber_examples():
    assert in_chamber(SQUARE, (0, 2, 0, 1))
    assert not in_chamber(SQUARE, (0, -1, 0, 1))
    assert not in_chamber(TRAP, (0, 0, 1, 1))
    assert not in_chamber(TRAP, (0, 0, 1))


def test_reference_on_wall_is_a_build_error():
    # a = k b: the top edge collapses to the vertex (0, 1)
    with pytest.raises(PolytopeError, match="redundant facet 3"):
        build(TRAP.conormals, (0, 0, 1, 1))
    with pytest.raises(DocumentError):
        fixture("trapezoid", [1, 1, 1])


def test_chamber_reflexivity():
    for p in (SQUARE, TRAP, DP, fixture("simplex", [3, 1]).build()):
        assert in_chamber(p, p.supports)


def test_sample_square():
    pts = sample_chamber(SQUARE, 5, seed=1)
    assert len(pts) == 5 and len({p.kappa for p in pts}) == 5
    for pt in pts:
        q = polytope_at(SQUARE, pt.kappa)
        assert len(q.vertices) == 4 and in_chamber(SQUARE, pt.kappa)


def test_sample_simplex():
    s = fixture("simplex", [2, 1]).build()
    pts = sample_chamber(s, 3, seed=7)
    assert all(len(polytope_at(s, p.kappa).vertices) == 3 for p in pts)


def test_sampling_is_deterministic_and_schedule_independent():
    a = sample_chamber(TRAP, 6, seed=3)
    assert a == sample_chamber(TRAP, 6, seed=3)
    assert a == sample_chamber(TRAP, 6, seed=3, threads=4)
    assert a[2:] == sample_chamber(TRAP, 4, seed=3, start=2)
    assert a != sample_chamber(TRAP, 6, seed=4)


def test_sampling_failure(monkeypatch):
    monkeypatch.setattr(chamber, "in_chamber", lambda ref, kappa: False)
    monkeypatch.setattr(chamber, "MAX_FAILURES", 50)
    with pytest.raises(SamplingError, match="chamber sampling failed"):
        sample_chamber(SQUARE, 1)


@pytest.mark.parametrize("n, loop", [(1, (1,)), (2, (1, 2)), (2, (-3, 1)), (3, (1, 0, -2))])
def test_simplex_mass_linear_matches_symbolic_oracle(n, loop):
    p = fixture("simplex", [n, 1]).build()
    rep = mass_linear_test(p, loop)
    assert rep.verdict == "linear"
    assert (rep.constant, rep.gradient) == simplex_pairing_oracle(n, loop)
    assert all((g * (n + 1)).denominator == 1 for g in rep.gradient)


def test_simplex_all_k_linear():
    p = fixture("simplex", [2, 1]).build()
    reps = [mass_linear_test(p, (2, -1), k_index=k) for k in range(3)]
    assert all(r.verdict == "linear" for r in reps)
    assert len({(r.constant, r.gradient) for r in reps}) == 1


def test_zero_loop_is_linear():
    rep = mass_linear_test(TRAP, (0, 0))
    assert rep.verdict == "linear" and rep.constant == 0 and not any(rep.gradient)
    assert rep.integral


def test_trapezoid_not_affine_by_closed_form():
    # along b = 1, a = 2, 3, 4 the exact centroid abscissa is not affine in a
    f = [trapezoid_mean_x(a, 1) for a in (2, 3, 4)]
    assert f[0] + f[2] != 2 * f[1]
    assert trapezoid_mean_x(3, 1) == TRAP.profile.bary[2][0]


def _trapezoid_family_x(kappa):
    k1, k2, k3, k4 = kappa
    return trapezoid_mean_x(k4 + k1 + k2, k3 + k2) - k1


def test_trapezoid_nonlinear_with_valid_witness():
    rep = mass_linear_test(TRAP, (1, 0))
    assert rep.verdict == "nonlinear"
    assert in_chamber(TRAP, rep.witness)
    fitted = rep.constant + sum(g * k for g, k in zip(rep.gradient, rep.witness))
    assert fitted == rep.witness_fitted != rep.witness_value
    assert rep.witness_value == _trapezoid_family_x(rep.witness)


def test_fit_soundness_on_fresh_samples():
    p = fixture("simplex", [3, 2]).build()
    rep = mass_linear_test(p, (1, -1, 2), seed=5)
    assert rep.verdict == "linear"
    for pt in sample_chamber(p, 2 * p.num_facets, seed=999):
        value = sum(b * l for b, l in zip(polytope_at(p, pt.kappa).profile.bary[3], (1, -1, 2)))
        assert value == rep.constant + sum(g * k for g, k in zip(rep.gradient, pt.kappa))


def test_mass_linear_report_is_deterministic():
    assert mass_linear_test(TRAP, (1, 0), seed=2) == mass_linear_test(TRAP, (1, 0), seed=2)
    rep = mass_linear_test(SQUARE, (1, 1), samples=3)
    assert rep.samples_used == 2 * 5 + 4


def test_obstruction_simplex_none():
    rep = contractibility_obstruction(fixture("simplex", [2, 1]).build(), (1, 2))
    assert not rep.obstructed and rep.verdict == "no obstruction found"
    assert rep.reference_pairings == (0, 0)


def test_obstruction_trapezoid():
    rep = contractibility_obstruction(TRAP, (0, 1))
    assert rep.obstructed and rep.points_checked == 1
    assert rep.reference_pairings[1] == F(-4, 105)
    assert rep.witness == TRAP.supports


def test_obstruction_delpezzo_reference_pairings_vanish():
    rep = contractibility_obstruction(DP, (1, -1))
    assert rep.reference_pairings == (0, 0)
    assert rep.points_checked > 1
