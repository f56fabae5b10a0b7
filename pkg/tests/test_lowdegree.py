"""Classification conditions for degrees one to four."""

import random
from fractions import Fraction

import pytest

from dnbrackets.bracket import (
    HomogeneousBracket,
    check_skew,
    lower_metric,
    validate,
)
from dnbrackets.connections import flat_combination, is_flat
from dnbrackets.diffpoly import DiffPoly
from dnbrackets.jacobi import check_jacobi
from dnbrackets.lowdegree import (
    all_pass,
    canonical_k2,
    dn_check,
    ferguson_check,
    k4_connection_fixtures,
    potemin_build,
    potemin_check,
    quadratic_tail,
)
from dnbrackets.scalar import Scalar

from conftest import S, canonical4_lower, nonflat2_data


def named_results(report):
    return {r.name: r.passed for r in report}


# -- degree one -------------------------------------------------------------


def test_dn_conditions_match_poisson_property(lc1, lc1_broken):
    good = dn_check(lc1)
    assert all_pass(good)
    assert check_skew(lc1) and check_jacobi(lc1)

    bad = dn_check(lc1_broken)
    assert not all_pass(bad)
    assert check_skew(lc1_broken) and not check_jacobi(lc1_broken)
    flags = named_results(bad)
    # the symmetric part of the tail is still fine; geometry fails
    assert flags["g symmetric"]
    assert flags["tail skew-symmetry"]
    assert not flags["torsionless"] or not flags["metric compatible"] or not flags["flat"]


def test_dn_failures_carry_witnesses(lc1_broken):
    for r in dn_check(lc1_broken):
        if not r.passed:
            assert r.witness


def test_dn_requires_degree_one(const2):
    with pytest.raises(ValueError):
        dn_check(const2)


# -- degree two -------------------------------------------------------------


def k2_break_c():
    glow = canonical4_lower()
    glow[0][1] = glow[0][1] + S("u1")
    glow[1][0] = glow[1][0] - S("u1")
    return canonical_k2(lower_metric(glow))


def k2_break_e():
    base = canonical_k2(lower_metric(canonical4_lower()))
    P = dict(base.P)
    q = DiffPoly.jet(1, 1) * DiffPoly.jet(1, 1)
    P[(1, 2, 0)] = P.get((1, 2, 0), DiffPoly.zero()) + q
    P[(2, 1, 0)] = P.get((2, 1, 0), DiffPoly.zero()) - q
    return HomogeneousBracket(n=4, k=2, P=P)


def test_ferguson_all_pass_on_canonical_family(canonical4):
    report = ferguson_check(canonical4)
    assert all_pass(report)
    assert check_skew(canonical4) and check_jacobi(canonical4)


def test_ferguson_detects_broken_skew_gradient():
    b = k2_break_c()
    flags = named_results(ferguson_check(b))
    assert flags["(a) g skew-symmetric"]
    assert not flags["(c) nabla g lower totally skew"]
    assert not check_jacobi(b)


def test_ferguson_detects_broken_quadratic_tail():
    b = k2_break_e()
    flags = named_results(ferguson_check(b))
    assert flags["(a) g skew-symmetric"]
    assert flags["(b) standard connection flat and torsionless"]
    assert flags["(c) nabla g lower totally skew"]
    assert flags["(d) nabla g upper = b - 2c"]
    assert not flags["(e) quadratic tail identity"]
    assert check_skew(b) and not check_jacobi(b)


def test_first_combination_flat_whenever_a_to_d_hold():
    # the quadratic-tail defect does not disturb flatness of the first
    # binomial combination, which only needs conditions (a)-(d)
    b = k2_break_e()
    assert is_flat(flat_combination(b, 1))


def test_canonical_k2_rejects_symmetric_leading_matrix():
    g = [[S("0"), S("1")], [S("1"), S("0")]]
    with pytest.raises(ValueError):
        canonical_k2(g)


def test_canonical_k2_expansion():
    g = [[S("0"), S("u1")], [S("-u1"), S("0")]]
    b = canonical_k2(g)
    assert b.k == 2
    assert b.P[(1, 2, 2)] == DiffPoly.from_scalar(S("u1"))
    assert b.P[(1, 2, 1)] == DiffPoly.jet(1, 1)
    assert (2, 1, 1) in b.P
    assert validate(b) == []
    assert check_skew(b)


def test_quadratic_tail_extraction():
    q = (
        DiffPoly.jet(1, 1) * DiffPoly.jet(1, 1)
        + DiffPoly.jet(1, 1) * DiffPoly.jet(2, 1) * S("3")
    )
    P = {
        (1, 2, 2): DiffPoly.one(),
        (2, 1, 2): DiffPoly.one() * S("-1"),
        (1, 2, 0): q,
        (2, 1, 0): q * S("-1"),
    }
    b = HomogeneousBracket(n=2, k=2, P=P)
    t = quadratic_tail(b, 0)
    assert t[0][1][0][0] == Scalar.one()
    assert t[0][1][0][1] == S("3/2")
    assert t[0][1][1][0] == S("3/2")
    assert t[0][1][1][1] == Scalar.zero()
    assert t[1][0][0][0] == S("-1")


# -- degree three -----------------------------------------------------------


def test_potemin_conditions_on_worked_example(nonflat2):
    g, c = nonflat2_data()
    report = potemin_check(g, c)
    assert all_pass(report)
    assert check_jacobi(nonflat2)


def test_potemin_conditions_detect_perturbation():
    g, c = nonflat2_data()
    c[0][1][0] = c[0][1][0] + S("u1")
    report = potemin_check(g, c)
    assert not all_pass(report)
    failing = [r for r in report if not r.passed]
    assert failing and all(r.witness for r in failing)
    # the perturbed data no longer assembles into a skew operator
    assert not check_skew(potemin_build(g, c))


def test_potemin_build_rejects_asymmetric_metric():
    g = [[S("1"), S("u1")], [S("0"), S("1")]]
    c = [[[Scalar.zero()] * 2 for _ in range(2)] for _ in range(2)]
    with pytest.raises(ValueError):
        potemin_build(g, c)


def test_potemin_combination_identities(nonflat2):
    # both flat combinations are contractions of the tail with the
    # lowered metric: the first is g.c, the second 2 g.c - g.c-transposed
    g, c = nonflat2_data()
    glow = lower_metric(g)
    flat1 = flat_combination(nonflat2, 1)
    flat2 = flat_combination(nonflat2, 2)
    n = 2
    for l in range(n):
        for i in range(n):
            for j in range(n):
                gc = Scalar.zero()
                gct = Scalar.zero()
                for s in range(n):
                    gc = gc + glow[i][s] * c[s][l][j]
                    gct = gct + glow[i][s] * c[l][s][j]
                assert flat1.gamma[l][i][j] == gc
                assert flat2.gamma[l][i][j] == gc * S("2") - gct


# -- degree four ------------------------------------------------------------


def random_k4_bracket(rng):
    """Degree-4 bracket with generic constant jet-linear tails."""
    n = 2
    P = {
        (1, 2, 4): DiffPoly.one(),
        (2, 1, 4): DiffPoly.one() * S("-1"),
    }
    for s in range(4):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                entry = DiffPoly.zero()
                for l in range(1, n + 1):
                    entry = entry + DiffPoly.jet(l, 4 - s) * Fraction(
                        rng.randint(-4, 4)
                    )
                if not entry.is_zero:
                    P[(i, j, s)] = entry
    return HomogeneousBracket(n=n, k=4, P=P)


def test_k4_closed_forms_on_random_data():
    rng = random.Random(79)
    for _ in range(5):
        b = random_k4_bracket(rng)
        assert validate(b) == []
        report = k4_connection_fixtures(b)
        assert all_pass(report), [r.name for r in report if not r.passed]


def test_k4_closed_forms_on_constant_bracket():
    eta = [[S("0"), S("1")], [S("-1"), S("0")]]
    P = {(1, 2, 4): DiffPoly.one(), (2, 1, 4): DiffPoly.one() * S("-1")}
    b = HomogeneousBracket(n=2, k=4, P=P)
    report = k4_connection_fixtures(b)
    assert all_pass(report)
    assert len(report) == 7  # four standard forms and three combinations
