"""Graded pieces of D_P, the contraction map, and the first differential."""

import random

import pytest

from dnbrackets.diffpoly import DiffPoly
from dnbrackets.errors import PreconditionError
from dnbrackets.jacobi import apply_DP
from dnbrackets.sampling import random_monomial
from dnbrackets.spectral import (
    D_minus1_closed,
    apply_D_graded,
    d1_as_connection,
    d1_closed,
    d1_spectral,
    d1_split,
    homotopy,
    in_B,
    include_B,
    project_B,
    require_poisson,
    spanning_monomials,
)

from conftest import S


def theta(i, s):
    return DiffPoly.theta(i, s)


def test_require_poisson(nonflat2, lc1_broken):
    require_poisson(nonflat2)  # no exception, result cached
    assert nonflat2._cache["is_poisson"] is True
    with pytest.raises(PreconditionError):
        require_poisson(lc1_broken)


def test_graded_pieces_sum_to_DP(nonflat2):
    # total-derivative factors inside D_P can add jet variables beyond
    # the tail depth, so the shift window is wider than [-1, k]
    rng = random.Random(61)
    for _ in range(12):
        a = random_monomial(rng, 2, 3, max_degu=2)
        if a.is_zero:
            continue
        full = apply_DP(nonflat2, a)
        total = DiffPoly.zero()
        for m in range(-1, 8):
            total = total + apply_D_graded(nonflat2, m, a)
        assert total == full


def test_graded_piece_shifts_jet_degree(nonflat2):
    a = theta(1, 0) * DiffPoly.jet(1, 1)
    for m in (-1, 0, 1):
        r = apply_D_graded(nonflat2, m, a)
        if not r.is_zero:
            assert r.degrees("deg_u") == {1 + m}


def test_graded_piece_requires_homogeneous_input(nonflat2):
    mixed = theta(1, 0) + theta(1, 0) * DiffPoly.jet(1, 1)
    with pytest.raises(ValueError):
        apply_D_graded(nonflat2, 0, mixed)
    assert apply_D_graded(nonflat2, 0, DiffPoly.zero()) == DiffPoly.zero()


def test_D_minus1_matches_lowest_graded_piece(nonflat2, canonical4):
    rng = random.Random(67)
    for b in (nonflat2, canonical4):
        for _ in range(10):
            a = random_monomial(rng, b.n, b.k, max_degu=2)
            if a.is_zero:
                continue
            assert D_minus1_closed(b, a) == apply_D_graded(b, -1, a)


def test_D_minus1_squares_to_zero(nonflat2):
    rng = random.Random(71)
    for _ in range(15):
        a = random_monomial(rng, 2, 3, max_degu=3)
        assert D_minus1_closed(nonflat2, D_minus1_closed(nonflat2, a)).is_zero


def test_B_subspace_operations():
    k = 3
    inside = theta(1, 0) * theta(2, 3) * S("u1")
    outside_jet = inside * DiffPoly.jet(1, 1)
    outside_order = theta(1, 4) * S("u2")
    assert in_B(inside, k)
    assert not in_B(outside_jet, k)
    assert not in_B(outside_order, k)
    assert project_B(inside + outside_jet + outside_order, k) == inside
    assert include_B(inside, k) == inside
    with pytest.raises(ValueError):
        include_B(outside_jet, k)


def test_homotopy_identity_on_random_monomials(nonflat2):
    rng = random.Random(73)
    checked = 0
    while checked < 30:
        a = random_monomial(rng, 2, 3, max_degu=3)
        if a.is_zero:
            continue
        checked += 1
        lhs = D_minus1_closed(nonflat2, homotopy(nonflat2, a)) + homotopy(
            nonflat2, D_minus1_closed(nonflat2, a)
        )
        assert lhs == a - project_B(a, 3)


def test_homotopy_vanishes_on_B(nonflat2):
    a = theta(1, 0) * theta(2, 2) * S("u2")
    assert in_B(a, 3)
    assert homotopy(nonflat2, a).is_zero


def test_d1_oracle_pair(nonflat2, canonical4):
    for b in (nonflat2, canonical4):
        span = spanning_monomials(b.n, b.k, max_degree=2)
        for x in span:
            assert d1_spectral(b, x) == d1_closed(b, x)


def test_d1_lands_in_B(nonflat2):
    for x in spanning_monomials(2, 3, max_degree=2):
        assert in_B(d1_closed(nonflat2, x), 3)


def test_d1_split_parts(nonflat2):
    for x in spanning_monomials(2, 3, max_degree=2):
        up, same = d1_split(nonflat2, x)
        assert up + same == d1_closed(nonflat2, x)
        full = d1_closed(nonflat2, x)
        if full.is_zero:
            continue
        degs = x.degrees("deg_theta_k", k=3)
        if len(degs) != 1:
            continue
        (q,) = degs
        assert up == full.project("deg_theta_k", q + 1, 3)
        assert same == full.project("deg_theta_k", q, 3)


def test_d1_squares_to_zero_in_graded_pieces(nonflat2):
    # the raising part squares to zero, the mixed anticommutator
    # vanishes, and the preserving part squares to zero
    for x in spanning_monomials(2, 3, max_degree=2):
        up, same = d1_split(nonflat2, x)
        up_up, up_same = d1_split(nonflat2, up)
        same_up, same_same = d1_split(nonflat2, same)
        assert up_up.is_zero
        assert (up_same + same_up).is_zero
        assert same_same.is_zero


def test_d1_as_connection_matches_raising_part(nonflat2, canonical4):
    for b in (nonflat2, canonical4):
        for x in spanning_monomials(b.n, b.k, max_degree=2):
            assert d1_as_connection(b, x) == d1_split(b, x)[0]


def test_d1_requires_poisson(lc1_broken):
    with pytest.raises(PreconditionError):
        d1_spectral(lc1_broken, theta(1, 0))


def test_spanning_monomials_shape():
    span = spanning_monomials(2, 1, max_degree=2)
    assert DiffPoly.one() in span
    assert DiffPoly.coordinate(1) in span
    assert theta(1, 0) in span
    for x in span:
        assert x.max_jet_order() == 0
        assert x.max_theta_order() <= 1
        assert all(d <= 2 for d in x.degrees("deg_theta"))
