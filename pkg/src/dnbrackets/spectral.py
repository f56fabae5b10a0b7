"""Graded pieces of the Jacobi differential and the induced differential d_1.

The differential D_P decomposes by the jet count deg_u into homogeneous
components D_{-1} + D_0 + D_1 + ...; the lowest one has the closed form

    D_{-1} = sum_{s>=1} g^{ij} theta_j^{k+s} d/du^{i,s}

and is contracted by an explicit homotopy onto the subalgebra B spanned
by monomials in the coordinates and the theta variables of order at most
k.  Transporting D_0 through the contraction yields a differential d_1
on B, computed here three independent ways: through D_P directly, by a
compact closed formula in the named coefficients, and - for its part
that raises the number of top-order thetas - through the flat
combination connections.  Agreement of the three on a given bracket is
what the flatness of those combinations amounts to.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

from .bracket import HomogeneousBracket, extract_named, metric_pair
from .diffpoly import DiffPoly, JetVar, ThetaVar, term_deg_theta_k
from .errors import PreconditionError
from .jacobi import apply_DP, check_jacobi
from .scalar import Scalar

__all__ = [
    "require_poisson",
    "apply_D_graded",
    "D_minus1_closed",
    "homotopy",
    "in_B",
    "project_B",
    "include_B",
    "d1_spectral",
    "d1_closed",
    "d1_split",
    "d1_as_connection",
    "spanning_monomials",
]


def require_poisson(b: HomogeneousBracket) -> None:
    """Check (once per bracket) that b is skew and satisfies Jacobi."""
    cached = b._cache.get("is_poisson")
    if cached is None:
        try:
            cached = check_jacobi(b)
        except PreconditionError:
            cached = False
        b._cache["is_poisson"] = cached
    if not cached:
        raise PreconditionError(
            "bracket must be skew-symmetric and satisfy the Jacobi identity"
        )


def apply_D_graded(b: HomogeneousBracket, m: int, a: DiffPoly) -> DiffPoly:
    """The deg_u-homogeneous component of D_P that shifts deg_u by m."""
    degs = a.degrees("deg_u")
    if len(degs) > 1:
        raise ValueError("input must be homogeneous in deg_u")
    if not degs:
        return DiffPoly.zero()
    p = degs.pop()
    return apply_DP(b, a).project("deg_u", p + m)


def D_minus1_closed(b: HomogeneousBracket, a: DiffPoly) -> DiffPoly:
    """Direct evaluation of sum_{s>=1} g^{ij} theta_j^{k+s} da/du^{i,s}."""
    named = extract_named(b)
    n, k = b.n, b.k
    out = DiffPoly.zero()
    for s in range(1, a.max_jet_order() + 1):
        for i in range(1, n + 1):
            pa = a.partial(JetVar(i, s))
            if pa.is_zero:
                continue
            for j in range(1, n + 1):
                gij = named.g[i - 1][j - 1]
                if not gij.is_zero:
                    out = out + DiffPoly.theta(j, k + s) * pa * gij
    return out


def _excluded_count(key, k: int) -> int:
    """Multiplicity of the generators u^{i,s} (s>=1) and theta^{s>k} in a term."""
    even, odd = key
    return sum(e for _, e in even) + sum(1 for s, _ in odd if s > k)


def homotopy(b: HomogeneousBracket, a: DiffPoly) -> DiffPoly:
    """Contraction h with D_{-1} h + h D_{-1} = 1 - include_B . project_B.

    On a monomial containing l > 0 of the excluded generators it applies
    (1/l) sum_{s>=1} u^{i,s} g_{ji} d/dtheta_j^{k+s}; on the rest it is 0.
    """
    _, glow = metric_pair(b)
    n, k = b.n, b.k
    out = DiffPoly.zero()
    for (even, odd), coef in a.terms.items():
        l = _excluded_count((even, odd), k)
        if l == 0:
            continue
        term = DiffPoly({(even, odd): coef})
        acc = DiffPoly.zero()
        for s, j in odd:
            if s <= k:
                continue
            pa = term.partial(ThetaVar(j, s))
            if pa.is_zero:
                continue
            for i in range(1, n + 1):
                gji = glow[j - 1][i - 1]
                if not gji.is_zero:
                    acc = acc + DiffPoly.jet(i, s - k) * pa * gji
        out = out + acc * Fraction(1, l)
    return out


def in_B(a: DiffPoly, k: int) -> bool:
    """True when a lies in the subalgebra with no jets and theta orders <= k."""
    for even, odd in a.terms:
        if even or any(s > k for s, _ in odd):
            return False
    return True


def project_B(a: DiffPoly, k: int) -> DiffPoly:
    """Kill every term containing a jet or a theta of order above k."""
    return DiffPoly(
        {
            key: c
            for key, c in a.terms.items()
            if not key[0] and all(s <= k for s, _ in key[1])
        }
    )


def include_B(a: DiffPoly, k: int) -> DiffPoly:
    """Identity embedding, after checking membership in the subalgebra."""
    if not in_B(a, k):
        raise ValueError("element has a jet variable or a theta of order above k")
    return a


def d1_spectral(b: HomogeneousBracket, x: DiffPoly) -> DiffPoly:
    """d_1 computed through D_P: project the deg_u-preserving part back."""
    require_poisson(b)
    x = include_B(x, b.k)
    return project_B(apply_D_graded(b, 0, x), b.k)


def _named_with_top(b: HomogeneousBracket):
    """Tails h_(0..k-1) extended by h_(k)^{ij}_l := dg^{ij}/du^l."""
    named = extract_named(b)
    n = b.n
    top = [
        [[named.g[i][j].partial(l + 1) for l in range(n)] for j in range(n)]
        for i in range(n)
    ]
    return named, named.h + [top]


def d1_closed(b: HomogeneousBracket, x: DiffPoly) -> DiffPoly:
    """The compact formula for d_1 in terms of g and the tails h_(s)."""
    require_poisson(b)
    x = include_B(x, b.k)
    named, h = _named_with_top(b)
    n, k = b.n, b.k
    out = DiffPoly.zero()
    for i in range(1, n + 1):
        pa = x.partial_coordinate(i)
        if pa.is_zero:
            continue
        for j in range(1, n + 1):
            gij = named.g[i - 1][j - 1]
            if not gij.is_zero:
                out = out + DiffPoly.theta(j, k) * pa * gij
    half = Scalar.from_fraction(Fraction(1, 2))
    for s in range(0, k + 1):
        for l in range(1, n + 1):
            pa = x.partial(ThetaVar(l, s))
            if pa.is_zero:
                continue
            mult = DiffPoly.zero()
            for r in range(s, k + 1):
                for t in range(0, k + 1):
                    if k + s - t < 0:
                        continue
                    cf = comb(k + s - t, r)
                    if cf == 0:
                        continue
                    weight = Fraction(cf if (k - t) % 2 == 0 else -cf)
                    for i in range(1, n + 1):
                        for j in range(1, n + 1):
                            hv = h[t][i - 1][j - 1][l - 1]
                            if hv.is_zero:
                                continue
                            pair = DiffPoly.theta(i, r) * DiffPoly.theta(j, k + s - r)
                            if pair.is_zero:
                                continue
                            mult = mult + pair * hv * weight
            if not mult.is_zero:
                out = out + mult * pa * half
    return out


def d1_split(b: HomogeneousBracket, x: DiffPoly) -> tuple:
    """Split d_1 x into the parts raising the theta^k count by one and zero."""
    x = include_B(x, b.k)
    k = b.k
    groups: dict = {}
    for key, c in x.terms.items():
        groups.setdefault(term_deg_theta_k(key, k), {})[key] = c
    up = DiffPoly.zero()
    same = DiffPoly.zero()
    for q, terms in groups.items():
        part = d1_closed(b, DiffPoly(terms))
        up = up + part.project("deg_theta_k", q + 1, k)
        same = same + part.project("deg_theta_k", q, k)
    return up, same


def d1_as_connection(b: HomogeneousBracket, x: DiffPoly) -> DiffPoly:
    """The theta^k-raising part of d_1 evaluated through the connections.

    Realizes theta_i^k = g_{ij} du^j with du^j held as a placeholder of
    theta order k+1, applies du^i d/du^i plus the flat-combination
    Christoffel action du^i Gamma_[s]^j_{il} theta_j^s d/dtheta_l^s, and
    converts the placeholders back.
    """
    from .connections import flat_combination

    require_poisson(b)
    x = include_B(x, b.k)
    named, glow = metric_pair(b)
    n, k = b.n, b.k

    forward = {}
    for i in range(1, n + 1):
        img = DiffPoly.zero()
        for j in range(1, n + 1):
            if not glow[i - 1][j - 1].is_zero:
                img = img + DiffPoly.theta(j, k + 1) * glow[i - 1][j - 1]
        forward[(k, i)] = img
    xt = x.substitute(theta_map=forward)

    out = DiffPoly.zero()
    for i in range(1, n + 1):
        pa = xt.partial_coordinate(i)
        if not pa.is_zero:
            out = out + DiffPoly.theta(i, k + 1) * pa
    for s in range(0, k):
        conn = flat_combination(b, s)
        for l in range(1, n + 1):
            pa = xt.partial(ThetaVar(l, s))
            if pa.is_zero:
                continue
            mult = DiffPoly.zero()
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    gv = conn.gamma[j - 1][i - 1][l - 1]
                    if not gv.is_zero:
                        mult = mult + DiffPoly.theta(i, k + 1) * DiffPoly.theta(j, s) * gv
            if not mult.is_zero:
                out = out + mult * pa

    back = {}
    for j in range(1, n + 1):
        img = DiffPoly.zero()
        for l in range(1, n + 1):
            if not named.g[j - 1][l - 1].is_zero:
                img = img + DiffPoly.theta(l, k) * named.g[j - 1][l - 1]
        back[(k + 1, j)] = img
    return out.substitute(theta_map=back)


def spanning_monomials(n: int, k: int, max_degree: int = 3) -> list:
    """Monomials spanning the subalgebra up to a given theta degree.

    All products of distinct theta generators of order <= k with at most
    max_degree factors, together with 1 and the coordinates (which probe
    the action on coefficients).
    """
    gens = [(s, i) for s in range(0, k + 1) for i in range(1, n + 1)]
    out = [DiffPoly.one()]
    out.extend(DiffPoly.coordinate(i) for i in range(1, n + 1))
    for d in range(1, max_degree + 1):
        for chosen in combinations(gens, d):
            term = DiffPoly.one()
            for s, i in chosen:
                term = term * DiffPoly.theta(i, s)
            out.append(term)
    return out
