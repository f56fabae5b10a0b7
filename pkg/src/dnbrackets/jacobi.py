"""Jacobi identity via the odd encoding.

For the bivector P~ of a skew bracket, the induced odd vector field is

    D_P = sum_{i,s} d_x^s(dP~/dtheta_i) d/du^{i,s}
        + sum_{i,s} d_x^s(dP~/du^i) d/dtheta_i^s

where dP~/dtheta_i and dP~/du^i are variational derivatives.  The bracket
satisfies Jacobi exactly when D_P squares to zero, and since D_P^2 is again
a derivation it suffices to test it on the generators u^i and theta_i.
D_P(u^i) is the theta-variational derivative itself, so the generator test
reduces to applying D_P to the two families of variational derivatives.
"""

from __future__ import annotations

from .bracket import HomogeneousBracket, bivector, skew_defects, validate
from .diffpoly import DiffPoly
from .errors import PreconditionError


def variational_pair(b: HomogeneousBracket) -> tuple[list, list]:
    """(dP~/dtheta_i, dP~/du^i) for i = 1..n, cached on the bracket."""
    cached = b._cache.get("variational_pair")
    if cached is not None:
        return cached
    P = bivector(b)
    ddtheta = [P.variational_theta(i) for i in range(1, b.n + 1)]
    ddu = [P.variational_u(i) for i in range(1, b.n + 1)]
    b._cache["variational_pair"] = (ddtheta, ddu)
    return ddtheta, ddu


def _dx_powers(b: HomogeneousBracket, family: str, i: int, s: int) -> DiffPoly:
    lst = b._cache.get(("dx", family, i))
    if lst is None:
        ddtheta, ddu = variational_pair(b)
        base = ddtheta[i - 1] if family == "theta" else ddu[i - 1]
        lst = [base]
        b._cache[("dx", family, i)] = lst
    while len(lst) <= s:
        lst.append(lst[-1].d_x())
    return lst[s]


def apply_DP(b: HomogeneousBracket, a: DiffPoly) -> DiffPoly:
    """Apply the odd vector field D_P to a."""
    if a.is_zero:
        return DiffPoly.zero()
    out = DiffPoly.zero()
    max_jet = a.max_jet_order()
    max_theta = a.max_theta_order()
    for i in range(1, b.n + 1):
        for s in range(0, max_jet + 1):
            da = a.partial_coordinate(i) if s == 0 else a._partial_jet(i, s)
            if da.is_zero:
                continue
            out = out + _dx_powers(b, "theta", i, s) * da
        for s in range(0, max_theta + 1):
            da = a._partial_theta(i, s)
            if da.is_zero:
                continue
            out = out + _dx_powers(b, "u", i, s) * da
    return out


def jacobi_defects(b: HomogeneousBracket) -> list[tuple[str, DiffPoly]]:
    """Nonzero values of D_P^2 on the generators u^i, theta_i."""
    ddtheta, ddu = variational_pair(b)
    out = []
    for i in range(1, b.n + 1):
        r = apply_DP(b, ddtheta[i - 1])
        if not r.is_zero:
            out.append((f"D_P^2(u^{i})", r))
    for i in range(1, b.n + 1):
        r = apply_DP(b, ddu[i - 1])
        if not r.is_zero:
            out.append((f"D_P^2(theta_{i})", r))
    return out


def check_jacobi(b: HomogeneousBracket) -> bool:
    """True iff the bracket satisfies the Jacobi identity.

    Requires a well-formed, skew-symmetric bracket; otherwise the odd
    encoding does not represent the operator and a PreconditionError is
    raised with the first violation as witness.
    """
    problems = validate(b)
    if problems:
        raise PreconditionError(f"invalid bracket: {problems[0]}", witness=problems[0])
    bad = skew_defects(b)
    if bad:
        i, j, t, defect = bad[0]
        raise PreconditionError(
            f"bracket is not skew-symmetric: defect at (i={i}, j={j}, s={t}) is {defect}",
            witness=defect,
        )
    return not jacobi_defects(b)
