"""Homogeneous local brackets on n coordinates.

A bracket of degree k is stored through its operator coefficients
P_s^{ij} for s = 0..k, each a differential polynomial of weight k - s
(so the s-th coefficient multiplies the s-th derivative of the delta
function).  Entries are kept sparse: absent (i, j, s) means zero.

The odd encoding used by the Jacobi machinery is the bivector

    1/2 * sum_s P_s^{ij} theta_i theta_j^s,

an element of theta-degree 2 whose variational derivatives recover the
operator.  Index conventions: i, j are 1-based like the coordinates;
tensor-valued results (metric, named coefficients) use 0-based nested
lists, so g[i][j] is the coefficient attached to u^{i+1}, u^{j+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .diffpoly import DiffPoly
from .errors import DegenerateMetricError
from .scalar import Scalar


@dataclass
class HomogeneousBracket:
    """Degree-k bracket: P maps (i, j, s) to the coefficient of delta^(s)."""

    n: int
    k: int
    P: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one coordinate, got n={self.n}")
        if self.k < 1:
            raise ValueError(f"bracket degree must be >= 1, got k={self.k}")
        cleaned = {}
        for (i, j, s), entry in self.P.items():
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"component indices ({i},{j}) out of range for n={self.n}")
            if not (0 <= s <= self.k):
                raise ValueError(f"derivative order s={s} out of range for k={self.k}")
            if not isinstance(entry, DiffPoly):
                raise TypeError("bracket entries must be DiffPoly")
            if not entry.is_zero:
                cleaned[(i, j, s)] = entry
        self.P = cleaned

    def entry(self, i: int, j: int, s: int) -> DiffPoly:
        return self.P.get((i, j, s), DiffPoly.zero())

    def entries(self):
        return self.P.items()


def validate(b: HomogeneousBracket) -> list[str]:
    """Check well-formedness; returns a list of problems (empty when valid)."""
    problems = []
    for (i, j, s), entry in b.P.items():
        if entry.max_theta_order() >= 0:
            problems.append(f"P_{s}^{{{i}{j}}} contains odd variables")
            continue
        want = b.k - s
        degs = entry.degrees("deg")
        if degs - {want}:
            problems.append(
                f"P_{s}^{{{i}{j}}} is not homogeneous of weight {want}: weights {sorted(degs)}"
            )
        bad_components = set()
        for (even, _), coeff in entry.terms.items():
            for (ii, _ss), _e in even:
                if ii > b.n:
                    bad_components.add(ii)
            for v in coeff.variables():
                if v > b.n:
                    bad_components.add(v)
        if bad_components:
            problems.append(
                f"P_{s}^{{{i}{j}}} mentions components beyond n={b.n}: {sorted(bad_components)}"
            )
    return problems


def bivector(b: HomogeneousBracket) -> DiffPoly:
    """The odd encoding 1/2 sum P_s^{ij} theta_i theta_j^s."""
    cached = b._cache.get("bivector")
    if cached is not None:
        return cached
    total = DiffPoly.zero()
    half = Scalar.from_fraction(1) / 2
    for (i, j, s), entry in b.P.items():
        total = total + entry * DiffPoly.theta(i, 0) * DiffPoly.theta(j, s) * half
    b._cache["bivector"] = total
    return total


@dataclass
class NamedCoefficients:
    """The leading metric g and the linear-part tails h_(s).

    g[i][j] is the coefficient of delta^(k) with no jet dependence, and
    h[s][i][j][l] the coefficient of u^{l+1, k-s} in the linear part of
    P_s (all indices 0-based here).
    """

    n: int
    k: int
    g: list
    h: list


def extract_named(b: HomogeneousBracket) -> NamedCoefficients:
    cached = b._cache.get("named")
    if cached is not None:
        return cached
    n, k = b.n, b.k
    g = [[b.entry(i + 1, j + 1, k).coefficient((), ()) for j in range(n)] for i in range(n)]
    h = []
    for s in range(k):
        order = k - s
        h.append(
            [
                [
                    [
                        b.entry(i + 1, j + 1, s).coefficient((((l + 1, order), 1),), ())
                        for l in range(n)
                    ]
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )
    named = NamedCoefficients(n=n, k=k, g=g, h=h)
    b._cache["named"] = named
    return named


def skew_defects(b: HomogeneousBracket) -> list[tuple[int, int, int, DiffPoly]]:
    """Defects of the formal skew-adjoint condition.

    Skewness of the operator says P_t^{ji} equals
    sum_{s>=t} (-1)^{s+1} C(s,t) d_x^{s-t} P_s^{ij}; each nonzero
    difference is returned as (i, j, t, defect).
    """
    out = []
    for i in range(1, b.n + 1):
        for j in range(1, b.n + 1):
            for t in range(b.k + 1):
                rhs = DiffPoly.zero()
                for s in range(t, b.k + 1):
                    term = b.entry(i, j, s).d_x_pow(s - t) * comb(s, t)
                    rhs = rhs + (term if (s + 1) % 2 == 0 else -term)
                defect = b.entry(j, i, t) - rhs
                if not defect.is_zero:
                    out.append((i, j, t, defect))
    return out


def check_skew(b: HomogeneousBracket) -> bool:
    return not skew_defects(b)


def skewh_defects(b: HomogeneousBracket) -> list[tuple[str, Scalar]]:
    """Skewness conditions written on the named coefficients (g, h)."""
    named = extract_named(b)
    n, k = named.n, named.k
    sign = 1 if (k + 1) % 2 == 0 else -1
    out = []
    for i in range(n):
        for j in range(n):
            defect = named.g[j][i] - sign * named.g[i][j]
            if not defect.is_zero:
                out.append((f"g^{{{j+1}{i+1}}} - ({sign})*g^{{{i+1}{j+1}}}", defect))
    for s in range(k):
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    rhs = comb(k, s) * named.g[i][j].partial(l + 1)
                    for t in range(s, k):
                        term = comb(t, s) * named.h[t][j][i][l]
                        rhs = rhs + (term if (t + 1) % 2 == 0 else -term)
                    defect = named.h[s][i][j][l] - rhs
                    if not defect.is_zero:
                        out.append(
                            (f"h_({s})^{{{i+1}{j+1}}}_{l+1} constraint", defect)
                        )
    return out


def check_skewh(b: HomogeneousBracket) -> bool:
    return not skewh_defects(b)


@dataclass
class CoordinateMap:
    """An invertible rational change of coordinates.

    forward[i] expresses the new coordinate i+1 in the old ones; inverse[i]
    expresses the old coordinate i+1 in the new ones.
    """

    n: int
    forward: list
    inverse: list

    def __post_init__(self):
        if len(self.forward) != self.n or len(self.inverse) != self.n:
            raise ValueError("coordinate map needs exactly n components each way")

    def check_inverse(self) -> list[str]:
        problems = []
        fwd = {m + 1: self.forward[m] for m in range(self.n)}
        inv = {m + 1: self.inverse[m] for m in range(self.n)}
        for i in range(self.n):
            if self.forward[i].subs(inv) != Scalar.coordinate(i + 1):
                problems.append(f"forward o inverse is not the identity in component {i+1}")
            if self.inverse[i].subs(fwd) != Scalar.coordinate(i + 1):
                problems.append(f"inverse o forward is not the identity in component {i+1}")
        return problems

    def inverted(self) -> "CoordinateMap":
        return CoordinateMap(self.n, list(self.inverse), list(self.forward))

    def jacobian(self) -> list:
        """J[i][i'] = d(new i)/d(old i'), as functions of the old coordinates."""
        return [
            [self.forward[i].partial(ip + 1) for ip in range(self.n)]
            for i in range(self.n)
        ]


def transform(b: HomogeneousBracket, cmap: CoordinateMap) -> HomogeneousBracket:
    """Push the bracket through a change of coordinates.

    The operator transforms by the Leibniz expansion

        R_s^{ij} = sum_t C(s+t, s) J^i_{i'} P_{s+t}^{i'j'} d_x^t(J^j_{j'})

    computed in the old jet variables; afterwards old coordinates and jets
    are substituted by their expressions in the new ones.
    """
    if cmap.n != b.n:
        raise ValueError(f"map is for n={cmap.n}, bracket has n={b.n}")
    problems = cmap.check_inverse()
    if problems:
        raise ValueError("; ".join(problems))
    n, k = b.n, b.k
    jac = cmap.jacobian()
    jac_dx = [[[DiffPoly.from_scalar(jac[a][bb])] for bb in range(n)] for a in range(n)]

    def jac_deriv(a, bb, t):
        col = jac_dx[a][bb]
        while len(col) <= t:
            col.append(col[-1].d_x())
        return col[t]

    raw = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in range(k + 1):
                acc = DiffPoly.zero()
                for t in range(0, k - s + 1):
                    coef = comb(s + t, s)
                    inner = DiffPoly.zero()
                    for ip in range(1, n + 1):
                        for jp in range(1, n + 1):
                            entry = b.entry(ip, jp, s + t)
                            if entry.is_zero:
                                continue
                            inner = inner + entry * jac[i - 1][ip - 1] * jac_deriv(
                                j - 1, jp - 1, t
                            )
                    acc = acc + inner * coef
                if not acc.is_zero:
                    raw[(i, j, s)] = acc

    coord_map = {m + 1: cmap.inverse[m] for m in range(n)}
    max_order = max((entry.max_jet_order() for entry in raw.values()), default=0)
    jet_map = {}
    for l in range(1, n + 1):
        base = DiffPoly.from_scalar(cmap.inverse[l - 1])
        for r in range(1, max_order + 1):
            base = base.d_x()
            jet_map[(l, r)] = base
    P = {
        key: entry.substitute(coord_map=coord_map, jet_map=jet_map)
        for key, entry in raw.items()
    }
    return HomogeneousBracket(n=n, k=k, P=P)


def constant_bracket(g: list, k: int) -> HomogeneousBracket:
    """The bracket with constant leading coefficient g and no lower tail."""
    n = len(g)
    P = {}
    for i in range(n):
        for j in range(n):
            sc = g[i][j] if isinstance(g[i][j], Scalar) else Scalar.from_fraction(g[i][j])
            if not sc.is_zero:
                P[(i + 1, j + 1, k)] = DiffPoly.from_scalar(sc)
    return HomogeneousBracket(n=n, k=k, P=P)


def lower_metric(g: list) -> list:
    """Invert the leading-coefficient matrix over the rational function field."""
    n = len(g)
    aug = [[g[i][j] for j in range(n)] + [Scalar.one() if i == j else Scalar.zero() for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if not aug[row][col].is_zero:
                pivot = row
                break
        if pivot is None:
            raise DegenerateMetricError("leading coefficient matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Scalar.one() / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for row in range(n):
            if row != col and not aug[row][col].is_zero:
                factor = aug[row][col]
                aug[row] = [a - factor * c for a, c in zip(aug[row], aug[col])]
    return [row[n:] for row in aug]


def metric_pair(b: HomogeneousBracket) -> tuple:
    """Named coefficients together with the inverted leading metric, cached."""
    cached = b._cache.get("metric_pair")
    if cached is None:
        named = extract_named(b)
        cached = (named, lower_metric(named.g))
        b._cache["metric_pair"] = cached
    return cached
