"""Differential polynomials in jet variables u^{i,s} and odd generators theta_i^s.

Elements live in the supercommutative algebra generated over the rational
function field by even variables u^{i,s} (s >= 1) and odd variables
theta_i^s (s >= 0).  A term is stored as a pair of tuples:

* even part: (((i, s), exponent), ...) sorted by (i, s),
* odd part:  ((s, i), ...) strictly increasing, so theta variables are
  ordered by differential order first and component second.

Odd variables anticommute and square to zero; signs are tracked when words
are merged or reordered.  Coefficients are Scalars (rational functions of
the coordinates u^i), and the total derivative d_x acts on those through
the chain rule u^i -> u^{i,1}.

Partial derivatives with respect to odd variables are left derivatives:
the variable is anticommuted to the front of the word and then removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalar import Scalar

EvenKey = tuple  # (((i, s), e), ...)
OddKey = tuple  # ((s, i), ...)
TermKey = tuple  # (EvenKey, OddKey)

_EMPTY_KEY: TermKey = ((), ())


@dataclass(frozen=True)
class JetVar:
    """The even generator u^{i,s} with s >= 1."""

    i: int
    s: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError(f"component index must be >= 1, got {self.i}")
        if self.s < 1:
            raise ValueError(f"jet order must be >= 1, got {self.s}")


@dataclass(frozen=True)
class ThetaVar:
    """The odd generator theta_i^s with s >= 0."""

    i: int
    s: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError(f"component index must be >= 1, got {self.i}")
        if self.s < 0:
            raise ValueError(f"theta order must be >= 0, got {self.s}")


def _odd_mul(o1: OddKey, o2: OddKey):
    """Merge two sorted odd words; returns (sign, word) or None on repeats."""
    if not o1:
        return 1, o2
    if not o2:
        return 1, o1
    merged = []
    i = j = 0
    sign = 1
    n1 = len(o1)
    while i < n1 and j < len(o2):
        a, b = o1[i], o2[j]
        if a == b:
            return None
        if a < b:
            merged.append(a)
            i += 1
        else:
            if (n1 - i) % 2:
                sign = -sign
            merged.append(b)
            j += 1
    merged.extend(o1[i:])
    merged.extend(o2[j:])
    return sign, tuple(merged)


def _normalize_odd(word):
    """Sort an odd word, tracking the permutation sign; None if a repeat."""
    w = list(word)
    sign = 1
    for idx in range(1, len(w)):
        j = idx
        while j > 0 and w[j] < w[j - 1]:
            w[j], w[j - 1] = w[j - 1], w[j]
            sign = -sign
            j -= 1
    for a, b in zip(w, w[1:]):
        if a == b:
            return None
    return sign, tuple(w)


def _even_mul(e1: EvenKey, e2: EvenKey) -> EvenKey:
    if not e1:
        return e2
    if not e2:
        return e1
    exps = dict(e1)
    for v, e in e2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def term_deg(key: TermKey) -> int:
    """Differential-order weight: u^{i,s} and theta_i^s both count s."""
    even, odd = key
    return sum(v[1] * e for v, e in even) + sum(s for s, _ in odd)


def term_deg_theta(key: TermKey) -> int:
    return len(key[1])


def term_deg_u(key: TermKey) -> int:
    return sum(e for _, e in key[0])


def term_deg_theta_k(key: TermKey, k: int) -> int:
    return sum(1 for s, _ in key[1] if s == k)


_GRADINGS = {
    "deg": lambda key, k: term_deg(key),
    "deg_theta": lambda key, k: term_deg_theta(key),
    "deg_u": lambda key, k: term_deg_u(key),
    "deg_theta_k": term_deg_theta_k,
}


class DiffPoly:
    """A differential polynomial with Scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero}

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "DiffPoly":
        return DiffPoly()

    @staticmethod
    def one() -> "DiffPoly":
        return DiffPoly.from_scalar(Scalar.one())

    @staticmethod
    def from_scalar(sc: Scalar) -> "DiffPoly":
        return DiffPoly({_EMPTY_KEY: sc})

    @staticmethod
    def from_fraction(q) -> "DiffPoly":
        return DiffPoly.from_scalar(Scalar.from_fraction(q))

    @staticmethod
    def coordinate(i: int) -> "DiffPoly":
        return DiffPoly.from_scalar(Scalar.coordinate(i))

    @staticmethod
    def jet(i: int, s: int) -> "DiffPoly":
        if s == 0:
            return DiffPoly.coordinate(i)
        JetVar(i, s)  # validate
        return DiffPoly({((((i, s), 1),), ()): Scalar.one()})

    @staticmethod
    def theta(i: int, s: int) -> "DiffPoly":
        ThetaVar(i, s)  # validate
        return DiffPoly({((), ((s, i),)): Scalar.one()})

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero

    def is_scalar(self) -> bool:
        return all(k == _EMPTY_KEY for k in self.terms)

    def to_scalar(self) -> Scalar:
        if not self.is_scalar():
            raise ValueError(f"not a pure scalar: {self}")
        return self.terms.get(_EMPTY_KEY, Scalar.zero())

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == DiffPoly.from_scalar(
                other if isinstance(other, Scalar) else Scalar.from_fraction(other)
            )
        return NotImplemented

    __hash__ = None

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "DiffPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        r = dict(self.terms)
        for k, c in other.terms.items():
            s = r.get(k)
            s = c if s is None else s + c
            if s.is_zero:
                r.pop(k, None)
            else:
                r[k] = s
        out = DiffPoly.__new__(DiffPoly)
        out.terms = r
        return out

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        out = DiffPoly.__new__(DiffPoly)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction, Scalar)):
            sc = other if isinstance(other, Scalar) else Scalar.from_fraction(other)
            if sc.is_zero:
                return DiffPoly.zero()
            out = DiffPoly.__new__(DiffPoly)
            out.terms = {k: c * sc for k, c in self.terms.items()}
            return out
        if not isinstance(other, DiffPoly):
            return NotImplemented
        r: dict = {}
        for (e1, o1), c1 in self.terms.items():
            for (e2, o2), c2 in other.terms.items():
                om = _odd_mul(o1, o2)
                if om is None:
                    continue
                sign, odd = om
                key = (_even_mul(e1, e2), odd)
                c = c1 * c2
                if sign < 0:
                    c = -c
                s = r.get(key)
                s = c if s is None else s + c
                if s.is_zero:
                    r.pop(key, None)
                else:
                    r[key] = s
        out = DiffPoly.__new__(DiffPoly)
        out.terms = r
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, e: int) -> "DiffPoly":
        if e < 0:
            raise ValueError("negative powers of differential polynomials")
        r = DiffPoly.one()
        for _ in range(e):
            r = r * self
        return r

    # -- derivations ----------------------------------------------------

    def partial(self, v) -> "DiffPoly":
        """Partial derivative with respect to a JetVar or ThetaVar.

        Theta derivatives are left derivatives.
        """
        if isinstance(v, JetVar):
            return self._partial_jet(v.i, v.s)
        if isinstance(v, ThetaVar):
            return self._partial_theta(v.i, v.s)
        raise TypeError(f"expected JetVar or ThetaVar, got {type(v).__name__}")

    def partial_coordinate(self, i: int) -> "DiffPoly":
        """Differentiate the Scalar coefficients with respect to u^i."""
        r: dict = {}
        for key, c in self.terms.items():
            dc = c.partial(i)
            if not dc.is_zero:
                r[key] = dc
        out = DiffPoly.__new__(DiffPoly)
        out.terms = r
        return out

    def _partial_jet(self, i: int, s: int) -> "DiffPoly":
        if s == 0:
            return self.partial_coordinate(i)
        target = (i, s)
        r: dict = {}
        for (even, odd), c in self.terms.items():
            exps = dict(even)
            e = exps.get(target, 0)
            if not e:
                continue
            if e == 1:
                del exps[target]
            else:
                exps[target] = e - 1
            key = (tuple(sorted(exps.items())), odd)
            nc = c * e
            old = r.get(key)
            nc = nc if old is None else old + nc
            if nc.is_zero:
                r.pop(key, None)
            else:
                r[key] = nc
        out = DiffPoly.__new__(DiffPoly)
        out.terms = r
        return out

    def _partial_theta(self, i: int, s: int) -> "DiffPoly":
        target = (s, i)
        r: dict = {}
        for (even, odd), c in self.terms.items():
            if target not in odd:
                continue
            p = odd.index(target)
            rest = odd[:p] + odd[p + 1 :]
            nc = -c if p % 2 else c
            key = (even, rest)
            old = r.get(key)
            nc = nc if old is None else old + nc
            if nc.is_zero:
                r.pop(key, None)
            else:
                r[key] = nc
        out = DiffPoly.__new__(DiffPoly)
        out.terms = r
        return out

    def d_x(self) -> "DiffPoly":
        """Total x-derivative: chain rule on coefficients plus order shifts."""
        acc: dict = {}

        def add(key, c):
            old = acc.get(key)
            c = c if old is None else old + c
            if c.is_zero:
                acc.pop(key, None)
            else:
                acc[key] = c

        for (even, odd), c in self.terms.items():
            for v in sorted(c.variables()):
                dc = c.partial(v)
                if dc.is_zero:
                    continue
                key = (_even_mul(even, (((v, 1), 1),)), odd)
                add(key, dc)
            for (i, s), e in even:
                exps = dict(even)
                if e == 1:
                    del exps[(i, s)]
                else:
                    exps[(i, s)] = e - 1
                exps[(i, s + 1)] = exps.get((i, s + 1), 0) + 1
                add((tuple(sorted(exps.items())), odd), c * e)
            for p, (s, i) in enumerate(odd):
                word = odd[:p] + ((s + 1, i),) + odd[p + 1 :]
                norm = _normalize_odd(word)
                if norm is None:
                    continue
                sign, nw = norm
                add((even, nw), c if sign > 0 else -c)
        out = DiffPoly.__new__(DiffPoly)
        out.terms = acc
        return out

    def d_x_pow(self, s: int) -> "DiffPoly":
        r = self
        for _ in range(s):
            r = r.d_x()
        return r

    def variational_u(self, i: int) -> "DiffPoly":
        """Variational derivative with respect to u^i."""
        out = self.partial_coordinate(i)
        for s in range(1, self.max_jet_order() + 1):
            p = self._partial_jet(i, s)
            if p.is_zero:
                continue
            p = p.d_x_pow(s)
            out = out + (p if s % 2 == 0 else -p)
        return out

    def variational_theta(self, i: int) -> "DiffPoly":
        """Variational derivative with respect to theta_i."""
        out = DiffPoly.zero()
        for s in range(0, self.max_theta_order() + 1):
            p = self._partial_theta(i, s)
            if p.is_zero:
                continue
            p = p.d_x_pow(s)
            out = out + (p if s % 2 == 0 else -p)
        return out

    # -- gradings and projections ---------------------------------------

    def project(self, grading: str, d: int, k: int | None = None) -> "DiffPoly":
        """Keep the terms whose given grading equals d."""
        fn = _GRADINGS.get(grading)
        if fn is None:
            raise ValueError(f"unknown grading {grading!r}")
        if grading == "deg_theta_k" and k is None:
            raise ValueError("grading 'deg_theta_k' needs the bracket degree k")
        out = DiffPoly.__new__(DiffPoly)
        out.terms = {key: c for key, c in self.terms.items() if fn(key, k) == d}
        return out

    def degrees(self, grading: str, k: int | None = None) -> set:
        fn = _GRADINGS.get(grading)
        if fn is None:
            raise ValueError(f"unknown grading {grading!r}")
        if grading == "deg_theta_k" and k is None:
            raise ValueError("grading 'deg_theta_k' needs the bracket degree k")
        return {fn(key, k) for key in self.terms}

    def is_homogeneous(self, grading: str, d: int, k: int | None = None) -> bool:
        degs = self.degrees(grading, k)
        return degs <= {d}

    def max_jet_order(self) -> int:
        m = 0
        for even, _ in self.terms:
            for (_, s), _e in even:
                if s > m:
                    m = s
        return m

    def max_theta_order(self) -> int:
        m = -1
        for _, odd in self.terms:
            for s, _ in odd:
                if s > m:
                    m = s
        return m

    def coefficient(self, even: EvenKey, odd: OddKey) -> Scalar:
        return self.terms.get((even, odd), Scalar.zero())

    # -- substitution ---------------------------------------------------

    def substitute(self, coord_map=None, jet_map=None, theta_map=None) -> "DiffPoly":
        """Substitute generators: coordinates by Scalars, jets and thetas by
        DiffPolys.  Unmapped generators are left alone.  Jet images must be
        even; theta images must be odd (this is the caller's responsibility).
        """
        jm = {}
        if jet_map:
            for v, img in jet_map.items():
                kk = (v.i, v.s) if isinstance(v, JetVar) else tuple(v)
                jm[kk] = img
        tm = {}
        if theta_map:
            for v, img in theta_map.items():
                kk = (v.s, v.i) if isinstance(v, ThetaVar) else tuple(v)
                tm[kk] = img
        total = DiffPoly.zero()
        for (even, odd), c in self.terms.items():
            sc = c.subs(coord_map) if coord_map else c
            acc = DiffPoly.from_scalar(sc)
            for (i, s), e in even:
                img = jm.get((i, s))
                if img is None:
                    img = DiffPoly.jet(i, s)
                acc = acc * img**e
            for (s, i) in odd:
                img = tm.get((s, i))
                if img is None:
                    img = DiffPoly.theta(i, s)
                acc = acc * img
            total = total + acc
        return total

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for key in sorted(self.terms):
            sign, body = _term_str(key, self.terms[key])
            if not parts:
                parts.append(body if sign > 0 else "-" + body)
            else:
                parts.append((" + " if sign > 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"DiffPoly({self})"


def _term_str(key: TermKey, c: Scalar) -> tuple[int, str]:
    even, odd = key
    factors = []
    for (i, s), e in even:
        v = f"u{i}_{s}"
        factors.append(v if e == 1 else f"{v}^{e}")
    for s, i in odd:
        factors.append(f"theta{i}_{s}")
    sign = 1
    if c.is_fraction():
        q = c.as_fraction()
        if q < 0:
            sign = -1
            q = -q
        if not factors:
            coef = str(q)
        elif q == 1:
            coef = ""
        else:
            coef = str(q)
    elif c.den == {(): Fraction(1)}:
        if len(c.num) == 1:
            q = next(iter(c.num.values()))
            if q < 0:
                sign = -1
                c = -c
            coef = str(c)
        else:
            coef = f"({c})"
    else:
        coef = str(c)  # already printed as (num)/(den)
    if coef and factors:
        return sign, coef + "*" + "*".join(factors)
    if factors:
        return sign, "*".join(factors)
    return sign, coef


def _coerce(x):
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, Scalar):
        return DiffPoly.from_scalar(x)
    if isinstance(x, (int, Fraction)):
        return DiffPoly.from_fraction(x)
    return NotImplemented


def mul(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    """Super-commutative product (free-function form of a * b)."""
    return _coerce(a) * b


def d_x(a: DiffPoly) -> DiffPoly:
    """Total x-derivative (free-function form of a.d_x())."""
    return a.d_x()


def partial(a: DiffPoly, v) -> DiffPoly:
    """Partial derivative with respect to a JetVar or ThetaVar."""
    return a.partial(v)


def variational(a: DiffPoly, kind: str, i: int) -> DiffPoly:
    """Variational derivative: kind 'u' -> delta/delta u^i, 'theta' -> delta/delta theta_i."""
    if kind == "u":
        return a.variational_u(i)
    if kind == "theta":
        return a.variational_theta(i)
    raise ValueError(f"kind must be 'u' or 'theta', got {kind!r}")


def project(a: DiffPoly, grading: str, d: int, k: int | None = None) -> DiffPoly:
    """Homogeneous component of a in the given grading."""
    return a.project(grading, d, k)
