"""Exact arithmetic in the field of rational functions of u^1, ..., u^n.

A Scalar is a quotient num/den of multivariate polynomials with Fraction
coefficients, kept in a canonical form (gcd cancelled, denominator's leading
coefficient equal to 1) so that equality of values is equality of
representations.  Polynomials are sparse dicts mapping a monomial, stored as
a sorted tuple of (variable index, exponent) pairs, to its coefficient.
Variable indices are 1-based to match the coordinate names u1, u2, ...
"""

from __future__ import annotations

from fractions import Fraction

Mono = tuple  # ((var, exp), ...) with var >= 1, exp >= 1, sorted by var
Poly = dict  # Mono -> Fraction, no zero values

_ZERO_P: Poly = {}
_ONE_P: Poly = {(): Fraction(1)}


def _pconst(q: Fraction) -> Poly:
    return {(): q} if q else {}


def _is_const(p: Poly) -> bool:
    return len(p) == 0 or (len(p) == 1 and () in p)


def _padd(a: Poly, b: Poly) -> Poly:
    r = dict(a)
    for m, c in b.items():
        s = r.get(m, 0) + c
        if s:
            r[m] = s
        else:
            r.pop(m, None)
    return r


def _pneg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def _psub(a: Poly, b: Poly) -> Poly:
    return _padd(a, _pneg(b))


def _pscale(a: Poly, q: Fraction) -> Poly:
    if not q:
        return {}
    return {m: c * q for m, c in a.items()}


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if a == _ONE_P:
        return dict(b)
    if b == _ONE_P:
        return dict(a)
    r: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2)
            s = r.get(m, 0) + c1 * c2
            if s:
                r[m] = s
            else:
                r.pop(m, None)
    return r


def _ppow(a: Poly, e: int) -> Poly:
    r = dict(_ONE_P)
    for _ in range(e):
        r = _pmul(r, a)
    return r


def _pderiv(a: Poly, var: int) -> Poly:
    r: Poly = {}
    for m, c in a.items():
        exps = dict(m)
        e = exps.get(var, 0)
        if not e:
            continue
        if e == 1:
            del exps[var]
        else:
            exps[var] = e - 1
        dm = tuple(sorted(exps.items()))
        s = r.get(dm, 0) + c * e
        if s:
            r[dm] = s
        else:
            r.pop(dm, None)
    return r


def _pvars(a: Poly) -> set:
    vs = set()
    for m in a:
        for v, _ in m:
            vs.add(v)
    return vs


def _mono_key(m: Mono, nvars: int):
    # graded lex with u1 > u2 > ...: higher total degree first, then higher
    # exponent on the earliest variable
    exps = dict(m)
    return (sum(exps.values()), tuple(exps.get(v, 0) for v in range(1, nvars + 1)))


def _plead(a: Poly) -> tuple[Mono, Fraction]:
    nv = max(_pvars(a), default=0)
    m = max(a, key=lambda mm: _mono_key(mm, nv))
    return m, a[m]


def _pdiv_exact(a: Poly, b: Poly) -> Poly:
    """Divide a by b assuming exact divisibility (internal invariant)."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if b == _ONE_P:
        return dict(a)
    if _is_const(b):
        return _pscale(a, 1 / b[()])
    nv = max(_pvars(a) | _pvars(b), default=0)
    lead_b = max(b, key=lambda mm: _mono_key(mm, nv))
    cb = b[lead_b]
    eb = dict(lead_b)
    rem = dict(a)
    quot: Poly = {}
    while rem:
        lead_r = max(rem, key=lambda mm: _mono_key(mm, nv))
        er = dict(lead_r)
        qm = {}
        ok = True
        for v, e in eb.items():
            d = er.get(v, 0) - e
            if d < 0:
                ok = False
                break
            if d:
                qm[v] = d
        if ok:
            for v, e in er.items():
                if v not in eb and e:
                    qm[v] = e
        if not ok:
            raise ArithmeticError("inexact polynomial division")
        qmono = tuple(sorted(qm.items()))
        qc = rem[lead_r] / cb
        quot[qmono] = quot.get(qmono, 0) + qc
        rem = _psub(rem, _pmul({qmono: qc}, b))
    return {m: c for m, c in quot.items() if c}


def _to_univ(a: Poly, x: int) -> dict:
    """View a as a polynomial in x with coefficients in the remaining vars."""
    out: dict[int, Poly] = {}
    for m, c in a.items():
        exps = dict(m)
        d = exps.pop(x, 0)
        rest = tuple(sorted(exps.items()))
        coef = out.setdefault(d, {})
        s = coef.get(rest, 0) + c
        if s:
            coef[rest] = s
        else:
            coef.pop(rest, None)
    return {d: p for d, p in out.items() if p}


def _from_univ(u: dict, x: int) -> Poly:
    out: Poly = {}
    for d, p in u.items():
        xm = ((x, d),) if d else ()
        for m, c in p.items():
            mm = _mono_mul(m, xm)
            s = out.get(mm, 0) + c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
    return out


def _univ_mul_x(u: dict, shift: int, coef: Poly) -> dict:
    return {d + shift: _pmul(p, coef) for d, p in u.items()}


def _univ_sub(a: dict, b: dict) -> dict:
    r = {d: dict(p) for d, p in a.items()}
    for d, p in b.items():
        r[d] = _psub(r.get(d, {}), p)
        if not r[d]:
            del r[d]
    return r


def _content(u: dict) -> Poly:
    g: Poly = {}
    for p in u.values():
        g = _pgcd(g, p)
    return g


def _primitive(u: dict) -> dict:
    g = _content(u)
    if not g or g == _ONE_P:
        return u
    return {d: _pdiv_exact(p, g) for d, p in u.items()}


def _pgcd(a: Poly, b: Poly) -> Poly:
    """Gcd in Q[u...], normalized so the leading coefficient is 1."""
    if not a:
        return _monic(b)
    if not b:
        return _monic(a)
    if _is_const(a) or _is_const(b):
        return dict(_ONE_P)
    x = min(_pvars(a) | _pvars(b))
    ua, ub = _to_univ(a, x), _to_univ(b, x)
    ca, cb = _content(ua), _content(ub)
    cont = _pgcd(ca, cb)
    if ca != _ONE_P:
        ua = {d: _pdiv_exact(p, ca) for d, p in ua.items()}
    if cb != _ONE_P:
        ub = {d: _pdiv_exact(p, cb) for d, p in ub.items()}
    # primitive pseudo-remainder sequence in the main variable x
    f, g = ua, ub
    if max(f) < max(g):
        f, g = g, f
    while g:
        if max(g) == 0:
            # degree-zero remainder: the primitive parts are coprime in x
            f = {0: dict(_ONE_P)}
            break
        f, g = g, _primitive(_prem(f, g))
    result = _pmul(cont, _from_univ(f, x))
    return _monic(result)


def _prem(f: dict, g: dict) -> dict:
    """Pseudo-remainder of univariate f by g (coefficients are polynomials)."""
    df, dg = max(f), max(g)
    lg = g[dg]
    r = f
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        r = _univ_sub(_univ_mul_x(r, 0, lg), _univ_mul_x(g, dr - dg, lr))
    return r


def _monic(a: Poly) -> Poly:
    if not a:
        return {}
    _, lc = _plead(a)
    if lc == 1:
        return dict(a)
    return _pscale(a, 1 / lc)


def _pstr(a: Poly) -> str:
    if not a:
        return "0"
    nv = max(_pvars(a), default=0)
    monos = sorted(a, key=lambda m: _mono_key(m, nv), reverse=True)
    parts = []
    for idx, m in enumerate(monos):
        c = a[m]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        factors = []
        for v, e in m:
            factors.append(f"u{v}" if e == 1 else f"u{v}^{e}")
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = str(c) + "*" + "*".join(factors)
        if idx == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


class Scalar:
    """A rational function of the coordinates, in canonical reduced form."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _ONE_P, _normalized: bool = False):
        if _normalized:
            self.num = num
            self.den = den
            return
        if not den:
            raise ZeroDivisionError("division by zero rational function")
        if not num:
            self.num = {}
            self.den = dict(_ONE_P)
            return
        if _is_const(den):
            self.num = _pscale(num, 1 / den[()])
            self.den = dict(_ONE_P)
            return
        self.num, self.den = _reduce(num, den)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_fraction(q) -> "Scalar":
        q = Fraction(q)
        return Scalar(_pconst(q), dict(_ONE_P), _normalized=True)

    @staticmethod
    def zero() -> "Scalar":
        return Scalar({}, dict(_ONE_P), _normalized=True)

    @staticmethod
    def one() -> "Scalar":
        return Scalar.from_fraction(1)

    @staticmethod
    def coordinate(i: int) -> "Scalar":
        if i < 1:
            raise ValueError(f"coordinate index must be >= 1, got {i}")
        return Scalar({((i, 1),): Fraction(1)}, dict(_ONE_P), _normalized=True)

    # -- predicates -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    def is_fraction(self) -> bool:
        return _is_const(self.num) and self.den == _ONE_P

    def as_fraction(self) -> Fraction:
        if not self.is_fraction():
            raise ValueError(f"not a constant: {self}")
        return self.num.get((), Fraction(0))

    def variables(self) -> set:
        return _pvars(self.num) | _pvars(self.den)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.den == other.den:
            return Scalar(_padd(self.num, other.num), self.den)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return Scalar(num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(_pneg(self.num), self.den, _normalized=True)

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

    def __mul__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Scalar.zero()
        return Scalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return Scalar(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, e: int) -> "Scalar":
        if e < 0:
            return Scalar.one() / self ** (-e)
        return Scalar(_ppow(self.num, e), _ppow(self.den, e))

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- calculus and substitution --------------------------------------

    def partial(self, i: int) -> "Scalar":
        """Partial derivative with respect to the coordinate u^i."""
        if i < 1:
            raise ValueError(f"coordinate index must be >= 1, got {i}")
        dn = _pderiv(self.num, i)
        dd = _pderiv(self.den, i)
        if not dd:
            return Scalar(dn, self.den)
        num = _psub(_pmul(dn, self.den), _pmul(self.num, dd))
        return Scalar(num, _pmul(self.den, self.den))

    def subs(self, mapping: dict) -> "Scalar":
        """Substitute coordinates by Scalars: mapping maps index i to u^i's image."""
        num = _peval(self.num, mapping)
        den = _peval(self.den, mapping)
        return num / den

    def __str__(self) -> str:
        if self.den == _ONE_P:
            return _pstr(self.num)
        return f"({_pstr(self.num)})/({_pstr(self.den)})"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    g = _pgcd(num, den)
    if g != _ONE_P and g:
        num = _pdiv_exact(num, g)
        den = _pdiv_exact(den, g)
    if _is_const(den):
        num = _pscale(num, 1 / den[()])
        den = dict(_ONE_P)
    else:
        _, lc = _plead(den)
        if lc != 1:
            num = _pscale(num, 1 / lc)
            den = _pscale(den, 1 / lc)
    return num, den


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.from_fraction(x)
    return NotImplemented


def _peval(p: Poly, mapping: dict) -> Scalar:
    total = Scalar.zero()
    for m, c in p.items():
        term = Scalar.from_fraction(c)
        for v, e in m:
            base = mapping.get(v)
            if base is None:
                base = Scalar.coordinate(v)
            term = term * base**e
        total = total + term
    return total


def parse_scalar(text: str) -> Scalar:
    """Parse an expression containing only coordinates into a Scalar."""
    from . import grammar

    return grammar.parse_scalar(text)


def scalar_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Combine Scalars with one of add, sub, mul, div, neg (b ignored for neg)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def partial_u(a: Scalar, i: int) -> Scalar:
    """Partial derivative of a with respect to u^i."""
    return a.partial(i)
