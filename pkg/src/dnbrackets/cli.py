"""Command-line front end.

Reads bracket definitions (and coordinate maps) from JSON documents, runs
the requested checks, prints a text report and optionally a JSON mirror.

Exit codes: 0 when every executed check passes, 1 when at least one check
fails, 2 on malformed input (schema, parse, or file problems).

Bracket document schema::

    {
      "dimension": 2,
      "degree": 3,
      "coordinates": ["u1", "u2"],          # optional, must match u1..un
      "construction": "raw",                 # raw | canonical_k2 | potemin
      "entries": [ {"s": 3, "i": 1, "j": 1, "expr": "1"}, ... ]   # raw
      "metric":  [["...", ...], ...],        # canonical_k2 / potemin
      "tail":    [[[...], ...], ...]         # potemin: tail[i][j][l]
    }

Coordinate map document schema::

    { "dimension": 2, "forward": ["u1", "u1*u2"], "inverse": ["u1", "u2/u1"] }

Expressions use the shared grammar: coordinates u3, jets u3_2, integers,
rationals, + - * / ^ and parentheses.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

from .bracket import (
    CoordinateMap,
    HomogeneousBracket,
    check_skew,
    extract_named,
    skew_defects,
    skewh_defects,
    transform,
    validate,
)
from .connections import (
    c_matrix,
    curvature,
    flat_combination,
    genericity,
    standard_connection,
    torsion,
)
from .diffpoly import DiffPoly
from .errors import DegenerateMetricError, ParseError, PreconditionError
from .grammar import parse_expression
from .jacobi import jacobi_defects
from .lowdegree import (
    canonical_k2,
    dn_check,
    ferguson_check,
    k4_connection_fixtures,
    potemin_build,
    potemin_check,
)
from .sampling import random_monomial
from .spectral import (
    D_minus1_closed,
    d1_as_connection,
    d1_closed,
    d1_spectral,
    d1_split,
    homotopy,
    project_B,
    spanning_monomials,
)

COMMANDS = (
    "validate",
    "jacobi",
    "connections",
    "curvature",
    "flatness",
    "transform",
    "lowdegree",
    "spectral",
    "report",
)


class InputError(Exception):
    """Schema or parse failure in an input document."""


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | skip
    witness: str | None = None
    seconds: float = 0.0


def _check(results: list, name: str, fn) -> None:
    """Run fn() -> (ok, witness) or (status, witness) and record timing."""
    t0 = time.perf_counter()
    status, witness = fn()
    if status is True:
        status = "pass"
    elif status is False:
        status = "fail"
    results.append(CheckResult(name, status, witness, time.perf_counter() - t0))


# ---------------------------------------------------------------------------
# input documents


def _parse_entry_expr(text, where: str) -> DiffPoly:
    if not isinstance(text, str):
        raise InputError(f"{where}: expression must be a string")
    try:
        return parse_expression(text)
    except ParseError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _scalar_matrix(rows, n: int, where: str) -> list:
    if not (isinstance(rows, list) and len(rows) == n):
        raise InputError(f"{where}: expected {n} rows")
    out = []
    for r, row in enumerate(rows):
        if not (isinstance(row, list) and len(row) == n):
            raise InputError(f"{where}: row {r + 1} must have {n} entries")
        new = []
        for cidx, cell in enumerate(row):
            poly = _parse_entry_expr(cell, f"{where}[{r + 1}][{cidx + 1}]")
            if not poly.is_scalar():
                raise InputError(
                    f"{where}[{r + 1}][{cidx + 1}]: jets are not allowed here"
                )
            new.append(poly.to_scalar())
        out.append(new)
    return out


def load_bracket(path: str) -> HomogeneousBracket:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    try:
        n = int(doc["dimension"])
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{path}: missing or bad 'dimension'") from None
    if n < 1:
        raise InputError(f"{path}: dimension must be >= 1")
    names = doc.get("coordinates")
    if names is not None and names != [f"u{i}" for i in range(1, n + 1)]:
        raise InputError(f"{path}: coordinates must be u1..u{n} in order")
    construction = doc.get("construction", "raw")

    if construction == "canonical_k2":
        g = _scalar_matrix(doc.get("metric"), n, f"{path}: metric")
        try:
            return canonical_k2(g)
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from exc
    if construction == "potemin":
        g = _scalar_matrix(doc.get("metric"), n, f"{path}: metric")
        tail = doc.get("tail")
        if not (isinstance(tail, list) and len(tail) == n):
            raise InputError(f"{path}: tail must be an n x n x n array")
        c = []
        for i, block in enumerate(tail):
            c.append(_scalar_matrix(block, n, f"{path}: tail[{i + 1}]"))
        try:
            return potemin_build(g, c)
        except (ValueError, DegenerateMetricError) as exc:
            raise InputError(f"{path}: {exc}") from exc
    if construction != "raw":
        raise InputError(f"{path}: unknown construction {construction!r}")

    try:
        k = int(doc["degree"])
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{path}: missing or bad 'degree'") from None
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise InputError(f"{path}: 'entries' must be a list")
    P = {}
    for idx, entry in enumerate(entries):
        where = f"{path}: entries[{idx}]"
        if isinstance(entry, dict):
            try:
                s, i, j, expr = entry["s"], entry["i"], entry["j"], entry["expr"]
            except KeyError as exc:
                raise InputError(f"{where}: missing key {exc}") from None
        elif isinstance(entry, list) and len(entry) == 4:
            s, i, j, expr = entry
        else:
            raise InputError(f"{where}: expected [s, i, j, expr] or an object")
        if not all(isinstance(x, int) for x in (s, i, j)):
            raise InputError(f"{where}: s, i, j must be integers")
        if not (0 <= s <= k and 1 <= i <= n and 1 <= j <= n):
            raise InputError(f"{where}: indices out of range for n={n}, k={k}")
        if (i, j, s) in P:
            raise InputError(f"{where}: duplicate entry for (s={s}, i={i}, j={j})")
        P[(i, j, s)] = _parse_entry_expr(expr, where)
    try:
        return HomogeneousBracket(n=n, k=k, P=P)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_map(path: str, n: int) -> CoordinateMap:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    if int(doc.get("dimension", n)) != n:
        raise InputError(f"{path}: map dimension does not match the bracket")

    def side(key):
        rows = doc.get(key)
        if not (isinstance(rows, list) and len(rows) == n):
            raise InputError(f"{path}: '{key}' must list {n} expressions")
        out = []
        for i, cell in enumerate(rows):
            poly = _parse_entry_expr(cell, f"{path}: {key}[{i + 1}]")
            if not poly.is_scalar():
                raise InputError(f"{path}: {key}[{i + 1}]: jets are not allowed here")
            out.append(poly.to_scalar())
        return out

    cmap = CoordinateMap(n=n, forward=side("forward"), inverse=side("inverse"))
    problems = cmap.check_inverse()
    if problems:
        raise InputError(f"{path}: " + "; ".join(problems))
    return cmap


# ---------------------------------------------------------------------------
# commands


def cmd_validate(b: HomogeneousBracket, args) -> list:
    results: list = []
    _check(results, "well-formed (homogeneity, indices)", lambda: (
        (True, None) if not (p := validate(b)) else (False, p[0])
    ))
    _check(results, "skew-symmetry (operator adjoint)", lambda: (
        (True, None)
        if not (d := skew_defects(b))
        else (False, f"P_{d[0][2]}^{{{d[0][0]}{d[0][1]}}} defect: {d[0][3]}")
    ))
    _check(results, "skew-symmetry (named coefficients)", lambda: (
        (True, None) if not (d := skewh_defects(b)) else (False, f"{d[0][0]}: {d[0][1]}")
    ))
    return results


def cmd_jacobi(b: HomogeneousBracket, args) -> list:
    results = cmd_validate(b, args)
    if any(r.status == "fail" for r in results):
        results.append(CheckResult("jacobi identity", "skip", "preconditions failed"))
        return results

    def run():
        defects = jacobi_defects(b)
        if not defects:
            return True, None
        label, residual = defects[0]
        key = min(residual.terms)
        monomial = DiffPoly({key: residual.terms[key]})
        return False, f"{label} contains {monomial}"

    _check(results, "jacobi identity (D_P squares to zero)", run)
    return results


def _same_entries(a: HomogeneousBracket, b: HomogeneousBracket) -> bool:
    if (a.n, a.k) != (b.n, b.k):
        return False
    return all(
        a.P.get(key, DiffPoly.zero()) == b.P.get(key, DiffPoly.zero())
        for key in set(a.P) | set(b.P)
    )


def _flat_name(s: int) -> str:
    return f"Gamma_[{s}]"


def _std_name(s: int) -> str:
    return f"Gamma_({s})"


def _print_connection(conn, name: str) -> None:
    print(f"  {name}:")
    shown = False
    for l in range(conn.n):
        for i in range(conn.n):
            for j in range(conn.n):
                v = conn.gamma[l][i][j]
                if not v.is_zero:
                    print(f"    {name}^{l + 1}_{{{i + 1}{j + 1}}} = {v}")
                    shown = True
    if not shown:
        print("    0")


def cmd_connections(b: HomogeneousBracket, args) -> list:
    results: list = []
    cm = c_matrix(b.k)
    print(f"c matrix (k = {b.k}):")
    for row in cm.c:
        print("  " + "  ".join(str(x) for x in row))
    print("inverse:")
    for row in cm.cinv:
        print("  " + "  ".join(str(x) for x in row))
    conns = {}
    try:
        for s in range(b.k):
            conns[("std", s)] = standard_connection(b, s)
            conns[("flat", s)] = flat_combination(b, s)
    except DegenerateMetricError as exc:
        results.append(CheckResult("connections computed", "fail", str(exc)))
        return results
    print("standard connections:")
    for s in range(b.k):
        _print_connection(conns[("std", s)], _std_name(s))
    print("flat combinations:")
    for s in range(b.k):
        _print_connection(conns[("flat", s)], _flat_name(s))
    _check(results, "connections computed", lambda: (True, None))

    def torsionless():
        T = torsion(conns[("std", 0)])
        for l in range(b.n):
            for i in range(b.n):
                for j in range(b.n):
                    if not T[l][i][j].is_zero:
                        return False, f"T^{l + 1}_{{{i + 1}{j + 1}}} = {T[l][i][j]}"
        return True, None

    _check(results, "Gamma_(0) torsionless", torsionless)
    _check(results, "affine span dimension", lambda: (
        "pass", f"genericity = {genericity(b)}"
    ))
    return results


def _curvature_report(conn, name: str, expect_flat: bool, results: list) -> None:
    def run():
        R = curvature(conn)
        comps = R.nonzero_components()
        for (l, t, i, j), comp in comps[:8]:
            print(f"  R({name})^{l + 1}_{{{t + 1},{i + 1},{j + 1}}} = {comp}")
        if len(comps) > 8:
            print(f"  ... {len(comps) - 8} more nonzero components")
        if not comps:
            print(f"  R({name}) = 0")
            return "pass", None
        (l, t, i, j), comp = comps[0]
        witness = f"R^{l + 1}_{{{t + 1},{i + 1},{j + 1}}} = {comp}"
        if expect_flat:
            return "fail", witness
        return "pass", f"nonzero curvature reported: {witness}"

    _check(results, f"curvature of {name}" + (" vanishes" if expect_flat else ""), run)


def cmd_curvature(b: HomogeneousBracket, args) -> list:
    results: list = []
    which = args.which
    ss = range(b.k) if args.s is None else [args.s]
    for s in ss:
        if not 0 <= s <= b.k - 1:
            raise InputError(f"--s {s}: index must lie in 0..{b.k - 1}")
        if which == "std":
            conn, name = standard_connection(b, s), _std_name(s)
        else:
            conn, name = flat_combination(b, s), _flat_name(s)
        _curvature_report(conn, name, expect_flat=False, results=results)
    return results


def cmd_flatness(b: HomogeneousBracket, args) -> list:
    """Flatness suite: every binomial combination of the standard
    connections must be flat; standard-connection curvature is reported
    for information."""
    results: list = []
    for s in range(b.k):
        _curvature_report(flat_combination(b, s), _flat_name(s),
                          expect_flat=True, results=results)
    for s in range(b.k):
        _curvature_report(standard_connection(b, s), _std_name(s),
                          expect_flat=False, results=results)
    return results


def cmd_transform(b: HomogeneousBracket, args) -> list:
    results: list = []
    if not args.map:
        results.append(CheckResult("transform", "fail", "--map FILE is required"))
        return results
    cmap = load_map(args.map, b.n)
    moved = transform(b, cmap)
    print("transformed bracket entries:")
    for (i, j, s) in sorted(moved.P, key=lambda t: (-t[2], t[0], t[1])):
        print(f"  P_{s}^{{{i}{j}}} = {moved.P[(i, j, s)]}")
    _check(results, "transformed bracket well-formed", lambda: (
        (True, None) if not (p := validate(moved)) else (False, p[0])
    ))
    _check(results, "skewness preserved", lambda: (
        (check_skew(moved), None) if check_skew(moved) else (False, "adjoint defect")
    ))

    def roundtrip():
        back = transform(moved, cmap.inverted())
        for key in set(back.P) | set(b.P):
            lhs = back.P.get(key, DiffPoly.zero())
            rhs = b.P.get(key, DiffPoly.zero())
            if lhs != rhs:
                i, j, s = key
                return False, f"P_{s}^{{{i}{j}}}: {lhs} != {rhs}"
        return True, None

    _check(results, "round-trip recovers the original", roundtrip)
    return results


def cmd_lowdegree(b: HomogeneousBracket, args) -> list:
    results: list = []
    if b.k == 1:
        report = dn_check(b)
    elif b.k == 2:
        report = ferguson_check(b)
    elif b.k == 3:
        named = extract_named(b)
        cc = [
            [[named.h[1][i][j][l] for l in range(b.n)] for j in range(b.n)]
            for i in range(b.n)
        ]
        try:
            rebuilt = potemin_build(named.g, cc)
        except (ValueError, DegenerateMetricError) as exc:
            results.append(CheckResult("degree-3 normal form", "skip", str(exc)))
            return results
        if not _same_entries(rebuilt, b):
            results.append(
                CheckResult(
                    "degree-3 normal form",
                    "skip",
                    "bracket is not in the jet-linear normal form",
                )
            )
            return results
        report = potemin_check(named.g, cc)
    elif b.k == 4:
        report = k4_connection_fixtures(b)
    else:
        results.append(
            CheckResult("low-degree conditions", "skip", f"no classification for k={b.k}")
        )
        return results
    for r in report:
        results.append(CheckResult(r.name, "pass" if r.passed else "fail", r.witness))
    return results


def cmd_spectral(b: HomogeneousBracket, args) -> list:
    results: list = []
    try:
        span = spanning_monomials(b.n, b.k)

        def oracle():
            for x in span:
                lhs = d1_spectral(b, x)
                rhs = d1_closed(b, x)
                if lhs != rhs:
                    return False, f"on {x}: {lhs} != {rhs}"
            return True, f"{len(span)} monomials"

        _check(results, "d_1 oracle pair (spectral vs closed form)", oracle)

        def conn_form():
            for x in span:
                up, _ = d1_split(b, x)
                via = d1_as_connection(b, x)
                if up != via:
                    return False, f"on {x}: {up} != {via}"
            return True, f"{len(span)} monomials"

        _check(results, "d_1 theta^k-raising part via connections", conn_form)

        def graded():
            for x in span:
                if max(x.degrees("deg_theta"), default=0) > 2:
                    continue
                up, same = d1_split(b, x)
                a11 = d1_split(b, up)[0]
                mixed = d1_split(b, up)[1] + d1_split(b, same)[0]
                a00 = d1_split(b, same)[1]
                if not a11.is_zero:
                    return False, f"(d1^(1))^2 on {x}: {a11}"
                if not mixed.is_zero:
                    return False, f"anticommutator on {x}: {mixed}"
                if not a00.is_zero:
                    return False, f"(d1^(0))^2 on {x}: {a00}"
            return True, None

        _check(results, "graded identities of d_1", graded)
    except PreconditionError as exc:
        results.append(CheckResult("d_1 identities", "fail", str(exc)))

    def homotopy_identity():
        rng = random.Random(args.seed)
        count = 0
        while count < 100:
            a = random_monomial(rng, b.n, b.k, max_degu=args.max_degu)
            if a.is_zero:
                continue
            count += 1
            lhs = D_minus1_closed(b, homotopy(b, a)) + homotopy(b, D_minus1_closed(b, a))
            rhs = a - project_B(a, b.k)
            if lhs != rhs:
                return False, f"on {a}"
            if not D_minus1_closed(b, D_minus1_closed(b, a)).is_zero:
                return False, f"D_-1^2 != 0 on {a}"
        return True, f"{count} random monomials, seed {args.seed}"

    _check(results, "homotopy identity and D_-1^2 = 0", homotopy_identity)
    return results


def cmd_report(b: HomogeneousBracket, args) -> list:
    results = cmd_jacobi(b, args)
    results += cmd_connections(b, args)
    results += cmd_flatness(b, args)
    results += cmd_lowdegree(b, args)
    results += cmd_spectral(b, args)
    if args.map:
        results += cmd_transform(b, args)
    return results


# ---------------------------------------------------------------------------
# entry point


def _render(results: list) -> None:
    width = max((len(r.name) for r in results), default=10)
    print()
    for r in results:
        line = f"{r.name:<{width}}  {r.status.upper():<4}  {r.seconds:8.3f}s"
        if r.witness:
            line += f"  {r.witness}"
        print(line)
    n_fail = sum(1 for r in results if r.status == "fail")
    n_pass = sum(1 for r in results if r.status == "pass")
    n_skip = sum(1 for r in results if r.status == "skip")
    print(f"\n{n_pass} passed, {n_fail} failed, {n_skip} skipped")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dnbrackets",
        description="Checks for homogeneous local Poisson brackets.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("bracket", help="bracket JSON document")
    parser.add_argument("--map", help="coordinate map JSON document")
    parser.add_argument("--which", choices=["std", "flat"], default="flat",
                        help="connection family for the curvature command")
    parser.add_argument("--s", type=int, default=None,
                        help="connection index (default: all)")
    parser.add_argument("--json", dest="json_path",
                        help="write a machine-readable report to this path")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized spot checks")
    parser.add_argument("--max-degu", dest="max_degu", type=int, default=3,
                        help="jet-count bound for randomized monomials")
    args = parser.parse_args(argv)

    try:
        b = load_bracket(args.bracket)
        handler = {
            "validate": cmd_validate,
            "jacobi": cmd_jacobi,
            "connections": cmd_connections,
            "curvature": cmd_curvature,
            "flatness": cmd_flatness,
            "transform": cmd_transform,
            "lowdegree": cmd_lowdegree,
            "spectral": cmd_spectral,
            "report": cmd_report,
        }[args.command]
        results = handler(b, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateMetricError, PreconditionError) as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return 1

    _render(results)
    if args.json_path:
        payload = {
            "command": args.command,
            "bracket": args.bracket,
            "checks": [
                {
                    "name": r.name,
                    "status": r.status,
                    "witness": r.witness,
                    "seconds": round(r.seconds, 6),
                }
                for r in results
            ],
        }
        payload["exit_code"] = 0 if all(r.status != "fail" for r in results) else 1
        with open(args.json_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0 if all(r.status != "fail" for r in results) else 1


def run(argv=None) -> int:
    """Alias for main(): run one command and return the exit code."""
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
