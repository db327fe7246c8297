"""Lie algebra charts, Lie-Poisson bivectors, trace-power Casimirs.

A Chart couples a VarTable (coordinates first, formal parameters after) to
structure constants; the canonical Lie-Poisson bivector is

    P = sum_{i<j} ( sum_k c[i][j][k] x_k ) d/dx_i ^ d/dx_j.

gl3 is realized as the trivial one-dimensional central extension of sl3:
x0 is prepended and brackets with x0 vanish.  Casimirs are registered on
the chart so canonical representatives and seed checks can find them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .multivec import Multivector, euler_field
from .polyalg import Polynomial, PolyError, VarTable
from .rationals import Rational, rational


class JacobiError(PolyError):
    pass


class StructureConstants:
    """Antisymmetric tensor c[i][j][k]; stored for i<j, completed on the fly."""

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: dict[tuple[int, int], dict[int, Rational]]):
        self.n = n
        self.table = {ij: {k: c for k, c in row.items() if c} for ij, row in table.items()}
        self.table = {ij: row for ij, row in self.table.items() if row}

    def bracket(self, i: int, j: int) -> dict[int, Rational]:
        """Coefficients of [e_i, e_j] in the basis, any i, j."""
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def jacobi_violations(self, limit: int = 1) -> list[tuple[int, int, int]]:
        bad = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                for k in range(j + 1, self.n):
                    acc: dict[int, Rational] = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, cm in self.bracket(a, b).items():
                            for l, cl in self.bracket(m, c).items():
                                v = acc.get(l, rational(0)) + cm * cl
                                if v:
                                    acc[l] = v
                                elif l in acc:
                                    del acc[l]
                    if acc:
                        bad.append((i, j, k))
                        if len(bad) >= limit:
                            return bad
        return bad

    def check_jacobi(self) -> None:
        bad = self.jacobi_violations()
        if bad:
            raise JacobiError(f"Jacobi identity fails at basis triple {bad[0]}")


@dataclass
class Chart:
    """Coordinate chart on a Lie algebra dual."""

    name: str
    vt: VarTable
    sc: StructureConstants
    central_extended: bool = False
    base: "Chart | None" = None
    casimirs: dict[str, Polynomial] = field(default_factory=dict)
    _lp: Multivector | None = None

    @property
    def dim(self) -> int:
        return self.vt.n_coordinates

    def coordinate(self, name: str) -> Polynomial:
        i = self.vt.index(name)
        if not self.vt.is_coordinate(i):
            raise PolyError(f"{name!r} is a parameter")
        return Polynomial.variable(self.vt, name)

    def parse(self, text: str) -> Polynomial:
        return Polynomial.parse(text, self.vt)

    def parse_multivector(self, text: str, degree: int | None = None) -> Multivector:
        return Multivector.parse(text, self.vt, degree)

    def euler_field(self) -> Multivector:
        skip = (self.vt.coordinates[0],) if self.central_extended else ()
        return euler_field(self.vt, skip=skip)

    def register_casimir(self, name: str, p: Polynomial) -> None:
        self.casimirs[name] = p

    def casimir_span_basis(self, degree: int) -> list[Polynomial]:
        """Products of registered Casimirs (and x0 on extended charts) of the
        requested homogeneous coordinate degree."""
        gens: list[Polynomial] = []
        if self.central_extended:
            gens.append(self.coordinate(self.vt.coordinates[0]))
        gens.extend(self.casimirs.values())
        basis: list[Polynomial] = []
        seen: set[tuple] = set()

        def rec(i: int, prod: Polynomial, deg: int):
            if deg == degree:
                key = tuple(sorted(prod.terms.items()))
                if key not in seen:
                    seen.add(key)
                    basis.append(prod)
                return
            if i >= len(gens) or deg > degree:
                return
            g = gens[i]
            gdeg = g.homogeneous_coordinate_degree()
            rec(i + 1, prod, deg)
            if gdeg and gdeg > 0:
                p, d = prod, deg
                while d + gdeg <= degree:
                    p = p * g
                    d += gdeg
                    saved_i = i + 1
                    rec(saved_i, p, d)

        rec(0, Polynomial.const(self.vt, 1), 0)
        return basis


def lie_poisson(chart: Chart) -> Multivector:
    """The canonical Lie-Poisson bivector; [P,P] = 0 is the loader's contract."""
    if chart._lp is not None:
        return chart._lp
    chart.sc.check_jacobi()
    vt = chart.vt
    comps = {}
    for (i, j), row in chart.sc.table.items():
        terms = {((k, 1),): c for k, c in row.items()}
        if terms:
            comps[(i, j)] = Polynomial(vt, terms)
    P = Multivector(vt, 2, comps)
    chart._lp = P
    return P


# -- builtin charts -------------------------------------------------------------

_BUILTIN_CACHE: dict[str, Chart] = {}
_EXTEND_CACHE: dict[int, Chart] = {}

SL3_COORDS = ("x12", "x13", "x21", "x23", "x31", "x32", "y13", "y23")
SL3_PARAMS = tuple(f"b{i}" for i in range(10)) + ("g2", "g3", "lam")


def _gl_pair_basis(n: int) -> list:
    """sl(n) basis labels: off-diagonal e_ij plus h_in = e_ii - e_nn."""
    labels: list = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                labels.append((i, j))
    labels.sort()
    for i in range(1, n):
        labels.append(("h", i, n))
    return labels


def _sl_structure(n: int, order: list) -> StructureConstants:
    """Structure constants from matrix commutators [e_ij,e_kl]=d_jk e_il - d_li e_kj."""

    def expand(label) -> dict[tuple[int, int], Rational]:
        if isinstance(label[0], str):
            _, i, nn = label
            return {(i, i): rational(1), (nn, nn): rational(-1)}
        return {label: rational(1)}

    def to_basis(d: dict[tuple[int, int], Rational]) -> dict[int, Rational]:
        out: dict[int, Rational] = {}
        diag = {i: rational(0) for i in range(1, n + 1)}
        for (i, j), c in d.items():
            if i == j:
                diag[i] += c
            else:
                k = order.index((i, j))
                if c:
                    out[k] = out.get(k, rational(0)) + c
        for i in range(1, n):
            if diag[i]:
                out[order.index(("h", i, n))] = diag[i]
        return {k: c for k, c in out.items() if c}

    table: dict[tuple[int, int], dict[int, Rational]] = {}
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            acc: dict[tuple[int, int], Rational] = {}
            for (i, j), ca in expand(order[a]).items():
                for (k, l), cb in expand(order[b]).items():
                    if j == k:
                        acc[(i, l)] = acc.get((i, l), rational(0)) + ca * cb
                    if l == i:
                        acc[(k, j)] = acc.get((k, j), rational(0)) - ca * cb
            row = to_basis(acc)
            if row:
                table[(a, b)] = row
    return StructureConstants(len(order), table)


def _sl3_diagonal() -> dict[str, str]:
    return {
        "x11": "2/3*y13-1/3*y23",
        "x22": "2/3*y23-1/3*y13",
        "x33": "-1/3*y13-1/3*y23",
    }


def sl3_matrix_entries(chart: Chart) -> dict[tuple[int, int], Polynomial]:
    """Coordinate matrix of sl3 with the diagonal resolved through y13, y23."""
    diag = _sl3_diagonal()
    entries = {}
    for i in range(1, 4):
        for j in range(1, 4):
            if i == j:
                entries[(i, j)] = chart.parse(diag[f"x{i}{i}"])
            else:
                entries[(i, j)] = chart.coordinate(f"x{i}{j}")
    return entries


def _trace_power(entries: dict[tuple[int, int], Polynomial], chart: Chart, p: int) -> Polynomial:
    n = 3
    power = {k: v for k, v in entries.items()}
    for _ in range(p - 1):
        nxt = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                s = Polynomial.zero(chart.vt)
                for k in range(1, n + 1):
                    s = s + power[(i, k)] * entries[(k, j)]
                nxt[(i, j)] = s
        power = nxt
    tr = Polynomial.zero(chart.vt)
    for i in range(1, n + 1):
        tr = tr + power[(i, i)]
    return tr


def builtin(name: str) -> Chart:
    """so3 | sl2 | sl3 | gl3, with the fixed coordinate orders and parameters."""
    if name in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[name]
    if name == "so3":
        vt = VarTable(("x1", "x2", "x3"), ("J1", "J2", "J3", "lam"))
        table = {
            (0, 1): {2: rational(1)},
            (1, 2): {0: rational(1)},
            (0, 2): {1: rational(-1)},
        }
        chart = Chart("so3", vt, StructureConstants(3, table))
        chart.register_casimir(
            "S2", chart.parse("x1*x1+x2*x2+x3*x3")
        )
    elif name == "sl2":
        order = _gl_pair_basis(2)
        coords = ("x12", "x21", "y12")
        vt = VarTable(coords, ("lam",))
        chart = Chart("sl2", vt, _sl_structure(2, order))
        chart.register_casimir("C2", chart.parse("1/2*y12*y12+2*x12*x21"))
    elif name == "sl3":
        order = _gl_pair_basis(3)
        # order is x12,x13,x21,x23,x31,x32 then h13,h23, i.e. SL3_COORDS
        vt = VarTable(SL3_COORDS, SL3_PARAMS)
        chart = Chart("sl3", vt, _sl_structure(3, order))
        entries = sl3_matrix_entries(chart)
        chart.register_casimir("C2", _trace_power(entries, chart, 2))
        chart.register_casimir("C3", _trace_power(entries, chart, 3))
    elif name == "gl3":
        chart = central_extend(builtin("sl3"))
        chart.name = "gl3"
    else:
        raise PolyError(f"unknown builtin chart {name!r}")
    lie_poisson(chart)
    _BUILTIN_CACHE[name] = chart
    return chart


def casimir(chart: Chart, name: str) -> Polynomial:
    """C2 = Tr(M^2) or C3 = Tr(M^3) on sl3/gl3 (x0-independent on gl3)."""
    if name not in ("C2", "C3"):
        raise PolyError(f"unknown Casimir {name!r}")
    if chart.name not in ("sl3", "gl3"):
        raise PolyError(f"Casimir {name} is defined on sl3/gl3, not {chart.name}")
    return chart.casimirs[name]


def central_extend(chart: Chart) -> Chart:
    """Trivial 1-dimensional central extension: prepend x0, zero brackets."""
    if chart.central_extended:
        raise PolyError(f"chart {chart.name} is already centrally extended")
    key = id(chart)
    if key in _EXTEND_CACHE:
        return _EXTEND_CACHE[key]
    vt = VarTable(("x0",) + chart.vt.coordinates, chart.vt.parameters)
    table = {
        (i + 1, j + 1): {k + 1: c for k, c in row.items()}
        for (i, j), row in chart.sc.table.items()
    }
    ext = Chart(
        chart.name + "_ext",
        vt,
        StructureConstants(chart.dim + 1, table),
        central_extended=True,
        base=chart,
    )
    for cname, cp in chart.casimirs.items():
        ext.register_casimir(cname, embed_poly(cp, ext))
    lie_poisson(ext)
    _EXTEND_CACHE[key] = ext
    return ext


def embed_poly(p: Polynomial, ext: Chart) -> Polynomial:
    """Pull a base-chart polynomial up to the extended chart (x0-independent)."""
    base = ext.base
    if base is None or p.vt != base.vt:
        raise PolyError("polynomial does not live on the base chart")
    index_map = {}
    for i, name in enumerate(base.vt.names):
        index_map[i] = ext.vt.index(name)
    return p.restricted_to(ext.vt, index_map)


def embed_multivector(mv: Multivector, ext: Chart) -> Multivector:
    base = ext.base
    if base is None or mv.vt != base.vt:
        raise PolyError("multivector does not live on the base chart")
    index_map = {i: ext.vt.index(name) for i, name in enumerate(base.vt.names)}
    comps = {}
    for idx, p in mv.comps.items():
        comps[tuple(sorted(index_map[i] for i in idx))] = p.restricted_to(ext.vt, index_map)
    return Multivector(ext.vt, mv.degree, comps)


# -- structure-constant ingestion ------------------------------------------------

def load_structure_constants(doc: dict | str) -> Chart:
    """Build a chart from {"dim": n, "names": [...], "c": [[i, j, k, "q"], ...]}.

    Indices are 0-based; entries may appear in either orientation and the
    loader enforces antisymmetry consistency before the Jacobi check.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    n = doc["dim"]
    names = tuple(doc.get("names") or (f"x{i+1}" for i in range(n)))
    if len(names) != n:
        raise PolyError("names length does not match dim")
    table: dict[tuple[int, int], dict[int, Rational]] = {}
    seen: dict[tuple[int, int, int], Rational] = {}
    for entry in doc["c"]:
        i, j, k, q = entry
        q = rational(q)
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise PolyError(f"index out of range in entry {entry!r}")
        if i == j:
            if q:
                raise PolyError(f"entry {entry!r} violates antisymmetry: c[i][i][k] must vanish")
            continue
        lo, hi, sgn = (i, j, 1) if i < j else (j, i, -1)
        val = q * sgn
        if (lo, hi, k) in seen:
            if seen[(lo, hi, k)] != val:
                raise PolyError(
                    f"entry {entry!r} violates antisymmetry: conflicts with c[{lo}][{hi}][{k}]"
                )
            continue
        seen[(lo, hi, k)] = val
        if val:
            table.setdefault((lo, hi), {})[k] = val
    name = doc.get("name", "user")
    chart = Chart(name, VarTable(names, ("lam",)), StructureConstants(n, table))
    chart.sc.check_jacobi()
    lie_poisson(chart)
    return chart


def bracket_of_coordinates(chart: Chart, a: str, b: str) -> Polynomial:
    """{x_a, x_b} as a linear polynomial."""
    i, j = chart.vt.index(a), chart.vt.index(b)
    row = chart.sc.bracket(i, j)
    return Polynomial(chart.vt, {((k, 1),): c for k, c in row.items()})
