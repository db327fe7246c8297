"""Exact linear algebra, Magri-Lenard chains, Casimir machinery, rank sampling.

The linear solver is fraction-free (Bareiss-style cross-multiplication with
per-row content stripping) over arbitrary-precision integers; every returned
solution and kernel vector is verified by residual substitution.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import gcd, mpz

from .liepoisson import Chart, lie_poisson
from .multivec import Multivector, ham, poisson_bracket, schouten
from .polyalg import Polynomial, PolyError
from .rationals import Rational, rational
from .report import Stopwatch, VerificationReport


class InconsistentSystem(PolyError):
    pass


class LinearSystem:
    """Exact sparse linear system A x = b over the rationals."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[tuple[dict[int, Rational], Rational]] = []

    def add_row(self, coeffs: dict[int, Rational], rhs) -> None:
        coeffs = {c: rational(v) for c, v in coeffs.items() if v}
        rhs = rational(rhs)
        if coeffs or rhs:
            self.rows.append((coeffs, rhs))

    def solve(self):
        """Returns (particular, kernel_basis) or None when inconsistent.

        particular: list of mpq with free variables pinned to 0;
        kernel_basis: one vector per free column.
        """
        RHS = self.ncols  # rhs sits in a dedicated column key
        work: list[dict[int, mpz]] = []
        for coeffs, rhs in self.rows:
            denom = mpz(1)
            for v in coeffs.values():
                denom = denom * v.denominator // gcd(denom, v.denominator)
            denom = denom * rhs.denominator // gcd(denom, rhs.denominator)
            row = {c: mpz(v * denom) for c, v in coeffs.items()}
            if rhs:
                row[RHS] = mpz(rhs * denom)
            _strip_content(row)
            work.append(row)

        pivots: dict[int, dict[int, mpz]] = {}
        for col in range(self.ncols):
            best = None
            for row in work:
                if row.get(col):
                    if best is None or len(row) < len(best):
                        best = row
            if best is None:
                continue
            work.remove(best)
            pivots[col] = best
            p = best[col]
            for r, row in enumerate(work):
                a = row.get(col)
                if not a:
                    continue
                new = {c: v * p for c, v in row.items()}
                for c, v in best.items():
                    nv = new.get(c, mpz(0)) - a * v
                    if nv:
                        new[c] = nv
                    elif c in new:
                        del new[c]
                _strip_content(new)
                work[r] = new
        for row in work:
            if row.get(RHS):
                return None

        free_cols = [c for c in range(self.ncols) if c not in pivots]
        particular = self._back_substitute(pivots, {RHS: rational(1)}, free_cols, {})
        kernel = []
        for f in free_cols:
            kernel.append(self._back_substitute(pivots, {}, free_cols, {f: rational(1)}))
        return particular, kernel

    def _back_substitute(self, pivots, rhs_weight, free_cols, free_values):
        RHS = self.ncols
        sol = [rational(0)] * self.ncols
        for f in free_cols:
            sol[f] = free_values.get(f, rational(0))
        for col in sorted(pivots, reverse=True):
            row = pivots[col]
            acc = rational(0)
            for c, v in row.items():
                if c == col:
                    continue
                if c == RHS:
                    acc += rational(v) * rhs_weight.get(RHS, rational(0))
                else:
                    acc -= rational(v) * sol[c]
            sol[col] = acc / rational(row[col])
        return sol

    def residual(self, solution: list) -> list:
        out = []
        for coeffs, rhs in self.rows:
            s = -rhs
            for c, v in coeffs.items():
                s += v * solution[c]
            out.append(s)
        return out


def _strip_content(row: dict[int, mpz]) -> None:
    if not row:
        return
    g = mpz(0)
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for c in row:
            row[c] //= g


def proportionality_scalar(A, B):
    """The unique s with A = s * B, for Polynomials or Multivectors.

    Returns None when no exact rational scalar works.  A zero A gives 0; a
    zero B with nonzero A gives None.
    """
    if isinstance(A, Polynomial):
        a_items = {(): A.terms} if A.terms else {}
        b_items = {(): B.terms} if B.terms else {}
    else:
        a_items = {idx: p.terms for idx, p in A.comps.items()}
        b_items = {idx: p.terms for idx, p in B.comps.items()}
    if not a_items:
        return rational(0)
    if not b_items:
        return None
    s = None
    for idx, terms in b_items.items():
        for m, c in terms.items():
            s = a_items.get(idx, {}).get(m, rational(0)) / c
            break
        break
    for idx in set(a_items) | set(b_items):
        ta = a_items.get(idx, {})
        tb = b_items.get(idx, {})
        for m in set(ta) | set(tb):
            if ta.get(m, rational(0)) != s * tb.get(m, rational(0)):
                return None
    return s


# -- Magri-Lenard chains ---------------------------------------------------------

@dataclass
class ChainState:
    chart: Chart
    members: list[Polynomial]
    kernel_dims: list[int] = field(default_factory=list)
    obstructed_at: int | None = None


def coordinate_monomials(chart: Chart, degree: int) -> list:
    vt = chart.vt
    n = vt.n_coordinates
    monos: list = []

    def rec(start: int, left: int, cur: list):
        if left == 0:
            monos.append(tuple(cur))
            return
        for v in range(start, n):
            if cur and cur[-1][0] == v:
                cur[-1] = (v, cur[-1][1] + 1)
                rec(v, left - 1, cur)
                cur[-1] = (v, cur[-1][1] - 1)
            else:
                cur.append((v, 1))
                rec(v, left - 1, cur)
                cur.pop()

    rec(0, degree, [])
    monos.sort()
    return monos


def solve_linear_operator(chart: Chart, operator, rhs: Multivector, degree: int):
    """Solve operator(f) = rhs where f ranges over homogeneous coordinate
    monomials of the given degree and operator is Polynomial -> Multivector.

    Parameters must not appear in rhs (the system lives over Q).  Returns
    (particular, kernel_polys) or (None, None) when inconsistent; solutions
    are residual-verified before being returned.
    """
    vt = chart.vt
    for p in rhs.comps.values():
        for m in p.terms:
            if any(not vt.is_coordinate(v) for v, _ in m):
                raise PolyError("linear solving requires parameter-free data")
    monos = coordinate_monomials(chart, degree)
    row_index: dict = {}
    matrix_cols = []
    for mono in monos:
        image = operator(Polynomial(vt, {mono: rational(1)}))
        col = {}
        for idx, p in image.comps.items():
            for m, c in p.terms.items():
                key = (idx, m)
                r = row_index.setdefault(key, len(row_index))
                col[r] = c
        matrix_cols.append(col)
    rhs_rows: dict[int, Rational] = {}
    for idx, p in rhs.comps.items():
        for m, c in p.terms.items():
            key = (idx, m)
            r = row_index.setdefault(key, len(row_index))
            rhs_rows[r] = c
    system = LinearSystem(len(monos))
    rows: list[dict] = [dict() for _ in range(len(row_index))]
    for j, col in enumerate(matrix_cols):
        for r, c in col.items():
            rows[r][j] = c
    for r, row in enumerate(rows):
        system.add_row(row, rhs_rows.get(r, rational(0)))
    solution = system.solve()
    if solution is None:
        return None, None
    particular, kernel = solution
    if any(system.residual(particular)):
        raise PolyError("solver returned an unverified particular solution")
    homogeneous = LinearSystem(len(monos))
    for r, row in enumerate(rows):
        homogeneous.add_row(row, rational(0))
    for vec in kernel:
        if any(homogeneous.residual(vec)):
            raise PolyError("solver returned an unverified kernel vector")
    part = Polynomial(vt, {m: c for m, c in zip(monos, particular) if c})
    kern = [Polynomial(vt, {m: c for m, c in zip(monos, vec) if c}) for vec in kernel]
    return part, kern


def solve_hamiltonian_equation(chart: Chart, pi1: Multivector, rhs: Multivector, degree: int):
    """Solve ham(pi1, f) = rhs over homogeneous coordinate monomials."""
    return solve_linear_operator(chart, lambda f: ham(pi1, f), rhs, degree)


def canonical_representative(p: Polynomial, casimir_basis: list[Polynomial]) -> Polynomial:
    """Subtract the coefficient-wise orthogonal projection onto the span."""
    basis = [b for b in casimir_basis if b.terms]
    if not basis or p.is_zero():
        return p
    gram = [[_dot(a, b) for b in basis] for a in basis]
    target = [_dot(p, b) for b in basis]
    system = LinearSystem(len(basis))
    for row, t in zip(gram, target):
        system.add_row({j: v for j, v in enumerate(row) if v}, t)
    solution = system.solve()
    if solution is None:
        return p
    coeffs, _ = solution
    out = p
    for c, b in zip(coeffs, basis):
        if c:
            out = out - b * c
    return out


def _dot(a: Polynomial, b: Polynomial):
    s = rational(0)
    small, big = (a.terms, b.terms) if len(a.terms) <= len(b.terms) else (b.terms, a.terms)
    for m, c in small.items():
        d = big.get(m)
        if d is not None:
            s += c * d
    return s


def chain_extend(
    chart: Chart,
    pi1: Multivector,
    pi2: Multivector,
    f0: Polynomial | list[Polynomial],
    steps: int,
) -> ChainState:
    """Extend f0 to a Magri-Lenard chain: ham(pi1, f_{i+1}) = -ham(pi2, f_i).

    f0 may also be a chain prefix [f0, f1, ...] to continue from (the prefix
    relations are validated).  Seeds must be homogeneous Casimirs of pi1.
    Solved members are canonical representatives (orthogonal to the
    same-degree Casimir span of pi1); an inconsistent step marks the chain
    obstructed instead of raising, flagging a Jordan-block obstruction.
    """
    prefix = list(f0) if isinstance(f0, (list, tuple)) else [f0]
    if not ham(pi1, prefix[0]).is_zero():
        raise PolyError("chain seed is not a Casimir of pi1")
    deg = prefix[0].homogeneous_coordinate_degree()
    if deg is None:
        raise PolyError("chain seed must be homogeneous")
    for i in range(1, len(prefix)):
        if not (ham(pi1, prefix[i]) + ham(pi2, prefix[i - 1])).is_zero():
            raise PolyError(f"chain prefix violates the defining relation at index {i}")
    state = ChainState(chart, prefix)
    current = prefix[-1]
    base = len(prefix) - 1
    for i in range(steps):
        rhs = -ham(pi2, current)
        part, kern = solve_hamiltonian_equation(chart, pi1, rhs, deg + base + i + 1)
        if part is None:
            state.obstructed_at = base + i + 1
            break
        canon = canonical_representative(part, chart.casimir_span_basis(deg + base + i + 1))
        state.members.append(canon)
        state.kernel_dims.append(len(kern))
        current = canon
    return state


# -- Casimir verification ----------------------------------------------------------

def casimir_verify(
    chart: Chart,
    X: Multivector,
    q: Polynomial,
    r_coeffs: list[Polynomial],
    pi2: Multivector | None = None,
) -> VerificationReport:
    """Check the full coefficient system for r = sum x0^i r_i being a pi2-Casimir.

    The equations live on the unextended chart; the direct contraction
    ham(pi2, r) is evaluated on the extension and must agree.
    """
    from .clpencil import assemble_pi2
    from .liepoisson import central_extend, embed_poly

    watch = Stopwatch()
    P = lie_poisson(chart)
    pi = schouten(X, P)
    Hq = ham(P, q)
    k = len(r_coeffs) - 1
    report = VerificationReport("casimir_verify")
    for i, ri in enumerate(r_coeffs):
        report.record_residual(f"hamq_r{i}", Hq.apply(ri).n_terms())
    zero = Polynomial.zero(chart.vt)
    for j in range(k + 1):
        r_j = r_coeffs[j]
        r_next = r_coeffs[j + 1] if j + 1 <= k else zero
        r_prev = r_coeffs[j - 1] if j - 1 >= 0 else zero
        eq = ham(pi, r_j) - Hq.scale(r_next * (j + 1)) + ham(P, r_prev)
        report.record_residual(f"level_{j}", eq.n_terms())
    report.record_residual(f"ham_p_r{k}", ham(P, r_coeffs[k]).n_terms())

    ext = central_extend(chart)
    if pi2 is None:
        pi2 = assemble_pi2(chart, X, q)
    x0 = ext.coordinate("x0")
    r_full = Polynomial.zero(ext.vt)
    for i, ri in enumerate(r_coeffs):
        r_full = r_full + embed_poly(ri, ext) * (x0 ** i)
    report.record_residual("direct_contraction", ham(pi2, r_full).n_terms())
    report.millis = watch.millis()
    return report


def shift_casimir(
    chart_ext: Chart,
    pi1: Multivector,
    pi2: Multivector,
    r: Polynomial,
    lam_name: str = "lam",
) -> tuple[Polynomial, VerificationReport]:
    """C(lam) = r with x0 -> x0 + lam; verified Casimir of pi2 + lam*pi1.

    Also checks the reversed Magri-Lenard relations on the Taylor coefficients.
    """
    watch = Stopwatch()
    vt = chart_ext.vt
    if not ham(pi2, r).is_zero():
        raise PolyError("r is not a Casimir of pi2")
    lam = Polynomial.variable(vt, lam_name)
    x0 = Polynomial.variable(vt, "x0")
    shifted = r.substitute_poly({"x0": x0 + lam})
    report = VerificationReport("shift_casimir")
    pencil = pi2 + pi1.scale(lam)
    report.record_residual("pencil_contraction", ham(pencil, shifted).n_terms())

    lam_idx = vt.index(lam_name)
    coeffs: dict[int, dict] = {}
    for m, c in shifted.terms.items():
        d = dict(m)
        e = d.pop(lam_idx, 0)
        mono = tuple(sorted(d.items()))
        coeffs.setdefault(e, {})[mono] = c
    k = max(coeffs) if coeffs else 0
    taylor = [Polynomial(vt, coeffs.get(i, {})) for i in range(k + 1)]
    report.record_residual("taylor_f0_pi2", ham(pi2, taylor[0]).n_terms())
    for i in range(k):
        eq = ham(pi1, taylor[i]) + ham(pi2, taylor[i + 1])
        report.record_residual(f"taylor_link_{i}", eq.n_terms())
    report.record_residual(f"taylor_f{k}_pi1", ham(pi1, taylor[k]).n_terms())
    report.millis = watch.millis()
    return shifted, report


# -- involution matrices -------------------------------------------------------------

@dataclass
class InvolutionMatrix:
    names: list[str]
    entries: dict[tuple[int, int], Polynomial]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries.values())

    def residual_terms(self) -> int:
        return sum(p.n_terms() for p in self.entries.values())

    def failing_pairs(self) -> list[tuple[str, str]]:
        return [
            (self.names[i], self.names[j])
            for (i, j), p in sorted(self.entries.items())
            if not p.is_zero()
        ]


def involution_matrix(funcs: list[tuple[str, Polynomial]], pi: Multivector) -> InvolutionMatrix:
    names = [n for n, _ in funcs]
    entries = {}
    for i in range(len(funcs)):
        for j in range(i + 1, len(funcs)):
            entries[(i, j)] = poisson_bracket(pi, funcs[i][1], funcs[j][1])
    return InvolutionMatrix(names, entries)


# -- rank sampling ----------------------------------------------------------------

def random_rational_point(chart: Chart, rng: random.Random) -> dict[str, Rational]:
    point = {}
    for name in chart.vt.coordinates:
        num = rng.randint(-9, 9)
        den = rng.choice((1, 2, 3))
        point[name] = rational(num, den)
    return point


def exact_rank(matrix: list[list[Rational]]) -> int:
    m = [row[:] for row in matrix]
    nrows, ncols = len(m), len(m[0]) if m else 0
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        for r in range(row + 1, nrows):
            if m[r][col]:
                f = m[r][col] / pv
                for c in range(col, ncols):
                    m[r][c] -= f * m[row][c]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def coefficient_matrix(pi: Multivector, point: dict) -> list[list[Rational]]:
    n = pi.vt.n_coordinates
    mat = [[rational(0)] * n for _ in range(n)]
    for (i, j), p in pi.comps.items():
        v = p.substitute(point).constant_term()
        mat[i][j] = v
        mat[j][i] = -v
    return mat


@dataclass
class RankSample:
    ranks: list[int]
    generic_rank: int
    generic_corank: int
    points: int
    seed: int


def pencil_rank_sample(
    chart: Chart,
    pi1: Multivector,
    pi2: Multivector | None = None,
    lam=0,
    points: int = 20,
    seed: int = 0,
    point_filter=None,
) -> RankSample:
    """Exact ranks of (pi1 + lam*pi2) at seeded pseudo-random rational points."""
    rng = random.Random(seed)
    lam = rational(lam)
    pencil = pi1 if (pi2 is None or not lam) else pi1 + pi2.scale(lam)
    ranks = []
    for _ in range(points):
        point = random_rational_point(chart, rng)
        if point_filter is not None:
            point = point_filter(point)
        ranks.append(exact_rank(coefficient_matrix(pencil, point)))
    generic = max(ranks) if ranks else 0
    return RankSample(ranks, generic, chart.dim - generic, points, seed)
