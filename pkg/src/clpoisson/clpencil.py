"""Centrally-linearizable pencil construction and the basic-identity solvers.

A quadratic vector field X on an unextended chart induces pi = [X, P].  The
pair (X, q) is CL data when

    R1 = [pi, pi] - 2 ham(P, q) ^ P = 0      and     R2 = [pi, ham(P, q)] = 0,

and then

    pi2 = pi - ham(P, q) ^ d/dx0 + x0 * P

on the extended chart is a quadratic Poisson bivector vanishing at the
central point a (x0 = 1, rest 0) with linearization P there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import chains
from .liepoisson import Chart, central_extend, embed_multivector, lie_poisson
from .multivec import Multivector, ham, lie_derivative, schouten
from .polyalg import Polynomial, PolyError
from .rationals import rational
from .report import Stopwatch, VerificationReport


class NotCLAdmissible(PolyError):
    pass


class ConventionError(PolyError):
    """A build_cl post-check failed; the assembly conventions are broken."""


@dataclass
class CLData:
    chart: Chart
    X: Multivector
    q: Polynomial
    pi: Multivector = None
    m: Polynomial | None = None
    pi2: Multivector | None = None
    verified: bool = False
    q_kernel: list[Polynomial] = field(default_factory=list)
    m_kernel: list[Polynomial] = field(default_factory=list)
    reports: list[VerificationReport] = field(default_factory=list)

    def __post_init__(self):
        if self.pi is None:
            self.pi = lie_derivative(self.X, lie_poisson(self.chart))

    def serialize(self) -> dict:
        doc = {
            "chart": self.chart.name,
            "X": self.X.format(),
            "q": self.q.format(),
            "verified": self.verified,
            "q_kernel": [p.format() for p in self.q_kernel],
            "m_kernel": [p.format() for p in self.m_kernel],
        }
        if self.m is not None:
            doc["m"] = self.m.format()
        return doc


def _require_quadratic(chart: Chart, X: Multivector, q: Polynomial) -> None:
    if X.degree != 1:
        raise PolyError("X must be a vector field")
    dX = X.homogeneous_coordinate_degree()
    if not (X.is_zero() or dX == 2):
        raise PolyError(f"X must be homogeneous quadratic, got coordinate degree {dX}")
    dq = q.homogeneous_coordinate_degree()
    if not (q.is_zero() or dq == 2):
        raise PolyError(f"q must be homogeneous quadratic, got coordinate degree {dq}")
    if chart.central_extended:
        raise PolyError("basic identities live on the unextended chart")


def check_basic(chart: Chart, X: Multivector, q: Polynomial) -> VerificationReport:
    """Residuals of the two basic identities; pass iff both vanish exactly.

    pi is recomputed from X here rather than trusted from the caller.
    """
    _require_quadratic(chart, X, q)
    watch = Stopwatch()
    P = lie_poisson(chart)
    pi = lie_derivative(X, P)
    Hq = ham(P, q)
    R1 = schouten(pi, pi) - Hq.wedge(P).scale(2)
    R2 = schouten(pi, Hq)
    report = VerificationReport("check_basic")
    report.record_residual("R1", R1.n_terms())
    report.record_residual("R2", R2.n_terms())
    report.millis = watch.millis()
    return report


def assemble_pi2(chart: Chart, X: Multivector, q: Polynomial) -> Multivector:
    """pi - ham(P,q)^d/dx0 + x0*P on the extended chart (no checks)."""
    ext = central_extend(chart)
    P = lie_poisson(chart)
    P_ext = lie_poisson(ext)
    x0 = ext.coordinate("x0")
    d0 = Multivector.basis_field(ext.vt, "x0")
    pi_ext = embed_multivector(lie_derivative(X, P), ext)
    Hq_ext = embed_multivector(ham(P, q), ext)
    return pi_ext - Hq_ext.wedge(d0) + P_ext.scale(x0)


def build_cl(data: CLData) -> Multivector:
    """Verify the basic identities, assemble pi2, and run the CL post-checks."""
    if not data.verified:
        rep = check_basic(data.chart, data.X, data.q)
        data.reports.append(rep)
        if not rep.passed:
            raise NotCLAdmissible(
                f"basic identities fail: residual terms {rep.residual_terms}"
            )
        data.verified = True
    ext = central_extend(data.chart)
    pi2 = assemble_pi2(data.chart, data.X, data.q)
    watch = Stopwatch()
    post = VerificationReport("build_cl_postchecks")
    post.record_residual("schouten_pi2_pi2", schouten(pi2, pi2).n_terms())
    at_a = {name: 0 for name in ext.vt.coordinates[1:]}
    at_a["x0"] = 1
    post.record_residual("pi2_at_a", pi2.evaluate(at_a).n_terms())
    T_a = Multivector.basis_field(ext.vt, "x0")
    lin = schouten(T_a, pi2) - lie_poisson(ext)
    post.record_residual("linearization_minus_P", lin.n_terms())
    post.millis = watch.millis()
    data.reports.append(post)
    if not post.passed:
        raise ConventionError(f"CL post-checks failed: {post.residual_terms}")
    data.pi2 = pi2
    return pi2


# -- inverse solvers ---------------------------------------------------------

def solve_q(chart: Chart, X: Multivector):
    """Solve 2 ham(P,q) ^ P = [pi,pi] exactly over the quadratic monomials.

    Returns (canonical q, kernel basis, report).  Raises NotCLAdmissible when
    the system is inconsistent.
    """
    watch = Stopwatch()
    P = lie_poisson(chart)
    pi = lie_derivative(X, P)
    T = schouten(pi, pi)
    op = lambda f: ham(P, f).wedge(P).scale(2)
    particular, kernel = chains.solve_linear_operator(chart, op, T, 2)
    if particular is None:
        raise NotCLAdmissible("X admits no quadratic q: the linear system is inconsistent")
    q = chains.canonical_representative(particular, chart.casimir_span_basis(2))
    residual = op(q) - T
    report = VerificationReport("solve_q")
    report.record_residual("residual", residual.n_terms())
    report.kernel_dims = [len(kernel)]
    report.millis = watch.millis()
    return q, kernel, report


def solve_m(chart: Chart, X: Multivector, q: Polynomial):
    """Solve ham(P,m) = [X, ham(P,q)] for the cubic m (canonical mod Casimirs)."""
    watch = Stopwatch()
    P = lie_poisson(chart)
    rhs = schouten(X, ham(P, q))
    particular, kernel = chains.solve_linear_operator(chart, lambda f: ham(P, f), rhs, 3)
    if particular is None:
        raise NotCLAdmissible(
            "no cubic m exists; check_basic was skipped or a convention is broken"
        )
    m = chains.canonical_representative(particular, chart.casimir_span_basis(3))
    residual = ham(P, m) - rhs
    report = VerificationReport("solve_m")
    report.record_residual("residual", residual.n_terms())
    report.kernel_dims = [len(kernel)]
    report.millis = watch.millis()
    return m, kernel, report


# -- worked constructions -------------------------------------------------------

def tautological(chart: Chart, x: Polynomial) -> CLData:
    """X = x*E, q = x^2/2; CL data over any Lie algebra chart."""
    if x.homogeneous_coordinate_degree() != 1:
        raise PolyError("tautological data needs a homogeneous linear function")
    E = chart.euler_field()
    X = E.scale(x)
    q = x * x * rational(1, 2)
    data = CLData(chart, X, q)
    rep = check_basic(chart, X, q)
    data.reports.append(rep)
    data.verified = rep.passed
    if not rep.passed:
        raise ConventionError("tautological data failed the basic identities")
    return data


def sklyanin(J1=None, J2=None, J3=None) -> CLData:
    """X = 0 with q = (J1 x1^2 + J2 x2^2 + J3 x3^2)/2 on so3.

    None leaves the corresponding J symbolic.
    """
    from .liepoisson import builtin

    chart = builtin("so3")
    half = rational(1, 2)
    q = Polynomial.zero(chart.vt)
    for J, xi in zip((J1, J2, J3), ("x1", "x2", "x3")):
        coeff = chart.parse(f"J{xi[1]}") if J is None else Polynomial.const(chart.vt, J)
        v = chart.coordinate(xi)
        q = q + coeff * v * v * half
    X = Multivector.zero(chart.vt, 1)
    data = CLData(chart, X, q)
    rep = check_basic(chart, X, q)
    data.reports.append(rep)
    data.verified = rep.passed
    if not rep.passed:
        raise ConventionError("Sklyanin data failed the basic identities")
    return data


def rmatrix_cl(chart: Chart, r: dict | list, q_cas: Polynomial) -> CLData:
    """X = sum r^ij x_i ham(P, x_j) for antisymmetric r, with a Casimir q.

    r may be a dense square matrix (list of lists) or a sparse {(i,j): value}
    mapping over coordinate indices; it must be antisymmetric.
    """
    P = lie_poisson(chart)
    n = chart.dim
    entries: dict[tuple[int, int], object] = {}
    if isinstance(r, dict):
        for (i, j), v in r.items():
            entries[(i, j)] = rational(v)
    else:
        for i in range(n):
            for j in range(n):
                if r[i][j]:
                    entries[(i, j)] = rational(r[i][j])
    for (i, j), v in list(entries.items()):
        if entries.get((j, i), rational(0)) != -v:
            raise PolyError(f"r is not antisymmetric at ({i},{j})")
    X = Multivector.zero(chart.vt, 1)
    names = chart.vt.coordinates
    for (i, j), v in entries.items():
        if not v:
            continue
        xi = chart.coordinate(names[i])
        X = X + ham(P, chart.coordinate(names[j])).scale(xi * v)
    if not ham(P, q_cas).is_zero():
        raise PolyError("q_cas is not a Casimir of the Lie-Poisson bivector")
    pi = lie_derivative(X, P)
    if not schouten(pi, pi).is_zero():
        raise NotCLAdmissible("[pi,pi] != 0: r is not compatible with this chart")
    data = CLData(chart, X, q_cas, pi=pi)
    rep = check_basic(chart, X, q_cas)
    data.reports.append(rep)
    data.verified = rep.passed
    if not rep.passed:
        raise NotCLAdmissible("r-matrix data failed the basic identities")
    pi2 = build_cl(data)
    cas_report = VerificationReport("rmatrix_casimir_preservation")
    ext = central_extend(chart)
    for name, cp in chart.casimirs.items():
        from .liepoisson import embed_poly

        cas_report.record_residual(name, ham(pi2, embed_poly(cp, ext)).n_terms())
    data.reports.append(cas_report)
    if not cas_report.passed:
        raise ConventionError("a Casimir of P fails to persist for pi2")
    return data
