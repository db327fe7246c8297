"""The 10-parameter quadratic family on sl3* and its Casimir data.

The data file ships the family in its original tabulated normalization; this
module owns the calibration onto the package's bracket conventions (see the
data file header).  Everything the calibration asserts is re-derived and
checked by regen_check() and convention_report(), never assumed silently:

  - generators: X0 as tabulated, X1..X9 doubled; the nine regeneration
    relations X_i = -[P(x_kl), X_j] then hold exactly;
  - the Q/k/M tables use b3<->b4, b7<->b8 swapped parameter labels relative
    to the generator list;
  - the family hamiltonian is Q_b = -6 * (relabeled Q display): with it
    [[X_b,P],[X_b,P]] = 2 P(Q_b) ^ P symbolically in b;
  - M_b = 12 * (relabeled M display) = m_b - X_b(Q_b), so that
    K3 = -3 M_b + 3 Q_b x0 + x0^3 is a Casimir of pi2(b);
  - k_b is constructed as X_b(C2) per its definition; the relabeled k
    display relates to it by the single scalar rho: X_b(C2) = 4 k_display.
"""

from __future__ import annotations

from importlib import resources

from .chains import proportionality_scalar
from .clpencil import CLData, assemble_pi2
from .liepoisson import Chart, builtin, casimir, embed_poly, lie_poisson
from .multivec import Multivector, ham, schouten
from .polyalg import Polynomial, PolyError
from .rationals import rational
from .report import Stopwatch, VerificationReport

GENERATOR_SCALES = (1, 2, 2, 2, 2, 2, 2, 2, 2, 2)
DISPLAY_B_RELABEL = {"b3": "b4", "b4": "b3", "b7": "b8", "b8": "b7"}
HAMILTONIAN_SCALE = rational(-6)
CUBIC_CORRECTION_SCALE = rational(12)
RHO = rational(4)
RHO_BLOCKS = tuple(range(10))
# X_i = -[P(x_kl), X_j]
REGEN_RELATIONS = (
    (1, "x12", 0),
    (2, "x13", 0),
    (3, "x21", 0),
    (4, "x23", 0),
    (5, "x31", 0),
    (6, "x32", 0),
    (7, "x12", 6),
    (8, "x13", 4),
    (9, "x31", 3),
)

U_GENERATOR_NAMES = (
    "q12", "q13", "q23",
    "P23q21", "P23q13", "P13q23", "P13q12", "P21q23", "P21q31",
    "P12q13", "P12q32", "P31q12", "P31q32", "P32q12", "P32q31",
    "Ux23sq", "Ux23x13", "Ux13sq", "Ux21x23", "Ux12x13", "Ux21sq",
    "Ux12sq", "Ux21x31", "Ux12x32", "Ux31sq", "Ux31x32", "Ux32sq",
)


def _read_records() -> dict[str, tuple[str, str]]:
    text = resources.files("clpoisson").joinpath("data/sl3_family.txt").read_text()
    records: dict[str, tuple[str, str]] = {}
    name = kind = None
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            continue
        if line.startswith("= "):
            if name is not None:
                records[name] = (kind, " ".join(body))
            header = line[2:]
            name, kind = (p.strip() for p in header.split(":"))
            body = []
        elif line.strip():
            body.append(line.strip())
    if name is not None:
        records[name] = (kind, " ".join(body))
    return records


class Sl3Family:
    """Loaded, calibrated family data bound to the sl3/gl3 builtin charts."""

    def __init__(self):
        self.chart: Chart = builtin("sl3")
        self.ext: Chart = builtin("gl3")
        vt = self.chart.vt
        raw = _read_records()
        self.displays: dict[str, Polynomial | Multivector] = {}
        for name, (kind, body) in raw.items():
            if kind == "vector":
                self.displays[name] = Multivector.parse(body, vt, degree=1)
            else:
                self.displays[name] = Polynomial.parse(body, vt)
        self.generators: tuple[Multivector, ...] = tuple(
            self.displays[f"X{i}_display"].scale(rational(GENERATOR_SCALES[i]))
            for i in range(10)
        )
        self.q_sym: Polynomial = (
            self.displays["Q_display"].rename_variables(DISPLAY_B_RELABEL)
            * HAMILTONIAN_SCALE
        )
        self.m_sym: Polynomial = (
            self.displays["M_display"].rename_variables(DISPLAY_B_RELABEL)
            * CUBIC_CORRECTION_SCALE
        )
        self.k_display_relabelled: Polynomial = self.displays["k_display"].rename_variables(
            DISPLAY_B_RELABEL
        )
        self.u_generators: dict[str, Polynomial] = {
            n: self.displays[n] for n in U_GENERATOR_NAMES
        }
        self.C2 = casimir(self.chart, "C2")
        self.C3 = casimir(self.chart, "C3")
        self._b_names = tuple(f"b{i}" for i in range(10))

    # -- parameter handling ----------------------------------------------------

    def _b_assignment(self, b) -> dict | None:
        """None for symbolic b; otherwise a substitution map.

        Accepts a 10-vector of rationals or of parameter Polynomials.
        """
        if b is None or b == "symbolic":
            return None
        if len(b) != 10:
            raise PolyError("b must have 10 entries")
        if any(isinstance(v, Polynomial) for v in b):
            subs = {}
            for name, v in zip(self._b_names, b):
                subs[name] = v if isinstance(v, Polynomial) else Polynomial.const(self.chart.vt, v)
            return subs
        return {name: rational(v) for name, v in zip(self._b_names, b)}

    def _specialize_poly(self, p: Polynomial, b) -> Polynomial:
        subs = self._b_assignment(b)
        if subs is None:
            return p
        if any(isinstance(v, Polynomial) for v in subs.values()):
            return p.substitute_poly(subs)
        return p.substitute(subs)

    def x_field(self, b=None) -> Multivector:
        """X_b = b0 X0 + ... + b9 X9 (symbolic b when b is None)."""
        vt = self.chart.vt
        subs = self._b_assignment(b)
        out = Multivector.zero(vt, 1)
        for i, gen in enumerate(self.generators):
            if subs is None:
                coeff = Polynomial.variable(vt, self._b_names[i])
            else:
                c = subs[self._b_names[i]]
                coeff = c if isinstance(c, Polynomial) else Polynomial.const(vt, c)
            if not coeff.is_zero():
                out = out + gen.scale(coeff)
        return out

    def hamiltonian(self, b=None) -> Polynomial:
        """Q_b with [[X_b,P],[X_b,P]] = 2 P(Q_b)^P."""
        return self._specialize_poly(self.q_sym, b)

    def cubic_correction(self, b=None) -> Polynomial:
        """M_b = m_b - X_b(Q_b)."""
        return self._specialize_poly(self.m_sym, b)

    def k_b(self, b=None) -> Polynomial:
        """k_b = X_b(C2), constructed from its definition."""
        return self.x_field(b).apply(self.C2)

    def q0(self) -> Polynomial:
        """-1/4 (q12 + q23 + q13) from the 27-generator list."""
        u = self.u_generators
        return (u["q12"] + u["q23"] + u["q13"]) * rational(-1, 4)

    def cl_data(self, b=None) -> CLData:
        return CLData(self.chart, self.x_field(b), self.hamiltonian(b))

    def pi2(self, b=None) -> Multivector:
        """The CL bivector of the family on the extended chart."""
        return assemble_pi2(self.chart, self.x_field(b), self.hamiltonian(b))

    # -- Casimirs of pi2 ---------------------------------------------------------

    def K1(self) -> Polynomial:
        return embed_poly(self.C3, self.ext)

    def K2(self, b=None) -> Polynomial:
        x0 = self.ext.coordinate("x0")
        return embed_poly(self.k_b(b), self.ext) + embed_poly(self.C2, self.ext) * x0

    def K3(self, b=None) -> Polynomial:
        x0 = self.ext.coordinate("x0")
        three = rational(3)
        return (
            embed_poly(self.cubic_correction(b), self.ext) * (-three)
            + embed_poly(self.hamiltonian(b), self.ext) * x0 * three
            + x0 ** 3
        )

    # -- dual family -------------------------------------------------------------

    TRANSPOSE = {"x12": "x21", "x21": "x12", "x13": "x31", "x31": "x13",
                 "x23": "x32", "x32": "x23"}

    def transpose(self, obj):
        """The dual-module transform x_ij -> x_ji (y13, y23 are fixed).

        Acts on polynomials and on vector fields (components move with their
        basis directions).  Applied to the stored generator set it produces
        the dual family, which satisfies the same identities: the transform
        is an anti-Poisson map, sending P to -P, and the main identity is
        invariant under that pair of sign flips.
        """
        if isinstance(obj, Polynomial):
            return obj.rename_variables(self.TRANSPOSE)
        if isinstance(obj, Multivector):
            vt = obj.vt
            index_map = {
                vt.index(a): vt.index(b) for a, b in self.TRANSPOSE.items()
            }
            comps = {}
            for idx, p in obj.comps.items():
                new_idx = tuple(sorted(index_map.get(i, i) for i in idx))
                sign = _permutation_parity([index_map.get(i, i) for i in idx])
                q = p.rename_variables(self.TRANSPOSE) * sign
                if q.terms:
                    comps[new_idx] = comps.get(new_idx, Polynomial.zero(vt)) + q
            return Multivector(vt, obj.degree, {k: v for k, v in comps.items() if v.terms})
        raise PolyError("transpose acts on Polynomials and Multivectors")

    def sokolov_b(self) -> list[Polynomial]:
        """The 3-parameter slice 2X7 - 1/2 X4 + 1/2 g2 X5 + 1/2 g3 X9 of the
        tabulated generators, written in working-generator coordinates."""
        vt = self.chart.vt
        zero = Polynomial.zero(vt)
        b = [zero] * 10
        quarter = rational(1, 4)
        b[4] = Polynomial.const(vt, -quarter)
        b[5] = Polynomial.variable(vt, "g2") * quarter
        b[7] = Polynomial.const(vt, 1)
        b[9] = Polynomial.variable(vt, "g3") * quarter
        return b

    # -- structural checks ---------------------------------------------------------

    def regen_check(self) -> VerificationReport:
        """Recompute X1..X9 from the bracket relations; exact equality required."""
        watch = Stopwatch()
        report = VerificationReport("regen_check")
        P = lie_poisson(self.chart)
        for i, var, j in REGEN_RELATIONS:
            regenerated = -schouten(ham(P, self.chart.coordinate(var)), self.generators[j])
            delta = regenerated - self.generators[i]
            report.record_residual(f"X{i}", delta.n_terms())
        report.millis = watch.millis()
        if not report.passed:
            failing = [k for k, v in report.residual_terms.items() if v]
            report.details["failing_generators"] = failing
        return report

    def convention_report(self, seed_b=(1, 0, 0, 0, 0, 0, 0, 0, 0, 0)) -> VerificationReport:
        """Solve the calibration scalars from scratch and verify the stored ones.

        c: [[X0,P],[X0,P]] = 2c P(Q_display(e0)) ^ P   (expected -6)
        rho: X_b(C2) = rho * (relabeled k display), blockwise in b (expected 4)
        """
        watch = Stopwatch()
        report = VerificationReport("convention_report")
        P = lie_poisson(self.chart)
        X0 = self.generators[0]
        pi = schouten(X0, P)
        T = schouten(pi, pi)
        q_disp_e0 = self.displays["Q_display"].substitute(
            {n: (1 if n == "b0" else 0) for n in self._b_names}
        )
        rhs = ham(P, q_disp_e0).wedge(P).scale(2)
        c = proportionality_scalar(T, rhs)
        report.record_scalar("c", c)
        if c is None or c != HAMILTONIAN_SCALE:
            report.status = "fail"
            report.details["c_expected"] = str(HAMILTONIAN_SCALE)
        k_sym = self.k_b(None)
        rho_blocks = {}
        ok = True
        for i in RHO_BLOCKS:
            e_i = [rational(1) if j == i else rational(0) for j in range(10)]
            lhs = self._specialize_poly(k_sym, e_i)
            disp = self._specialize_poly(self.k_display_relabelled, e_i)
            r = proportionality_scalar(lhs, disp)
            rho_blocks[i] = r
            ok = ok and (r == RHO)
        report.record_scalar("rho", RHO if ok else None)
        if not ok:
            report.status = "fail"
            report.details["rho_blocks"] = {k: str(v) for k, v in rho_blocks.items()}
        report.millis = watch.millis()
        return report


_FAMILY: Sl3Family | None = None


def family() -> Sl3Family:
    global _FAMILY
    if _FAMILY is None:
        fam = Sl3Family()
        regen = fam.regen_check()
        if not regen.passed:
            raise PolyError(
                "generator data failed regeneration: "
                f"{regen.details.get('failing_generators')}"
            )
        _FAMILY = fam
    return _FAMILY


def _permutation_parity(indices: list[int]) -> int:
    sign = 1
    arr = list(indices)
    for i in range(len(arr)):
        m = min(range(i, len(arr)), key=arr.__getitem__)
        if m != i:
            arr[i], arr[m] = arr[m], arr[i]
            sign = -sign
    return sign
