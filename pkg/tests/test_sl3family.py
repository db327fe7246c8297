"""The 10-parameter family: data integrity, calibration, structural identities."""

import random

import pytest

from clpoisson import (
    Multivector,
    Polynomial,
    ham,
    lie_poisson,
    proportionality_scalar,
    schouten,
)
from clpoisson.rationals import rational
from clpoisson.sl3family import (
    DISPLAY_B_RELABEL,
    GENERATOR_SCALES,
    RHO,
    RHO_BLOCKS,
    U_GENERATOR_NAMES,
)


def e(i):
    return [rational(1) if j == i else rational(0) for j in range(10)]


def test_displays_roundtrip_through_text(fam):
    vt = fam.chart.vt
    for name, value in fam.displays.items():
        if isinstance(value, Polynomial):
            assert Polynomial.parse(value.format(), vt) == value
        else:
            assert Multivector.parse(value.format(), vt) == value


def test_generators_are_homogeneous_quadratic(fam):
    for i, g in enumerate(fam.generators):
        assert g.degree == 1
        assert g.homogeneous_coordinate_degree() == 2, f"X{i}"


def test_generator_scaling_against_displays(fam):
    for i in range(10):
        disp = fam.displays[f"X{i}_display"]
        assert fam.generators[i] == disp.scale(rational(GENERATOR_SCALES[i]))


def test_regeneration_relations_bit_exact(fam):
    rep = fam.regen_check()
    assert rep.passed, rep.residual_terms
    assert all(v == 0 for v in rep.residual_terms.values())


def test_x8_display_followup_of_typo_repair(fam):
    # the stored X8 display satisfies the degeneracy and carries no d/dx23
    # component; the unrepaired tabulation (with d/dx23) does neither
    P = lie_poisson(fam.chart)
    X8 = fam.generators[8]
    pi8 = schouten(X8, P)
    assert schouten(pi8, pi8).is_zero()
    assert X8.component((fam.chart.vt.index("x23"),)).is_zero()
    y23_comp = X8.component((fam.chart.vt.index("y23"),))
    assert y23_comp == fam.chart.parse("18*x13*x23")


def test_convention_scalars_solved(fam):
    rep = fam.convention_report()
    assert rep.passed
    assert rep.scalars["c"] == "-6"
    assert rep.scalars["rho"] == "4"


def test_x_field_point_cases(fam):
    assert fam.x_field(e(0)) == fam.generators[0]
    assert fam.x_field([0] * 10).is_zero()
    sym = fam.x_field(None)
    for p in sym.comps.values():
        assert p.degree() == 3  # quadratic in x, linear in b


def test_hamiltonian_display_value_at_e0(fam):
    q_disp = fam.displays["Q_display"].substitute(
        {f"b{i}": 1 if i == 0 else 0 for i in range(10)}
    )
    expected = fam.chart.parse(
        "6*(-x12*x21-x13*x31-x23*x32+y13^2-y13*y23+y23^2)"
    )
    assert q_disp == expected
    assert q_disp == fam.q0() * 24
    assert fam.hamiltonian(e(0)) == q_disp * rational(-6)
    assert fam.hamiltonian([0] * 10).is_zero()


def test_hamiltonian_identity_symbolic(fam, P_sl3):
    Xb = fam.x_field(None)
    pi = schouten(Xb, P_sl3)
    resid = schouten(pi, pi) - ham(P_sl3, fam.hamiltonian(None)).wedge(P_sl3).scale(2)
    assert resid.is_zero()


def test_q_display_blocks_need_relabel(fam, P_sl3):
    # without the b3<->b4, b7<->b8 relabel the identity fails at a mixed point
    raw = fam.displays["Q_display"] * rational(-6)
    b = [rational(v) for v in (1, 0, 0, 1, 0, 0, 0, 0, 0, 0)]
    sub = {f"b{i}": b[i] for i in range(10)}
    Xb = fam.x_field(b)
    pi = schouten(Xb, P_sl3)
    bad = schouten(pi, pi) - ham(P_sl3, raw.substitute(sub)).wedge(P_sl3).scale(2)
    good = schouten(pi, pi) - ham(
        P_sl3, raw.rename_variables(DISPLAY_B_RELABEL).substitute(sub)
    ).wedge(P_sl3).scale(2)
    assert not bad.is_zero()
    assert good.is_zero()


def test_xb_annihilates_cubic_casimir_symbolically(fam):
    assert fam.x_field(None).apply(fam.C3).is_zero()


def test_k_b_constructive_and_rho_blocks(fam):
    # uniform rho across every parameter block, and fully symbolically in b
    for i in RHO_BLOCKS:
        lhs = fam.k_b(e(i))
        disp = fam.k_display_relabelled.substitute(
            {f"b{j}": 1 if j == i else 0 for j in range(10)}
        )
        assert lhs == disp * RHO, f"block {i}"
    assert fam.k_b(None) == fam.k_display_relabelled * RHO
    # without the relabel, the mixed blocks disagree
    raw = fam.displays["k_display"]
    assert fam.k_b(None) != raw * RHO


def test_u_generator_count_and_homogeneity(fam):
    assert len(U_GENERATOR_NAMES) == 27
    for name in U_GENERATOR_NAMES:
        assert fam.u_generators[name].homogeneous_coordinate_degree() == 2


def test_u_generators_match_coordinate_brackets(fam, P_sl3):
    from clpoisson.multivec import poisson_bracket

    for name, val in fam.u_generators.items():
        if not name.startswith("P"):
            continue
        xij = fam.chart.coordinate("x" + name[1:3])
        qkl = fam.u_generators["q" + "".join(sorted(name[4:6]))]
        br = poisson_bracket(P_sl3, xij, qkl)
        assert proportionality_scalar(val, br) is not None, name


def test_sokolov_field_matches_tabulated_combination(fam):
    b = fam.sokolov_b()
    X = fam.x_field(b)
    vt = fam.chart.vt
    g2, g3 = Polynomial.variable(vt, "g2"), Polynomial.variable(vt, "g3")
    tabulated = (
        fam.displays["X7_display"].scale(rational(2))
        + fam.displays["X4_display"].scale(rational(-1, 2))
        + fam.displays["X5_display"].scale(g2 * rational(1, 2))
        + fam.displays["X9_display"].scale(g3 * rational(1, 2))
    )
    assert X == tabulated


def test_corner_generators_degenerate(fam, P_sl3):
    for i in (7, 8, 9):
        pi = schouten(fam.generators[i], P_sl3)
        assert schouten(pi, pi).is_zero(), f"X{i}"


def test_m_calibration_against_solver(fam):
    rng = random.Random(19)
    b = [rational(rng.randint(-2, 2)) for _ in range(10)]
    from clpoisson import canonical_representative, solve_m

    m, _, rep = solve_m(fam.chart, fam.x_field(b), fam.hamiltonian(b))
    assert rep.passed
    delta = (m - fam.x_field(b).apply(fam.hamiltonian(b))) - fam.cubic_correction(b)
    assert canonical_representative(delta, fam.chart.casimir_span_basis(3)).is_zero()


def test_bad_b_length_rejected(fam):
    with pytest.raises(Exception):
        fam.x_field([1, 2, 3])


def test_transpose_dual_family(fam, P_sl3):
    from clpoisson import ham, schouten

    # the transform is an involution and sends P to -P
    assert fam.transpose(fam.transpose(fam.hamiltonian(None))) == fam.hamiltonian(None)
    assert fam.transpose(P_sl3) == -P_sl3
    # the dual generator set satisfies the main identity with transposed Q_b
    Xd = fam.transpose(fam.x_field(None))
    qd = fam.transpose(fam.hamiltonian(None))
    pid = schouten(Xd, P_sl3)
    assert (schouten(pid, pid) - ham(P_sl3, qd).wedge(P_sl3).scale(2)).is_zero()
    # and the dual highest-weight corner stays degenerate
    X8d = fam.transpose(fam.generators[8])
    pi8 = schouten(X8d, P_sl3)
    assert schouten(pi8, pi8).is_zero()
