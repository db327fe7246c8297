"""Charts, structure constants, Lie-Poisson bivectors, Casimirs, ingestion."""

import pytest

from clpoisson import (
    JacobiError,
    Multivector,
    builtin,
    casimir,
    central_extend,
    embed_multivector,
    embed_poly,
    ham,
    lie_poisson,
    load_structure_constants,
    schouten,
)
from clpoisson.chains import exact_rank, coefficient_matrix, pencil_rank_sample, random_rational_point
from clpoisson.liepoisson import bracket_of_coordinates
from clpoisson.polyalg import PolyError
from clpoisson.rationals import rational
import random


def test_so3_bivector_display(so3, P_so3):
    expected = Multivector.parse(
        "(x1)*d/dx2^d/dx3 + (x2)*d/dx3^d/dx1 + (x3)*d/dx1^d/dx2", so3.vt
    )
    assert P_so3 == expected


def test_abelian_algebra_gives_zero_bivector():
    chart = load_structure_constants({"dim": 3, "c": []})
    assert lie_poisson(chart).is_zero()


def test_sl3_bracket_examples(sl3):
    assert bracket_of_coordinates(sl3, "x12", "x21") == sl3.parse("y13-y23")
    assert bracket_of_coordinates(sl3, "y13", "x12") == sl3.parse("x12")
    assert bracket_of_coordinates(sl3, "x13", "x31") == sl3.parse("y13")
    assert bracket_of_coordinates(sl3, "x12", "x13").is_zero()


def test_builtin_chart_shapes(so3, sl2, sl3, gl3):
    assert sl3.vt.coordinates == ("x12", "x13", "x21", "x23", "x31", "x32", "y13", "y23")
    assert so3.vt.coordinates == ("x1", "x2", "x3")
    assert sl2.vt.coordinates == ("x12", "x21", "y12")
    assert gl3.vt.coordinates == ("x0",) + sl3.vt.coordinates
    assert gl3.central_extended and gl3.base is sl3


def test_builtin_unknown_name():
    with pytest.raises(PolyError):
        builtin("e8")


def test_lie_poisson_closed_for_all_builtins():
    for name in ("so3", "sl2", "sl3", "gl3"):
        P = lie_poisson(builtin(name))
        assert schouten(P, P).is_zero()


def test_lie_poisson_linear_coefficients(sl3, P_sl3):
    for p in P_sl3.comps.values():
        assert p.homogeneous_coordinate_degree() == 1


def test_central_coordinate_is_casimir(gl3):
    P = lie_poisson(gl3)
    assert ham(P, gl3.coordinate("x0")).is_zero()
    for (i, j), p in P.comps.items():
        assert 0 not in (i, j)


def test_casimirs_symbolic(sl3, P_sl3):
    C2 = casimir(sl3, "C2")
    C3 = casimir(sl3, "C3")
    assert ham(P_sl3, C2).is_zero()
    assert ham(P_sl3, C3).is_zero()
    assert C2.homogeneous_coordinate_degree() == 2
    assert C3.homogeneous_coordinate_degree() == 3


def test_casimir_diagonal_point_value(sl3):
    # diag(2,-1,-1): y13 = 3, y23 = 0; Tr = 4+1+1 = 6
    C2 = casimir(sl3, "C2")
    point = {n: 0 for n in sl3.vt.coordinates}
    point["y13"] = 3
    assert C2.substitute(point) == 6


def test_casimir_unsupported_chart(so3):
    with pytest.raises(PolyError):
        casimir(so3, "C2")
    with pytest.raises(PolyError):
        casimir(builtin("sl3"), "C5")


def test_central_extend_matches_gl3(sl3, gl3):
    assert central_extend(sl3) is gl3
    with pytest.raises(PolyError):
        central_extend(gl3)


def test_embedding_preserves_bivector(sl3, gl3, P_sl3):
    emb = embed_multivector(P_sl3, gl3)
    Pe = lie_poisson(gl3)
    assert emb == Pe
    C2 = casimir(sl3, "C2")
    assert ham(Pe, embed_poly(C2, gl3)).is_zero()


def test_ingestion_roundtrip_and_jacobi():
    chart = load_structure_constants(
        {"name": "so3_user", "dim": 3,
         "c": [[0, 1, 2, "1"], [1, 2, 0, "1"], [2, 0, 1, "1"]]}
    )
    P = lie_poisson(chart)
    assert schouten(P, P).is_zero()
    # both orientations supplied consistently are accepted
    chart2 = load_structure_constants(
        {"dim": 2, "c": [[0, 1, 1, "1"], [1, 0, 1, "-1"]]}
    )
    assert lie_poisson(chart2) == Multivector.parse("(x2)*d/dx1^d/dx2", chart2.vt)


def test_ingestion_antisymmetry_violation_names_entry():
    with pytest.raises(PolyError) as err:
        load_structure_constants({"dim": 2, "c": [[0, 1, 1, "1"], [1, 0, 1, "1"]]})
    assert "antisymmetry" in str(err.value)
    with pytest.raises(PolyError) as err2:
        load_structure_constants({"dim": 2, "c": [[0, 0, 1, "2"]]})
    assert "antisymmetry" in str(err2.value)


def test_ingestion_jacobi_violation_names_triple():
    bad = {"dim": 3, "c": [[0, 1, 2, "1"], [0, 2, 0, "1"]]}
    with pytest.raises(JacobiError) as err:
        load_structure_constants(bad)
    assert "(0, 1, 2)" in str(err.value)


def test_ingestion_index_bounds():
    with pytest.raises(PolyError):
        load_structure_constants({"dim": 2, "c": [[0, 5, 1, "1"]]})


def test_corank_samples_with_minor_oracle(so3, gl3):
    """Exact rank sampling, cross-checked against a determinant-minor oracle."""
    rs = pencil_rank_sample(so3, lie_poisson(so3), points=20, seed=1)
    assert rs.generic_corank == 1
    rs3 = pencil_rank_sample(gl3, lie_poisson(gl3), points=20, seed=1)
    assert rs3.generic_corank == 3

    def det(m):
        n = len(m)
        if n == 1:
            return m[0][0]
        total = rational(0)
        for j in range(n):
            if m[0][j]:
                minor = [row[:j] + row[j + 1 :] for row in m[1:]]
                term = m[0][j] * det(minor)
                total = total + (term if j % 2 == 0 else -term)
        return total

    def rank_by_minors(mat):
        from itertools import combinations

        n = len(mat)
        for k in range(n, 0, -1):
            for rows in combinations(range(n), k):
                for cols in combinations(range(n), k):
                    sub = [[mat[r][c] for c in cols] for r in rows]
                    if det(sub):
                        return k
        return 0

    rng = random.Random(2)
    P3 = lie_poisson(so3)
    for _ in range(5):
        point = random_rational_point(so3, rng)
        mat = coefficient_matrix(P3, point)
        assert exact_rank(mat) == rank_by_minors(mat)
    Pg = lie_poisson(gl3)
    point = random_rational_point(gl3, rng)
    mat = coefficient_matrix(Pg, point)
    assert exact_rank(mat) == rank_by_minors(mat)
