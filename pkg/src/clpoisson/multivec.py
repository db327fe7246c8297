"""Polyvector fields with polynomial coefficients and the Schouten bracket.

A degree-p multivector is stored as a map from strictly increasing p-tuples
of coordinate indices to Polynomial coefficients (degree 0 wraps a single
Polynomial under the empty tuple).  The bracket is normalized by the axioms

    [f,g] = 0,   [X,f] = X(f),   [X,Y] = vector-field commutator,
    [A, B^C] = [A,B]^C + (-1)^((a-1) deg B) B^[A,C],
    [A,B] = -(-1)^((a-1)(b-1)) [B,A],

so a bivector pi is Poisson exactly when [pi,pi] = 0, and the hamiltonian
field of f is ham(pi, f) = [pi, f] (contraction over the second index; the
sign-reversed cousin of the textbook convention).  The wedge carries no
factorial weights: pi(df,dg) = sum_{i<j} pi^ij (d_i f d_j g - d_j f d_i g).
"""

from __future__ import annotations

from typing import Mapping

from .polyalg import (
    Polynomial,
    PolyError,
    VarTable,
    add_into,
    diff_terms,
    mul_terms,
)
from .rationals import ONE, rational

Index = tuple[int, ...]


class ChartMismatch(PolyError):
    pass


def merge_indices(a: Index, b: Index) -> tuple[Index, int] | None:
    """Merge two strictly increasing index tuples; None if they collide.

    Returns the sorted tuple and the sign of the merging permutation.
    """
    if not a:
        return b, 1
    if not b:
        return a, 1
    out = []
    sign = 1
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
            if (la - i) & 1:
                sign = -sign
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


class Multivector:
    """Polyvector field of fixed degree over a VarTable's coordinates."""

    __slots__ = ("vt", "degree", "comps")

    def __init__(self, vt: VarTable, degree: int, comps: dict[Index, Polynomial] | None = None):
        if degree < 0:
            raise PolyError("multivector degree must be >= 0")
        self.vt = vt
        self.degree = degree
        self.comps: dict[Index, Polynomial] = comps if comps is not None else {}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, vt: VarTable, degree: int = 0) -> "Multivector":
        return cls(vt, degree, {})

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "Multivector":
        return cls(p.vt, 0, {(): p} if p.terms else {})

    @classmethod
    def from_components(cls, vt: VarTable, degree: int, comps: Mapping[Index, Polynomial]) -> "Multivector":
        clean = {}
        for idx, poly in comps.items():
            idx = tuple(idx)
            if len(idx) != degree or any(i >= vt.n_coordinates for i in idx):
                raise PolyError(f"bad component index {idx} for degree {degree}")
            if list(idx) != sorted(set(idx)):
                raise PolyError(f"component index {idx} must be strictly increasing")
            if poly.terms:
                clean[idx] = poly
        return cls(vt, degree, clean)

    @classmethod
    def basis_field(cls, vt: VarTable, name: str) -> "Multivector":
        i = vt.index(name)
        if not vt.is_coordinate(i):
            raise PolyError(f"{name!r} is a parameter, not a coordinate")
        return cls(vt, 1, {(i,): Polynomial.const(vt, 1)})

    # -- linear structure -----------------------------------------------------

    def _check(self, other: "Multivector") -> None:
        if self.vt != other.vt:
            raise ChartMismatch("multivectors live on different charts")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        if self.degree != other.degree:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise PolyError("cannot add multivectors of different degrees")
        out = dict(self.comps)
        for idx, p in other.comps.items():
            q = out.get(idx)
            s = p if q is None else q + p
            if s.terms:
                out[idx] = s
            elif q is not None:
                del out[idx]
        return Multivector(self.vt, self.degree, out)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector(self.vt, self.degree, {i: -p for i, p in self.comps.items()})

    def scale(self, factor) -> "Multivector":
        """Multiply by a rational or a Polynomial (function times multivector)."""
        if isinstance(factor, Polynomial):
            if factor.vt != self.vt:
                raise ChartMismatch("scaling polynomial lives on a different chart")
            out = {}
            for idx, p in self.comps.items():
                q = p * factor
                if q.terms:
                    out[idx] = q
            return Multivector(self.vt, self.degree, out)
        c = rational(factor)
        if not c:
            return Multivector.zero(self.vt, self.degree)
        return Multivector(self.vt, self.degree, {i: p * c for i, p in self.comps.items()})

    def __mul__(self, factor):
        return self.scale(factor)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        if self.vt != other.vt:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.comps == other.comps

    def is_zero(self) -> bool:
        return not self.comps

    def n_terms(self) -> int:
        return sum(len(p.terms) for p in self.comps.values())

    def component(self, idx: Index) -> Polynomial:
        return self.comps.get(tuple(idx), Polynomial.zero(self.vt))

    def homogeneous_coordinate_degree(self) -> int | None:
        degs = set()
        for p in self.comps.values():
            d = p.homogeneous_coordinate_degree()
            if d is None:
                return None
            degs.add(d)
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    # -- operations -----------------------------------------------------------

    def wedge(self, other: "Multivector") -> "Multivector":
        self._check(other)
        deg = self.degree + other.degree
        acc: dict[Index, dict] = {}
        for ia, pa in self.comps.items():
            for ib, pb in other.comps.items():
                merged = merge_indices(ia, ib)
                if merged is None:
                    continue
                idx, sign = merged
                prod = mul_terms(pa.terms, pb.terms)
                if not prod:
                    continue
                add_into(acc.setdefault(idx, {}), prod, rational(sign))
        return Multivector(self.vt, deg, _collect(self.vt, acc))

    def apply(self, f: Polynomial) -> Polynomial:
        """Vector field acting on a function."""
        if self.degree != 1:
            raise PolyError("apply() needs a vector field")
        if f.vt != self.vt:
            raise ChartMismatch("function lives on a different chart")
        out: dict = {}
        for (i,), p in self.comps.items():
            df = diff_terms(f.terms, i)
            if df:
                add_into(out, mul_terms(p.terms, df))
        return Polynomial(self.vt, out)

    def evaluate(self, assignment: Mapping) -> "Multivector":
        out = {}
        for idx, p in self.comps.items():
            q = p.substitute(assignment)
            if q.terms:
                out[idx] = q
        return Multivector(self.vt, self.degree, out)

    def substitute_poly(self, assignment) -> "Multivector":
        out = {}
        for idx, p in self.comps.items():
            q = p.substitute_poly(assignment)
            if q.terms:
                out[idx] = q
        return Multivector(self.vt, self.degree, out)

    def map_components(self, fn) -> "Multivector":
        out = {}
        for idx, p in self.comps.items():
            q = fn(p)
            if q.terms:
                out[idx] = q
        return Multivector(self.vt, self.degree, out)

    # -- text -------------------------------------------------------------------

    def format(self) -> str:
        if self.degree == 0:
            return self.component(()).format()
        if not self.comps:
            return "0"
        names = self.vt.names
        chunks = []
        for idx in sorted(self.comps):
            basis = "^".join(f"d/d{names[i]}" for i in idx)
            chunks.append(f"({self.comps[idx].format()})*{basis}")
        return " + ".join(chunks)

    __str__ = format

    def __repr__(self) -> str:
        return f"Multivector(degree={self.degree}, {self.format()!r})"

    @classmethod
    def parse(cls, text: str, vt: VarTable, degree: int | None = None) -> "Multivector":
        return _parse_multivector(text, vt, degree)


def _collect(vt: VarTable, acc: dict[Index, dict]) -> dict[Index, Polynomial]:
    return {idx: Polynomial(vt, terms) for idx, terms in acc.items() if terms}


# -- Schouten bracket ----------------------------------------------------------

def schouten(A: Multivector, B: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket, degree a+b-1.

    On decomposables f*d_I, g*d_J:
        [A,B] = sum_s (-1)^(a-s) f (d_{i_s} g) d_{I\\s} ^ d_J
              - (-1)^((a-1)(b-1)) sum_t (-1)^(b-t) g (d_{j_t} f) d_{J\\t} ^ d_I
    with s, t counted from 1.
    """
    if A.vt != B.vt:
        raise ChartMismatch("multivectors live on different charts")
    a, b = A.degree, B.degree
    if a + b == 0:
        return Multivector.zero(A.vt, 0)
    vt = A.vt
    out_deg = a + b - 1
    acc: dict[Index, dict] = {}
    swap_sign = -1 if ((a - 1) * (b - 1)) % 2 == 0 else 1  # -(-1)^((a-1)(b-1))

    diff_cache_B: dict[tuple[Index, int], dict] = {}
    diff_cache_A: dict[tuple[Index, int], dict] = {}

    for I, fp in A.comps.items():
        f = fp.terms
        for J, gp in B.comps.items():
            g = gp.terms
            for s, i_s in enumerate(I):
                key = (J, i_s)
                dg = diff_cache_B.get(key)
                if dg is None:
                    dg = diff_terms(g, i_s)
                    diff_cache_B[key] = dg
                if not dg:
                    continue
                merged = merge_indices(I[:s] + I[s + 1 :], J)
                if merged is None:
                    continue
                idx, msign = merged
                sign = msign if (a - s - 1) % 2 == 0 else -msign
                add_into(acc.setdefault(idx, {}), mul_terms(f, dg), rational(sign))
            for t, j_t in enumerate(J):
                key = (I, j_t)
                df = diff_cache_A.get(key)
                if df is None:
                    df = diff_terms(f, j_t)
                    diff_cache_A[key] = df
                if not df:
                    continue
                merged = merge_indices(J[:t] + J[t + 1 :], I)
                if merged is None:
                    continue
                idx, msign = merged
                sign = msign if (b - t - 1) % 2 == 0 else -msign
                add_into(acc.setdefault(idx, {}), mul_terms(g, df), rational(swap_sign * sign))
    return Multivector(A.vt, out_deg, _collect(vt, acc))


def ham(pi: Multivector, f: Polynomial) -> Multivector:
    """Hamiltonian vector field [pi, f]; equals schouten(pi, f) by the axioms."""
    if pi.degree != 2:
        raise PolyError("ham() needs a bivector")
    if f.vt != pi.vt:
        raise ChartMismatch("function lives on a different chart")
    acc: dict[Index, dict] = {}
    for (i, j), p in pi.comps.items():
        dj = diff_terms(f.terms, j)
        if dj:
            add_into(acc.setdefault((i,), {}), mul_terms(p.terms, dj))
        di = diff_terms(f.terms, i)
        if di:
            add_into(acc.setdefault((j,), {}), mul_terms(p.terms, di), -ONE)
    return Multivector(pi.vt, 1, _collect(pi.vt, acc))


def lie_derivative(X: Multivector, A: Multivector) -> Multivector:
    """L_X A = [X, A] for a vector field X."""
    if X.degree != 1:
        raise PolyError("lie_derivative() needs a vector field")
    return schouten(X, A)


def poisson_bracket(pi: Multivector, f: Polynomial, g: Polynomial) -> Polynomial:
    """{f,g} = pi(df, dg) = sum_{i<j} pi^ij (d_i f d_j g - d_j f d_i g)."""
    if pi.degree != 2:
        raise PolyError("poisson_bracket() needs a bivector")
    out: dict = {}
    for (i, j), p in pi.comps.items():
        dif = diff_terms(f.terms, i)
        djg = diff_terms(g.terms, j)
        if dif and djg:
            add_into(out, mul_terms(p.terms, mul_terms(dif, djg)))
        djf = diff_terms(f.terms, j)
        dig = diff_terms(g.terms, i)
        if djf and dig:
            add_into(out, mul_terms(p.terms, mul_terms(djf, dig)), -ONE)
    return Polynomial(pi.vt, out)


def euler_field(vt: VarTable, skip: tuple[str, ...] = ()) -> Multivector:
    """E = sum x_i d/dx_i over coordinates, optionally skipping some (x0)."""
    comps = {}
    for i, name in enumerate(vt.coordinates):
        if name in skip:
            continue
        comps[(i,)] = Polynomial.variable(vt, name)
    return Multivector(vt, 1, comps)


# -- multivector text parsing ----------------------------------------------------

def _split_top_level(text: str) -> list[tuple[int, str]]:
    chunks = []
    depth = 0
    sign = 1
    start = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > start:
            piece = text[start:i].strip()
            if piece:
                chunks.append((sign, piece))
            sign = 1 if ch == "+" else -1
            start = i + 1
        elif depth == 0 and ch in "+-" and i == start:
            if ch == "-":
                sign = -sign
            start = i + 1
        i += 1
    piece = text[start:].strip()
    if piece:
        chunks.append((sign, piece))
    return chunks


def _parse_multivector(text: str, vt: VarTable, degree: int | None) -> Multivector:
    text = text.strip()
    if not text:
        raise PolyError("empty multivector text")
    if "d/d" not in text:
        p = Polynomial.parse(text, vt)
        mv = Multivector.from_polynomial(p)
        if degree not in (None, 0) and p.terms:
            raise PolyError(f"expected degree {degree}, got a function")
        return mv
    acc: dict[Index, dict] = {}
    deg_seen = None
    for sign, chunk in _split_top_level(text):
        k = chunk.find("d/d")
        if k < 0:
            raise PolyError(f"term {chunk!r} has no basis factor")
        coeff_text = chunk[:k].strip()
        if coeff_text.endswith("*"):
            coeff_text = coeff_text[:-1].strip()
        coeff = Polynomial.parse(coeff_text, vt) if coeff_text else Polynomial.const(vt, 1)
        indices = []
        for piece in chunk[k:].split("^"):
            piece = piece.strip()
            if not piece.startswith("d/d"):
                raise PolyError(f"bad basis factor {piece!r}")
            name = piece[3:].strip()
            idx = vt.index(name)
            if not vt.is_coordinate(idx):
                raise PolyError(f"{name!r} is not a coordinate")
            indices.append(idx)
        if len(set(indices)) != len(indices):
            raise PolyError(f"repeated basis index in {chunk!r}")
        order = tuple(sorted(indices))
        perm_sign = _permutation_sign(indices)
        if deg_seen is None:
            deg_seen = len(indices)
        elif deg_seen != len(indices):
            raise PolyError("mixed degrees in multivector text")
        add_into(acc.setdefault(order, {}), coeff.terms, rational(sign * perm_sign))
    if degree is not None and deg_seen != degree and acc:
        raise PolyError(f"expected degree {degree}, parsed degree {deg_seen}")
    return Multivector(vt, deg_seen if deg_seen is not None else 0, _collect(vt, acc))


def _permutation_sign(indices: list[int]) -> int:
    sign = 1
    arr = list(indices)
    for i in range(len(arr)):
        m = min(range(i, len(arr)), key=arr.__getitem__)
        if m != i:
            arr[i], arr[m] = arr[m], arr[i]
            sign = -sign
    return sign
