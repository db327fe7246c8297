"""Sparse multivariate polynomials over the exact rationals.

A monomial is a sorted tuple of (variable_index, exponent) pairs with all
exponents positive; a polynomial is a dict from monomials to nonzero mpq
coefficients.  The empty tuple is the constant monomial, the empty dict the
zero polynomial, so equality of canonical forms is plain dict equality.

Variables live in a VarTable that fixes their order once and for all; the
canonical term order is graded lexicographic over that order (coordinates
come first, formal parameters after).
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .rationals import ONE, Rational, format_rational, rational

Mono = tuple[tuple[int, int], ...]

CONST_MONO: Mono = ()


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    """Syntax or name error in polynomial text; carries the 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class VarTable:
    """Immutable ordered table of variable names tagged coordinate/parameter."""

    __slots__ = ("names", "kinds", "_index", "n_coordinates")

    def __init__(self, coordinates: Iterable[str], parameters: Iterable[str] = ()):
        coords = tuple(coordinates)
        params = tuple(parameters)
        self.names: tuple[str, ...] = coords + params
        self.kinds: tuple[str, ...] = ("coordinate",) * len(coords) + ("parameter",) * len(params)
        if len(set(self.names)) != len(self.names):
            raise PolyError("variable names must be unique")
        self._index = {name: i for i, name in enumerate(self.names)}
        self.n_coordinates = len(coords)

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.names[: self.n_coordinates]

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.names[self.n_coordinates :]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r}") from None

    def is_coordinate(self, index: int) -> bool:
        return index < self.n_coordinates

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return self is other or (
            isinstance(other, VarTable)
            and self.names == other.names
            and self.n_coordinates == other.n_coordinates
        )

    def __hash__(self) -> int:
        return hash((self.names, self.n_coordinates))

    def __repr__(self) -> str:
        return f"VarTable(coordinates={self.coordinates!r}, parameters={self.parameters!r})"


# -- raw term-dict arithmetic (hot path helpers) -----------------------------

def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def mono_pow(m: Mono, k: int) -> Mono:
    if k == 1 or not m:
        return m
    return tuple((v, e * k) for v, e in m)


def add_into(acc: dict, terms: Mapping, scale: Rational = ONE) -> None:
    """acc += scale * terms, dropping cancelled entries."""
    if not scale:
        return
    get = acc.get
    for m, c in terms.items():
        v = get(m)
        if v is None:
            acc[m] = scale * c
        else:
            v = v + scale * c
            if v:
                acc[m] = v
            else:
                del acc[m]


def mul_terms(a: Mapping, b: Mapping) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            v = get(m)
            if v is None:
                out[m] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


def diff_terms(terms: Mapping, var: int) -> dict:
    out: dict = {}
    for m, c in terms.items():
        for pos, (v, e) in enumerate(m):
            if v == var:
                if e == 1:
                    dm = m[:pos] + m[pos + 1 :]
                else:
                    dm = m[:pos] + ((v, e - 1),) + m[pos + 1 :]
                prev = out.get(dm)
                nc = c * e if prev is None else prev + c * e
                if nc:
                    out[dm] = nc
                elif prev is not None:
                    del out[dm]
                break
            if v > var:
                break
    return out


def _mono_sort_key(m: Mono, nvars: int):
    dense = [0] * nvars
    for v, e in m:
        dense[v] = -e
    return (-mono_degree(m), tuple(dense))


class Polynomial:
    """Canonical sparse polynomial bound to a VarTable."""

    __slots__ = ("vt", "terms")

    def __init__(self, vt: VarTable, terms: dict | None = None):
        self.vt = vt
        self.terms: dict = terms if terms is not None else {}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, vt: VarTable) -> "Polynomial":
        return cls(vt, {})

    @classmethod
    def const(cls, vt: VarTable, value) -> "Polynomial":
        c = rational(value)
        return cls(vt, {CONST_MONO: c} if c else {})

    @classmethod
    def variable(cls, vt: VarTable, name: str) -> "Polynomial":
        return cls(vt, {((vt.index(name), 1),): ONE})

    @classmethod
    def from_terms(cls, vt: VarTable, terms: Mapping) -> "Polynomial":
        return cls(vt, {m: c for m, c in terms.items() if c})

    @classmethod
    def parse(cls, text: str, vt: VarTable) -> "Polynomial":
        return _Parser(text, vt).parse()

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vt != self.vt:
                raise PolyError("polynomials belong to different variable tables")
            return other
        return Polynomial.const(self.vt, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        add_into(out, other.terms)
        return Polynomial(self.vt, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        add_into(out, other.terms, -ONE)
        return Polynomial(self.vt, out)

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vt, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vt != self.vt:
                raise PolyError("polynomials belong to different variable tables")
            return Polynomial(self.vt, mul_terms(self.terms, other.terms))
        c = rational(other)
        if not c:
            return Polynomial.zero(self.vt)
        return Polynomial(self.vt, {m: c * v for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise PolyError("negative exponent")
        result = Polynomial.const(self.vt, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vt == other.vt and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.terms == Polynomial.const(self.vt, other).terms
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def coordinate_degree(self, m: Mono) -> int:
        vt = self.vt
        return sum(e for v, e in m if vt.is_coordinate(v))

    def homogeneous_coordinate_degree(self) -> int | None:
        """Common coordinate-degree of all terms, or None if mixed (zero: 0)."""
        if not self.terms:
            return 0
        degs = {self.coordinate_degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def coefficient(self, m: Mono) -> Rational:
        return self.terms.get(m, rational(0))

    def n_terms(self) -> int:
        return len(self.terms)

    def constant_term(self) -> Rational:
        return self.terms.get(CONST_MONO, rational(0))

    # -- calculus / substitution ---------------------------------------------

    def diff(self, var: str | int) -> "Polynomial":
        vi = var if isinstance(var, int) else self.vt.index(var)
        if not (0 <= vi < len(self.vt)):
            raise PolyError(f"variable index {vi} out of range")
        return Polynomial(self.vt, diff_terms(self.terms, vi))

    def substitute(self, assignment: Mapping) -> "Polynomial":
        """Evaluate some variables at exact rationals; the rest stay formal."""
        if not assignment:
            return self
        values = {}
        for k, v in assignment.items():
            vi = k if isinstance(k, int) else self.vt.index(k)
            values[vi] = rational(v)
        out: dict = {}
        for m, c in self.terms.items():
            rest = []
            coef = c
            for v, e in m:
                if v in values:
                    coef = coef * values[v] ** e
                    if not coef:
                        break
                else:
                    rest.append((v, e))
            if not coef:
                continue
            key = tuple(rest)
            prev = out.get(key)
            nc = coef if prev is None else prev + coef
            if nc:
                out[key] = nc
            elif prev is not None:
                del out[key]
        return Polynomial(self.vt, out)

    def substitute_poly(self, assignment: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute whole polynomials for variables (graded composition)."""
        values: dict[int, Polynomial] = {}
        for k, v in assignment.items():
            vi = k if isinstance(k, int) else self.vt.index(k)
            if v.vt != self.vt:
                raise PolyError("substituted polynomial uses a different variable table")
            values[vi] = v
        out: dict = {}
        for m, c in self.terms.items():
            piece = {CONST_MONO: c}
            rest = []
            for v, e in m:
                if v in values:
                    piece = mul_terms(piece, (values[v] ** e).terms)
                    if not piece:
                        break
                else:
                    rest.append((v, e))
            if not piece:
                continue
            rest_m = tuple(rest)
            if rest_m:
                piece = {mono_mul(mm, rest_m): cc for mm, cc in piece.items()}
            add_into(out, piece)
        return Polynomial(self.vt, out)

    def restricted_to(self, vt: VarTable, index_map: Mapping[int, int]) -> "Polynomial":
        """Re-index onto another VarTable (chart embeddings)."""
        out = {}
        for m, c in self.terms.items():
            out[tuple(sorted((index_map[v], e) for v, e in m))] = c
        return Polynomial(vt, out)

    def rename_variables(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Permute variables within the same VarTable (label swaps)."""
        index_map = {self.vt.index(a): self.vt.index(b) for a, b in mapping.items()}
        if not index_map:
            return self
        out = {}
        for m, c in self.terms.items():
            out[tuple(sorted((index_map.get(v, v), e) for v, e in m))] = c
        return Polynomial(self.vt, out)

    # -- text ------------------------------------------------------------------

    def sorted_monomials(self) -> list[Mono]:
        n = len(self.vt)
        return sorted(self.terms, key=lambda m: _mono_sort_key(m, n))

    def format(self) -> str:
        if not self.terms:
            return "0"
        names = self.vt.names
        pieces = []
        for k, m in enumerate(self.sorted_monomials()):
            c = self.terms[m]
            neg = c < 0
            mag = -c if neg else c
            factors = []
            for v, e in m:
                factors.extend([names[v]] * e)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_rational(mag) + "*" + "*".join(factors)
            if k == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("-" if neg else "+") + body)
        return "".join(pieces)

    __str__ = format

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r})"


# -- parser -------------------------------------------------------------------

class _Parser:
    """Recursive descent over: expr := ['+'|'-'] term (('+'|'-') term)*
    term := factor (('*' | juxtaposition) factor)* ; factor := base ['^' int]
    base := rational | name | '(' expr ')'.
    """

    def __init__(self, text: str, vt: VarTable):
        self.text = text
        self.vt = vt
        self.pos = 0

    def parse(self) -> Polynomial:
        result = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        return result

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> Polynomial:
        ch = self._peek()
        sign = ONE
        while ch in "+-":
            if ch == "-":
                sign = -sign
            self.pos += 1
            ch = self._peek()
        result = self._term() * sign
        while True:
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                result = result + self._term()
            elif ch == "-":
                self.pos += 1
                result = result - self._term()
            else:
                return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                result = result * self._factor()
            elif ch and (ch.isalnum() or ch in "(_"):
                result = result * self._factor()
            else:
                return result

    def _factor(self) -> Polynomial:
        base = self._base()
        if self._peek() == "^":
            self.pos += 1
            exp = self._integer()
            base = base ** exp
        return base

    def _base(self) -> Polynomial:
        ch = self._peek()
        if ch == "(":
            open_pos = self.pos
            self.pos += 1
            inner = self._expr()
            if self._peek() != ")":
                raise ParseError("unbalanced parenthesis", open_pos)
            self.pos += 1
            return inner
        if ch.isdigit():
            return Polynomial.const(self.vt, self._rational())
        if ch.isalpha() or ch == "_":
            start = self.pos
            name = self._name()
            if name not in self.vt:
                raise ParseError(f"unknown variable {name!r}", start)
            return Polynomial.variable(self.vt, name)
        raise ParseError("expected a rational, a variable, or '('", self.pos)

    def _integer(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def _rational(self) -> Rational:
        num = self._integer()
        save = self.pos
        self._skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            self._skip_ws()
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                return rational(num, self._integer())
            self.pos = save
        return rational(num)

    def _name(self) -> str:
        start = self.pos
        text = self.text
        while self.pos < len(text) and (text[self.pos].isalnum() or text[self.pos] == "_"):
            self.pos += 1
        return text[start : self.pos]
