"""Expression and session parser.

Grammar (EBNF; whitespace-insensitive, `#` comments run to end of line):

    session    = { statement } ;
    statement  = frame-decl | sigma-decl | ideal-decl | field-decl
               | constants-decl ;
    frame-decl = "frame" ident { "," ident } ";" ;
    sigma-decl = "sigma" "=" expr ";" ;                    (* degree-2 polyvector *)
    ideal-decl = "ideal" ident "=" expr { "," expr } ";" ; (* polynomial entries *)
    field-decl = "field" ident "=" expr ";" ;              (* degree-1 polyvector *)
    constants-decl = "constants" string ";" ;              (* structure constants file *)

    expr       = [ "-" ] term { ( "+" | "-" ) term } ;
    term       = power { "*" power } ;
    power      = atom { "^" atom } ;
    atom       = number | ident | dvec | dform | "(" expr ")" ;
    number     = digits [ "/" digits ] ;
    dvec       = "d/d" ident ;                             (* basis vector field *)
    dform      = "d" ident ;                               (* basis one-form *)

`^` is exponentiation between scalars (the exponent must be a non-negative
integer constant) and the wedge product between algebra elements; it binds
tighter than `*`.  An identifier is a frame variable; `d`+variable is the
matching one-form unless that spelled-out name is itself a frame variable.
Vector fields and forms cannot be mixed in one expression.

Structure-constants files contain an optional `dim N` line followed by lines

    [i, j] = c1*x1 + c2*x2 + ...

with 1-based indices i < j and coordinates named x1..xN.

Parse errors carry 1-based line and column positions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .exterior import DiffForm, PolyVector
from .ring import CoordFrame, Polynomial

Value = Union[Polynomial, PolyVector, DiffForm]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<dvec>d/d[A-Za-z_]\w*)
      | (?P<number>\d+)
      | (?P<ident>[A-Za-z_]\w*)
      | (?P<string>"[^"\n]*")
      | (?P<op>[-+*^/=,;()\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class SessionInput:
    """A parsed session: frame, optional structure, named ideals and fields."""

    frame: CoordFrame | None = None
    sigma: PolyVector | None = None
    sigma_text: str | None = None
    ideals: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)
    constants_path: str | None = None
    catalog_name: str | None = None
    warnings: list = field(default_factory=list)


class _Parser:
    def __init__(self, tokens: list[Token], frame: CoordFrame | None = None):
        self.tokens = tokens
        self.pos = 0
        self.frame = frame
        self.warnings: list[str] = []

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok.value or 'end of input'!r}",
                             tok.line, tok.col)
        return self.next()

    def accept(self, kind: str, value: str | None = None) -> Token | None:
        tok = self.peek()
        if tok.kind == kind and (value is None or tok.value == value):
            return self.next()
        return None

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    # -- expressions -----------------------------------------------------------

    def _need_frame(self, tok: Token) -> CoordFrame:
        if self.frame is None:
            self.fail("no frame declared before expressions", tok)
        return self.frame

    def parse_expression(self) -> Value:
        tok = self.peek()
        negate = bool(self.accept("op", "-"))
        value = self.parse_term()
        if negate:
            value = -value if isinstance(value, Polynomial) else (-1) * value
        while True:
            if self.accept("op", "+"):
                value = self._combine(value, self.parse_term(), 1, tok)
            elif self.accept("op", "-"):
                value = self._combine(value, self.parse_term(), -1, tok)
            else:
                return value

    def _combine(self, a: Value, b: Value, sign: int, tok: Token) -> Value:
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            return a + sign * b
        if isinstance(a, Polynomial) or isinstance(b, Polynomial):
            poly, alg = (a, b) if isinstance(a, Polynomial) else (b, a)
            if not poly:
                return alg if (a is alg or sign > 0) else (-1) * alg
            if not alg:
                return poly if a is poly else sign * poly
            self.fail("cannot add a polynomial and an algebra element", tok)
        if type(a) is not type(b):
            self.fail("cannot add a vector field and a differential form", tok)
        if a.degree != b.degree and a and b:
            self.fail(f"cannot add degrees {a.degree} and {b.degree}", tok)
        return a + (sign * b)

    def parse_term(self) -> Value:
        value = self.parse_power()
        while self.accept("op", "*"):
            value = self._multiply(value, self.parse_power())
        return value

    def _multiply(self, a: Value, b: Value) -> Value:
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            return a * b
        if isinstance(a, Polynomial):
            return b * a
        if isinstance(b, Polynomial):
            return a * b
        self.fail("use ^ to wedge algebra elements, * only scales by polynomials")

    def parse_power(self) -> Value:
        tok = self.peek()
        value = self.parse_atom()
        while self.accept("op", "^"):
            rhs_tok = self.peek()
            rhs = self.parse_atom()
            value = self._power(value, rhs, tok, rhs_tok)
        return value

    def _power(self, base: Value, exponent: Value, tok: Token, rhs_tok: Token) -> Value:
        if isinstance(base, Polynomial) and isinstance(exponent, Polynomial):
            if not exponent.is_constant():
                self.fail("exponent must be a constant integer", rhs_tok)
            e = exponent.constant_value()
            if e.denominator != 1 or e < 0:
                self.fail("exponent must be a non-negative integer", rhs_tok)
            return base ** int(e)
        if isinstance(base, Polynomial) or isinstance(exponent, Polynomial):
            if isinstance(exponent, Polynomial) and exponent.is_constant():
                e = exponent.constant_value()
                if e.denominator == 1 and e >= 0:
                    return wedge_power(base, int(e))
            self.fail("cannot wedge a polynomial with an algebra element", rhs_tok)
        if type(base) is not type(exponent):
            self.fail("cannot wedge a vector field with a differential form", rhs_tok)
        result = base.wedge(exponent)
        if not result and base and exponent:
            self.warnings.append(
                f"line {tok.line}, col {tok.col}: wedge product is identically zero")
        return result

    def parse_atom(self) -> Value:
        tok = self.peek()
        if self.accept("op", "("):
            value = self.parse_expression()
            self.expect("op", ")")
            return value
        if tok.kind == "number":
            self.next()
            num = int(tok.value)
            if self.accept("op", "/"):
                den_tok = self.expect("number")
                den = int(den_tok.value)
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return Polynomial.constant(self._need_frame(tok), Fraction(num, den))
            return Polynomial.constant(self._need_frame(tok), num)
        if tok.kind == "dvec":
            self.next()
            frame = self._need_frame(tok)
            name = tok.value[3:]
            if name not in frame.index:
                self.fail(f"unknown variable {name!r} in {tok.value}", tok)
            return PolyVector.basis(frame, (frame.index_of(name),))
        if tok.kind == "ident":
            self.next()
            frame = self._need_frame(tok)
            name = tok.value
            if name in frame.index:
                return Polynomial.variable(frame, name)
            if name.startswith("d") and name[1:] in frame.index:
                return DiffForm.basis(frame, (frame.index_of(name[1:]),))
            self.fail(f"unknown identifier {name!r}", tok)
        self.fail(f"unexpected {tok.value or 'end of input'!r}")

    # -- statements ---------------------------------------------------------------

    def parse_session(self) -> SessionInput:
        session = SessionInput()
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "ident":
                self.fail("expected a statement keyword")
            keyword = tok.value
            if keyword == "frame":
                self.next()
                names = [self.expect("ident").value]
                while self.accept("op", ","):
                    names.append(self.expect("ident").value)
                self.expect("op", ";")
                if session.frame is not None:
                    self.fail("frame already declared", tok)
                try:
                    session.frame = CoordFrame(names)
                except ValueError as exc:
                    raise ParseError(str(exc), tok.line, tok.col) from None
                self.frame = session.frame
            elif keyword == "sigma":
                self.next()
                self.expect("op", "=")
                start = self.pos
                value = self.parse_expression()
                self.expect("op", ";")
                value = as_polyvector(value, degree=2)
                if value is None:
                    self.fail("sigma must be a degree-2 polyvector", tok)
                session.sigma = value
                session.sigma_text = _span_text(self.tokens[start:self.pos - 1])
            elif keyword == "ideal":
                self.next()
                name = self.expect("ident").value
                self.expect("op", "=")
                gens = [self._parse_poly_entry()]
                while self.accept("op", ","):
                    gens.append(self._parse_poly_entry())
                self.expect("op", ";")
                session.ideals[name] = gens
            elif keyword == "field":
                self.next()
                name = self.expect("ident").value
                self.expect("op", "=")
                value = self.parse_expression()
                self.expect("op", ";")
                value = as_polyvector(value, degree=1)
                if value is None:
                    self.fail("a field must be a degree-1 polyvector", tok)
                session.fields[name] = value
            elif keyword == "constants":
                self.next()
                path = self.expect("string").value.strip('"')
                self.expect("op", ";")
                session.constants_path = path
            else:
                self.fail(f"unknown statement keyword {keyword!r}", tok)
        session.warnings = list(self.warnings)
        return session

    def _parse_poly_entry(self) -> Polynomial:
        tok = self.peek()
        value = self.parse_expression()
        if isinstance(value, Polynomial):
            return value
        if value.degree == 0:
            return value.scalar()
        self.fail("ideal generators must be polynomials", tok)


def _span_text(tokens: list[Token]) -> str:
    return " ".join(t.value for t in tokens)


def as_polyvector(v: Value, degree: int) -> PolyVector | None:
    """Coerce a parsed value to a polyvector of the given degree, when sound."""
    if isinstance(v, PolyVector):
        if v.degree == degree or v.is_zero:
            return PolyVector(v.frame, degree, v.components if v.degree == degree else {},
                              _normalized=True)
        return None
    if isinstance(v, Polynomial) and v.is_zero:
        return PolyVector(v.frame, degree)
    return None


def parse_expression(source: str, frame: CoordFrame) -> Value:
    parser = _Parser(tokenize(source), frame)
    value = parser.parse_expression()
    parser.expect("eof")
    return value


def parse_polynomial(source: str, frame: CoordFrame) -> Polynomial:
    value = parse_expression(source, frame)
    if isinstance(value, Polynomial):
        return value
    if value.degree == 0:
        return value.scalar()
    raise ParseError("expected a polynomial", 1, 1)


def parse_session(source: str) -> SessionInput:
    return _Parser(tokenize(source)).parse_session()


# ---------------------------------------------------------------------------
# ideal text round-trip

_IDEAL_HEADER = re.compile(r"^ideal over frame (?P<names>[^;]+); order (?P<order>.+)$")


def parse_ideal_text(text: str):
    """Inverse of Ideal.text(): header line then one polynomial per line."""
    from .groebner import Ideal

    lines = [ln for ln in text.strip().splitlines()]
    if not lines:
        raise ParseError("empty ideal text", 1, 1)
    m = _IDEAL_HEADER.match(lines[0].strip())
    if m is None:
        raise ParseError("malformed ideal header", 1, 1)
    frame = CoordFrame([n.strip() for n in m.group("names").split(",")])
    gens = []
    for offset, ln in enumerate(lines[1:], start=2):
        ln = ln.strip()
        if not ln or ln == "0":
            continue
        try:
            gens.append(parse_polynomial(ln, frame))
        except ParseError as exc:
            raise ParseError(f"in ideal line: {exc}", offset, 1) from None
    return Ideal(frame, gens)


# ---------------------------------------------------------------------------
# structure-constants files

_BRACKET_LINE = re.compile(r"^\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.+)$")


def parse_structure_constants(text: str):
    """Parse `[i,j] = c1*x1 + ...` lines into StructureConstants (1-based i,j)."""
    from .poisson import StructureConstants

    entries: dict = {}
    dim = 0
    explicit_dim = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dim"):
            explicit_dim = int(line.split()[1])
            continue
        m = _BRACKET_LINE.match(line)
        if m is None:
            raise ParseError(f"malformed bracket line: {line!r}", lineno, 1)
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if i >= j:
            raise ParseError(f"bracket indices must satisfy i < j: {line!r}", lineno, 1)
        row: dict = {}
        for part in _split_linear(m.group(3), lineno):
            coeff, k = part
            row[k] = row.get(k, Fraction(0)) + coeff
        entries[(i, j)] = row
        dim = max(dim, i + 1, j + 1, *[k + 1 for k in row])
    if explicit_dim is not None:
        if explicit_dim < dim:
            raise ParseError("declared dim is smaller than used indices", 1, 1)
        dim = explicit_dim
    return StructureConstants(dim, entries)


_LINEAR_TERM = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?:(?P<num>\d+)(?:/(?P<den>\d+))?\s*\*?\s*)?x(?P<idx>\d+)\s*")


def _split_linear(text: str, lineno: int = 1) -> list[tuple[Fraction, int]]:
    out = []
    rest = text
    first = True
    while rest.strip():
        m = _LINEAR_TERM.match(rest)
        if m is None or (not first and m.group("sign") == ""):
            raise ParseError(f"malformed linear combination near {rest.strip()!r}", lineno, 1)
        sign = -1 if m.group("sign") == "-" else 1
        num = int(m.group("num")) if m.group("num") else 1
        den = int(m.group("den")) if m.group("den") else 1
        out.append((Fraction(sign * num, den), int(m.group("idx")) - 1))
        rest = rest[m.end():]
        first = False
    if not out:
        raise ParseError(f"empty linear combination: {text!r}", lineno, 1)
    return out


def wedge_power(value: Value, k: int) -> Value:
    if isinstance(value, Polynomial):
        return value ** k
    return value.wedge_power(k)
