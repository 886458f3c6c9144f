"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial lives in a fixed :class:`CoordFrame` and is stored sparsely as a
map from exponent tuples to nonzero ``fractions.Fraction`` coefficients.  All
values are immutable after construction; operations are pure functions, so
instances are safe to share between threads.

Monomials are plain exponent tuples (one entry per frame variable).  Monomial
orders provide a flat integer sort key so that ``max(terms, key=order.key)``
picks the leading monomial; larger key means larger monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class FrameMismatchError(ValueError):
    """Raised when operands belong to distinct coordinate frames."""


class UnknownVariableError(ValueError):
    """Raised when a variable name is not part of the frame."""


class CoordFrame:
    """An ordered list of distinct variable names, fixed at construction."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in frame: {names}")
        if not all(isinstance(n, str) and n for n in names):
            raise ValueError("frame variable names must be nonempty strings")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, key, value):
        raise AttributeError("CoordFrame is immutable")

    @property
    def dimension(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownVariableError(f"variable {name!r} not in frame {self.names}") from None

    def extend(self, *extra: str) -> "CoordFrame":
        return CoordFrame(self.names + extra)

    def fresh_name(self, stem: str = "t") -> str:
        """A variable name not already used by this frame."""
        if stem not in self.index:
            return stem
        i = 0
        while f"{stem}{i}" in self.index:
            i += 1
        return f"{stem}{i}"

    def __eq__(self, other) -> bool:
        return isinstance(other, CoordFrame) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"CoordFrame({', '.join(self.names)})"


# ---------------------------------------------------------------------------
# monomials: plain exponent tuples

def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    """True when a | b, i.e. every exponent of a is <= that of b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(m: tuple) -> int:
    return sum(m)


def mono_coprime(a: tuple, b: tuple) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class MonomialOrder:
    """A total well-order on exponent tuples, compatible with multiplication.

    ``key(m)`` returns a flat tuple of ints; comparing keys with ``<``/``>``
    compares monomials.  Three kinds are provided: graded reverse
    lexicographic (the default), lexicographic, and a block elimination order
    that puts a chosen set of variable positions in a leading grevlex block.
    """

    __slots__ = ("kind", "block")

    def __init__(self, kind: str, block: tuple = ()):
        if kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order kind {kind!r}")
        self.kind = kind
        self.block = tuple(sorted(block))

    @staticmethod
    def grevlex() -> "MonomialOrder":
        return MonomialOrder("grevlex")

    @staticmethod
    def lex() -> "MonomialOrder":
        return MonomialOrder("lex")

    @staticmethod
    def block_elimination(first_block: Iterable[int]) -> "MonomialOrder":
        """Eliminates the variables at positions ``first_block``."""
        return MonomialOrder("elim", tuple(first_block))

    def key(self, m: tuple) -> tuple:
        if self.kind == "grevlex":
            return (sum(m),) + tuple(-e for e in reversed(m))
        if self.kind == "lex":
            return m
        block = self.block
        head = tuple(m[i] for i in block)
        tail = tuple(e for i, e in enumerate(m) if i not in block)
        return (
            (sum(head),) + tuple(-e for e in reversed(head))
            + (sum(tail),) + tuple(-e for e in reversed(tail))
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.block == other.block
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.block))

    def __repr__(self) -> str:
        if self.kind == "elim":
            return f"elim{list(self.block)}"
        return self.kind


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


@dataclass(frozen=True)
class Grading:
    """Homogeneity report: ``degree`` is None for the zero polynomial."""

    is_homogeneous: bool
    degree: int | None
    components: dict  # total degree -> Polynomial


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("frame", "terms", "_hash")

    def __init__(self, frame: CoordFrame, terms: Mapping[tuple, Scalar] | None = None,
                 _normalized: bool = False):
        object.__setattr__(self, "frame", frame)
        if terms is None:
            clean: dict = {}
        elif _normalized:
            clean = dict(terms)
        else:
            n = frame.dimension
            clean = {}
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"exponent tuple {m} does not match frame dimension {n}")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = Fraction(c)
                if c:
                    clean[tuple(m)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(frame: CoordFrame) -> "Polynomial":
        return Polynomial(frame, None, _normalized=True)

    @staticmethod
    def constant(frame: CoordFrame, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(frame)
        return Polynomial(frame, {(0,) * frame.dimension: c}, _normalized=True)

    @staticmethod
    def one(frame: CoordFrame) -> "Polynomial":
        return Polynomial.constant(frame, 1)

    @staticmethod
    def variable(frame: CoordFrame, name: str) -> "Polynomial":
        i = frame.index_of(name)
        m = tuple(1 if j == i else 0 for j in range(frame.dimension))
        return Polynomial(frame, {m: Fraction(1)}, _normalized=True)

    @staticmethod
    def variables(frame: CoordFrame) -> list["Polynomial"]:
        return [Polynomial.variable(frame, n) for n in frame.names]

    # -- basic queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int | None:
        """Total degree; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        """The coefficient of the constant monomial."""
        return self.terms.get((0,) * self.frame.dimension, Fraction(0))

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def coefficient(self, m: tuple) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def _check_frame(self, other: "Polynomial") -> None:
        if self.frame != other.frame:
            raise FrameMismatchError(
                f"operands in distinct frames: {self.frame.names} vs {other.frame.names}")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.frame, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_frame(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m)
            if v is None:
                res[m] = c
            else:
                v = v + c
                if v:
                    res[m] = v
                else:
                    del res[m]
        return Polynomial(self.frame, res, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.frame, {m: -c for m, c in self.terms.items()}, _normalized=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.frame, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Polynomial.zero(self.frame)
            return Polynomial(self.frame, {m: v * c for m, v in self.terms.items()},
                              _normalized=True)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_frame(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        res: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = res.get(m)
                if v is None:
                    res[m] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v:
                        res[m] = v
                    else:
                        del res[m]
        return Polynomial(self.frame, res, _normalized=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a non-negative integer")
        result = Polynomial.one(self.frame)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale_mono(self, c: Fraction, m: tuple) -> "Polynomial":
        """c * x^m * self (no normalization checks; hot path helper)."""
        if not c:
            return Polynomial.zero(self.frame)
        return Polynomial(
            self.frame,
            {tuple(x + y for x, y in zip(mm, m)): cc * c for mm, cc in self.terms.items()},
            _normalized=True,
        )

    # -- calculus ------------------------------------------------------------

    def diff(self, var: str) -> "Polynomial":
        """Formal partial derivative with respect to a frame variable."""
        i = self.frame.index_of(var)
        res: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                res[mm] = res.get(mm, Fraction(0)) + c * e
        return Polynomial(self.frame, {m: c for m, c in res.items() if c}, _normalized=True)

    def diff_index(self, i: int) -> "Polynomial":
        return self.diff(self.frame.names[i])

    def substitute(self, assignments: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables (used by oracle checks)."""
        for v in assignments:
            self.frame.index_of(v)
        images = []
        for i, name in enumerate(self.frame.names):
            if name in assignments:
                img = assignments[name]
                self._check_frame(img)
            else:
                img = Polynomial.variable(self.frame, name)
            images.append(img)
        total = Polynomial.zero(self.frame)
        for m, c in self.terms.items():
            piece = Polynomial.constant(self.frame, c)
            for i, e in enumerate(m):
                if e:
                    piece = piece * images[i] ** e
            total = total + piece
        return total

    # -- grading -------------------------------------------------------------

    def grading(self) -> Grading:
        comps: dict = {}
        for m, c in self.terms.items():
            d = sum(m)
            comps.setdefault(d, {})[m] = c
        parts = {
            d: Polynomial(self.frame, t, _normalized=True) for d, t in sorted(comps.items())
        }
        if not parts:
            return Grading(True, None, {})
        if len(parts) == 1:
            (d,) = parts
            return Grading(True, d, parts)
        return Grading(False, None, parts)

    @property
    def is_homogeneous(self) -> bool:
        return self.grading().is_homogeneous

    # -- leading data --------------------------------------------------------

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return Polynomial(self.frame, {m: c / lc for m, c in self.terms.items()},
                          _normalized=True)

    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        """Terms in descending monomial order.

        The default is the display order (total degree, then lexicographic),
        which is what the canonical text form uses.
        """
        if order is None:
            return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def sort_key(self, order: MonomialOrder = GREVLEX) -> tuple:
        """A total deterministic key usable to sort polynomials."""
        return tuple((order.key(m), c) for m, c in self.sorted_terms(order))

    # -- comparison / text ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.frame, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.frame == other.frame and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.frame, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def _term_text(self, m: tuple, c: Fraction) -> str:
        names = self.frame.names
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        mag = abs(c)
        if not factors:
            return str(mag)
        if mag != 1:
            factors.insert(0, str(mag))
        return "*".join(factors)

    def text(self, order: MonomialOrder | None = None) -> str:
        """Canonical form: descending terms, `p/q` coefficients, explicit `*`."""
        if not self.terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms(order)):
            body = self._term_text(m, c)
            if i == 0:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"Polynomial({self.text()})"
