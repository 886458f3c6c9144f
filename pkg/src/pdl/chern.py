"""Exact intersection arithmetic on projective space.

Chow classes are truncated integer/rational polynomials in the hyperplane
class H, with multiplication cut off above degree n.  The determinant class
of a skew bundle map, the expected codimensions, and the secant-variety
dimension and degree formulas live here.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence


class DegreeConsistencyError(AssertionError):
    """Two independent computations of an integer degree disagree."""


class ChowClass:
    """sum a_i H^i mod H^(n+1) on projective n-space."""

    __slots__ = ("n", "coefficients")

    def __init__(self, n: int, coefficients: Sequence = ()):
        if n < 0:
            raise ValueError("ambient projective dimension must be >= 0")
        coeffs = [Fraction(c) for c in coefficients]
        if len(coeffs) > n + 1:
            if any(coeffs[n + 1:]):
                raise ValueError("coefficients above degree n must vanish")
            coeffs = coeffs[: n + 1]
        coeffs += [Fraction(0)] * (n + 1 - len(coeffs))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __setattr__(self, key, value):
        raise AttributeError("ChowClass is immutable")

    @staticmethod
    def hyperplane(n: int, power: int = 1) -> "ChowClass":
        if power > n:
            return ChowClass(n)
        return ChowClass(n, [0] * power + [1])

    @staticmethod
    def unit(n: int) -> "ChowClass":
        return ChowClass(n, [1])

    def coefficient(self, i: int) -> Fraction:
        if not 0 <= i <= self.n:
            return Fraction(0)
        return self.coefficients[i]

    def integer_coefficient(self, i: int) -> int:
        c = self.coefficient(i)
        if c.denominator != 1:
            raise DegreeConsistencyError(f"degree coefficient {c} is not an integer")
        return c.numerator

    def _coerce(self, other) -> "ChowClass":
        if isinstance(other, ChowClass):
            if other.n != self.n:
                raise ValueError("classes live on distinct projective spaces")
            return other
        return ChowClass(self.n, [other])

    def __add__(self, other):
        other = self._coerce(other)
        return ChowClass(self.n, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.n, [-a for a in self.coefficients])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChowClass(self.n, [a * other for a in self.coefficients])
        other = self._coerce(other)
        out = [Fraction(0)] * (self.n + 1)
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                if b and i + j <= self.n:
                    out[i + j] += a * b
        return ChowClass(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ChowClass(self.n, [other])
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.n == other.n and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.n, self.coefficients))

    def __str__(self) -> str:
        pieces = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            if i == 0:
                pieces.append(str(c))
            elif i == 1:
                pieces.append(f"{c}*H" if c != 1 else "H")
            else:
                pieces.append(f"{c}*H^{i}" if c != 1 else f"H^{i}")
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"ChowClass({self})"


def chern_of_projective_space(n: int) -> list[ChowClass]:
    """Chern classes of the tangent bundle: c_j = C(n+1, j) H^j from (1+H)^(n+1)."""
    if n < 1:
        raise ValueError("projective dimension must be >= 1")
    return [comb(n + 1, j) * ChowClass.hyperplane(n, j) if j else ChowClass.unit(n)
            for j in range(n + 1)]


def expected_codim(r: int, k: int) -> int:
    """Expected codimension C(r-2k, 2) of the rank <= 2k locus of a skew map
    on a rank-r bundle."""
    if not (r >= 2 * k >= 0):
        raise ValueError("need r >= 2k >= 0")
    return comb(r - 2 * k, 2)


def degeneracy_class(c: Sequence[ChowClass], t: int) -> ChowClass:
    """det of the t x t matrix with entries c_{t - 2(i-1) + (j-1)} (1-based),
    with c_0 = 1 and c_i = 0 outside the supplied range."""
    if t < 1:
        raise ValueError("matrix size must be >= 1")
    if not c:
        raise ValueError("need at least c_0")
    n = c[0].n

    def cc(i: int) -> ChowClass:
        if i < 0 or i >= len(c):
            return ChowClass(n)
        return c[i]

    matrix = [[cc(t - 2 * i + j) for j in range(t)] for i in range(t)]
    return _chow_det(matrix, n)


def _chow_det(M: list[list[ChowClass]], n: int) -> ChowClass:
    size = len(M)
    memo: dict = {}

    def det(cols: tuple) -> ChowClass:
        row = size - len(cols)
        if not cols:
            return ChowClass.unit(n)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = ChowClass(n)
        for pos, j in enumerate(cols):
            term = M[row][j] * det(cols[:pos] + cols[pos + 1:])
            total = total + (term if pos % 2 == 0 else -term)
        memo[cols] = total
        return total

    return det(tuple(range(size)))


def sing_class_degree(n: int) -> int:
    """Degree of the codimension-3 class c_1 c_2 - c_3 on projective 2n-space,
    computed both by the closed formula 2 C(2n+2, 3) and as the H^3
    coefficient of the t=2 determinant class; the two must agree."""
    if n < 2:
        raise ValueError("need n >= 2")
    formula = 2 * comb(2 * n + 2, 3)
    c = chern_of_projective_space(2 * n)
    det = degeneracy_class(c, 2)
    coeff = det.integer_coefficient(3)
    if formula != coeff:
        raise DegreeConsistencyError(
            f"2*C(2n+2,3) = {formula} but the determinant class has H^3 "
            f"coefficient {coeff}")
    return formula


def secant_dimension(k: int) -> int:
    """Dimension 2k+1 of the k-th secant variety of an elliptic normal curve."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return 2 * k + 1


def secant_degree(d: int, k: int) -> int:
    """Degree C(d-k-2, k) + C(d-k-1, k+1) of the k-th secant variety of an
    elliptic normal curve of degree d."""
    if not (0 <= 2 * k < d - 1):
        raise ValueError(f"need 0 <= 2k < d-1; got d={d}, k={k}")
    return comb(d - k - 2, k) + comb(d - k - 1, k + 1)
