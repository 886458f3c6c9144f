"""Exterior calculus of polyvector fields and differential forms.

Both kinds are stored sparsely: a degree-k object maps strictly increasing
k-tuples of variable positions to polynomial components.  Degree 0 carries a
single component at the empty tuple; conversion to/from ``Polynomial`` is
explicit via ``scalar_vector`` / ``scalar_form`` / ``.scalar()``.

Sign conventions, fixed once for the whole package:

* interior contraction by a single vector field inserts into the first slot,
  so ``contract(d/dx_i, dx_{j1} ^ ... ^ dx_{jk})`` is ``(-1)^(m-1)`` times the
  form with slot m removed when ``i = j_m``; single one-forms insert into the
  first slot of a polyvector the same way;
* contraction by a wedge of polyvectors composes covariantly,
  ``iota_{U ^ V} = iota_U o iota_V``; contraction by a wedge of forms
  composes contravariantly, ``iota_{alpha ^ beta} = iota_beta o iota_alpha``;
* the duality pairing ``evaluate`` is the determinant pairing
  ``<d/dx_I, dx_I> = +1``; the contravariant form rule is exactly what makes
  the adjunction ``<contract(alpha, U), omega> = <U, alpha ^ omega>`` hold
  for every form degree.

Under these rules the full contraction of ``d/dx_I`` into ``dx_I`` equals
``(-1)^(k(k-1)/2)``, and the Schouten bracket below is the unique coordinate
formula satisfying the operator identity
``iota_[U,V] = [[iota_U, d], iota_V]`` (graded commutators); see
``schouten_oracle`` for the identity evaluated directly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Union

from .ring import CoordFrame, FrameMismatchError, Polynomial, Scalar

IndexTuple = tuple


def _merge_sign(I: tuple, J: tuple) -> tuple | None:
    """Merge two disjoint ascending tuples; returns (sign, merged) or None."""
    sign = 1
    merged = []
    i = j = 0
    while i < len(I) and j < len(J):
        a, b = I[i], J[j]
        if a == b:
            return None
        if a < b:
            merged.append(a)
            i += 1
        else:
            merged.append(b)
            j += 1
            if (len(I) - i) % 2:
                sign = -sign
    merged.extend(I[i:])
    merged.extend(J[j:])
    return sign, tuple(merged)


def _removal_sign(I: tuple, J: tuple, forward: bool = False) -> tuple | None:
    """Sign of the iterated first-slot contraction of basis element I into J.

    Each removal from the current tuple at 0-based position m contributes
    (-1)^m.  Polyvectors into forms compose covariantly (process I from its
    last entry to its first, matching iota_{U^V} = iota_U o iota_V); forms
    into polyvectors compose contravariantly (forward order), which is what
    makes the adjunction <iota_alpha U, omega> = <U, alpha ^ omega> exact.
    Returns (sign, remaining tuple) or None when I is not a subset of J.
    """
    sign = 1
    current = list(J)
    for idx in (I if forward else reversed(I)):
        try:
            pos = current.index(idx)
        except ValueError:
            return None
        if pos % 2:
            sign = -sign
        del current[pos]
    return sign, tuple(current)


class _Alternating:
    """Shared machinery for polyvectors and forms."""

    __slots__ = ("frame", "degree", "components", "_hash")
    kind = "alternating"

    def __init__(self, frame: CoordFrame, degree: int,
                 components: Mapping[IndexTuple, Polynomial] | None = None,
                 _normalized: bool = False):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "degree", degree)
        if components is None:
            clean: dict = {}
        elif _normalized:
            clean = dict(components)
        else:
            n = frame.dimension
            clean = {}
            for idx, p in components.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise ValueError(f"index tuple {idx} does not have degree {degree}")
                if any(not 0 <= i < n for i in idx):
                    raise ValueError(f"index out of range in {idx}")
                if list(idx) != sorted(set(idx)):
                    raise ValueError(f"index tuple {idx} must be strictly increasing")
                if not isinstance(p, Polynomial):
                    p = Polynomial.constant(frame, p)
                if p.frame != frame:
                    raise FrameMismatchError("component polynomial in a distinct frame")
                if p:
                    clean[idx] = p
        object.__setattr__(self, "components", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- basics ---------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def component(self, idx: Iterable[int]) -> Polynomial:
        return self.components.get(tuple(idx), Polynomial.zero(self.frame))

    def scalar(self) -> Polynomial:
        """The degree-0 content as a Polynomial (explicit conversion)."""
        if self.degree != 0:
            raise ValueError(f"degree-{self.degree} object is not a scalar")
        return self.components.get((), Polynomial.zero(self.frame))

    def _check(self, other: "_Alternating") -> None:
        if type(self) is not type(other):
            raise TypeError(f"cannot mix {type(self).__name__} with {type(other).__name__}")
        if self.frame != other.frame:
            raise FrameMismatchError("operands in distinct frames")

    # -- linear structure -------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        if self.degree != other.degree:
            if self.is_zero:
                return other
            if other.is_zero:
                return self
            raise ValueError("cannot add different degrees")
        res = dict(self.components)
        for idx, p in other.components.items():
            q = res.get(idx)
            s = p if q is None else q + p
            if s:
                res[idx] = s
            elif q is not None:
                del res[idx]
        return type(self)(self.frame, self.degree, res, _normalized=True)

    def __neg__(self):
        return type(self)(self.frame, self.degree,
                          {i: -p for i, p in self.components.items()}, _normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: Union[Polynomial, Scalar]):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.frame, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        res = {}
        for idx, p in self.components.items():
            q = p * other
            if q:
                res[idx] = q
        return type(self)(self.frame, self.degree, res, _normalized=True)

    __rmul__ = __mul__

    # -- wedge ------------------------------------------------------------------

    def wedge(self, other: "_Alternating") -> "_Alternating":
        self._check(other)
        deg = self.degree + other.degree
        res: dict = {}
        for I, p in self.components.items():
            for J, q in other.components.items():
                hit = _merge_sign(I, J)
                if hit is None:
                    continue
                sign, K = hit
                term = p * q if sign > 0 else -(p * q)
                prev = res.get(K)
                s = term if prev is None else prev + term
                if s:
                    res[K] = s
                elif prev is not None:
                    del res[K]
        return type(self)(self.frame, deg, res, _normalized=True)

    def __xor__(self, other):
        return self.wedge(other)

    def wedge_power(self, k: int) -> "_Alternating":
        if k < 0:
            raise ValueError("wedge power must be non-negative")
        result = type(self)(self.frame, 0, {(): Polynomial.one(self.frame)}, _normalized=True)
        for _ in range(k):
            result = result.wedge(self)
        return result

    # -- comparison / text -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Alternating):
            return NotImplemented
        if type(self) is not type(other):
            return False
        if self.is_zero and other.is_zero:
            return self.frame == other.frame
        return (self.frame == other.frame and self.degree == other.degree
                and self.components == other.components)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            if self.is_zero:
                h = hash((type(self).__name__, self.frame))
            else:
                h = hash((type(self).__name__, self.frame, self.degree,
                          frozenset(self.components.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def _basis_text(self, idx: tuple) -> str:
        raise NotImplementedError

    def text(self) -> str:
        """Canonical text: one summand per (monomial, basis wedge) pair."""
        if not self.components:
            return "0"
        pieces = []
        for idx in sorted(self.components):
            p = self.components[idx]
            basis = self._basis_text(idx)
            for m, c in p.sorted_terms():
                body = p._term_text(m, c)
                if self.degree == 0:
                    text = body
                elif body == "1":
                    text = basis
                else:
                    text = f"{body}*{basis}"
                if not pieces:
                    pieces.append(f"-{text}" if c < 0 else text)
                else:
                    pieces.append(f"- {text}" if c < 0 else f"+ {text}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.text()})"


class PolyVector(_Alternating):
    """Alternating k-multiderivation with polynomial coefficients."""

    __slots__ = ()
    kind = "vector"

    def _basis_text(self, idx: tuple) -> str:
        return " ^ ".join(f"d/d{self.frame.names[i]}" for i in idx)

    @staticmethod
    def zero(frame: CoordFrame, degree: int) -> "PolyVector":
        return PolyVector(frame, degree)

    @staticmethod
    def basis(frame: CoordFrame, indices: Iterable[int]) -> "PolyVector":
        idx = tuple(indices)
        return PolyVector(frame, len(idx), {idx: Polynomial.one(frame)})

    def apply_to_function(self, f: Polynomial) -> Polynomial:
        """Vector field applied to a function (degree 1 only)."""
        if self.degree != 1:
            raise ValueError("only degree-1 polyvectors act on functions")
        total = Polynomial.zero(self.frame)
        for (i,), p in self.components.items():
            total = total + p * f.diff_index(i)
        return total


class DiffForm(_Alternating):
    """Differential k-form with polynomial coefficients.

    Nonzero forms of degree above the frame dimension cannot exist (index
    tuples are strictly increasing), so no explicit degree cap is enforced;
    zero forms of overflow degree appear as intermediate values of d.
    """

    __slots__ = ()
    kind = "form"

    def _basis_text(self, idx: tuple) -> str:
        return " ^ ".join(f"d{self.frame.names[i]}" for i in idx)

    @staticmethod
    def zero(frame: CoordFrame, degree: int) -> "DiffForm":
        return DiffForm(frame, degree)

    @staticmethod
    def basis(frame: CoordFrame, indices: Iterable[int]) -> "DiffForm":
        idx = tuple(indices)
        return DiffForm(frame, len(idx), {idx: Polynomial.one(frame)})


def scalar_vector(p: Polynomial) -> PolyVector:
    """Explicit conversion of a polynomial to a degree-0 polyvector."""
    return PolyVector(p.frame, 0, {(): p}) if p else PolyVector(p.frame, 0)


def scalar_form(p: Polynomial) -> DiffForm:
    return DiffForm(p.frame, 0, {(): p}) if p else DiffForm(p.frame, 0)


def volume_form(frame: CoordFrame) -> DiffForm:
    return DiffForm.basis(frame, range(frame.dimension))


def wedge(a: _Alternating, b: _Alternating) -> _Alternating:
    return a.wedge(b)


# ---------------------------------------------------------------------------
# contraction and pairing

def _contract_into(inner: _Alternating, outer: _Alternating, result_type) -> _Alternating:
    lowered: dict = {}
    frame = outer.frame
    forward = isinstance(inner, DiffForm)
    for I, p in inner.components.items():
        for J, q in outer.components.items():
            hit = _removal_sign(I, J, forward)
            if hit is None:
                continue
            sign, rest = hit
            term = p * q if sign > 0 else -(p * q)
            prev = lowered.get(rest)
            s = term if prev is None else prev + term
            if s:
                lowered[rest] = s
            elif prev is not None:
                del lowered[rest]
    return result_type(frame, outer.degree - inner.degree, lowered, _normalized=True)


def _contract_or_zero(inner: _Alternating, outer: _Alternating, result_type) -> _Alternating:
    """Operator semantics: contraction annihilates lower-degree arguments."""
    if inner.degree > outer.degree:
        return result_type(outer.frame, 0)
    return _contract_into(inner, outer, result_type)


def contract(a: _Alternating, b: _Alternating) -> _Alternating:
    """Interior contraction under the package convention.

    ``contract(U, omega)`` lowers a form by a polyvector and returns a form of
    degree ``deg omega - deg U``; ``contract(alpha, U)`` lowers a polyvector by
    a form.  Equal degrees produce a degree-0 object; note that the full
    contraction of ``d/dx_I`` into ``dx_I`` is ``(-1)^(k(k-1)/2)``, not +1
    (use :func:`evaluate` for the determinant pairing).
    """
    if a.frame != b.frame:
        raise FrameMismatchError("operands in distinct frames")
    if isinstance(a, PolyVector) and isinstance(b, DiffForm):
        if a.degree > b.degree:
            raise ValueError(f"cannot contract degree {a.degree} into degree {b.degree}")
        return _contract_into(a, b, DiffForm)
    if isinstance(a, DiffForm) and isinstance(b, PolyVector):
        if a.degree > b.degree:
            raise ValueError(f"cannot contract degree {a.degree} into degree {b.degree}")
        return _contract_into(a, b, PolyVector)
    raise TypeError("contract expects one polyvector and one form")


def evaluate(U: PolyVector, omega: DiffForm) -> Polynomial:
    """Determinant duality pairing of equal degrees: <d/dx_I, dx_I> = 1."""
    if U.frame != omega.frame:
        raise FrameMismatchError("operands in distinct frames")
    if U.degree != omega.degree:
        raise ValueError("evaluate needs equal degrees")
    total = Polynomial.zero(U.frame)
    small, large = (U.components, omega.components)
    if len(small) > len(large):
        small, large = large, small
    for idx, p in small.items():
        q = large.get(idx)
        if q is not None:
            total = total + p * q
    return total


def reversal_sign(k: int) -> int:
    """Full-contraction sign (-1)^(k(k-1)/2) relating contract and evaluate."""
    return -1 if (k * (k - 1) // 2) % 2 else 1


# ---------------------------------------------------------------------------
# derivatives

def exterior_d(omega: DiffForm) -> DiffForm:
    frame = omega.frame
    res: dict = {}
    for J, p in omega.components.items():
        for i in range(frame.dimension):
            dp = p.diff_index(i)
            if not dp:
                continue
            hit = _merge_sign((i,), J)
            if hit is None:
                continue
            sign, K = hit
            term = dp if sign > 0 else -dp
            prev = res.get(K)
            s = term if prev is None else prev + term
            if s:
                res[K] = s
            elif prev is not None:
                del res[K]
    return DiffForm(frame, omega.degree + 1, res, _normalized=True)


def _partial(T: _Alternating, i: int) -> _Alternating:
    return type(T)(T.frame, T.degree,
                   {idx: q for idx, p in T.components.items() if (q := p.diff_index(i))},
                   _normalized=True)


def schouten(U: PolyVector, V: PolyVector) -> PolyVector:
    """Schouten bracket by the coordinate formula

    ``[U,V] = (-1)^(u+1) sum_i ( iota_{dx_i}U ^ dV/dx_i
                                 + (-1)^(uv) iota_{dx_i}V ^ dU/dx_i )``.

    Extends the Lie bracket of vector fields; degree is u + v - 1.
    """
    if U.frame != V.frame:
        raise FrameMismatchError("operands in distinct frames")
    u, v = U.degree, V.degree
    if u == 0 and v == 0:
        return PolyVector(U.frame, 0)
    frame = U.frame
    sign_out = -1 if (u + 1) % 2 else 1
    sign_cross = -1 if (u * v) % 2 else 1
    total = PolyVector(frame, u + v - 1)
    for i in range(frame.dimension):
        alpha = DiffForm.basis(frame, (i,))
        dU = _contract_or_zero(alpha, U, PolyVector)
        pV = _partial(V, i)
        if dU and pV:
            total = total + sign_out * dU.wedge(pV)
        dV = _contract_or_zero(alpha, V, PolyVector)
        pU = _partial(U, i)
        if dV and pU:
            total = total + (sign_out * sign_cross) * dV.wedge(pU)
    return total


def schouten_oracle(U: PolyVector, V: PolyVector) -> PolyVector:
    """Second, independent bracket: the operator identity

    ``iota_[U,V] = [[iota_U, d], iota_V]``

    evaluated on every constant basis form of matching degree; components are
    read off through the full-contraction sign.
    """
    if U.frame != V.frame:
        raise FrameMismatchError("operands in distinct frames")
    frame = U.frame
    u, v = U.degree, V.degree
    if u == 0 and v == 0:
        return PolyVector(frame, 0)
    w = u + v - 1
    eps = reversal_sign(w)

    def bracket_iU_d(omega: DiffForm) -> DiffForm:
        # [iota_U, d] = iota_U d - (-1)^u d iota_U
        first = _contract_or_zero(U, exterior_d(omega), DiffForm)
        second = exterior_d(_contract_or_zero(U, omega, DiffForm))
        return first - second if u % 2 == 0 else first + second

    comps: dict = {}
    outer_sign = 1 if ((u + 1) * v) % 2 == 0 else -1
    for idx in combinations(range(frame.dimension), w):
        omega = DiffForm.basis(frame, idx)
        val = bracket_iU_d(_contract_or_zero(V, omega, DiffForm)) \
            - outer_sign * _contract_or_zero(V, bracket_iU_d(omega), DiffForm)
        p = val.scalar() if val.degree == 0 else Polynomial.zero(frame)
        if p:
            comps[idx] = p if eps > 0 else -p
    return PolyVector(frame, w, comps, _normalized=True)


def lie_derivative(Z: PolyVector, T: _Alternating) -> _Alternating:
    """Lie derivative along a vector field: Cartan's formula on forms, the
    Schouten bracket on polyvectors."""
    if Z.degree != 1:
        raise ValueError("lie_derivative needs a degree-1 polyvector")
    if isinstance(T, DiffForm):
        return _contract_or_zero(Z, exterior_d(T), DiffForm) \
            + exterior_d(_contract_or_zero(Z, T, DiffForm))
    if isinstance(T, PolyVector):
        return schouten(Z, T)
    raise TypeError("lie_derivative expects a polyvector or a form")


# ---------------------------------------------------------------------------
# jet derivative and trace contraction

class JetTensor:
    """One tensor slot per frame variable: the componentwise derivative of a
    polyvector, an element of (1-forms) x (degree-m polyvectors)."""

    __slots__ = ("frame", "degree", "slots")

    def __init__(self, frame: CoordFrame, degree: int, slots: Mapping[int, PolyVector]):
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "degree", degree)
        clean = {}
        for i, V in slots.items():
            if V.frame != frame or (V and V.degree != degree):
                raise ValueError("jet tensor slots must share frame and degree")
            if V:
                clean[i] = V
        object.__setattr__(self, "slots", clean)

    def __setattr__(self, key, value):
        raise AttributeError("JetTensor is immutable")

    def slot(self, i: int) -> PolyVector:
        return self.slots.get(i, PolyVector(self.frame, self.degree))

    @property
    def is_zero(self) -> bool:
        return not self.slots

    def __eq__(self, other) -> bool:
        return (isinstance(other, JetTensor) and self.frame == other.frame
                and self.degree == other.degree and self.slots == other.slots)

    def __repr__(self) -> str:
        inner = ", ".join(f"d{self.frame.names[i]} (x) {V}" for i, V in sorted(self.slots.items()))
        return f"JetTensor({inner or '0'})"


def jet_derivative(V: PolyVector) -> JetTensor:
    """The full tensor of componentwise partials of V."""
    frame = V.frame
    slots = {}
    for i in range(frame.dimension):
        dV = _partial(V, i)
        if dV:
            slots[i] = dV
    return JetTensor(frame, V.degree, slots)


def trace_contraction(T: JetTensor) -> PolyVector:
    """``sum_i contract(dx_i, T(x_i))``, lowering the polyvector degree by one."""
    if T.degree < 1:
        raise ValueError("trace contraction needs polyvector degree >= 1")
    frame = T.frame
    total = PolyVector(frame, T.degree - 1)
    for i, V in sorted(T.slots.items()):
        total = total + _contract_into(DiffForm.basis(frame, (i,)), V, PolyVector)
    return total
