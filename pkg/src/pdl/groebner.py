"""Ideal arithmetic: Buchberger's algorithm, membership, elimination, Hilbert data.

The basis computation is a classical Buchberger loop with Gebauer-Moller
S-pair elimination and the normal selection strategy.  Everything is
deterministic: generators are pre-sorted, pairs are processed in a fixed
total order, and the final basis is the unique reduced basis for the ideal
and order.  A reduction-step budget guards against runaway computations.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ring import (
    GREVLEX,
    CoordFrame,
    MonomialOrder,
    Polynomial,
    mono_coprime,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_BUDGET = 10_000_000

_default_budget_steps = DEFAULT_BUDGET


def set_default_budget(steps: int) -> None:
    """Override the default reduction-step budget for new computations."""
    global _default_budget_steps
    if steps <= 0:
        raise ValueError("budget must be positive")
    _default_budget_steps = steps


def get_default_budget() -> int:
    return _default_budget_steps


class BudgetExhausted(RuntimeError):
    """A computation exceeded its reduction-step budget."""

    def __init__(self, limit: int):
        super().__init__(f"reduction-step budget of {limit} exhausted")
        self.limit = limit


class Budget:
    """A mutable countdown of reduction steps."""

    __slots__ = ("limit", "remaining")

    def __init__(self, steps: int | None = None):
        self.limit = _default_budget_steps if steps is None else steps
        self.remaining = self.limit

    def spend(self, n: int = 1) -> None:
        self.remaining -= n
        if self.remaining < 0:
            raise BudgetExhausted(self.limit)


# ---------------------------------------------------------------------------
# division

def _neg_key(key: tuple) -> tuple:
    return tuple(-x for x in key)


def reduce_full(p: Polynomial, reducers: Sequence[Polynomial],
                order: MonomialOrder = GREVLEX, budget: Budget | None = None) -> Polynomial:
    """Remainder of full multivariate division of p by the reducer list.

    Every term of the remainder is divisible by no reducer leading monomial;
    the result is the canonical normal form when the reducers form a
    Groebner basis.
    """
    if budget is None:
        budget = Budget()
    key = order.key
    red = [(g.leading_monomial(order), g.leading_coefficient(order), g.terms) for g in reducers if g]
    work = dict(p.terms)
    heap = [(_neg_key(key(m)), m) for m in work]
    heapq.heapify(heap)
    remainder: dict = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = work.get(m)
        if c is None:
            continue
        del work[m]
        budget.spend()
        hit = None
        for lm, lc, terms in red:
            if mono_divides(lm, m):
                hit = (lm, lc, terms)
                break
        if hit is None:
            remainder[m] = c
            continue
        lm, lc, terms = hit
        q = mono_div(m, lm)
        qc = c / lc
        for m2, c2 in terms.items():
            if m2 == lm:
                continue
            mm = mono_mul(m2, q)
            prev = work.get(mm)
            if prev is None:
                v = -qc * c2
                if v:
                    work[mm] = v
                    heapq.heappush(heap, (_neg_key(key(mm)), mm))
            else:
                v = prev - qc * c2
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    return Polynomial(p.frame, remainder, _normalized=True)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    lf = f.leading_monomial(order)
    lg = g.leading_monomial(order)
    lcm = mono_lcm(lf, lg)
    a = f.scale_mono(1 / f.leading_coefficient(order), mono_div(lcm, lf))
    b = g.scale_mono(1 / g.leading_coefficient(order), mono_div(lcm, lg))
    return a - b


def _autoreduce(polys: list[Polynomial], order: MonomialOrder, budget: Budget) -> list[Polynomial]:
    """Inter-reduce a list until every element is reduced against the others."""
    polys = sorted((p.monic(order) for p in polys if p), key=lambda q: q.sort_key(order))
    changed = True
    while changed:
        changed = False
        out: list[Polynomial] = []
        for i, p in enumerate(polys):
            others = out + polys[i + 1:]
            r = reduce_full(p, others, order, budget)
            if r != p:
                changed = True
            if r:
                out.append(r.monic(order))
        polys = sorted(out, key=lambda q: q.sort_key(order))
    return polys


def buchberger(gens: Iterable[Polynomial], order: MonomialOrder = GREVLEX,
               budget: Budget | None = None) -> "GroebnerBasis":
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if g is not None and g]
    if budget is None:
        budget = Budget()
    if not gens:
        raise ValueError("buchberger needs a frame; pass at least the zero ideal via Ideal")
    frame = gens[0].frame
    for g in gens:
        if g.frame != frame:
            raise ValueError("generators must share a frame")
    return _buchberger_frame(frame, gens, order, budget)


def _buchberger_frame(frame: CoordFrame, gens: list[Polynomial], order: MonomialOrder,
                      budget: Budget) -> "GroebnerBasis":
    basis = _autoreduce(list(gens), order, budget)
    if not basis:
        return GroebnerBasis(frame, order, ())

    key = order.key
    lms = [g.leading_monomial(order) for g in basis]
    pairs: set[tuple[int, int]] = set()
    for j in range(len(basis)):
        pairs = _gm_update(pairs, lms, j)

    def pair_rank(pr: tuple[int, int]) -> tuple:
        lcm = mono_lcm(lms[pr[0]], lms[pr[1]])
        return (mono_degree(lcm), key(lcm), pr)

    while pairs:
        best = min(pairs, key=pair_rank)
        pairs.discard(best)
        i, j = best
        sp = s_polynomial(basis[i], basis[j], order)
        h = reduce_full(sp, basis, order, budget)
        if not h:
            continue
        basis.append(h.monic(order))
        lms.append(h.leading_monomial(order))
        pairs = _gm_update(pairs, lms, len(basis) - 1)

    reduced = _autoreduce(basis, order, budget)
    return GroebnerBasis(frame, order, tuple(reduced))


def _gm_update(pairs: set[tuple[int, int]], lms: list[tuple], t: int) -> set[tuple[int, int]]:
    """Gebauer-Moller pair update after appending element ``t``."""
    lt = lms[t]
    fresh = []
    for i in range(t):
        fresh.append((mono_lcm(lms[i], lt), i))

    def strictly_divides(a: tuple, b: tuple) -> bool:
        return a != b and mono_divides(a, b)

    # M criterion: drop (i,t) when another new pair has a strictly smaller lcm.
    survivors = []
    for lcm_i, i in fresh:
        if any(strictly_divides(lcm_j, lcm_i) for lcm_j, j in fresh if j != i):
            continue
        survivors.append((lcm_i, i))
    # F criterion: one representative per lcm value, preferring a coprime pair
    # (which the B criterion then discards).
    by_lcm: dict[tuple, list[int]] = {}
    for lcm_i, i in survivors:
        by_lcm.setdefault(lcm_i, []).append(i)
    new_pairs: set[tuple[int, int]] = set()
    for lcm_i, idxs in by_lcm.items():
        coprime = [i for i in idxs if mono_coprime(lms[i], lt)]
        if coprime:
            continue  # B criterion
        new_pairs.add((min(idxs), t))
    # chain criterion on the old pairs
    kept: set[tuple[int, int]] = set()
    for (i, j) in pairs:
        lcm_ij = mono_lcm(lms[i], lms[j])
        if (mono_divides(lt, lcm_ij)
                and mono_lcm(lms[i], lt) != lcm_ij
                and mono_lcm(lms[j], lt) != lcm_ij):
            continue
        kept.add((i, j))
    return kept | new_pairs


class GroebnerBasis:
    """A reduced, monic Groebner basis for a fixed monomial order."""

    __slots__ = ("frame", "order", "elements", "_lms")

    def __init__(self, frame: CoordFrame, order: MonomialOrder, elements: tuple):
        self.frame = frame
        self.order = order
        self.elements = tuple(elements)
        self._lms = tuple(g.leading_monomial(order) for g in self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def leading_monomials(self) -> tuple:
        return self._lms

    def normal_form(self, p: Polynomial, budget: Budget | None = None) -> Polynomial:
        if p.frame != self.frame:
            raise ValueError("polynomial frame does not match basis frame")
        return reduce_full(p, self.elements, self.order, budget)

    def contains(self, p: Polynomial, budget: Budget | None = None) -> bool:
        return not self.normal_form(p, budget)

    @property
    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def text(self) -> str:
        header = f"ideal over frame {', '.join(self.frame.names)}; order {self.order!r}"
        lines = [g.text() for g in self.elements]
        return "\n".join([header] + (lines or ["0"]))

    def __repr__(self) -> str:
        return f"GroebnerBasis({[str(g) for g in self.elements]})"


def normal_form(p: Polynomial, basis: GroebnerBasis, budget: Budget | None = None) -> Polynomial:
    return basis.normal_form(p, budget)


class Ideal:
    """A polynomial ideal given by generators, with a cached reduced basis."""

    __slots__ = ("frame", "generators", "_cache", "_lock")

    def __init__(self, frame: CoordFrame, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                raise TypeError("ideal generators must be polynomials")
            if g.frame != frame:
                raise ValueError("ideal generators must live in the ideal's frame")
            if g:
                gens.append(g)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_lock", threading.Lock())

    def __setattr__(self, key, value):
        raise AttributeError("Ideal is immutable")

    @staticmethod
    def unit(frame: CoordFrame) -> "Ideal":
        return Ideal(frame, [Polynomial.one(frame)])

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def groebner(self, order: MonomialOrder = GREVLEX, budget: Budget | None = None) -> GroebnerBasis:
        with self._lock:
            cached = self._cache.get(order)
        if cached is not None:
            return cached
        if not self.generators:
            basis = GroebnerBasis(self.frame, order, ())
        else:
            basis = _buchberger_frame(self.frame, list(self.generators), order,
                                      budget or Budget())
            for g in self.generators:
                if basis.normal_form(g):
                    raise AssertionError("basis does not reduce its own generators to zero")
        with self._lock:
            self._cache[order] = basis
        return basis

    def normal_form(self, p: Polynomial, budget: Budget | None = None) -> Polynomial:
        return self.groebner().normal_form(p, budget)

    def contains_poly(self, p: Polynomial, budget: Budget | None = None) -> bool:
        return not self.normal_form(p, budget)

    def text(self) -> str:
        header = f"ideal over frame {', '.join(self.frame.names)}; order grevlex"
        lines = [g.text() for g in self.generators]
        return "\n".join([header] + (lines or ["0"]))

    def __repr__(self) -> str:
        return f"Ideal({[str(g) for g in self.generators]})"


def ideal_contains(big: Ideal, small: Ideal, budget: Budget | None = None) -> bool:
    """Whether ``small`` is a subset of ``big`` (every generator reduces to 0)."""
    if big.frame != small.frame:
        raise ValueError("ideals live in distinct frames")
    basis = big.groebner(budget=budget)
    return all(not basis.normal_form(g, budget) for g in small.generators)


def ideal_equal(a: Ideal, b: Ideal, budget: Budget | None = None) -> bool:
    return ideal_contains(a, b, budget) and ideal_contains(b, a, budget)


def radical_member(ideal: Ideal, p: Polynomial, budget: Budget | None = None) -> bool:
    """Decide p in sqrt(I) by checking 1 in I + (1 - t*p) in an extended frame."""
    if p.frame != ideal.frame:
        raise ValueError("polynomial frame does not match ideal frame")
    if not p:
        return True
    frame = ideal.frame
    tname = frame.fresh_name("t")
    ext = frame.extend(tname)

    def lift(q: Polynomial) -> Polynomial:
        return Polynomial(ext, {m + (0,): c for m, c in q.terms.items()}, _normalized=True)

    t = Polynomial.variable(ext, tname)
    gens = [lift(g) for g in ideal.generators]
    gens.append(Polynomial.one(ext) - t * lift(p))
    basis = buchberger(gens, GREVLEX, budget or Budget())
    return basis.contains(Polynomial.one(ext), budget)


def eliminate(ideal: Ideal, keep: Iterable[str], budget: Budget | None = None) -> Ideal:
    """Generators of the intersection of the ideal with the subring in ``keep``.

    The result is returned over the same frame; its generators only involve
    the kept variables.
    """
    frame = ideal.frame
    keep = set(keep)
    for name in keep:
        frame.index_of(name)
    drop = tuple(i for i, n in enumerate(frame.names) if n not in keep)
    if not drop:
        return Ideal(frame, ideal.generators)
    order = MonomialOrder.block_elimination(drop)
    basis = ideal.groebner(order, budget)
    kept = [g for g in basis if all(all(m[i] == 0 for i in drop) for m in g.terms)]
    return Ideal(frame, kept)


def jacobian_ideal(f: Polynomial) -> Ideal:
    """The ideal of f together with all of its partial derivatives."""
    if not f:
        raise ValueError("jacobian ideal of the zero polynomial is undefined")
    gens = [f] + [f.diff(v) for v in f.frame.names]
    return Ideal(f.frame, gens)


# ---------------------------------------------------------------------------
# Hilbert series of a homogeneous ideal

@dataclass(frozen=True)
class HilbertData:
    """Hilbert series numerator (coeffs of t^0..), projective dimension, degree.

    The series of frame-ring/I is numerator / (1-t)^(frame dimension); the
    empty projective scheme reports dimension -1.
    """

    numerator: tuple
    dimension: int
    degree: int


def _minimalize(monos: list[tuple]) -> list[tuple]:
    monos = sorted(set(monos), key=lambda m: (mono_degree(m), m))
    out: list[tuple] = []
    for m in monos:
        if not any(mono_divides(p, m) for p in out):
            out.append(m)
    return out


def _hilbert_numerator(monos: list[tuple], memo: dict) -> list[int]:
    monos = _minimalize(monos)
    key = tuple(monos)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not monos:
        res = [1]
    elif any(mono_degree(m) == 0 for m in monos):
        res = [0]
    else:
        pairwise = all(
            mono_coprime(monos[i], monos[j])
            for i in range(len(monos)) for j in range(i + 1, len(monos))
        )
        if pairwise:
            res = [1]
            for m in monos:
                res = _poly1_sub_shift(res, mono_degree(m))
        else:
            counts: dict[int, int] = {}
            for m in monos:
                for i, e in enumerate(m):
                    if e:
                        counts[i] = counts.get(i, 0) + 1
            pivot_var = max(counts, key=lambda i: (counts[i], -i))
            n = len(monos[0])
            pivot = tuple(1 if i == pivot_var else 0 for i in range(n))
            plus = _hilbert_numerator(monos + [pivot], memo)
            colon = _hilbert_numerator(
                [tuple(e - 1 if i == pivot_var and e > 0 else e for i, e in enumerate(m))
                 for m in monos], memo)
            res = _poly1_add(plus, _poly1_shift(colon, 1))
    memo[key] = res
    return res


def _poly1_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return out or [0]


def _poly1_shift(a: list[int], d: int) -> list[int]:
    if a == [0]:
        return [0]
    return [0] * d + a


def _poly1_sub_shift(a: list[int], d: int) -> list[int]:
    # a(t) * (1 - t^d)
    return _poly1_add(a, [-c for c in _poly1_shift(a, d)])


def _divide_out_one_minus_t(a: list[int]) -> tuple[list[int], bool]:
    # a(t) / (1 - t), valid only when a(1) == 0
    if sum(a) != 0:
        return a, False
    out = []
    acc = 0
    for c in a[:-1]:
        acc += c
        out.append(acc)
    # division by (1-t): q_i = sum_{j<=i} a_j with the final accumulated sum zero
    while out and out[-1] == 0:
        out.pop()
    return (out or [0]), True


def hilbert(ideal: Ideal, budget: Budget | None = None) -> HilbertData:
    """Hilbert data of frame-ring/I for a homogeneous ideal I."""
    for g in ideal.generators:
        if not g.is_homogeneous:
            raise ValueError(f"non-homogeneous generator: {g}")
    n = ideal.frame.dimension
    basis = ideal.groebner(budget=budget)
    lts = [g.leading_monomial(GREVLEX) for g in basis]
    num = _hilbert_numerator(lts, {})
    reduced = list(num)
    strips = 0
    while reduced != [0]:
        q, ok = _divide_out_one_minus_t(reduced)
        if not ok:
            break
        reduced = q
        strips += 1
    if num == [0]:
        return HilbertData(tuple(num), -1, 0)
    dimension = n - strips - 1
    degree = sum(reduced)
    return HilbertData(tuple(num), dimension, degree)
