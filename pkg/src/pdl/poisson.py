"""Poisson structures on affine charts and their degeneracy geometry.

A Poisson structure is a degree-2 polyvector with vanishing Schouten square,
carrying a verification certificate and a lazily cached tower of wedge
powers.  The bracket is {f,g} = evaluate(sigma, df ^ dg) with the determinant
pairing, so the coefficient matrix A[i][j] = {x_i, x_j} reads off the wedge
components directly.

Degeneracy ideals are generated by the components of sigma^(k+1) and are
cross-checked against the (2k+2)-sized sub-pfaffians of A, which must
generate the same ideal; both generating sets are retained.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exterior import DiffForm, PolyVector, contract, schouten
from .groebner import Budget, Ideal, ideal_contains, ideal_equal
from .ring import CoordFrame, FrameMismatchError, Polynomial


class ConsistencyError(AssertionError):
    """An internal cross-check failed; indicates a bug, never bad input."""


class NotPoissonFieldError(ValueError):
    """A supplied vector field is not an infinitesimal symmetry."""


@dataclass(frozen=True)
class JacobiFailure:
    """Returned by jacobi_check when the Schouten square is nonzero."""

    sigma: PolyVector
    witness: PolyVector

    def __bool__(self) -> bool:
        return False


class PoissonStructure:
    """A certified Poisson bivector with cached wedge powers."""

    __slots__ = ("frame", "sigma", "jacobi_certificate", "_powers", "_matrix", "_lock")

    def __init__(self, sigma: PolyVector, _certified_witness: PolyVector | None = None):
        if sigma.degree != 2:
            raise ValueError("a Poisson structure is a degree-2 polyvector")
        if _certified_witness is None:
            bracket_square = schouten(sigma, sigma)
            if bracket_square:
                raise ValueError(
                    "tensor does not satisfy the Jacobi identity; use jacobi_check "
                    "to obtain the failure witness")
        object.__setattr__(self, "frame", sigma.frame)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "jacobi_certificate", True)
        object.__setattr__(self, "_powers", {1: sigma})
        object.__setattr__(self, "_matrix", None)
        object.__setattr__(self, "_lock", threading.Lock())

    def __setattr__(self, key, value):
        raise AttributeError("PoissonStructure is immutable")

    def power(self, k: int) -> PolyVector:
        """sigma^k (wedge power); k = 0 is the degree-0 unit."""
        if k < 0:
            raise ValueError("power must be non-negative")
        if k == 0:
            return PolyVector(self.frame, 0, {(): Polynomial.one(self.frame)})
        with self._lock:
            cached = self._powers.get(k)
            if cached is None:
                start = max(i for i in self._powers if i <= k)
                cached = self._powers[start]
                for _ in range(start, k):
                    cached = cached.wedge(self.sigma)
                self._powers[k] = cached
            return cached

    @property
    def generic_rank(self) -> int:
        """2r where r is the largest wedge power with sigma^r nonzero."""
        n = self.frame.dimension
        r = 0
        for k in range(1, n // 2 + 1):
            if self.power(k):
                r = k
            else:
                break
        return 2 * r

    def matrix(self) -> list[list[Polynomial]]:
        """Coefficient matrix A[i][j] = {x_i, x_j}."""
        with self._lock:
            if self._matrix is not None:
                return self._matrix
            n = self.frame.dimension
            zero = Polynomial.zero(self.frame)
            A = [[zero for _ in range(n)] for _ in range(n)]
            for (i, j), p in self.sigma.components.items():
                A[i][j] = p
                A[j][i] = -p
            object.__setattr__(self, "_matrix", A)
            return A

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        if f.frame != self.frame or g.frame != self.frame:
            raise FrameMismatchError("bracket arguments in a distinct frame")
        total = Polynomial.zero(self.frame)
        for (i, j), p in self.sigma.components.items():
            total = total + p * (f.diff_index(i) * g.diff_index(j)
                                 - f.diff_index(j) * g.diff_index(i))
        return total

    def anchor(self, alpha: DiffForm) -> PolyVector:
        """sigma-sharp of a one-form: contraction into sigma."""
        if alpha.degree != 1:
            raise ValueError("anchor applies to one-forms")
        return contract(alpha, self.sigma)

    def hamiltonian_field(self, f: Polynomial) -> PolyVector:
        if f.frame != self.frame:
            raise FrameMismatchError("hamiltonian argument in a distinct frame")
        comps = {}
        for i, name in enumerate(self.frame.names):
            df = f.diff_index(i)
            if df:
                comps[(i,)] = df
        return self.anchor(DiffForm(self.frame, 1, comps))

    def __repr__(self) -> str:
        return f"PoissonStructure({self.sigma})"


def jacobi_check(sigma: PolyVector):
    """Certify [sigma, sigma] = 0, or return the nonzero witness trivector."""
    if sigma.degree != 2:
        raise ValueError("jacobi_check expects a degree-2 polyvector")
    square = schouten(sigma, sigma)
    if square:
        return JacobiFailure(sigma, square)
    return PoissonStructure(sigma, _certified_witness=square)


def bracket(P: PoissonStructure, f: Polynomial, g: Polynomial) -> Polynomial:
    return P.bracket(f, g)


def hamiltonian_field(P: PoissonStructure, f: Polynomial) -> PolyVector:
    return P.hamiltonian_field(f)


# ---------------------------------------------------------------------------
# pfaffians and determinants of polynomial matrices

def _check_square(M: Sequence[Sequence[Polynomial]]) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    return n


def _check_skew(M: Sequence[Sequence[Polynomial]]) -> None:
    n = _check_square(M)
    for i in range(n):
        if M[i][i]:
            raise ValueError("matrix has a nonzero diagonal entry")
        for j in range(i + 1, n):
            if M[i][j] != -M[j][i]:
                raise ValueError("matrix is not skew-symmetric")


def pfaffian(M: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Pfaffian of an even skew matrix by expansion along the first row."""
    _check_skew(M)
    n = len(M)
    if n == 0:
        raise ValueError("pfaffian needs a frame; supply a nonempty matrix")
    if n % 2:
        raise ValueError("pfaffian of an odd-sized matrix")
    frame = M[0][1].frame if n > 1 and isinstance(M[0][1], Polynomial) else None
    frame = next((e.frame for row in M for e in row if isinstance(e, Polynomial)), frame)
    if frame is None:
        raise TypeError("matrix entries must be polynomials")
    memo: dict = {}

    def pf(idx: tuple) -> Polynomial:
        if not idx:
            return Polynomial.one(frame)
        hit = memo.get(idx)
        if hit is not None:
            return hit
        i0 = idx[0]
        total = Polynomial.zero(frame)
        for pos in range(1, len(idx)):
            entry = M[i0][idx[pos]]
            if entry:
                rest = idx[1:pos] + idx[pos + 1:]
                sub = pf(rest)
                term = entry * sub
                total = total + (term if pos % 2 else -term)
        memo[idx] = total
        return total

    # sign: position pos (1-based within the remaining tuple) contributes
    # (-1)^(pos-1); pos runs 1..len-1 here, so odd pos is positive.
    return pf(tuple(range(n)))


def sub_pfaffians(M: Sequence[Sequence[Polynomial]], size: int) -> list[Polynomial]:
    """Pfaffians of all principal size x size submatrices (size even)."""
    _check_skew(M)
    if size % 2:
        raise ValueError("sub-pfaffian size must be even")
    n = len(M)
    out = []
    for idx in combinations(range(n), size):
        sub = [[M[i][j] for j in idx] for i in idx]
        out.append(pfaffian(sub))
    return out


def poly_det(M: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a polynomial matrix (Laplace expansion with memo)."""
    n = _check_square(M)
    frame = next((e.frame for row in M for e in row if isinstance(e, Polynomial)), None)
    if frame is None:
        raise TypeError("matrix entries must be polynomials")
    if n == 0:
        return Polynomial.one(frame)
    memo: dict = {}

    def det(cols: tuple) -> Polynomial:
        row = n - len(cols)
        if not cols:
            return Polynomial.one(frame)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = Polynomial.zero(frame)
        for pos, j in enumerate(cols):
            entry = M[row][j]
            if entry:
                term = entry * det(cols[:pos] + cols[pos + 1:])
                total = total + (term if pos % 2 == 0 else -term)
        memo[cols] = total
        return total

    return det(tuple(range(n)))


# ---------------------------------------------------------------------------
# degeneracy ideals

class DegeneracyIdeal(Ideal):
    """Degeneracy ideal carrying both generating sets and the cross-check."""

    __slots__ = ("k", "power_generators", "pfaffian_generators")

    def __init__(self, frame: CoordFrame, k: int, power_gens: tuple, pfaffian_gens: tuple):
        super().__init__(frame, power_gens + pfaffian_gens)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "power_generators", tuple(power_gens))
        object.__setattr__(self, "pfaffian_generators", tuple(pfaffian_gens))


def degeneracy_ideal(P: PoissonStructure, k: int, budget: Budget | None = None) -> DegeneracyIdeal:
    """Ideal of the rank <= 2k locus: components of sigma^(k+1), cross-checked
    against the (2k+2)-sub-pfaffians of the coefficient matrix.

    When 2k+2 exceeds the frame dimension the power is identically zero and
    the zero ideal is returned.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    frame = P.frame
    n = frame.dimension
    if 2 * k + 2 > n:
        return DegeneracyIdeal(frame, k, (), ())
    power = P.power(k + 1)
    power_gens = tuple(power.components[idx] for idx in sorted(power.components))
    pf_gens = tuple(p for p in sub_pfaffians(P.matrix(), 2 * k + 2) if p)
    I_power = Ideal(frame, power_gens)
    I_pf = Ideal(frame, pf_gens)
    if not ideal_equal(I_power, I_pf, budget):
        raise ConsistencyError(
            f"sigma^{k + 1} components and {2 * k + 2}-pfaffians generate distinct ideals")
    return DegeneracyIdeal(frame, k, power_gens, pf_gens)


@dataclass(frozen=True)
class DegeneracyTower:
    """Ideals I(D_2k) for 0 <= 2k < generic rank, containment chain verified."""

    structure: PoissonStructure
    generic_rank: int
    ideals: dict  # k -> DegeneracyIdeal

    def ideal(self, k: int) -> DegeneracyIdeal:
        return self.ideals[k]

    @property
    def ks(self) -> list[int]:
        return sorted(self.ideals)


def degeneracy_tower(P: PoissonStructure, budget: Budget | None = None) -> DegeneracyTower:
    rank = P.generic_rank
    ideals = {}
    for k in range(rank // 2):
        ideals[k] = degeneracy_ideal(P, k, budget)
    ks = sorted(ideals)
    for a, b in zip(ks, ks[1:]):
        if not ideal_contains(ideals[a], ideals[b], budget):
            raise ConsistencyError(f"tower containment I(D_{2 * b}) <= I(D_{2 * a}) fails")
    return DegeneracyTower(P, rank, ideals)


# ---------------------------------------------------------------------------
# subscheme certification

@dataclass(frozen=True)
class SubschemeReport:
    """Verdict of a (strong) Poisson subscheme check with failure witnesses."""

    ideal: Ideal
    is_poisson: bool
    is_strong: bool | None = None
    fields_used: tuple = ()
    witnesses: tuple = ()

    def __bool__(self) -> bool:
        return self.is_poisson and (self.is_strong is not False)


def subscheme_check(P: PoissonStructure, I: Ideal, budget: Budget | None = None) -> SubschemeReport:
    """Check {g, x_j} in I for every generator g and coordinate x_j.

    Sufficient by the Leibniz rule: every Hamiltonian field is a module
    combination of coordinate Hamiltonians.
    """
    if I.frame != P.frame:
        raise FrameMismatchError("ideal lives in a distinct frame")
    basis = I.groebner(budget=budget)
    names = P.frame.names
    xs = Polynomial.variables(P.frame)
    witnesses = []
    for g in I.generators:
        for j, xj in enumerate(xs):
            br = P.bracket(g, xj)
            nf = basis.normal_form(br, budget)
            if nf:
                witnesses.append((f"{{{g}, {names[j]}}}", str(br), str(nf)))
    return SubschemeReport(I, is_poisson=not witnesses, witnesses=tuple(witnesses))


def strong_subscheme_check(P: PoissonStructure, I: Ideal, fields: Iterable[PolyVector],
                           budget: Budget | None = None) -> SubschemeReport:
    """Additionally require Z(g) in I for each supplied Poisson field Z.

    The verdict is relative to the supplied field set, which is echoed in the
    report.  A supplied field that fails L_Z sigma = 0 is an error.
    """
    fields = list(fields)
    for Z in fields:
        if Z.degree != 1:
            raise ValueError("supplied fields must have degree 1")
        if schouten(Z, P.sigma):
            raise NotPoissonFieldError(f"field {Z} is not Poisson: L_Z sigma != 0")
    base = subscheme_check(P, I, budget)
    basis = I.groebner(budget=budget)
    witnesses = list(base.witnesses)
    strong = True
    for Z in fields:
        for g in I.generators:
            val = Z.apply_to_function(g)
            nf = basis.normal_form(val, budget)
            if nf:
                strong = False
                witnesses.append((f"({Z})({g})", str(val), str(nf)))
    return SubschemeReport(I, is_poisson=base.is_poisson, is_strong=strong,
                           fields_used=tuple(str(Z) for Z in fields),
                           witnesses=tuple(witnesses))


# ---------------------------------------------------------------------------
# Poisson vector fields of bounded degree (exact linear algebra)

def _monomials_up_to(frame: CoordFrame, D: int) -> list[tuple]:
    n = frame.dimension

    def rec(i: int, remaining: int):
        if i == n:
            yield ()
            return
        for e in range(remaining + 1):
            for rest in rec(i + 1, remaining - e):
                yield (e,) + rest

    monos = list(rec(0, D))
    monos.sort(key=lambda m: (sum(m), m))
    return monos


def poisson_fields_up_to_degree(P: PoissonStructure, D: int) -> list[PolyVector]:
    """Rational basis of {Z : L_Z sigma = 0} with coefficient degree <= D.

    Solved as a dense exact kernel computation on the coefficient system.
    """
    if D < 0:
        raise ValueError("degree bound must be non-negative")
    frame = P.frame
    n = frame.dimension
    monos = _monomials_up_to(frame, D)
    unknowns = [(i, m) for i in range(n) for m in monos]
    rows: dict[tuple, list[Fraction]] = {}
    ncols = len(unknowns)
    for col, (i, m) in enumerate(unknowns):
        Z = PolyVector(frame, 1, {(i,): Polynomial(frame, {m: Fraction(1)})})
        L = schouten(Z, P.sigma)
        for idx, p in L.components.items():
            for mono, c in p.terms.items():
                row = rows.setdefault((idx, mono), [Fraction(0)] * ncols)
                row[col] += c
    matrix = [rows[key] for key in sorted(rows)]
    kernel = _kernel_basis(matrix, ncols)
    out = []
    for vec in kernel:
        comps: dict = {}
        for col, c in enumerate(vec):
            if c:
                i, m = unknowns[col]
                comps.setdefault((i,), {})[m] = c
        out.append(PolyVector(frame, 1,
                              {idx: Polynomial(frame, t) for idx, t in comps.items()}))
    return out


def _kernel_basis(matrix: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Reduced-echelon kernel basis; deterministic for deterministic input."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        basis.append(vec)
    return basis


def in_rational_span(vectors: list[list[Fraction]], target: list[Fraction]) -> bool:
    """Whether target is a rational combination of the given vectors."""
    return _solve_exact([list(v) for v in vectors], list(target)) is not None


# ---------------------------------------------------------------------------
# linear (Lie-algebra) structures

class StructureConstants:
    """Antisymmetric structure constants with the Lie-Jacobi identity verified."""

    __slots__ = ("dimension", "c")

    def __init__(self, dimension: int, entries: dict):
        """entries maps (i, j) with i < j to a list/dict of (k -> coefficient)."""
        c: dict = {}
        for (i, j), row in entries.items():
            if not (0 <= i < j < dimension):
                raise ValueError(f"bad bracket index pair ({i}, {j})")
            for k, val in (row.items() if isinstance(row, dict) else enumerate(row)):
                val = Fraction(val)
                if val:
                    if not 0 <= k < dimension:
                        raise ValueError(f"bad target index {k}")
                    c[(i, j, k)] = val
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "c", c)
        bad = self._jacobi_defect()
        if bad is not None:
            raise ValueError(f"structure constants violate the Jacobi identity at {bad}")

    def __setattr__(self, key, value):
        raise AttributeError("StructureConstants is immutable")

    def get(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.c.get((i, j, k), Fraction(0))
        return -self.c.get((j, i, k), Fraction(0))

    def _jacobi_defect(self):
        n = self.dimension
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    for l in range(n):
                        total = Fraction(0)
                        for m in range(n):
                            total += (self.get(i, j, m) * self.get(m, k, l)
                                      + self.get(j, k, m) * self.get(m, i, l)
                                      + self.get(k, i, m) * self.get(m, j, l))
                        if total:
                            return (i, j, k, l)
        return None


def kks_from_structure_constants(C: StructureConstants,
                                 names: Sequence[str] | None = None) -> PoissonStructure:
    """The linear Poisson structure {x_i, x_j} = sum_k c_ijk x_k."""
    n = C.dimension
    if names is None:
        names = [f"x{i + 1}" for i in range(n)]
    if len(names) != n:
        raise ValueError("need one coordinate name per dimension")
    frame = CoordFrame(names)
    comps: dict = {}
    for (i, j, k), val in C.c.items():
        mono = tuple(1 if t == k else 0 for t in range(n))
        comps.setdefault((i, j), {})[mono] = val
    sigma = PolyVector(frame, 2, {idx: Polynomial(frame, t) for idx, t in comps.items()})
    result = jacobi_check(sigma)
    if isinstance(result, JacobiFailure):
        raise ConsistencyError("verified structure constants produced a non-Poisson tensor")
    return result


def structure_constants_from_matrices(basis: Sequence) -> StructureConstants:
    """Structure constants of a matrix Lie algebra from an explicit basis.

    Each basis element is a square matrix of Fractions; commutators must be
    expressible in the basis (checked exactly).
    """
    dim = len(basis)
    size = len(basis[0])

    def mat_mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(size)) for j in range(size)]
                for i in range(size)]

    def mat_sub(A, B):
        return [[A[i][j] - B[i][j] for j in range(size)] for i in range(size)]

    flat = [[Fraction(b[i][j]) for i in range(size) for j in range(size)] for b in basis]

    def coords(M) -> list[Fraction]:
        target = [Fraction(M[i][j]) for i in range(size) for j in range(size)]
        sol = _solve_exact(flat, target)
        if sol is None:
            raise ValueError("commutator not in the span of the basis")
        return sol

    entries: dict = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            A = [[Fraction(x) for x in row] for row in basis[i]]
            B = [[Fraction(x) for x in row] for row in basis[j]]
            comm = mat_sub(mat_mul(A, B), mat_mul(B, A))
            entries[(i, j)] = {k: v for k, v in enumerate(coords(comm)) if v}
    return StructureConstants(dim, entries)


def _solve_exact(rows: list[list[Fraction]], target: list[Fraction]):
    """Solve sum_i x_i rows[i] = target exactly; None when inconsistent."""
    ncols = len(target)
    nrows = len(rows)
    aug = [[rows[i][c] for i in range(nrows)] + [target[c]] for c in range(ncols)]
    piv_cols = []
    r = 0
    for c in range(nrows):
        pivot = next((i for i in range(r, ncols) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(ncols):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    sol = [Fraction(0)] * nrows
    for ri, c in enumerate(piv_cols):
        sol[c] = aug[ri][-1]
    for i in range(r, ncols):
        if aug[i][-1]:
            return None
    # verify (guards against free-variable inconsistencies)
    for c in range(ncols):
        if sum(sol[i] * rows[i][c] for i in range(nrows)) != target[c]:
            return None
    return sol
