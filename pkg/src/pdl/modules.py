"""Poisson line modules in trivialized form.

A trivialized module is a connection vector field Z over a certified Poisson
structure; the module is flat exactly when L_Z sigma = 0.  The canonical
module uses the coordinate volume form mu = dx_1 ^ ... ^ dx_n, whose
connection field (the modular vector field) is pinned by

    iota_Z mu = -d(iota_sigma mu).

Residues are classes of Z ^ sigma^k modulo the degeneracy ideal I(D_2k);
their simultaneous vanishing with sigma^(k+1) cuts the module degeneracy
locus AD_2k, which is cross-checked against the sub-pfaffians of the
extended skew matrix

    S = [[0,  Z^T], [-Z, A]],      A[i][j] = {x_i, x_j}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exterior import (
    PolyVector,
    contract,
    exterior_d,
    jet_derivative,
    schouten,
    trace_contraction,
    volume_form,
)
from .groebner import Budget, Ideal, ideal_contains, ideal_equal
from .poisson import (
    ConsistencyError,
    DegeneracyIdeal,
    PoissonStructure,
    degeneracy_ideal,
    pfaffian,
    poly_det,
    sub_pfaffians,
)
from .ring import FrameMismatchError, Polynomial


@dataclass(frozen=True)
class TrivializedModule:
    """A line module in a fixed trivialization: nabla(s) = Z (x) s."""

    base: PoissonStructure
    Z: PolyVector
    flat: bool
    flat_witness: PolyVector | None = None

    def __post_init__(self):
        if self.Z.degree != 1:
            raise ValueError("connection vector field must have degree 1")
        if self.Z.frame != self.base.frame:
            raise FrameMismatchError("connection field in a distinct frame")


def make_module(P: PoissonStructure, Z: PolyVector) -> TrivializedModule:
    """Module from an explicit connection field; non-flat modules are marked."""
    witness = schouten(Z, P.sigma)
    if witness:
        return TrivializedModule(P, Z, flat=False, flat_witness=witness)
    return TrivializedModule(P, Z, flat=True)


def modular_vector_field(P: PoissonStructure) -> PolyVector:
    """The unique Z with iota_Z mu = -d(iota_sigma mu), mu the coordinate volume."""
    frame = P.frame
    n = frame.dimension
    mu = volume_form(frame)
    w = -1 * exterior_d(contract(P.sigma, mu))
    comps = {}
    for i in range(n):
        rest = tuple(j for j in range(n) if j != i)
        c = w.component(rest)
        if c:
            comps[(i,)] = c if i % 2 == 0 else -c
    Z = PolyVector(frame, 1, comps)
    if contract(Z, mu) != w:
        raise ConsistencyError("modular field does not reproduce -d(iota_sigma mu)")
    return Z


def canonical_module(P: PoissonStructure) -> TrivializedModule:
    """The canonical module in the coordinate-volume trivialization.

    Its connection field is the modular vector field, which is Poisson for
    every certified structure; that is recomputed and enforced here.
    """
    Z = modular_vector_field(P)
    M = make_module(P, Z)
    if not M.flat:
        raise ConsistencyError("modular vector field of a certified structure must be Poisson")
    return M


# ---------------------------------------------------------------------------
# extended skew matrix

def extended_skew_matrix(M: TrivializedModule) -> list[list[Polynomial]]:
    """(n+1) x (n+1) skew matrix: row/col 0 holds Z, the rest is the bracket matrix."""
    P, Z = M.base, M.Z
    frame = P.frame
    n = frame.dimension
    zero = Polynomial.zero(frame)
    A = P.matrix()
    S = [[zero for _ in range(n + 1)] for _ in range(n + 1)]
    for j in range(n):
        zj = Z.component((j,))
        S[0][j + 1] = zj
        S[j + 1][0] = -zj
    for i in range(n):
        for j in range(n):
            S[i + 1][j + 1] = A[i][j]
    return S


# ---------------------------------------------------------------------------
# residues

class ResidueClass:
    """Class of a (2k+1)-derivation modulo the degeneracy ideal I(D_2k).

    Equality and vanishing are decided by normal forms of the components
    against a fixed basis of the modulus.
    """

    __slots__ = ("k", "modulus", "basis", "representative", "normal_components")

    def __init__(self, k: int, modulus: Ideal, representative: PolyVector,
                 budget: Budget | None = None):
        basis = modulus.groebner(budget=budget)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "representative", representative)
        normal = {}
        for idx, p in sorted(representative.components.items()):
            nf = basis.normal_form(p, budget)
            if nf:
                normal[idx] = nf
        object.__setattr__(self, "normal_components", normal)

    def __setattr__(self, key, value):
        raise AttributeError("ResidueClass is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.normal_components

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidueClass):
            return NotImplemented
        if self.k != other.k or not ideal_equal(self.modulus, other.modulus):
            return False
        diff = self.representative - other.representative
        return all(not self.basis.normal_form(p) for p in diff.components.values())

    def __repr__(self) -> str:
        reduced = PolyVector(self.representative.frame, self.representative.degree,
                             self.normal_components, _normalized=True)
        return f"ResidueClass({reduced} mod I(D_{2 * self.k}))"

    def reduced_vector(self) -> PolyVector:
        return PolyVector(self.representative.frame, self.representative.degree,
                          self.normal_components, _normalized=True)


def residue(M: TrivializedModule, k: int, budget: Budget | None = None) -> ResidueClass:
    """The k-th residue: class of Z ^ sigma^k on the rank <= 2k locus."""
    if not M.flat:
        raise ValueError("residues are defined for flat modules only")
    frame = M.base.frame
    if 2 * k + 1 > frame.dimension:
        raise ValueError(f"degree {2 * k + 1} exceeds frame dimension {frame.dimension}")
    rep = M.Z.wedge(M.base.power(k))
    modulus = degeneracy_ideal(M.base, k, budget)
    return ResidueClass(k, modulus, rep, budget)


class ModuleDegeneracyIdeal(Ideal):
    """I(D_2k) + components of Z ^ sigma^k, with the pfaffian cross-check."""

    __slots__ = ("k", "base_ideal", "residue_generators", "pfaffian_generators")

    def __init__(self, frame, k: int, base_ideal: DegeneracyIdeal,
                 residue_gens: tuple, pfaffian_gens: tuple):
        super().__init__(frame, base_ideal.generators + residue_gens)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "base_ideal", base_ideal)
        object.__setattr__(self, "residue_generators", tuple(residue_gens))
        object.__setattr__(self, "pfaffian_generators", tuple(pfaffian_gens))


def module_degeneracy_ideal(M: TrivializedModule, k: int,
                            budget: Budget | None = None) -> ModuleDegeneracyIdeal:
    """Ideal of the module degeneracy locus AD_2k.

    Generators: I(D_2k) plus the components of Z ^ sigma^k.  Cross-checked to
    equal the ideal of (2k+2)-sub-pfaffians of the extended skew matrix, and
    the containments I(D_2k) <= I(AD_2k) <= I(D_2k-2) are verified.
    """
    if not M.flat:
        raise ValueError("module degeneracy loci are defined for flat modules only")
    P = M.base
    frame = P.frame
    if 2 * k + 1 > frame.dimension:
        raise ValueError(f"degree {2 * k + 1} exceeds frame dimension {frame.dimension}")
    base = degeneracy_ideal(P, k, budget)
    rep = M.Z.wedge(P.power(k))
    res_gens = tuple(rep.components[idx] for idx in sorted(rep.components))
    result = ModuleDegeneracyIdeal(frame, k, base, res_gens, ())

    S = extended_skew_matrix(M)
    pf_gens = tuple(p for p in sub_pfaffians(S, 2 * k + 2) if p)
    if not ideal_equal(result, Ideal(frame, pf_gens), budget):
        raise ConsistencyError(
            "module degeneracy generators and extended-matrix pfaffians disagree")
    result = ModuleDegeneracyIdeal(frame, k, base, res_gens, pf_gens)

    if not ideal_contains(result, base, budget):
        raise ConsistencyError("I(D_2k) <= I(AD_2k) fails")
    above = degeneracy_ideal(P, k - 1, budget) if k >= 1 else Ideal.unit(frame)
    if not ideal_contains(above, result, budget):
        raise ConsistencyError("I(AD_2k) <= I(D_2k-2) fails")
    return result


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class Certificate:
    """A named mathematical verdict with an optional failure witness."""

    claim: str
    anchor: str
    verdict: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.verdict


def modular_residue_formula_check(P: PoissonStructure, k: int,
                                  budget: Budget | None = None) -> Certificate:
    """Verify Z_mod ^ sigma^k = -1/(k+1) Tr(D sigma^(k+1)) mod I(D_2k).

    Both sides are computed independently: the left through the modular
    vector field of the coordinate volume, the right through the jet
    derivative and trace contraction of the wedge power.
    """
    frame = P.frame
    anchor = "modular residue: Z ^ sigma^k = -1/(k+1) * Tr(D sigma^(k+1)) mod I(D_2k)"
    if 2 * k + 2 > frame.dimension:
        raise ValueError(f"2k+2 = {2 * k + 2} exceeds frame dimension {frame.dimension}")
    M = canonical_module(P)
    lhs = M.Z.wedge(P.power(k))
    rhs = Fraction(-1, k + 1) * trace_contraction(jet_derivative(P.power(k + 1)))
    modulus = degeneracy_ideal(P, k, budget)
    basis = modulus.groebner(budget=budget)
    diff = lhs - rhs
    for idx in sorted(diff.components):
        nf = basis.normal_form(diff.components[idx], budget)
        if nf:
            names = "^".join(frame.names[i] for i in idx)
            return Certificate(
                claim=f"residue formula at k={k}",
                anchor=anchor,
                verdict=False,
                witness=f"component d/d[{names}] differs by {nf} mod I(D_{2 * k})")
    return Certificate(claim=f"residue formula at k={k}", anchor=anchor, verdict=True)


def singular_equals_module_locus_check(P: PoissonStructure,
                                       budget: Budget | None = None) -> Certificate:
    """On an even frame with sigma^n != 0: the jacobian ideal of the single
    top-power component equals the canonical module degeneracy ideal at n-1."""
    frame = P.frame
    n2 = frame.dimension
    anchor = ("degeneracy divisor: jacobian ideal of Pf(sigma) "
              "= canonical module degeneracy ideal at top corank")
    if n2 % 2:
        raise ValueError("frame dimension must be even")
    n = n2 // 2
    top = P.power(n)
    if not top:
        raise ValueError("not generically symplectic: top wedge power vanishes")
    pf = top.component(tuple(range(n2)))
    jac = Ideal(frame, [pf] + [pf.diff(v) for v in frame.names])
    module_side = module_degeneracy_ideal(canonical_module(P), n - 1, budget)
    if ideal_equal(jac, module_side, budget):
        return Certificate(claim="singular scheme of the degeneracy divisor",
                           anchor=anchor, verdict=True)
    jb = jac.groebner(budget=budget)
    mb = module_side.groebner(budget=budget)
    missing = [str(g) for g in mb if jb.normal_form(g)]
    missing += [f"(jacobian) {g}" for g in jb if mb.normal_form(g)]
    return Certificate(claim="singular scheme of the degeneracy divisor",
                       anchor=anchor, verdict=False,
                       witness="; ".join(missing) or "ideals differ")


def signed_maximal_pfaffians(S: Sequence[Sequence[Polynomial]]) -> list[Polynomial]:
    """v_i = (-1)^(i+1) Pf(S with row/col i deleted), 1-based i, for odd S."""
    n = len(S)
    if n % 2 == 0:
        raise ValueError("signed maximal pfaffians need an odd-sized skew matrix")
    out = []
    for i in range(n):
        idx = tuple(j for j in range(n) if j != i)
        sub = [[S[a][b] for b in idx] for a in idx]
        p = pfaffian(sub)
        out.append(p if i % 2 == 0 else -p)
    return out


def pfaffian_complex_check(S: Sequence[Sequence[Polynomial]]) -> Certificate:
    """For odd skew S: the signed maximal pfaffians v satisfy S v = 0 and
    v^T S = 0, so the three maps S -> v -> pair compose to zero."""
    anchor = "pfaffian complex: S.v = 0 and v^T.S = 0 for v the signed maximal pfaffians"
    n = len(S)
    frame = next((e.frame for row in S for e in row if isinstance(e, Polynomial)), None)
    if frame is None:
        raise TypeError("matrix entries must be polynomials")
    v = signed_maximal_pfaffians(S)
    for i in range(n):
        total = Polynomial.zero(frame)
        for j in range(n):
            total = total + S[i][j] * v[j]
        if total:
            return Certificate("pfaffian complex", anchor, False,
                               witness=f"(S.v)[{i}] = {total}")
    for j in range(n):
        total = Polynomial.zero(frame)
        for i in range(n):
            total = total + v[i] * S[i][j]
        if total:
            return Certificate("pfaffian complex", anchor, False,
                               witness=f"(v^T.S)[{j}] = {total}")
    return Certificate("pfaffian complex", anchor, True)


def be_complex_check(M: TrivializedModule) -> Certificate:
    """Pfaffian-complex property for the extended skew matrix of a flat module
    on an even frame (the matrix has odd size 2n+1)."""
    if not M.flat:
        raise ValueError("the complex is built from a flat module")
    if M.base.frame.dimension % 2:
        raise ValueError("frame dimension must be even")
    return pfaffian_complex_check(extended_skew_matrix(M))


def higgs_obstruction_ideal(M: TrivializedModule, budget: Budget | None = None) -> Ideal:
    """Obstruction to the connection field lying in the image of the anchor.

    Computed as the maximal minors of the anchor matrix augmented by Z,
    reduced modulo the ideal of maximal minors of the anchor matrix alone;
    the zero ideal therefore means "adapted wherever the anchor already has
    full rank".
    """
    P, Z = M.base, M.Z
    frame = P.frame
    n = frame.dimension
    A = P.matrix()
    zcol = [Z.component((j,)) for j in range(n)]
    base = Ideal(frame, [poly_det(A)])
    basis = base.groebner(budget=budget)
    minors = []
    for drop in range(n):
        cols = [c for c in range(n) if c != drop]
        aug = [[A[r][c] for c in cols] + [zcol[r]] for r in range(n)]
        minors.append(poly_det(aug))
    reduced = [basis.normal_form(m, budget) for m in minors]
    return Ideal(frame, [p for p in reduced if p])


def hamiltonian_perturbation_check(P: PoissonStructure, f: Polynomial, k: int,
                                   budget: Budget | None = None) -> Certificate:
    """Components of (sigma-sharp df) ^ sigma^k lie in the ideal generated by
    the components of sigma^(k+1), the literal form of the identity
    iota_df sigma ^ sigma^k = 1/(k+1) iota_df sigma^(k+1)."""
    anchor = ("hamiltonian perturbation: components of (sigma#df) ^ sigma^k "
              "lie in (components of sigma^(k+1))")
    frame = P.frame
    lhs = P.hamiltonian_field(f).wedge(P.power(k))
    power = P.power(k + 1)
    ideal = Ideal(frame, [power.components[idx] for idx in sorted(power.components)])
    basis = ideal.groebner(budget=budget)
    for idx in sorted(lhs.components):
        nf = basis.normal_form(lhs.components[idx], budget)
        if nf:
            return Certificate("hamiltonian perturbation invariance", anchor, False,
                               witness=f"component at {idx} leaves the ideal: {nf}")
    return Certificate("hamiltonian perturbation invariance", anchor, True)
