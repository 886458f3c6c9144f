import random
from fractions import Fraction

import pytest

from pdl.catalog import catalog
from pdl.exterior import PolyVector, jet_derivative, trace_contraction
from pdl.groebner import Ideal, ideal_contains, ideal_equal
from pdl.modules import (
    be_complex_check,
    canonical_module,
    extended_skew_matrix,
    hamiltonian_perturbation_check,
    higgs_obstruction_ideal,
    make_module,
    modular_residue_formula_check,
    modular_vector_field,
    module_degeneracy_ideal,
    pfaffian_complex_check,
    residue,
    signed_maximal_pfaffians,
    singular_equals_module_locus_check,
)
from pdl.poisson import jacobi_check, pfaffian, poly_det
from pdl.ring import CoordFrame, Polynomial

from conftest import mv, poly, random_polynomial


def structure(name):
    s = catalog(name)
    return s, jacobi_check(s.sigma)


# -- modules and flatness -----------------------------------------------------


def test_euler_linear_field_is_flat(xyz):
    s, P = structure("euler-planes")
    M = make_module(P, s.fields["Z"])
    assert M.flat and M.flat_witness is None


def test_translation_field_is_flat_for_constant_structure():
    s, P = structure("constant-A3")
    M = make_module(P, s.fields["Z"])
    assert M.flat


def test_shear_field_is_not_flat(xyz):
    _, P = structure("euler-planes")
    z = Polynomial.variable(P.frame, "z")
    M = make_module(P, PolyVector(P.frame, 1, {(0,): z}))
    assert not M.flat
    assert M.flat_witness is not None and not M.flat_witness.is_zero


# -- modular vector fields ------------------------------------------------------


def test_modular_field_log_line():
    _, P = structure("log-line")
    Z = modular_vector_field(P)
    # one global sign away from the connection-field normalization that
    # reports +d/dy; the internal identities pin this one
    assert Z == -1 * PolyVector.basis(P.frame, (1,))


def test_modular_field_constant_structure_vanishes(xyz):
    P = jacobi_check(PolyVector.basis(xyz, (0, 1)))
    assert modular_vector_field(P).is_zero


def test_modular_field_euler_planes():
    _, P = structure("euler-planes")
    assert modular_vector_field(P) == -2 * PolyVector.basis(P.frame, (2,))


def test_canonical_module_is_flat_for_all_catalog_structures():
    for name in ("cone", "log-line", "constant-A3", "euler-planes", "kks:sl2",
                 "kks:sl3", "pencil:x3*x4", "pencil:x3^2+x4^3",
                 "jacobian3:x1*x2*x3"):
        _, P = structure(name)
        assert canonical_module(P).flat


# -- residues ---------------------------------------------------------------------


def test_euler_residue_is_minus_two_dz():
    _, P = structure("euler-planes")
    r = residue(canonical_module(P), 0)
    assert not r.is_zero
    assert r.reduced_vector() == -2 * PolyVector.basis(P.frame, (2,))


def test_residue_on_empty_locus_is_zero_class():
    _, P = structure("constant-A3")
    r = residue(make_module(P, PolyVector.basis(P.frame, (2,))), 0)
    assert r.is_zero


def test_residue_requires_flat_module():
    _, P = structure("euler-planes")
    z = Polynomial.variable(P.frame, "z")
    M = make_module(P, PolyVector(P.frame, 1, {(0,): z}))
    with pytest.raises(ValueError):
        residue(M, 0)


def test_residue_degree_overflow_errors():
    _, P = structure("log-line")
    with pytest.raises(ValueError):
        residue(canonical_module(P), 1)


def test_residue_class_equality_mod_modulus():
    s, P = structure("euler-planes")
    x, y, _ = Polynomial.variables(P.frame)
    M = canonical_module(P)
    r = residue(M, 0)
    shifted = PolyVector(P.frame, 1, {(0,): x, (2,): Polynomial.constant(P.frame, -2)})
    from pdl.modules import ResidueClass
    from pdl.poisson import degeneracy_ideal
    other = ResidueClass(0, degeneracy_ideal(P, 0), shifted)
    assert r == other  # representatives differ by x*d/dx, zero mod (x, y)


# -- module degeneracy ideals ---------------------------------------------------------


def test_euler_module_locus_is_plane_pair():
    s, P = structure("euler-planes")
    M = make_module(P, s.fields["Z"])
    AD2 = module_degeneracy_ideal(M, 1)
    x, y, _ = Polynomial.variables(P.frame)
    assert ideal_equal(AD2, Ideal(P.frame, [x * y]))
    # strict chain I(D_2) = (0) < (xy) < (x, y) = I(D_0)
    D2 = Ideal(P.frame, [])
    D0 = Ideal(P.frame, [x, y])
    assert ideal_contains(AD2, D2) and not ideal_contains(D2, AD2)
    assert ideal_contains(D0, AD2) and not ideal_contains(AD2, D0)


def test_transverse_field_has_empty_module_locus():
    s, P = structure("constant-A3")
    M = make_module(P, s.fields["Z"])
    AD2 = module_degeneracy_ideal(M, 1)
    assert ideal_equal(AD2, Ideal.unit(P.frame))


def test_zero_field_adds_nothing():
    s, P = structure("cone")
    M = make_module(P, PolyVector(P.frame, 1))
    AD0 = module_degeneracy_ideal(M, 0)
    u, v, w = Polynomial.variables(P.frame)
    assert ideal_equal(AD0, Ideal(P.frame, [u, v, w]))


def test_module_locus_inclusions_for_pencils():
    for name in ("pencil:x3*x4", "pencil:x3^2+x4^3"):
        _, P = structure(name)
        M = canonical_module(P)
        for k in (0, 1):
            AD = module_degeneracy_ideal(M, k)
            from pdl.poisson import degeneracy_ideal
            assert ideal_contains(AD, degeneracy_ideal(P, k))
            above = degeneracy_ideal(P, k - 1) if k else Ideal.unit(P.frame)
            assert ideal_contains(above, AD)


# -- residue formula ----------------------------------------------------------------------


def test_residue_formula_euler_both_sides_explicit():
    _, P = structure("euler-planes")
    assert modular_residue_formula_check(P, 0).verdict
    # both sides literally equal -2 d/dz here, before any reduction
    M = canonical_module(P)
    lhs = M.Z
    rhs = Fraction(-1, 1) * trace_contraction(jet_derivative(P.sigma))
    assert lhs == rhs == -2 * PolyVector.basis(P.frame, (2,))


def test_residue_formula_log_line():
    _, P = structure("log-line")
    assert modular_residue_formula_check(P, 0).verdict


def test_residue_formula_constant_symplectic():
    frame = CoordFrame(["x1", "x2", "x3", "x4"])
    P = jacobi_check(PolyVector.basis(frame, (0, 1)) + PolyVector.basis(frame, (2, 3)))
    cert = modular_residue_formula_check(P, 0)
    assert cert.verdict
    assert canonical_module(P).Z.is_zero


def test_residue_formula_pencils_both_ks():
    for name in ("pencil:x3*x4", "pencil:x3^2+x4^3"):
        _, P = structure(name)
        assert modular_residue_formula_check(P, 0).verdict
        assert modular_residue_formula_check(P, 1).verdict


def test_residue_formula_range_check():
    _, P = structure("euler-planes")
    with pytest.raises(ValueError):
        modular_residue_formula_check(P, 1)


# -- singular locus of the degeneracy divisor -----------------------------------------------


def test_singular_locus_node_pencil():
    _, P = structure("pencil:x3*x4")
    assert singular_equals_module_locus_check(P).verdict
    # independent witness: jacobian ideal of 2*x3*x4 is (x3, x4)
    frame = P.frame
    x3, x4 = Polynomial.variable(frame, "x3"), Polynomial.variable(frame, "x4")
    top = P.power(2).component((0, 1, 2, 3))
    jac = Ideal(frame, [top] + [top.diff(v) for v in frame.names])
    assert ideal_equal(jac, Ideal(frame, [x3, x4]))


def test_singular_locus_cusp_pencil():
    _, P = structure("pencil:x3^2+x4^3")
    assert singular_equals_module_locus_check(P).verdict
    frame = P.frame
    x3, x4 = Polynomial.variable(frame, "x3"), Polynomial.variable(frame, "x4")
    M = canonical_module(P)
    assert ideal_equal(module_degeneracy_ideal(M, 1), Ideal(frame, [x3, x4 ** 2]))


def test_singular_locus_smooth_divisor_empty():
    _, P = structure("pencil:x3")
    cert = singular_equals_module_locus_check(P)
    assert cert.verdict
    M = canonical_module(P)
    assert ideal_equal(module_degeneracy_ideal(M, 1), Ideal.unit(P.frame))


def test_singular_locus_requires_generically_symplectic():
    frame = CoordFrame(["x1", "x2", "x3", "x4"])
    P = jacobi_check(PolyVector.basis(frame, (0, 1)))
    with pytest.raises(ValueError):
        singular_equals_module_locus_check(P)


# -- pfaffian complex -----------------------------------------------------------------------


def test_three_by_three_adjugate_identity(xyz):
    a, b, c = (poly(t, xyz) for t in ("x", "y^2", "z - 1"))
    zero = Polynomial.zero(xyz)
    S = [[zero, a, b], [-a, zero, c], [-b, -c, zero]]
    v = signed_maximal_pfaffians(S)
    assert v == [c, -b, a]
    assert pfaffian_complex_check(S).verdict


def test_random_rational_skew_5x5(xyz):
    rng = random.Random(77)
    zero = Polynomial.zero(xyz)
    for _ in range(20):
        S = [[zero] * 5 for _ in range(5)]
        for i in range(5):
            for j in range(i + 1, 5):
                c = Polynomial.constant(
                    xyz, Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
                S[i][j] = c
                S[j][i] = -c
        assert pfaffian_complex_check(S).verdict


def test_be_complex_for_pencil_modular_field():
    _, P = structure("pencil:x3*x4")
    assert be_complex_check(canonical_module(P)).verdict


def test_be_complex_for_declared_euler_field_on_padded_frame():
    # euler tensor extended by two silent coordinates: frame dimension 4
    frame = CoordFrame(["x", "y", "z", "w"])
    x, y, _, _ = Polynomial.variables(frame)
    P = jacobi_check(PolyVector(frame, 2, {(0, 2): x, (1, 2): y}))
    M = make_module(P, PolyVector(frame, 1, {(0,): x}))
    assert M.flat
    assert be_complex_check(M).verdict


def test_extended_matrix_shape_and_skewness():
    s, P = structure("euler-planes")
    M = make_module(P, s.fields["Z"])
    S = extended_skew_matrix(M)
    assert len(S) == 4 and all(len(row) == 4 for row in S)
    for i in range(4):
        assert S[i][i].is_zero
        for j in range(4):
            assert S[i][j] == -S[j][i]
    assert S[0][1] == Polynomial.variable(P.frame, "x")


# -- adaptedness obstruction -------------------------------------------------------------------


def test_higgs_transverse_field_nowhere_adapted():
    s, P = structure("constant-A3")
    M = make_module(P, s.fields["Z"])
    assert ideal_equal(higgs_obstruction_ideal(M), Ideal.unit(P.frame))


def test_higgs_log_line_adapted_off_axis():
    _, P = structure("log-line")
    M = canonical_module(P)
    x = Polynomial.variable(P.frame, "x")
    assert ideal_equal(higgs_obstruction_ideal(M), Ideal(P.frame, [x]))


def test_higgs_hamiltonian_fields_unobstructed_at_full_rank():
    _, P = structure("pencil:x3*x4")
    rng = random.Random(91)
    for _ in range(5):
        f = random_polynomial(rng, P.frame, max_degree=2, terms=2)
        M = make_module(P, P.hamiltonian_field(f))
        assert M.flat
        obstruction = higgs_obstruction_ideal(M)
        assert obstruction.is_zero


# -- hamiltonian perturbation invariance ----------------------------------------------------


def test_hamiltonian_perturbation_identity():
    for name, k in (("euler-planes", 0), ("pencil:x3*x4", 0), ("pencil:x3*x4", 1)):
        _, P = structure(name)
        rng = random.Random(99)
        for _ in range(10):
            f = random_polynomial(rng, P.frame, max_degree=2, terms=3)
            assert hamiltonian_perturbation_check(P, f, k).verdict


def test_perturbed_residue_class_is_unchanged():
    s, P = structure("euler-planes")
    M = make_module(P, s.fields["Z"])
    f = poly("x*y + z^2", P.frame)
    perturbed = make_module(P, s.fields["Z"] + P.hamiltonian_field(f))
    assert perturbed.flat
    assert residue(M, 0) == residue(perturbed, 0)
