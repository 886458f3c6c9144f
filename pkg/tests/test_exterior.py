import random
from fractions import Fraction
from itertools import combinations

import pytest

from pdl.exterior import (
    DiffForm,
    PolyVector,
    contract,
    evaluate,
    exterior_d,
    jet_derivative,
    lie_derivative,
    reversal_sign,
    scalar_vector,
    schouten,
    schouten_oracle,
    trace_contraction,
    volume_form,
    wedge,
)
from pdl.ring import CoordFrame, Polynomial

from conftest import mv, poly, random_polynomial


def rand_vector(rng, frame, degree, max_poly_degree=2):
    comps = {}
    for idx in combinations(range(frame.dimension), degree):
        if rng.random() < 0.6:
            p = random_polynomial(rng, frame, max_degree=max_poly_degree, terms=2)
            if p:
                comps[idx] = p
    return PolyVector(frame, degree, comps)


def rand_form(rng, frame, degree, max_poly_degree=2):
    comps = {}
    for idx in combinations(range(frame.dimension), degree):
        if rng.random() < 0.6:
            p = random_polynomial(rng, frame, max_degree=max_poly_degree, terms=2)
            if p:
                comps[idx] = p
    return DiffForm(frame, degree, comps)


# -- wedge ---------------------------------------------------------------------


def test_wedge_with_itself_vanishes(xyz):
    dx = PolyVector.basis(xyz, (0,))
    assert dx.wedge(dx).is_zero


def test_wedge_scaling(xyz):
    x = Polynomial.variable(xyz, "x")
    left = (PolyVector.basis(xyz, (0,)) * x).wedge(PolyVector.basis(xyz, (2,)))
    assert left == PolyVector(xyz, 2, {(0, 2): x})


def test_euler_tensor_squares_to_zero(xyz):
    sigma = mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    assert sigma.wedge(sigma).is_zero


def test_wedge_graded_commutative(xyz):
    rng = random.Random(2)
    for _ in range(40):
        u = rng.randint(0, 2)
        v = rng.randint(0, 2)
        U = rand_vector(rng, xyz, u)
        V = rand_vector(rng, xyz, v)
        sign = -1 if (u * v) % 2 else 1
        assert U.wedge(V) == sign * V.wedge(U)


def test_mixed_kind_wedge_rejected(xyz):
    with pytest.raises(TypeError):
        PolyVector.basis(xyz, (0,)).wedge(DiffForm.basis(xyz, (1,)))


# -- contraction and pairing -----------------------------------------------------


def test_single_form_contraction_dual_pairing(xyz):
    U = PolyVector.basis(xyz, (0, 2))  # d/dx ^ d/dz
    out = contract(DiffForm.basis(xyz, (0,)), U)
    assert out == PolyVector.basis(xyz, (2,))


def test_evaluate_reads_matrix_entry(xyz):
    sigma = mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    x = Polynomial.variable(xyz, "x")
    assert evaluate(sigma, DiffForm.basis(xyz, (0, 2))) == x


def test_full_contraction_carries_reversal_sign():
    frame = CoordFrame(["x", "y"])
    x = Polynomial.variable(frame, "x")
    sigma = PolyVector(frame, 2, {(0, 1): x})
    full = contract(sigma, DiffForm.basis(frame, (0, 1))).scalar()
    assert full == -x
    assert evaluate(sigma, DiffForm.basis(frame, (0, 1))) == x
    assert reversal_sign(2) == -1


def test_first_slot_insertion(xyz):
    V = PolyVector.basis(xyz, (1, 2))
    inserted = PolyVector.basis(xyz, (0,)).wedge(V)
    assert contract(DiffForm.basis(xyz, (0,)), inserted) == V


def test_contraction_degree_overflow_errors(xyz):
    with pytest.raises(ValueError):
        contract(PolyVector.basis(xyz, (0, 1)), DiffForm.basis(xyz, (0,)))


def test_adjunction_pairing(xyz):
    rng = random.Random(9)
    for _ in range(60):
        k = rng.randint(1, 3)
        j = rng.randint(1, k)
        U = rand_vector(rng, xyz, k)
        alpha = rand_form(rng, xyz, j)
        omega = rand_form(rng, xyz, k - j)
        lhs = evaluate(contract(alpha, U), omega)
        rhs = evaluate(U, alpha.wedge(omega))
        assert lhs == rhs


# -- exterior derivative -----------------------------------------------------------


def test_d_examples(xyz):
    x, y, _ = Polynomial.variables(xyz)
    assert exterior_d(DiffForm(xyz, 1, {(1,): x})) == DiffForm.basis(xyz, (0, 1))
    assert exterior_d(DiffForm.basis(xyz, (0,))).is_zero
    area = DiffForm(xyz, 1, {(1,): x, (0,): -y})
    assert exterior_d(area) == 2 * DiffForm.basis(xyz, (0, 1))


def test_d_squared_zero_randomized(xyz):
    rng = random.Random(4)
    for _ in range(100):
        k = rng.randint(0, 2)
        omega = rand_form(rng, xyz, k)
        assert exterior_d(exterior_d(omega)).is_zero


def test_d_leibniz(xyz):
    rng = random.Random(6)
    for _ in range(40):
        a = rng.randint(0, 1)
        alpha = rand_form(rng, xyz, a)
        beta = rand_form(rng, xyz, rng.randint(0, 2))
        sign = -1 if a % 2 else 1
        lhs = exterior_d(alpha.wedge(beta))
        rhs = exterior_d(alpha).wedge(beta) + sign * alpha.wedge(exterior_d(beta))
        assert lhs == rhs


# -- lie derivative -----------------------------------------------------------------


def test_lie_derivative_kills_translation_invariant_tensor(xyz):
    sigma = mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    dz = PolyVector.basis(xyz, (2,))
    assert lie_derivative(dz, sigma).is_zero


def test_lie_derivative_euler_field_on_log_tensor(xyz):
    x = Polynomial.variable(xyz, "x")
    Z = PolyVector(xyz, 1, {(0,): x})
    T = PolyVector(xyz, 2, {(0, 1): x})
    assert lie_derivative(Z, T).is_zero


def test_lie_derivative_leibniz_on_forms(xyz):
    rng = random.Random(8)
    for _ in range(40):
        Z = rand_vector(rng, xyz, 1)
        f = random_polynomial(rng, xyz)
        mu = rand_form(rng, xyz, rng.randint(1, 3))
        lhs = lie_derivative(Z, mu * f)
        zf = sum((Z.component((i,)) * f.diff_index(i) for i in range(3)),
                 Polynomial.zero(xyz))
        rhs = mu * zf + lie_derivative(Z, mu) * f
        assert lhs == rhs


# -- schouten bracket ------------------------------------------------------------------


def test_constant_bivector_brackets_to_zero(xyz):
    U = PolyVector.basis(xyz, (0, 1))
    assert schouten(U, U).is_zero


def test_cone_tensor_is_integrable(uvw):
    sigma = mv("2*u*d/du^d/dv + 4*v*d/du^d/dw + 2*w*d/dv^d/dw", uvw)
    assert schouten(sigma, sigma).is_zero


def test_plane_dependent_bivector_squares_to_zero():
    frame = CoordFrame(["x1", "x2", "x3", "x4"])
    rng = random.Random(13)
    for _ in range(10):
        f = random_polynomial(rng, CoordFrame(["x3", "x4"]), max_degree=3)
        lifted = Polynomial(frame, {(0, 0) + m: c for m, c in f.terms.items()})
        sigma = PolyVector(frame, 2, {(2, 3): lifted})
        assert schouten(sigma, sigma).is_zero


def test_schouten_on_vectors_is_lie_bracket(xyz):
    rng = random.Random(21)
    for _ in range(30):
        X = rand_vector(rng, xyz, 1)
        Y = rand_vector(rng, xyz, 1)
        expected = {}
        for i in range(3):
            total = Polynomial.zero(xyz)
            for j in range(3):
                total = total + X.component((j,)) * Y.component((i,)).diff_index(j)
                total = total - Y.component((j,)) * X.component((i,)).diff_index(j)
            if total:
                expected[(i,)] = total
        assert schouten(X, Y) == PolyVector(xyz, 1, expected)


def test_schouten_graded_antisymmetry(xyz):
    rng = random.Random(31)
    for _ in range(60):
        u = rng.randint(0, 3)
        v = rng.randint(0, 3)
        U = rand_vector(rng, xyz, u, max_poly_degree=1)
        V = rand_vector(rng, xyz, v, max_poly_degree=1)
        # graded antisymmetry: [U,V] = -(-1)^((u-1)(v-1)) [V,U]
        sign = -1 if ((u - 1) * (v - 1)) % 2 else 1
        assert schouten(U, V) == (-sign) * schouten(V, U)


def test_schouten_graded_jacobi(xyz):
    rng = random.Random(37)
    for _ in range(25):
        u, v, w = (rng.randint(0, 2) for _ in range(3))
        U = rand_vector(rng, xyz, u, max_poly_degree=1)
        V = rand_vector(rng, xyz, v, max_poly_degree=1)
        W = rand_vector(rng, xyz, w, max_poly_degree=1)
        su, sv = u - 1, v - 1
        lhs = schouten(U, schouten(V, W))
        mid = schouten(schouten(U, V), W)
        sign = -1 if (su * sv) % 2 else 1
        rhs = mid + sign * schouten(V, schouten(U, W))
        assert lhs == rhs


def test_schouten_graded_leibniz(xyz):
    rng = random.Random(41)
    for _ in range(25):
        u, v, w = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        U = rand_vector(rng, xyz, u, max_poly_degree=1)
        V = rand_vector(rng, xyz, v, max_poly_degree=1)
        W = rand_vector(rng, xyz, w, max_poly_degree=1)
        lhs = schouten(U, V.wedge(W))
        sign = -1 if ((u - 1) * v) % 2 else 1
        rhs = schouten(U, V).wedge(W) + sign * V.wedge(schouten(U, W))
        assert lhs == rhs


def test_schouten_oracle_equivalence(xyz):
    rng = random.Random(43)
    four = CoordFrame(["x1", "x2", "x3", "x4"])
    for _ in range(40):
        frame = xyz if rng.random() < 0.5 else four
        u = rng.randint(0, 3)
        v = rng.randint(0, 3)
        U = rand_vector(rng, frame, u, max_poly_degree=1)
        V = rand_vector(rng, frame, v, max_poly_degree=1)
        assert schouten(U, V) == schouten_oracle(U, V)


def test_poisson_commutator_identity_on_forms(xyz, uvw):
    # for an integrable sigma: [iota_sigma^k, d] = k iota_sigma^(k-1) [iota_sigma, d]
    rng = random.Random(47)
    tensors = [
        mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz),
        mv("2*u*d/du^d/dv + 4*v*d/du^d/dw + 2*w*d/dv^d/dw", uvw),
    ]
    for sigma in tensors:
        frame = sigma.frame

        def iota_power(k, omega):
            for _ in range(k):
                if sigma.degree > omega.degree:
                    return DiffForm(frame, 0)
                omega = contract(sigma, omega)
            return omega

        def commutator_k(k, omega):
            return iota_power(k, exterior_d(omega)) - exterior_d(iota_power(k, omega))

        for _ in range(20):
            degree = rng.randint(0, frame.dimension)
            omega = rand_form(rng, frame, degree)
            for k in (1, 2, 3):
                lhs = commutator_k(k, omega)
                rhs = k * iota_power(k - 1, commutator_k(1, omega))
                assert lhs == rhs


# -- jets and trace ---------------------------------------------------------------------


def test_jet_derivative_examples(xyz):
    x = Polynomial.variable(xyz, "x")
    T = jet_derivative(PolyVector(xyz, 2, {(0, 2): x}))
    assert T.slot(0) == PolyVector.basis(xyz, (0, 2))
    assert T.slot(1).is_zero and T.slot(2).is_zero

    constant = jet_derivative(PolyVector.basis(xyz, (0, 1)))
    assert constant.is_zero


def test_jet_derivative_of_euler_tensor(xyz):
    sigma = mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    T = jet_derivative(sigma)
    assert T.slot(0) == PolyVector.basis(xyz, (0, 2))
    assert T.slot(1) == PolyVector.basis(xyz, (1, 2))
    assert T.slot(2).is_zero


def test_trace_examples(xyz):
    sigma = mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    assert trace_contraction(jet_derivative(sigma)) == 2 * PolyVector.basis(xyz, (2,))

    assert trace_contraction(jet_derivative(PolyVector(xyz, 2))).is_zero

    frame = CoordFrame(["x", "y"])
    x = Polynomial.variable(frame, "x")
    log_tensor = PolyVector(frame, 2, {(0, 1): x})
    assert trace_contraction(jet_derivative(log_tensor)) == PolyVector.basis(frame, (1,))


# -- convention self-test ------------------------------------------------------------------


def test_convention_selftest(xyz):
    """The two defining identities hold simultaneously: the modular field
    equation iota_Z mu = -d(iota_sigma mu) is solvable with the commutator
    identity in force for the same contraction convention."""
    sigma = mv("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    mu = volume_form(xyz)
    w = -1 * exterior_d(contract(sigma, mu))
    comps = {}
    for i in range(3):
        rest = tuple(j for j in range(3) if j != i)
        c = w.component(rest)
        if c:
            comps[(i,)] = c if i % 2 == 0 else -c
    Z = PolyVector(xyz, 1, comps)
    assert contract(Z, mu) == w
    assert Z == -2 * PolyVector.basis(xyz, (2,))
    # and the k=2 commutator identity holds on the volume form
    def iota(omega):
        return contract(sigma, omega) if sigma.degree <= omega.degree else DiffForm(xyz, 0)

    def comm(k, omega):
        out = omega
        for _ in range(k):
            out = iota(out)
        dfirst = exterior_d(omega)
        for _ in range(k):
            dfirst = iota(dfirst)
        return dfirst - exterior_d(out)

    assert comm(2, mu) == 2 * iota(comm(1, mu))


def test_scalar_roundtrip(xyz):
    p = poly("x^2 - y", xyz)
    assert scalar_vector(p).scalar() == p
