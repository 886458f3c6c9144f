import random
from fractions import Fraction

import pytest

from pdl.exterior import DiffForm, PolyVector
from pdl.groebner import Ideal
from pdl.parser import (
    ParseError,
    parse_expression,
    parse_ideal_text,
    parse_polynomial,
    parse_session,
    parse_structure_constants,
)
from pdl.ring import CoordFrame, Polynomial

from conftest import random_polynomial


def test_constant_bivector(xyz):
    v = parse_expression("d/dx ^ d/dy", xyz)
    assert v == PolyVector.basis(xyz, (0, 1))


def test_cone_tensor(uvw):
    u, v, w = Polynomial.variables(uvw)
    parsed = parse_expression("2*u*d/du^d/dv + 4*v*d/du^d/dw + 2*w*d/dv^d/dw", uvw)
    expected = PolyVector(uvw, 2, {(0, 1): 2 * u, (0, 2): 4 * v, (1, 2): 2 * w})
    assert parsed == expected


def test_zero_wedge_warns():
    session = parse_session("frame x, y; sigma = d/dx ^ d/dx;")
    assert session.sigma.is_zero and session.sigma.degree == 2
    assert session.warnings


def test_forms_parse(xyz):
    omega = parse_expression("x*dy ^ dz - dz ^ dx", xyz)
    x = Polynomial.variable(xyz, "x")
    assert omega == DiffForm(xyz, 2, {(1, 2): x, (0, 2): Polynomial.one(xyz)})


def test_fraction_coefficients(xyz):
    p = parse_polynomial("1/2*x^2 - 3/4", xyz)
    x = Polynomial.variable(xyz, "x")
    assert p == Fraction(1, 2) * x ** 2 - Fraction(3, 4)


def test_parentheses_and_unary_minus(xyz):
    p = parse_polynomial("-(x + y)*(x - y)", xyz)
    x, y, _ = Polynomial.variables(xyz)
    assert p == y ** 2 - x ** 2


def test_wedge_power(xyz):
    v = parse_expression("(d/dx^d/dy)^1", xyz)
    assert v == PolyVector.basis(xyz, (0, 1))


def test_error_positions():
    with pytest.raises(ParseError) as err:
        parse_session("frame x, y;\nsigma = q*d/dx^d/dy;")
    assert err.value.line == 2 and err.value.col == 9

    with pytest.raises(ParseError) as err:
        parse_session("frame x;\nsigma = d/dw;")
    assert err.value.line == 2

    with pytest.raises(ParseError):
        parse_session("frame x, x;")


def test_mixing_kinds_rejected(xyz):
    with pytest.raises(ParseError):
        parse_expression("d/dx + dx", xyz)
    with pytest.raises(ParseError):
        parse_expression("d/dx ^ dy", xyz)


def test_sigma_must_be_degree_two():
    with pytest.raises(ParseError):
        parse_session("frame x, y; sigma = d/dx;")
    with pytest.raises(ParseError):
        parse_session("frame x, y; field Z = d/dx ^ d/dy;")


def test_session_declarations(xyz):
    session = parse_session(
        "frame x, y, z;\n"
        "sigma = x*d/dx^d/dz + y*d/dy^d/dz;\n"
        "ideal I = x, y;\n"
        "field Z = x*d/dx;\n")
    assert session.frame == xyz
    assert session.sigma == parse_expression("x*d/dx^d/dz + y*d/dy^d/dz", xyz)
    assert [str(g) for g in session.ideals["I"]] == ["x", "y"]
    assert session.fields["Z"] == PolyVector(xyz, 1, {(0,): Polynomial.variable(xyz, "x")})


def test_polynomial_roundtrip(xyz):
    rng = random.Random(61)
    for _ in range(80):
        p = random_polynomial(rng, xyz, max_degree=3, terms=4)
        assert parse_polynomial(str(p), xyz) == p


def test_polyvector_roundtrip(xyz):
    rng = random.Random(67)
    from conftest import random_polynomial as rp
    from itertools import combinations
    for _ in range(60):
        degree = rng.randint(0, 3)
        comps = {}
        for idx in combinations(range(3), degree):
            q = rp(rng, xyz, max_degree=2, terms=2)
            if q:
                comps[idx] = q
        v = PolyVector(xyz, degree, comps)
        if degree == 0:
            continue  # degree-0 text is plain polynomial text
        assert parse_expression(str(v), xyz) == v or v.is_zero


def test_form_roundtrip(xyz):
    rng = random.Random(71)
    from itertools import combinations
    for _ in range(60):
        degree = rng.randint(1, 3)
        comps = {}
        for idx in combinations(range(3), degree):
            q = random_polynomial(rng, xyz, max_degree=2, terms=2)
            if q:
                comps[idx] = q
        omega = DiffForm(xyz, degree, comps)
        assert parse_expression(str(omega), xyz) == omega or omega.is_zero


def test_ideal_text_roundtrip(uvw):
    u, v, w = Polynomial.variables(uvw)
    I = Ideal(uvw, [u * w - v ** 2, u ** 2 - v])
    back = parse_ideal_text(I.text())
    assert back.frame == uvw
    assert list(back.generators) == list(I.generators)


def test_structure_constants_file():
    text = "dim 3\n[1,2] = 2*x2\n[1,3] = -2*x3\n[2,3] = x1\n"
    C = parse_structure_constants(text)
    assert C.dimension == 3
    assert C.get(0, 1, 1) == 2
    assert C.get(1, 0, 1) == -2
    assert C.get(1, 2, 0) == 1


def test_structure_constants_rejects_malformed():
    with pytest.raises(ParseError):
        parse_structure_constants("[2,1] = x1\n")
    with pytest.raises(ParseError):
        parse_structure_constants("[1,2] = bogus\n")


def test_comments_and_whitespace_insensitivity(xyz):
    a = parse_expression("x*d/dx^d/dz+y*d/dy^d/dz", xyz)
    b = parse_expression("  x * d/dx ^ d/dz  +  y * d/dy ^ d/dz ", xyz)
    assert a == b
    session = parse_session("frame x, y, z;  # chart\nsigma = d/dx^d/dy;  # tensor\n")
    assert session.sigma is not None
