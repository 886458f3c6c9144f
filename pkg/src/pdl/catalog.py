"""Built-in structures for the command surface and the test corpus.

Every entry is certified by jacobi_check at load; the parametric families
(`pencil:<f>`, `jacobian3:<f>`) re-verify the supplied data rather than
assuming it.  Linear structures come from explicit matrix Lie algebras whose
structure constants are computed by exact commutator expansion.
"""

from __future__ import annotations

from fractions import Fraction

from .exterior import PolyVector
from .parser import ParseError, SessionInput, parse_polynomial
from .poisson import (
    JacobiFailure,
    PoissonStructure,
    jacobi_check,
    kks_from_structure_constants,
    structure_constants_from_matrices,
)
from .ring import CoordFrame, Polynomial


class CatalogError(KeyError):
    """Unknown catalog name."""


CATALOG_NAMES = (
    "cone",
    "log-line",
    "constant-A3",
    "euler-planes",
    "kks:sl2",
    "kks:sl3",
    "pencil:<f(x3,x4)>",
    "jacobian3:<f(x1,x2,x3)>",
)


def _certify(sigma: PolyVector, name: str) -> PoissonStructure:
    result = jacobi_check(sigma)
    if isinstance(result, JacobiFailure):
        raise ValueError(f"catalog entry {name!r} failed its Jacobi check: "
                         f"witness {result.witness}")
    return result


def _cone() -> SessionInput:
    frame = CoordFrame(["u", "v", "w"])
    u, v, w = Polynomial.variables(frame)
    sigma = PolyVector(frame, 2, {(0, 1): 2 * u, (0, 2): 4 * v, (1, 2): 2 * w})
    s = SessionInput(frame=frame, sigma=sigma,
                     sigma_text="2*u*d/du^d/dv + 4*v*d/du^d/dw + 2*w*d/dv^d/dw")
    s.ideals["X"] = [u * w - v ** 2]
    return s


def _log_line() -> SessionInput:
    frame = CoordFrame(["x", "y"])
    x, _ = Polynomial.variables(frame)
    sigma = PolyVector(frame, 2, {(0, 1): x})
    return SessionInput(frame=frame, sigma=sigma, sigma_text="x*d/dx^d/dy")


def _constant_a3() -> SessionInput:
    frame = CoordFrame(["x", "y", "z"])
    sigma = PolyVector(frame, 2, {(0, 1): Polynomial.one(frame)})
    s = SessionInput(frame=frame, sigma=sigma, sigma_text="d/dx^d/dy")
    s.fields["Z"] = PolyVector.basis(frame, (2,))
    s.ideals["W"] = [Polynomial.variable(frame, "z")]
    return s


def _euler_planes() -> SessionInput:
    frame = CoordFrame(["x", "y", "z"])
    x, y, _ = Polynomial.variables(frame)
    sigma = PolyVector(frame, 2, {(0, 2): x, (1, 2): y})
    s = SessionInput(frame=frame, sigma=sigma,
                     sigma_text="x*d/dx^d/dz + y*d/dy^d/dz")
    s.fields["Z"] = PolyVector(frame, 1, {(0,): x})
    return s


def _zeros(rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * cols for _ in range(rows)]


def _unit_matrix(size: int, i: int, j: int) -> list[list[Fraction]]:
    M = _zeros(size, size)
    M[i][j] = Fraction(1)
    return M


def _sl2_basis():
    h = _zeros(2, 2)
    h[0][0], h[1][1] = Fraction(1), Fraction(-1)
    return [h, _unit_matrix(2, 0, 1), _unit_matrix(2, 1, 0)]


def _sl3_basis():
    h1 = _zeros(3, 3)
    h1[0][0], h1[1][1] = Fraction(1), Fraction(-1)
    h2 = _zeros(3, 3)
    h2[1][1], h2[2][2] = Fraction(1), Fraction(-1)
    return [
        h1, h2,
        _unit_matrix(3, 0, 1), _unit_matrix(3, 1, 2), _unit_matrix(3, 0, 2),
        _unit_matrix(3, 1, 0), _unit_matrix(3, 2, 1), _unit_matrix(3, 2, 0),
    ]


def _kks(name: str) -> SessionInput:
    if name == "sl2":
        constants = structure_constants_from_matrices(_sl2_basis())
        names = ["h", "e", "f"]
    elif name == "sl3":
        constants = structure_constants_from_matrices(_sl3_basis())
        names = ["h1", "h2", "e1", "e2", "e3", "f1", "f2", "f3"]
    else:
        raise CatalogError(f"unknown linear structure kks:{name}")
    P = kks_from_structure_constants(constants, names)
    s = SessionInput(frame=P.frame, sigma=P.sigma, sigma_text=f"kks:{name}")
    return s


def _pencil(f_text: str) -> SessionInput:
    frame = CoordFrame(["x1", "x2", "x3", "x4"])
    f = parse_polynomial(f_text, frame)
    sigma = PolyVector(frame, 2, {(0, 1): Polynomial.one(frame), (2, 3): f})
    return SessionInput(frame=frame, sigma=sigma,
                        sigma_text=f"d/dx1^d/dx2 + ({f_text})*d/dx3^d/dx4")


def _jacobian3(f_text: str) -> SessionInput:
    frame = CoordFrame(["x1", "x2", "x3"])
    f = parse_polynomial(f_text, frame)
    # {x_i, x_j} = sign(ijk) df/dx_k for the cyclic complements
    sigma = PolyVector(frame, 2, {
        (0, 1): f.diff("x3"),
        (0, 2): -f.diff("x2"),
        (1, 2): f.diff("x1"),
    })
    return SessionInput(frame=frame, sigma=sigma,
                        sigma_text=f"jacobian3 of {f_text}")


def catalog(name: str) -> SessionInput:
    """Resolve a catalog name to a parsed session; certifies the tensor."""
    if name == "cone":
        s = _cone()
    elif name == "log-line":
        s = _log_line()
    elif name == "constant-A3":
        s = _constant_a3()
    elif name == "euler-planes":
        s = _euler_planes()
    elif name.startswith("kks:"):
        s = _kks(name.split(":", 1)[1])
    elif name.startswith("pencil:"):
        try:
            s = _pencil(name.split(":", 1)[1])
        except ParseError as exc:
            raise CatalogError(f"bad pencil parameter: {exc}") from None
    elif name.startswith("jacobian3:"):
        try:
            s = _jacobian3(name.split(":", 1)[1])
        except ParseError as exc:
            raise CatalogError(f"bad jacobian3 parameter: {exc}") from None
    else:
        raise CatalogError(f"unknown catalog name {name!r}; known: {', '.join(CATALOG_NAMES)}")
    s.catalog_name = name
    _certify(s.sigma, name)
    return s


def certified_structure(s: SessionInput) -> PoissonStructure:
    """Certify the session's tensor (sessions may carry non-Poisson input)."""
    if s.sigma is None:
        raise ValueError("session declares no structure")
    result = jacobi_check(s.sigma)
    if isinstance(result, JacobiFailure):
        raise ValueError(f"tensor fails the Jacobi identity; witness {result.witness}")
    return result
