"""Command surface: `pdl <command> [--catalog NAME | --file PATH] [options]`.

Exit status: 0 when every certificate passes, 1 when a mathematical verdict
is false, 2 on input errors, 3 when the reduction-step budget runs out.  The
environment variable ``PDL_BUDGET`` overrides the default budget; ``--budget``
overrides both.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import groebner
from .catalog import CATALOG_NAMES, CatalogError, catalog
from .chern import (
    chern_of_projective_space,
    degeneracy_class,
    secant_degree,
    secant_dimension,
    sing_class_degree,
)
from .exterior import PolyVector
from .groebner import BudgetExhausted, Ideal, hilbert
from .modules import (
    Certificate,
    be_complex_check,
    canonical_module,
    higgs_obstruction_ideal,
    make_module,
    modular_residue_formula_check,
    module_degeneracy_ideal,
    residue,
    singular_equals_module_locus_check,
)
from .parser import ParseError, SessionInput, parse_polynomial, parse_session, \
    parse_structure_constants
from .poisson import (
    JacobiFailure,
    NotPoissonFieldError,
    PoissonStructure,
    degeneracy_ideal,
    degeneracy_tower,
    jacobi_check,
    kks_from_structure_constants,
    poisson_fields_up_to_degree,
    strong_subscheme_check,
    subscheme_check,
)
from .reports import SIGNS_NOTE, Report

COMMANDS = (
    "check-jacobi", "bracket", "degeneracy", "tower", "subscheme",
    "strong-subscheme", "poisson-fields", "modular", "residue",
    "module-degeneracy", "residue-formula", "singular-locus", "be-complex",
    "higgs", "chern", "secant", "hilbert", "catalog",
)


class InputError(ValueError):
    """Bad command-line input or session data (exit status 2)."""


class MathFalse(Exception):
    """A mathematical verdict failed; carries the report (exit status 1)."""

    def __init__(self, report: Report):
        self.report = report


def _load_session(args) -> SessionInput:
    if args.catalog and args.file:
        raise InputError("give either --catalog or --file, not both")
    if args.catalog:
        try:
            return catalog(args.catalog)
        except CatalogError as exc:
            raise InputError(str(exc)) from None
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if args.file:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from None
        session = parse_session(text)
        if session.constants_path:
            try:
                with open(session.constants_path, "r", encoding="utf-8") as fh:
                    ctext = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read constants file: {exc}") from None
            constants = parse_structure_constants(ctext)
            P = kks_from_structure_constants(constants)
            session.frame = P.frame
            session.sigma = P.sigma
            session.sigma_text = f"constants from {session.constants_path}"
        return session
    raise InputError("this command needs --catalog NAME or --file PATH")


def _certified(session: SessionInput, report: Report) -> PoissonStructure:
    if session.sigma is None:
        raise InputError("the session declares no structure tensor")
    result = jacobi_check(session.sigma)
    if isinstance(result, JacobiFailure):
        report.add(Certificate(
            claim="jacobi identity",
            anchor="jacobi: [sigma, sigma] = 0",
            verdict=False,
            witness=f"[sigma, sigma] = {result.witness}"))
        raise MathFalse(report)
    report.add(Certificate(claim="jacobi identity",
                           anchor="jacobi: [sigma, sigma] = 0", verdict=True))
    return result


def _echo_inputs(session: SessionInput, report: Report) -> None:
    if session.frame is not None:
        report.inputs["frame"] = ", ".join(session.frame.names)
    if session.sigma_text:
        report.inputs["sigma"] = session.sigma_text
    elif session.sigma is not None:
        report.inputs["sigma"] = str(session.sigma)
    for name, gens in session.ideals.items():
        report.inputs[f"ideal {name}"] = ", ".join(str(g) for g in gens)
    for name, Z in session.fields.items():
        report.inputs[f"field {name}"] = str(Z)
    for w in session.warnings:
        report.notes.append(f"parse warning: {w}")


def _session_ideal(session: SessionInput, args) -> Ideal:
    if not session.ideals:
        raise InputError("no ideal declared; add `ideal NAME = ...;` to the session")
    name = args.ideal
    if name is None:
        if len(session.ideals) > 1:
            raise InputError(f"several ideals declared ({', '.join(session.ideals)}); "
                             "pick one with --ideal NAME")
        name = next(iter(session.ideals))
    if name not in session.ideals:
        raise InputError(f"no ideal named {name!r} in the session")
    return Ideal(session.frame, session.ideals[name])


def _session_field(session: SessionInput, P: PoissonStructure) -> PolyVector | None:
    if not session.fields:
        return None
    if len(session.fields) > 1:
        raise InputError("several fields declared; sessions for module commands "
                         "should declare exactly one")
    return next(iter(session.fields.values()))


# -- command handlers ---------------------------------------------------------

def _cmd_check_jacobi(args) -> Report:
    session = _load_session(args)
    report = Report(command="check-jacobi")
    _echo_inputs(session, report)
    _certified(session, report)
    return report


def _cmd_bracket(args) -> Report:
    session = _load_session(args)
    report = Report(command="bracket")
    _echo_inputs(session, report)
    P = _certified(session, report)
    if not args.f or not args.g:
        raise InputError("bracket needs --f EXPR and --g EXPR")
    f = parse_polynomial(args.f, session.frame)
    g = parse_polynomial(args.g, session.frame)
    report.inputs["f"] = str(f)
    report.inputs["g"] = str(g)
    report.values["{f, g}"] = str(P.bracket(f, g))
    return report


def _cmd_degeneracy(args) -> Report:
    session = _load_session(args)
    report = Report(command=f"degeneracy --k {args.k}")
    _echo_inputs(session, report)
    P = _certified(session, report)
    ideal = degeneracy_ideal(P, args.k)
    basis = ideal.groebner()
    report.values[f"I(D_{2 * args.k}) generators"] = "; ".join(
        str(g) for g in ideal.power_generators) or "0"
    report.values["reduced basis"] = "; ".join(str(g) for g in basis) or "0"
    report.add(Certificate(
        claim=f"degeneracy ideal cross-check at k={args.k}",
        anchor="ideal of sigma^(k+1) components = ideal of (2k+2)-pfaffians "
               "of the bracket matrix",
        verdict=True))
    return report


def _cmd_tower(args) -> Report:
    session = _load_session(args)
    report = Report(command="tower")
    _echo_inputs(session, report)
    P = _certified(session, report)
    tower = degeneracy_tower(P)
    report.values["generic rank"] = str(tower.generic_rank)
    for k in tower.ks:
        basis = tower.ideal(k).groebner()
        report.values[f"I(D_{2 * k})"] = "; ".join(str(g) for g in basis) or "0"
    report.add(Certificate(
        claim="tower containment chain",
        anchor="I(D_0) >= I(D_2) >= ... down the tower, each cross-checked "
               "against pfaffians",
        verdict=True))
    return report


def _cmd_subscheme(args) -> Report:
    session = _load_session(args)
    report = Report(command="subscheme")
    _echo_inputs(session, report)
    P = _certified(session, report)
    ideal = _session_ideal(session, args)
    res = subscheme_check(P, ideal)
    report.add(Certificate(
        claim="ideal is a bracket-closed (Poisson) ideal",
        anchor="{g, x_j} lies in I for every generator g and coordinate x_j",
        verdict=res.is_poisson,
        witness="; ".join(f"{w[0]} -> {w[2]}" for w in res.witnesses) or None))
    if not res.is_poisson:
        raise MathFalse(report)
    return report


def _cmd_strong_subscheme(args) -> Report:
    session = _load_session(args)
    report = Report(command="strong-subscheme")
    _echo_inputs(session, report)
    P = _certified(session, report)
    ideal = _session_ideal(session, args)
    fields = list(session.fields.values())
    if not fields:
        fields = poisson_fields_up_to_degree(P, args.max_degree)
        report.notes.append(
            f"fields: all Poisson fields of coefficient degree <= {args.max_degree}")
    try:
        res = strong_subscheme_check(P, ideal, fields)
    except NotPoissonFieldError as exc:
        raise InputError(str(exc)) from None
    report.values["fields used"] = "; ".join(res.fields_used)
    report.add(Certificate(
        claim="ideal is preserved by the supplied symmetry fields",
        anchor="Z(g) lies in I for every supplied Poisson field Z (verdict is "
               "relative to this set)",
        verdict=bool(res.is_strong),
        witness="; ".join(f"{w[0]} -> {w[2]}" for w in res.witnesses) or None))
    if not res.is_strong:
        raise MathFalse(report)
    return report


def _cmd_poisson_fields(args) -> Report:
    session = _load_session(args)
    report = Report(command=f"poisson-fields --max-degree {args.max_degree}")
    _echo_inputs(session, report)
    P = _certified(session, report)
    fields = poisson_fields_up_to_degree(P, args.max_degree)
    report.values["basis size"] = str(len(fields))
    for i, Z in enumerate(fields):
        report.values[f"Z[{i}]"] = str(Z)
    return report


def _cmd_modular(args) -> Report:
    session = _load_session(args)
    report = Report(command="modular")
    _echo_inputs(session, report)
    P = _certified(session, report)
    M = canonical_module(P)
    report.values["modular vector field"] = str(M.Z)
    report.add(Certificate(
        claim="canonical module is flat",
        anchor="iota_Z mu = -d(iota_sigma mu) and L_Z sigma = 0",
        verdict=M.flat))
    report.signs_note = SIGNS_NOTE
    return report


def _module_for(session: SessionInput, P: PoissonStructure, report: Report):
    Z = _session_field(session, P)
    if Z is None:
        M = canonical_module(P)
        report.notes.append("module: canonical (coordinate volume trivialization)")
    else:
        M = make_module(P, Z)
        report.notes.append("module: declared connection field")
        if not M.flat:
            report.add(Certificate(
                claim="module is flat",
                anchor="L_Z sigma = 0",
                verdict=False,
                witness=f"L_Z sigma = {M.flat_witness}"))
            raise MathFalse(report)
    return M


def _cmd_residue(args) -> Report:
    session = _load_session(args)
    report = Report(command=f"residue --k {args.k}")
    _echo_inputs(session, report)
    P = _certified(session, report)
    M = _module_for(session, P, report)
    r = residue(M, args.k)
    report.values["representative"] = str(r.representative)
    report.values["reduced mod I(D_2k)"] = str(r.reduced_vector())
    report.values["vanishes"] = "yes" if r.is_zero else "no"
    report.signs_note = SIGNS_NOTE
    return report


def _cmd_module_degeneracy(args) -> Report:
    session = _load_session(args)
    report = Report(command=f"module-degeneracy --k {args.k}")
    _echo_inputs(session, report)
    P = _certified(session, report)
    M = _module_for(session, P, report)
    ideal = module_degeneracy_ideal(M, args.k)
    report.values[f"I(AD_{2 * args.k})"] = "; ".join(str(g) for g in ideal.groebner()) or "0"
    report.add(Certificate(
        claim="module degeneracy cross-check and inclusions",
        anchor="I(D_2k) + (Z ^ sigma^k components) = (2k+2)-pfaffians of the "
               "extended matrix; I(D_2k) <= I(AD_2k) <= I(D_2k-2)",
        verdict=True))
    return report


def _cmd_residue_formula(args) -> Report:
    session = _load_session(args)
    report = Report(command=f"residue-formula --k {args.k}")
    _echo_inputs(session, report)
    P = _certified(session, report)
    cert = modular_residue_formula_check(P, args.k)
    report.add(cert)
    report.signs_note = SIGNS_NOTE
    if not cert.verdict:
        raise MathFalse(report)
    return report


def _cmd_singular_locus(args) -> Report:
    session = _load_session(args)
    report = Report(command="singular-locus")
    _echo_inputs(session, report)
    P = _certified(session, report)
    try:
        cert = singular_equals_module_locus_check(P)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report.add(cert)
    if not cert.verdict:
        raise MathFalse(report)
    return report


def _cmd_be_complex(args) -> Report:
    session = _load_session(args)
    report = Report(command="be-complex")
    _echo_inputs(session, report)
    P = _certified(session, report)
    M = _module_for(session, P, report)
    try:
        cert = be_complex_check(M)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report.add(cert)
    if not cert.verdict:
        raise MathFalse(report)
    return report


def _cmd_higgs(args) -> Report:
    session = _load_session(args)
    report = Report(command="higgs")
    _echo_inputs(session, report)
    P = _certified(session, report)
    M = _module_for(session, P, report)
    ideal = higgs_obstruction_ideal(M)
    report.values["obstruction ideal"] = "; ".join(str(g) for g in ideal.generators) or "0"
    report.notes.append(
        "zero means adapted wherever the anchor matrix already has full rank")
    return report


def _cmd_chern(args) -> Report:
    if args.n is None:
        raise InputError("chern needs --n (projective dimension)")
    n = args.n
    report = Report(command=f"chern --n {n}")
    c = chern_of_projective_space(n)
    for j in range(1, n + 1):
        report.values[f"c_{j}"] = str(c[j])
    det2 = degeneracy_class(c, 2)
    report.values["degeneracy class (t=2)"] = str(det2)
    if n >= 4 and n % 2 == 0:
        deg = sing_class_degree(n // 2)
        report.values["codim-3 class degree"] = str(deg)
        report.add(Certificate(
            claim="degree consistency",
            anchor="2*C(n+2, 3) equals the H^3 coefficient of c_1c_2 - c_3",
            verdict=True))
    return report


def _cmd_secant(args) -> Report:
    if args.d is None or args.k is None:
        raise InputError("secant needs --d (curve degree) and --k (secant index)")
    report = Report(command=f"secant --d {args.d} --k {args.k}")
    try:
        dim = secant_dimension(args.k)
        deg = secant_degree(args.d, args.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report.values["dimension"] = str(dim)
    report.values["degree"] = str(deg)
    return report


def _cmd_hilbert(args) -> Report:
    session = _load_session(args)
    report = Report(command="hilbert")
    _echo_inputs(session, report)
    ideal = _session_ideal(session, args)
    try:
        data = hilbert(ideal)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report.values["numerator"] = " ".join(str(c) for c in data.numerator)
    report.values["projective dimension"] = str(data.dimension)
    report.values["degree"] = str(data.degree)
    return report


def _cmd_catalog(args) -> Report:
    report = Report(command="catalog")
    if args.catalog:
        session = catalog(args.catalog)
        _echo_inputs(session, report)
        report.add(Certificate(claim="catalog entry certifies",
                               anchor="jacobi: [sigma, sigma] = 0", verdict=True))
    else:
        report.values["entries"] = "; ".join(CATALOG_NAMES)
    return report


_HANDLERS = {
    "check-jacobi": _cmd_check_jacobi,
    "bracket": _cmd_bracket,
    "degeneracy": _cmd_degeneracy,
    "tower": _cmd_tower,
    "subscheme": _cmd_subscheme,
    "strong-subscheme": _cmd_strong_subscheme,
    "poisson-fields": _cmd_poisson_fields,
    "modular": _cmd_modular,
    "residue": _cmd_residue,
    "module-degeneracy": _cmd_module_degeneracy,
    "residue-formula": _cmd_residue_formula,
    "singular-locus": _cmd_singular_locus,
    "be-complex": _cmd_be_complex,
    "higgs": _cmd_higgs,
    "chern": _cmd_chern,
    "secant": _cmd_secant,
    "hilbert": _cmd_hilbert,
    "catalog": _cmd_catalog,
}


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pdl",
        description="Exact certificates for Poisson structures on affine charts.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--catalog", help="built-in structure name")
    ap.add_argument("--file", help="session file (see the session grammar)")
    ap.add_argument("--k", type=int, default=0, help="degeneracy index k")
    ap.add_argument("--max-degree", type=int, default=1,
                    help="coefficient degree bound for field searches")
    ap.add_argument("--budget", type=int, default=None,
                    help="reduction-step budget (overrides PDL_BUDGET)")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--ideal", help="name of a declared ideal")
    ap.add_argument("--f", help="first bracket argument (expression)")
    ap.add_argument("--g", help="second bracket argument (expression)")
    ap.add_argument("--n", type=int, help="projective dimension for chern")
    ap.add_argument("--d", type=int, help="curve degree for secant")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_arg_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    budget = args.budget
    if budget is None:
        env = os.environ.get("PDL_BUDGET")
        if env:
            try:
                budget = int(env)
            except ValueError:
                print(f"error: PDL_BUDGET must be an integer, got {env!r}", file=sys.stderr)
                return 2
    if budget is not None:
        try:
            groebner.set_default_budget(budget)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    handler = _HANDLERS[args.command]
    start = time.perf_counter()
    try:
        report = handler(args)
    except MathFalse as exc:
        print(exc.report.render(args.format))
        _print_timing(start)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(report.render(args.format))
    _print_timing(start)
    return 0 if report.all_pass else 1


def _print_timing(start: float) -> None:
    ms = int((time.perf_counter() - start) * 1000)
    print(f"# elapsed-ms: {ms}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
