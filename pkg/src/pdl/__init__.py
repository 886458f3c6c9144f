"""Exact symbolic toolkit for Poisson geometry on affine charts.

Everything computes over the rationals with literal equality as the only
tolerance: polynomial and ideal arithmetic (Buchberger), the exterior
calculus of polyvector fields and forms, Poisson structures with their
degeneracy-ideal towers, trivialized line modules with modular vector
fields and residues, and intersection-theoretic degree formulas on
projective space.
"""

from .chern import (
    ChowClass,
    chern_of_projective_space,
    degeneracy_class,
    expected_codim,
    secant_degree,
    secant_dimension,
    sing_class_degree,
)
from .exterior import (
    DiffForm,
    JetTensor,
    PolyVector,
    contract,
    evaluate,
    exterior_d,
    jet_derivative,
    lie_derivative,
    schouten,
    schouten_oracle,
    scalar_form,
    scalar_vector,
    trace_contraction,
    volume_form,
    wedge,
)
from .groebner import (
    Budget,
    BudgetExhausted,
    GroebnerBasis,
    HilbertData,
    Ideal,
    buchberger,
    eliminate,
    hilbert,
    ideal_contains,
    ideal_equal,
    jacobian_ideal,
    normal_form,
    radical_member,
    set_default_budget,
)
from .modules import (
    Certificate,
    ResidueClass,
    TrivializedModule,
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
from .poisson import (
    DegeneracyIdeal,
    DegeneracyTower,
    JacobiFailure,
    PoissonStructure,
    StructureConstants,
    SubschemeReport,
    bracket,
    degeneracy_ideal,
    degeneracy_tower,
    hamiltonian_field,
    jacobi_check,
    kks_from_structure_constants,
    pfaffian,
    poisson_fields_up_to_degree,
    poly_det,
    strong_subscheme_check,
    structure_constants_from_matrices,
    sub_pfaffians,
    subscheme_check,
)
from .ring import GREVLEX, LEX, CoordFrame, FrameMismatchError, MonomialOrder, Polynomial

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
