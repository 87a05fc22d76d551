"""Exact checks of module structure on Jacobians of invariant polynomials."""

__version__ = "0.1.0"

from .polyring import Poly, parse_poly, partial, homogeneous_degree, monomial_basis
from .qlinalg import QMatrix, Subspace, rref, kernel, span, contains, equal, intersect, solve_linear
from .repcore import (
    RepSpec,
    TensorElement,
    sl2_irrep,
    direct_sum,
    dual_rep,
    sln_standard,
    validate,
    coaction_on_x,
    act_on_poly,
    act_on_tensor,
)
from .modanalysis import (
    weight_of_monomial,
    weight_decomposition,
    is_invariant_subspace,
    generate_submodule,
    highest_weight_vectors,
    decompose,
    invariants,
    cayley_sylvester,
)
from .jacmod import (
    jacobian_subspace,
    phi,
    check_intertwining_phi,
    quotient_map_check,
    yau_check,
    kempf_witness,
    equivariant_mirror_map,
    check_psi_hom,
    fuzz_harness,
)
