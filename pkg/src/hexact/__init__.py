"""Exact homotopical algebra for chain complexes of presented modules over Z, Q and Z/p.

Homotopy kernels and cokernels, fibre-cofibre sequences, homotopical homology
and a classifier for every exactness notion (pseudo, left, right, strong, h,
weak), all decided by exact linear algebra.
"""

__version__ = "0.1.0"

from .rings import GF, QQ, ZZ, Ring
from .linalg import ExactMatrix, smith_normal_form, solve_matrix_equation
from .modules import (
    ModuleMap,
    PresentedModule,
    direct_sum,
    lift,
    module_cokernel,
    module_inverse,
    module_is_iso,
    module_kernel,
    module_pullback,
    module_pushout,
)
from .chain import (
    ChainComplex,
    ChainMap,
    Diagnostic,
    GradedMap,
    Homotopy,
    HomotopyEquivalence,
    TwoHomotopy,
    adjointify,
    compose,
    concat,
    find_homotopy,
    find_nullhomotopy,
    find_two_homotopy,
    homology,
    homology_invariants,
    homotopy_equivalence_witness,
    identity,
    is_contractible,
    is_homotopy_equivalence,
    reverse,
    validate,
    whisker,
    zero_map,
)
from .constructions import (
    Square,
    canonical_stability,
    coherent_c,
    coherent_k,
    factor_through_hcok,
    factor_through_hker,
    fibre_cofibre_sequence,
    hcok,
    hker,
    loop,
    shift,
    suspension,
)
from .bounded import (
    NEGATIVE,
    POSITIVE,
    UNBOUNDED,
    BoundedVariant,
    boundary_homology,
    counit_sigma_omega,
    deformation_retract_data,
    homology_ladders,
    interval,
    truncate,
    weak_tests,
)
from .exactness import (
    FLAG_NAMES,
    ExactnessReport,
    HDiffSequence,
    classify_exactness,
    coherent_equivalence_check,
    comparison_i,
    homology_formula,
    homotopical_homology,
    sequence_diagram,
)
from .arrow import (
    ArrowHomotopy,
    ArrowMap,
    ArrowObject,
    ArrowSequence,
    arrow_classify,
    arrow_hcok,
    arrow_hker,
    arrow_strictify,
    arrow_w,
    left_template,
    right_template,
    strong_template,
)
