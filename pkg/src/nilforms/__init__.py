"""Exact linear algebra for nilpotent spaces of endomorphisms adapted to
non-degenerate symmetric or alternating bilinear forms."""

from .bilinear import (ALTERNATING, SYMMETRIC, BilinearForm, WittDecomposition,
                       find_isotropic, quotient_form, witt_decompose)
from .checks import Verdict, theorem_check
from .classify import classify_classical, classify_structured
from .endo import (AdaptedEndo, NilProfile, OrthogonalBlock, adaptedness,
                   adaptedness_check, indecomposable_decompose, nil_profile,
                   stable_singular_flag, tensor)
from .extend import ExtensionReport, extend_scalars
from .fields import (Field, PrimeField, RationalField, RationalFunctionField,
                     parse_field)
from .flags import Flag
from .linalg import (Matrix, Subspace, block_matrix, image_basis, kernel_basis,
                     matrix_image, matrix_kernel, rank, rref, solve)
from .oracle import OracleVerdict, exhaustive_verify, maximality_probe
from .profile import GenericProfile, generic_profile, nilindex_cap
from .reduction import ReductionData, reduction_data
from .spaces import (OperatorSpace, adapted_ambient, build_canonical_space,
                     full_endomorphism_space)
from .witnesses import (WitnessResult, build_witness, n3_counterexample,
                        six_dim_counterexample, wa_max_witness, ws_max_witness)

__version__ = "0.1.0"
