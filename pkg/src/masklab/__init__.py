"""Numerical toolkit for masking quantum information.

Builds maskers ``S: H_A -> H_A (x) H_B``, decides whether a set of pure or
mixed states is masked (every image has the same two marginals), and
characterizes the largest sets the standard maskers can hide.
"""

from .linalg import (
    RANK_CUTOFF, DimensionError, SchmidtForm, as_density, as_pure_state,
    eigh, extend_to_unitary, inv_sqrt_psd, is_isometry, partial_trace,
    random_density, random_pure, random_unitary, schmidt_decompose, tensor,
)
from .maskers import (
    Masker, build_injection_masker, build_multiparty_masker,
    build_remark24_operator, build_s_diamond, build_s_fn, build_s_sharp,
    counterexample_states, multiparty_marginals, qft_matrix, random_isometry,
    sample_q_p, sample_q_q, sample_q_r,
)
from .verify import (
    DEFAULT_TOL, MaskingReport, Theorem21Certificate, Verdict,
    align_purifications, cross_term, is_trace_type_channel, membership_q_p,
    membership_q_q, membership_q_r, omega_membership, qft_conjugate,
    schmidt_rank, theorem21_certificate, trace_type_deviation,
    verify_masking_mixed, verify_masking_pure,
)

__version__ = "0.1.0"
