"""Deciding whether a masker hides a set of states, and related certificates.

A set is masked by ``S`` when every image ``S|psi>`` (or ``S rho S^dagger``)
has the same two reduced states. The reference marginals are taken from the
first state of the set; every other state is compared against them.
"""

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    RANK_CUTOFF, DimensionError, as_density, as_pure_state, is_isometry,
    pure_marginals, schmidt_decompose,
)
from .maskers import as_amplitude_vector, as_probability_vector, qft_matrix

DEFAULT_TOL = 1e-9


class Verdict(str, enum.Enum):
    MASKED = "Masked"
    NOT_MASKED = "NotMasked"


@dataclass(frozen=True)
class MaskingReport:
    """Outcome of a masking check.

    ``per_state_deviations`` holds ``(index, dev_a, dev_b)``, the Frobenius
    distances of each state's marginals from the reference marginals.
    """

    reference_marginal_a: np.ndarray
    reference_marginal_b: np.ndarray
    marginals_a: list
    marginals_b: list
    per_state_deviations: list
    max_deviation: float
    verdict: Verdict
    tolerance: float

    @property
    def masked(self):
        return self.verdict is Verdict.MASKED


def _check_states(states):
    if len(states) == 0:
        raise ValueError("cannot verify masking of an empty set")


def _report(marg_a, marg_b, tol):
    ref_a, ref_b = marg_a[0], marg_b[0]
    devs = [(i, float(np.linalg.norm(a - ref_a)), float(np.linalg.norm(b - ref_b)))
            for i, (a, b) in enumerate(zip(marg_a, marg_b))]
    max_dev = max(max(da, db) for _, da, db in devs)
    verdict = Verdict.MASKED if max_dev <= tol else Verdict.NOT_MASKED
    return MaskingReport(ref_a, ref_b, marg_a, marg_b, devs, max_dev, verdict, tol)


def image_states(s, states):
    """``S|psi>`` for each state; renormalized for non-isometric injections."""
    out = []
    for psi in states:
        psi = as_pure_state(psi, s.d_a, tol=1e-8)
        v = s.apply(psi)
        if s.kind == "Injection":
            v = v / np.linalg.norm(v)
        out.append(v)
    return out


def verify_masking_pure(s, states, tol=DEFAULT_TOL):
    """Check that every ``S|psi>`` has the same pair of marginals."""
    _check_states(states)
    marg = [pure_marginals(v, s.d_a, s.d_b) for v in image_states(s, states)]
    return _report([m[0] for m in marg], [m[1] for m in marg], tol)


def mixed_marginals(s, rho):
    """``(tr_B, tr_A)`` of ``S rho S^dagger`` without forming the full operator."""
    s3 = s.matrix.reshape(s.d_a, s.d_b, s.d_a)
    x = np.einsum("abi,ij->abj", s3, rho)
    ra = np.einsum("abj,cbj->ac", x, s3.conj())
    rb = np.einsum("abj,acj->bc", x, s3.conj())
    if s.kind == "Injection":
        t = np.trace(ra).real
        ra, rb = ra / t, rb / t
    return ra, rb


def verify_masking_mixed(s, states, tol=DEFAULT_TOL):
    """Mixed-state version of :func:`verify_masking_pure`."""
    _check_states(states)
    marg = [mixed_marginals(s, as_density(rho, s.d_a, tol=1e-8)) for rho in states]
    return _report([m[0] for m in marg], [m[1] for m in marg], tol)


# --------------------------------------------------------------------------- #
#                        Schmidt-form certificate                             #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Theorem21Certificate:
    """Shared Schmidt structure of a set of image states.

    ``left_frame`` / ``right_frame`` are the Schmidt frames of the reference
    image. They are representative only: inside a degenerate block any
    rotation is equally valid, which is why the residuals compare
    per-coefficient projectors rather than vectors.
    """

    schmidt_coefficients: np.ndarray
    left_frame: np.ndarray
    right_frame: np.ndarray
    coefficient_match_residual: float
    frame_match_residual: float
    holds: bool


def _clusters(weights, gap):
    # index blocks of (descending) weights separated by more than `gap`
    blocks, cur = [], [0]
    for i in range(1, len(weights)):
        if weights[i - 1] - weights[i] > gap:
            blocks.append(cur)
            cur = []
        cur.append(i)
    blocks.append(cur)
    return blocks


def theorem21_certificate(s, states, tol=DEFAULT_TOL, cluster_gap=1e-8):
    """Test for a common Schmidt form of all images.

    Each image is written as ``sum_i sqrt(c_i) |e_i>|f_i^psi>`` and as
    ``sum_j sqrt(d_j) |e_j^psi>|f_j>``. The certificate holds when the
    Schmidt weights agree across the set and, for every block of equal
    weights, the spanned A-side and B-side subspaces agree too.
    """
    _check_states(states)
    images = image_states(s, states)
    decomps = []
    for v in images:
        u, sv, vh = np.linalg.svd(v.reshape(s.d_a, s.d_b), full_matrices=False)
        decomps.append((u, sv, vh.T))
    u0, sv0, v0 = decomps[0]
    w0 = sv0 ** 2
    rank = int(np.sum(sv0 > RANK_CUTOFF))
    blocks = _clusters(w0[:rank], cluster_gap) if rank else []

    coef_res = 0.0
    frame_res = 0.0
    for u, sv, v in decomps[1:]:
        coef_res = max(coef_res, float(np.max(np.abs(sv ** 2 - w0))))
        for blk in blocks:
            for x, x0 in ((u, u0), (v, v0)):
                p = x[:, blk] @ x[:, blk].conj().T
                p0 = x0[:, blk] @ x0[:, blk].conj().T
                frame_res = max(frame_res, float(np.linalg.norm(p - p0)))
    ref = schmidt_decompose(images[0], s.d_a, s.d_b)
    holds = coef_res <= tol and frame_res <= tol
    return Theorem21Certificate(ref.coefficients, ref.left_vectors, ref.right_vectors,
                                coef_res, frame_res, holds)


def cross_term(s, psi1, psi2):
    """``tr_A[S|psi1><psi2|S^dagger]`` as a ``d_b x d_b`` matrix."""
    x1 = s.apply(np.asarray(psi1, dtype=complex).reshape(-1)).reshape(s.d_a, s.d_b)
    x2 = s.apply(np.asarray(psi2, dtype=complex).reshape(-1)).reshape(s.d_a, s.d_b)
    return x1.T @ x2.conj()


def schmidt_rank(psi, d_a, d_b, cutoff=RANK_CUTOFF):
    return schmidt_decompose(psi, d_a, d_b, cutoff).rank


# --------------------------------------------------------------------------- #
#                     Maximal maskable sets (membership)                      #
# --------------------------------------------------------------------------- #


def _coords(basis, d):
    return np.eye(d, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)


def membership_q_r(psi, r, basis=None, tol=DEFAULT_TOL):
    """True when ``| <e_k|psi> | = r_k`` for every k."""
    r = as_amplitude_vector(r, tol=1e-10)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != r.size:
        raise DimensionError(f"state dimension {psi.size} != {r.size}")
    amps = np.abs(_coords(basis, r.size).conj().T @ psi)
    return bool(np.all(np.abs(amps - r) <= tol))


def membership_q_p(rho, p, basis=None, tol=DEFAULT_TOL):
    """True when the e-basis diagonal of ``rho`` is ``p``."""
    p = as_probability_vector(p, tol=1e-10)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (p.size, p.size):
        raise DimensionError(f"density of shape {rho.shape} vs vector of length {p.size}")
    b = _coords(basis, p.size)
    diag = np.einsum("ik,ij,jk->k", b.conj(), rho, b).real
    return bool(np.all(np.abs(diag - p) <= tol))


def qft_conjugate(rho, basis=None):
    """``F M F^dagger`` where ``M`` is the matrix of ``rho`` in the e-basis."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    b = _coords(basis, d)
    f = qft_matrix(d)
    m = b.conj().T @ rho @ b
    return f @ m @ f.conj().T


def membership_q_q(rho, q, tol=DEFAULT_TOL, basis=None):
    """True when the diagonal of the QFT-conjugated ``rho`` is ``q``."""
    q = as_probability_vector(q, tol=1e-10)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (q.size, q.size):
        raise DimensionError(f"density of shape {rho.shape} vs vector of length {q.size}")
    diag = np.diag(qft_conjugate(rho, basis)).real
    return bool(np.all(np.abs(diag - q) <= tol))


def omega_membership(s, psi0, psi, tol=DEFAULT_TOL):
    """True when ``S|psi>`` has the same two marginals as ``S|psi0>``."""
    return verify_masking_pure(s, [psi0, psi], tol).masked


# --------------------------------------------------------------------------- #
#                           Channel and purification                          #
# --------------------------------------------------------------------------- #


def trace_type_deviation(s, side):
    """``max_ij || Phi(E_ij) - delta_ij Phi(E_00) ||_F`` over matrix units.

    ``Phi`` is ``T -> tr_B(S T S^dagger)`` for ``side='A'`` and
    ``T -> tr_A(S T S^dagger)`` for ``side='B'``.
    """
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    cols = s.matrix.T.reshape(s.d_a, s.d_a, s.d_b)
    if side == "A":
        phi = np.einsum("iab,jcb->ijac", cols, cols.conj())
    else:
        phi = np.einsum("iab,jac->ijbc", cols, cols.conj())
    ref = phi[0, 0]
    dev = 0.0
    for i in range(s.d_a):
        for j in range(s.d_a):
            target = ref if i == j else 0
            dev = max(dev, float(np.linalg.norm(phi[i, j] - target)))
    return dev


def is_trace_type_channel(s, side, tol=DEFAULT_TOL):
    """True when the marginal channel on ``side`` maps every T to ``tr(T) rho``."""
    if not is_isometry(s.matrix):
        raise ValueError("trace-type probe needs an isometric masker")
    return trace_type_deviation(s, side) <= tol


class AlignedPurifications(NamedTuple):
    coefficients: np.ndarray
    left_frame: np.ndarray
    right_frame_1: np.ndarray
    right_frame_2: np.ndarray


def align_purifications(psi1, psi2, d_a, d_b, tol=DEFAULT_TOL):
    """Common Schmidt frame on A for two purifications of the same ``rho_A``.

    Returns coefficients ``sqrt(c_j)``, a left frame ``{e_j}`` shared by both
    states and one right frame per state, with
    ``psi_i = sum_j sqrt(c_j) |e_j>|f_j^(i)>``.
    """
    psi1 = as_pure_state(psi1, d_a * d_b, tol=1e-10)
    psi2 = as_pure_state(psi2, d_a * d_b, tol=1e-10)
    ra1 = pure_marginals(psi1, d_a, d_b)[0]
    ra2 = pure_marginals(psi2, d_a, d_b)[0]
    if np.linalg.norm(ra1 - ra2) > tol:
        raise ValueError("states do not purify the same reduced state")
    sf = schmidt_decompose(psi1, d_a, d_b)
    e = sf.left_vectors
    x2 = psi2.reshape(d_a, d_b)
    f2 = (e.conj().T @ x2).T / sf.coefficients
    return AlignedPurifications(sf.coefficients, e, sf.right_vectors, f2)
