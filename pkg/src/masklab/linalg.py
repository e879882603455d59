"""Dense complex linear algebra used by the masking constructions.

Index convention: in every bipartite object the A subsystem carries the slow
(leftmost) index, so basis vector ``|i>|k>`` sits at position ``i*d_b + k``.
Matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""

from dataclasses import dataclass

import numpy as np

RANK_CUTOFF = 1e-10
"""Singular values and eigenvalues at or below this are treated as zero."""


class DimensionError(ValueError):
    """Array shapes are inconsistent with the stated subsystem dimensions."""


# --------------------------------------------------------------------------- #
#                               Validation                                    #
# --------------------------------------------------------------------------- #


def as_matrix(m):
    """Return ``m`` as a finite 2-D complex array."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_pure_state(psi, dim=None, tol=1e-12):
    """Validate a unit vector, returning it as a 1-D complex array."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(psi)):
        raise ValueError("state has non-finite amplitudes")
    if dim is not None and psi.size != dim:
        raise DimensionError(f"state has dimension {psi.size}, expected {dim}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > tol:
        raise ValueError(f"state is not normalized (norm={norm!r})")
    return psi


def as_density(rho, dim=None, tol=1e-12, psd_tol=1e-10):
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = as_matrix(rho)
    n = rho.shape[0]
    if rho.shape[1] != n:
        raise DimensionError("density matrix must be square")
    if dim is not None and n != dim:
        raise DimensionError(f"density matrix has dimension {n}, expected {dim}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.linalg.eigvalsh(rho)[0] < -psd_tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def is_isometry(m, tol=1e-10):
    """True if ``m^dagger m = I`` entrywise within ``tol``."""
    m = as_matrix(m)
    gram = m.conj().T @ m
    return bool(np.max(np.abs(gram - np.eye(m.shape[1]))) <= tol)


def check_orthonormal(basis, tol=1e-10):
    """Validate a square matrix whose columns form an orthonormal basis."""
    basis = as_matrix(basis)
    if basis.shape[0] != basis.shape[1]:
        raise DimensionError("basis must be a square matrix of column vectors")
    if not is_isometry(basis, tol):
        raise ValueError("basis columns are not orthonormal")
    return basis


def ket_to_density(psi):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


# --------------------------------------------------------------------------- #
#                          Products and partial traces                        #
# --------------------------------------------------------------------------- #


def tensor(a, b):
    """Kronecker product with system A as the slow index.

    Vectors are accepted as well as matrices; the result has the shape of
    ``np.kron``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.kron(a, b)


def partial_trace(m, d_a, d_b, side="B"):
    """Trace out one factor of a ``(d_a*d_b) x (d_a*d_b)`` operator.

    Parameters
    ----------
    m : array_like
        Operator on the bipartite space.
    d_a, d_b : int
        Subsystem dimensions.
    side : {'B', 'A'}
        The subsystem to trace *out*. ``'B'`` returns the ``d_a x d_a``
        reduced operator on A, ``'A'`` the ``d_b x d_b`` one on B.
    """
    m = as_matrix(m)
    n = d_a * d_b
    if m.shape != (n, n):
        raise DimensionError(
            f"operator of shape {m.shape} does not act on {d_a}x{d_b}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if side == "B":
        return np.einsum("ikjk->ij", t)
    if side == "A":
        return np.einsum("ikil->kl", t)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def pure_marginals(psi, d_a, d_b):
    """Both reduced states of a bipartite vector, without forming ``|psi><psi|``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d_a * d_b:
        raise DimensionError(f"vector of length {psi.size} is not {d_a}x{d_b}")
    x = psi.reshape(d_a, d_b)
    return x @ x.conj().T, x.T @ x.conj()


def reduced_state(psi, dims, keep):
    """Reduced density matrix of one party of a multipartite pure state."""
    psi = np.asarray(psi, dtype=complex).reshape(dims)
    x = np.moveaxis(psi, keep, 0).reshape(dims[keep], -1)
    return x @ x.conj().T


# --------------------------------------------------------------------------- #
#                            Spectral decompositions                          #
# --------------------------------------------------------------------------- #


def eigh(m, tol=1e-10):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("eigh needs a square matrix")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w[::-1], v[:, ::-1]


def _fix_phases(left, right):
    # largest-magnitude component of each left vector made real positive
    idx = np.argmax(np.abs(left), axis=0)
    ph = left[idx, np.arange(left.shape[1])]
    ph = ph / np.abs(ph)
    return left / ph, right * ph


@dataclass(frozen=True)
class SchmidtForm:
    """``psi = sum_j coefficients[j] * left[:, j] (x) right[:, j]``.

    ``coefficients`` are the square roots of the Schmidt weights, descending.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def rank(self):
        return len(self.coefficients)

    @property
    def weights(self):
        return self.coefficients ** 2

    def reconstruct(self):
        return np.einsum("j,aj,bj->ab", self.coefficients, self.left_vectors,
                         self.right_vectors).reshape(-1)


def schmidt_decompose(psi, d_a, d_b, cutoff=RANK_CUTOFF):
    """Schmidt decomposition of a bipartite pure state via the SVD."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d_a * d_b:
        raise DimensionError(f"vector of length {psi.size} is not {d_a}x{d_b}")
    u, s, vh = np.linalg.svd(psi.reshape(d_a, d_b), full_matrices=False)
    keep = s > cutoff
    left, right = _fix_phases(u[:, keep], vh[keep].T)
    return SchmidtForm(s[keep], left, right)


def inv_sqrt_psd(m, tol=1e-10):
    """Inverse square root of a Hermitian positive-definite matrix."""
    w, v = eigh(m, tol)
    if w[-1] <= tol:
        raise ValueError(f"matrix is singular or indefinite (min eigenvalue {w[-1]!r})")
    return (v / np.sqrt(w)) @ v.conj().T


def sqrt_psd(m, tol=1e-10):
    w, v = eigh(m, tol)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


# --------------------------------------------------------------------------- #
#                            Basis completion                                 #
# --------------------------------------------------------------------------- #


def complete_basis(vectors, dim=None, tol=1e-8):
    """Orthonormal basis of the complement of ``span(vectors)``.

    Standard basis vectors are orthogonalized against the current span in
    index order (Gram-Schmidt, two passes); vectors with residual norm below
    ``tol`` are skipped. Returns a ``dim x (dim - rank)`` matrix.
    """
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    dim = vectors.shape[0] if dim is None else dim
    q, r = np.linalg.qr(vectors)
    basis = q[:, np.abs(np.diag(r)) > tol]
    start = basis.shape[1]
    for i in range(dim):
        if basis.shape[1] == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[i] = 1
        for _ in range(2):
            v = v - basis @ (basis.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv > tol:
            basis = np.column_stack([basis, v / nv])
    if basis.shape[1] != dim:
        raise ArithmeticError("basis completion failed")
    return basis[:, start:]


def extend_to_unitary(s, ancilla_state_index=0, tol=1e-10):
    """Unitary dilation ``U`` of an isometric masker.

    ``U (|psi> (x) |b>) = S|psi>`` where ``|b>`` is the standard basis vector
    ``ancilla_state_index`` of B. The other columns of ``U`` span
    ``ker(S^dagger)``, filled in index order.
    """
    d_a, d_b = s.d_a, s.d_b
    mat = as_matrix(s.matrix)
    if not is_isometry(mat, tol):
        raise ValueError("extend_to_unitary needs an isometric masker")
    if not 0 <= ancilla_state_index < d_b:
        raise ValueError(f"ancilla index {ancilla_state_index} outside [0, {d_b})")
    n = d_a * d_b
    comp = complete_basis(mat, n)
    u = np.zeros((n, n), dtype=complex)
    cols = np.arange(n).reshape(d_a, d_b)
    u[:, cols[:, ancilla_state_index]] = mat
    rest = np.delete(cols, ancilla_state_index, axis=1).reshape(-1)
    u[:, rest] = comp
    return u


# --------------------------------------------------------------------------- #
#                               Random sampling                               #
# --------------------------------------------------------------------------- #


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(dim, seed=None):
    """Haar-random pure state (normalized complex Gaussian vector)."""
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    v = _gaussian(rng, dim)
    return v / np.linalg.norm(v)


def random_density(dim, rank=None, seed=None):
    """Random density matrix ``V V^dagger / tr`` with ``V`` a ``dim x rank`` Gaussian."""
    rank = dim if rank is None else rank
    if dim < 1 or not 1 <= rank <= dim:
        raise ValueError(f"invalid dim/rank {dim}/{rank}")
    rng = np.random.default_rng(seed)
    v = _gaussian(rng, (dim, rank))
    rho = v @ v.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim, seed=None):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(_gaussian(rng, (dim, dim)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim, seed=None):
    rng = np.random.default_rng(seed)
    g = _gaussian(rng, (dim, dim))
    return (g + g.conj().T) / 2
