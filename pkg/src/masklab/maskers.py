"""Masker constructions and the state families they mask.

A masker is a linear map ``S: H_A -> H_A (x) H_B`` stored as its
``(d_a*d_b) x d_a`` matrix. Orthonormal bases are passed as square matrices
whose columns are the basis vectors.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    as_matrix, as_pure_state, check_orthonormal, complete_basis,
    inv_sqrt_psd, is_isometry, random_hermitian, tensor,
)

KINDS = ("Sfn", "Ssharp", "Sdiamond", "Multiparty", "Injection", "Remark24",
         "Custom")
ISOMETRIC_KINDS = ("Sfn", "Ssharp", "Sdiamond", "Multiparty", "Remark24")
MAX_MULTIPARTY = 3


@dataclass(frozen=True)
class Masker:
    """Linear map from dimension ``d_a`` into ``d_a * d_b``.

    ``basis_a`` / ``basis_b`` hold the generating bases when the construction
    has them; ``params`` records any other construction input.
    """

    d_a: int
    d_b: int
    matrix: np.ndarray
    kind: str = "Custom"
    basis_a: np.ndarray | None = None
    basis_b: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown masker kind {self.kind!r}")
        m = as_matrix(self.matrix)
        if m.shape != (self.d_a * self.d_b, self.d_a):
            raise ValueError(
                f"masker matrix has shape {m.shape}, expected "
                f"({self.d_a * self.d_b}, {self.d_a})")
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= 1e-10:
            raise ValueError("masker is not injective")
        object.__setattr__(self, "matrix", m)

    @property
    def is_isometry(self):
        return is_isometry(self.matrix)

    def apply(self, psi):
        return self.matrix @ np.asarray(psi, dtype=complex)

    def conjugate(self, rho):
        """``S rho S^dagger``."""
        return self.matrix @ rho @ self.matrix.conj().T


def _from_images(images, basis):
    # S = sum_i |image_i><basis_i|
    return np.asarray(images).T @ basis.conj().T


def _standard(d):
    return np.eye(d, dtype=complex)


def qft_matrix(n):
    """Quantum Fourier transform: entry ``(k, j)`` is ``w**(k*j) / sqrt(n)``."""
    if n < 1:
        raise ValueError("QFT order must be at least 1")
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def build_s_fn(basis=None, n=None):
    """``S|psi_i> = sum_j F[i, j] |psi_j>|psi_j>`` for an orthonormal basis.

    The basis must span the whole input space (``n = d_a``).
    """
    if basis is None:
        basis = _standard(n)
    basis = check_orthonormal(basis)
    d = basis.shape[0]
    if n is not None and n != d:
        raise ValueError(f"S_Fn needs a full basis: n={n} but dimension is {d}")
    f = qft_matrix(d)
    pairs = [tensor(basis[:, j], basis[:, j]) for j in range(d)]
    images = [sum(f[i, j] * pairs[j] for j in range(d)) for i in range(d)]
    return Masker(d, d, _from_images(images, basis), "Sfn", basis, basis)


def build_s_sharp(basis_a, basis_b=None):
    """``S|e_k> = |e_k>|f_k>``."""
    if isinstance(basis_a, (int, np.integer)):
        basis_a = _standard(basis_a)
    basis_a = check_orthonormal(basis_a)
    basis_b = basis_a if basis_b is None else check_orthonormal(basis_b)
    d = basis_a.shape[0]
    if basis_b.shape[0] != d:
        raise ValueError("S_sharp needs bases of equal dimension")
    images = [tensor(basis_a[:, k], basis_b[:, k]) for k in range(d)]
    return Masker(d, d, _from_images(images, basis_a), "Ssharp", basis_a, basis_b)


def build_s_diamond(basis_a, basis_b=None):
    """``S|e_j> = d**-0.5 * sum_k w**(j*k) |e_k>|f_k>``."""
    if isinstance(basis_a, (int, np.integer)):
        basis_a = _standard(basis_a)
    basis_a = check_orthonormal(basis_a)
    basis_b = _standard(basis_a.shape[0]) if basis_b is None else check_orthonormal(basis_b)
    d = basis_a.shape[0]
    if basis_b.shape[0] != d:
        raise ValueError("S_diamond needs bases of equal dimension")
    f = qft_matrix(d)
    pairs = np.array([tensor(basis_a[:, k], basis_b[:, k]) for k in range(d)])
    images = f.T @ pairs
    return Masker(d, d, _from_images(images, basis_a), "Sdiamond", basis_a, basis_b)


def build_multiparty_masker(n):
    """Isometry ``C^n -> (C^n)^{(x) 2n}`` with ``|k> -> (S_Fn|k>)^{(x) n}``.

    Every input state is mapped to a state whose single-party marginals are
    all ``I/n``. The result is returned as a bipartite masker with party 1 as
    A and the remaining ``2n - 1`` parties as B.
    """
    if not 2 <= n <= MAX_MULTIPARTY:
        raise ValueError(f"multiparty masker supports 2 <= n <= {MAX_MULTIPARTY}, got {n}")
    pair = build_s_fn(n=n).matrix
    cols = []
    for k in range(n):
        col = np.ones(1, dtype=complex)
        for _ in range(n):
            col = np.kron(col, pair[:, k])
        cols.append(col)
    return Masker(n, n ** (2 * n - 1), np.column_stack(cols), "Multiparty",
                  params={"parties": 2 * n})


def multiparty_marginals(masker, psi):
    """Single-party reduced states of ``S|psi>`` for a multiparty masker."""
    from .linalg import reduced_state
    n = masker.d_a
    parties = 2 * n
    image = masker.apply(psi)
    return [reduced_state(image, (n,) * parties, j) for j in range(parties)]


def build_injection_masker(states, d=None, tol=1e-10):
    """Injective masker for a linearly independent set of pure states.

    The set is completed to a basis of the input space, the frame operator
    ``G = sum_k |psi_k><psi_k|`` is formed, and the masker is
    ``S_diamond @ G^{-1/2}`` with ``S_diamond`` built on the orthonormal
    vectors ``G^{-1/2}|psi_k>``.
    """
    vecs = np.column_stack([np.asarray(s, dtype=complex).reshape(-1) for s in states])
    d = vecs.shape[0] if d is None else d
    n = vecs.shape[1]
    if n > d:
        raise ValueError(f"{n} states cannot be independent in dimension {d}")
    gram = vecs.conj().T @ vecs
    if np.linalg.eigvalsh(gram)[0] <= tol:
        raise ValueError("states are linearly dependent")
    full = np.column_stack([vecs, complete_basis(vecs, d)])
    g_inv_sqrt = inv_sqrt_psd(full @ full.conj().T)
    e = g_inv_sqrt @ full
    if np.max(np.abs(e.conj().T @ e - np.eye(d))) > 1e-9:
        raise ArithmeticError("orthonormalized frame is not orthonormal")
    diamond = build_s_diamond(e)
    return Masker(d, d, diamond.matrix @ g_inv_sqrt, "Injection",
                  e, diamond.basis_b, params={"n_states": n})


def remark24_b_states():
    """The states ``|f_j^k>`` (k = 1..4, j = 1, 2) in ``C^2 (x) C^2``.

    Returned as an array indexed ``[k-1, j-1]``.
    """
    ket = np.eye(2, dtype=complex)
    f1 = [tensor(ket[j], ket[0]) for j in range(2)]
    f2 = [tensor(ket[j], ket[1]) for j in range(2)]
    f3 = [(a + b) / np.sqrt(2) for a, b in zip(f1, f2)]
    f4 = [(a - 1j * b) / np.sqrt(2) for a, b in zip(f1, f2)]
    return np.array([f1, f2, f3, f4])


def build_remark24_operator():
    """``S|psi_k> = 2**-0.5 * sum_j |j-1>|f_j^k>`` on ``C^2 -> C^2 (x) C^4``.

    Defined on ``|0>, |1>`` and extended linearly.
    """
    f = remark24_b_states()
    ket = np.eye(2, dtype=complex)
    images = [sum(tensor(ket[j], f[k, j]) for j in range(2)) / np.sqrt(2)
              for k in range(2)]
    return Masker(2, 4, _from_images(images, ket), "Remark24")


def random_isometry(d_a, d_b, seed=None):
    """Masker from the QR factor of a Gaussian ``(d_a*d_b) x d_a`` matrix."""
    if d_a < 1 or d_b < 1:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d_a * d_b, d_a)) + 1j * rng.standard_normal((d_a * d_b, d_a))
    q, _ = np.linalg.qr(g)
    return Masker(d_a, d_b, q, "Custom")


def counterexample_states(psi1, psi2, tol=1e-10):
    """The four states ``psi1, psi2, (psi1+psi2)/sqrt2, (psi1-i psi2)/sqrt2``."""
    psi1 = as_pure_state(psi1, tol=1e-10)
    psi2 = as_pure_state(psi2, psi1.size, tol=1e-10)
    if abs(np.vdot(psi1, psi2)) > tol:
        raise ValueError("counterexample states need orthogonal inputs")
    return [psi1, psi2, (psi1 + psi2) / np.sqrt(2), (psi1 - 1j * psi2) / np.sqrt(2)]


# --------------------------------------------------------------------------- #
#                      Parameter vectors and samplers                         #
# --------------------------------------------------------------------------- #


def as_amplitude_vector(r, tol=1e-12):
    """Nonnegative real vector of unit Euclidean norm."""
    r = np.asarray(r, dtype=float).reshape(-1)
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("amplitude vector must be finite and nonnegative")
    if abs(np.sum(r ** 2) - 1) > tol:
        raise ValueError("amplitude vector must have unit norm")
    return r


def as_probability_vector(p, tol=1e-12):
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probability vector must be finite and nonnegative")
    if abs(np.sum(p) - 1) > tol:
        raise ValueError("probability vector must sum to 1")
    return p


def _basis_or_standard(basis, d):
    return _standard(d) if basis is None else check_orthonormal(basis)


def sample_q_r(r, basis=None, seed=None):
    """``sum_k exp(i phi_k) r_k |e_k>`` with phases uniform on ``(-pi, pi]``."""
    r = as_amplitude_vector(r)
    basis = _basis_or_standard(basis, r.size)
    rng = np.random.default_rng(seed)
    phi = -rng.uniform(-np.pi, np.pi, r.size)
    return basis @ (r * np.exp(1j * phi))


def _zero_diagonal_perturbation(base, frame, rng, scale):
    # Hermitian direction with zero diagonal in `frame`, scaled to keep base + t*D >= 0
    d = base.shape[0]
    h = random_hermitian(d, rng)
    np.fill_diagonal(h, 0)
    delta = frame @ h @ frame.conj().T
    lam_min = np.linalg.eigvalsh(base)[0]
    norm = np.linalg.norm(delta, 2)
    t = min(1.0, 0.9 * max(lam_min, 0.0) / norm) if norm > 0 else 0.0
    rho = base + scale * t * delta
    return (rho + rho.conj().T) / 2


def sample_q_p(p, basis=None, seed=None, scale=None):
    """Random density with ``<e_k|rho|e_k> = p_k``.

    ``diag(p)`` in the e-basis plus a Hermitian perturbation that vanishes on
    the e-basis diagonal. ``scale`` in ``[0, 1]`` sets the perturbation
    strength (random when omitted); ``scale=0`` returns the base member.
    """
    p = as_probability_vector(p)
    basis = _basis_or_standard(basis, p.size)
    rng = np.random.default_rng(seed)
    scale = rng.uniform() if scale is None else scale
    base = (basis * p) @ basis.conj().T
    return _zero_diagonal_perturbation(base, basis, rng, scale)


def sample_q_q(q, seed=None, scale=None, basis=None):
    """Random density whose QFT-conjugated matrix has diagonal ``q``.

    The base member is ``F^dagger diag(q) F`` (in the e-basis).
    """
    q = as_probability_vector(q)
    d = q.size
    basis = _basis_or_standard(basis, d)
    rng = np.random.default_rng(seed)
    scale = rng.uniform() if scale is None else scale
    frame = basis @ qft_matrix(d).conj().T
    base = (frame * q) @ frame.conj().T
    return _zero_diagonal_perturbation(base, frame, rng, scale)
