"""Named demonstrations, each reproducing one masking result numerically.

Every demo returns a list of :class:`Check` records; a demo passes when all
of its checks do. Sizes are kept small so each runs in well under a second.
"""

from typing import NamedTuple

import numpy as np

from .linalg import random_density, random_pure, random_unitary
from .maskers import (
    build_injection_masker, build_multiparty_masker, build_remark24_operator,
    build_s_diamond, build_s_fn, build_s_sharp, counterexample_states,
    multiparty_marginals, qft_matrix, random_isometry, remark24_b_states,
    sample_q_p, sample_q_q, sample_q_r,
)
from .verify import (
    cross_term, membership_q_p, membership_q_q, qft_conjugate,
    trace_type_deviation, verify_masking_mixed, verify_masking_pure,
)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


DEMOS = {}


def _demo(fn):
    DEMOS[fn.__name__.removeprefix("demo_")] = fn
    return fn


def run_demo(name, seed=0):
    """Run the demo called ``name``; raises ``KeyError`` for unknown names."""
    return DEMOS[name](seed)


def _close(a, b):
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def _ket(d, k):
    v = np.zeros(d, dtype=complex)
    v[k] = 1
    return v


@_demo
def demo_prop21(seed):
    checks = []
    for d in range(2, 7):
        basis = random_unitary(d, seed + d)
        rep = verify_masking_pure(build_s_fn(basis), list(basis.T), tol=1e-10)
        err = max(rep.max_deviation, _close(rep.reference_marginal_a, np.eye(d) / d),
                  _close(rep.reference_marginal_b, np.eye(d) / d))
        checks.append(Check(f"S_F{d} masks an orthonormal basis with I/{d}",
                            rep.masked and err <= 1e-10, f"max error {err:.2e}"))
    return checks


@_demo
def demo_example21(seed):
    d = 4
    s = build_s_sharp(d)
    r = np.full(d, 1 / np.sqrt(d))
    states = [sample_q_r(r, seed=seed + i) for i in range(50)]
    rep = verify_masking_pure(s, states, tol=1e-10)
    err = max(_close(rep.reference_marginal_a, np.eye(d) / d),
              _close(rep.reference_marginal_b, np.eye(d) / d))
    return [
        Check("50 equal-amplitude phase states are masked", rep.masked,
              f"max deviation {rep.max_deviation:.2e}"),
        Check("both marginals equal I/4", err <= 1e-10, f"error {err:.2e}"),
    ]


@_demo
def demo_thm22(seed):
    q = counterexample_states(_ket(2, 0), _ket(2, 1))
    maskers = [build_s_fn(n=2), build_s_sharp(2), build_s_diamond(2),
               build_remark24_operator()]
    maskers += [random_isometry(2, 2 + i % 3, seed + i) for i in range(20)]
    checks = []
    worst = np.inf
    for s in maskers:
        rep = verify_masking_pure(s, q)
        worst = min(worst, rep.max_deviation)
        if s.kind != "Custom":
            checks.append(Check(f"{s.kind} fails on the four-state set",
                                not rep.masked and rep.max_deviation > 1e-3,
                                f"max deviation {rep.max_deviation:.3f}"))
    checks.append(Check("every tried masker fails with deviation > 1e-3", worst > 1e-3,
                        f"smallest deviation {worst:.3f}"))
    # S_F2 masks {psi1, psi2} with a nonzero cross term, so psi3 or psi4 must fail
    s = build_s_fn(n=2)
    ct = np.linalg.norm(cross_term(s, q[0], q[1]))
    pair = verify_masking_pure(s, q[:2]).masked
    broken = [not verify_masking_pure(s, q[:2] + [x]).masked for x in q[2:]]
    checks.append(Check("nonzero cross term forces psi3 or psi4 to break masking",
                        ct > 0.1 and pair and any(broken),
                        f"|cross term| = {ct:.3f}, psi3/psi4 broken: {broken}"))
    return checks


@_demo
def demo_remark24(seed):
    s = build_remark24_operator()
    q = counterexample_states(_ket(2, 0), _ket(2, 1))
    rep = verify_masking_pure(s, q)
    f = remark24_b_states()
    ortho = max(_close(f[k] @ f[k].conj().T, np.eye(2)) for k in range(4))
    a_const = max(_close(m, np.eye(2) / 2) for m in rep.marginals_a)
    b_spread = _close(rep.marginals_b[0], rep.marginals_b[2])
    smin = np.linalg.svd(s.matrix, compute_uv=False)[-1]
    return [
        Check("{f_1^k, f_2^k} orthonormal for k = 1..4", ortho <= 1e-12, f"error {ortho:.1e}"),
        Check("B-traced marginal is I/2 on all four states", a_const <= 1e-12,
              f"error {a_const:.1e}"),
        Check("A-traced marginals of psi1 and psi3 differ", b_spread > 0.1,
              f"distance {b_spread:.3f}"),
        Check("operator is injective", smin > 0.1, f"min singular value {smin:.3f}"),
        Check("the set is not masked", not rep.masked, f"max deviation {rep.max_deviation:.3f}"),
    ]


def isometric_maskers(d):
    """Every isometric masker kind constructible at input dimension ``d``."""
    out = [build_s_fn(n=d), build_s_sharp(d), build_s_diamond(d)]
    if 2 <= d <= 3:
        out.append(build_multiparty_masker(d))
    if d == 2:
        out.append(build_remark24_operator())
    return out


@_demo
def demo_cor23(seed):
    checks = []
    for d in (2, 3, 4):
        for s in isometric_maskers(d):
            dev = max(trace_type_deviation(s, "A"), trace_type_deviation(s, "B"))
            checks.append(Check(f"{s.kind} d={d}: a marginal channel is not trace-type",
                                dev > 1e-3, f"matrix-unit deviation {dev:.3f}"))
    return checks


def commuting_set(d, count, seed):
    """``count`` densities diagonal in a shared random eigenbasis; returns (basis, set)."""
    rng = np.random.default_rng(seed)
    basis = random_unitary(d, rng)
    ps = rng.dirichlet(np.ones(d), count)
    return basis, [(basis * p) @ basis.conj().T for p in ps]


def noncommuting_pair(d):
    """Two equal-amplitude pure states whose projectors do not commute."""
    psi1 = np.ones(d, dtype=complex) / np.sqrt(d)
    psi2 = np.full(d, 1j, dtype=complex) / np.sqrt(d)
    psi2[0] = 1 / np.sqrt(d)
    return np.outer(psi1, psi1.conj()), np.outer(psi2, psi2.conj())


@_demo
def demo_thm31(seed):
    checks = []
    for i, d in enumerate(range(2, 6)):
        basis, rhos = commuting_set(d, 3, seed + i)
        rep = verify_masking_mixed(build_s_diamond(basis), rhos, tol=1e-10)
        err = _close(rep.reference_marginal_a, np.eye(d) / d)
        checks.append(Check(f"commuting set in d={d} masked by S_diamond with I/{d}",
                            rep.masked and err <= 1e-10, f"error {err:.1e}"))
    r1, r2 = noncommuting_pair(3)
    comm = _close(r1 @ r2, r2 @ r1)
    rep = verify_masking_mixed(build_s_sharp(3), [r1, r2], tol=1e-10)
    checks.append(Check("non-commuting pair masked by S_sharp", comm > 0.1 and rep.masked,
                        f"|[r1, r2]| = {comm:.3f}, deviation {rep.max_deviation:.1e}"))
    return checks


@_demo
def demo_cor31(seed):
    checks = []
    for i, d in enumerate((2, 3, 4)):
        states = [random_pure(d, seed + 10 * i + k) for k in range(d)]
        s = build_injection_masker(states)
        rep = verify_masking_pure(s, states, tol=1e-8)
        ortho = _close(s.basis_a.conj().T @ s.basis_a, np.eye(d))
        checks.append(Check(f"{d} independent states in d={d} masked by an injection",
                            rep.masked and ortho <= 1e-9,
                            f"deviation {rep.max_deviation:.1e}, frame error {ortho:.1e}"))
    return checks


def density_cases(d, member, sampler, target, rng):
    """A sampled member (``member=True``) or a generic random density."""
    if member:
        return sampler(target, seed=rng)
    return random_density(d, seed=rng)


@_demo
def demo_thm32(seed):
    rng = np.random.default_rng(seed)
    disagree = 0
    for i in range(100):
        d = 2 + i % 3
        p = rng.dirichlet(np.ones(d))
        rho = density_cases(d, i % 2 == 0, sample_q_p, p, rng)
        base = np.diag(p).astype(complex)
        verdict = verify_masking_mixed(build_s_sharp(d), [base, rho]).masked
        disagree += verdict != membership_q_p(rho, p)
    return [Check("membership in Q_p agrees with S_sharp masking (100 cases)",
                  disagree == 0, f"{disagree} disagreements")]


@_demo
def demo_thm33(seed):
    rng = np.random.default_rng(seed)
    disagree = 0
    for i in range(100):
        d = 2 + i % 3
        q = rng.dirichlet(np.ones(d))
        rho = density_cases(d, i % 2 == 0, sample_q_q, q, rng)
        f = qft_matrix(d)
        base = f.conj().T @ np.diag(q) @ f
        verdict = verify_masking_mixed(build_s_diamond(d), [base, rho]).masked
        disagree += verdict != membership_q_q(rho, q)
    err = 0.0
    for i in range(20):
        d = 2 + i % 4
        rho = random_density(d, seed=rng)
        w = np.exp(2j * np.pi / d)
        eps = [np.array([w ** -(k * j) for j in range(d)]) / np.sqrt(d) for k in range(d)]
        direct = np.array([[eps[a].conj() @ rho @ eps[b] for b in range(d)]
                           for a in range(d)])
        err = max(err, _close(direct, qft_conjugate(rho)))
    return [
        Check("membership in Q^q agrees with S_diamond masking (100 cases)",
              disagree == 0, f"{disagree} disagreements"),
        Check("[<eps_i|M|eps_j>] equals F M F^dagger", err <= 1e-12, f"error {err:.1e}"),
    ]


@_demo
def demo_multiparty(seed):
    checks = []
    for n, count in ((2, 20), (3, 3)):
        s = build_multiparty_masker(n)
        err = 0.0
        for k in range(count):
            psi = random_pure(n, seed + 100 * n + k)
            err = max(err, max(_close(m, np.eye(n) / n)
                               for m in multiparty_marginals(s, psi)))
        checks.append(Check(f"n={n}: all {2 * n} single-party marginals are I/{n}",
                            err <= 1e-9, f"max error {err:.1e}"))
    return checks
