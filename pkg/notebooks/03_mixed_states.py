"""
Masking mixed states
====================

Commuting sets, the injection masker and the largest mixed sets each
masker can hide.
"""

# %%
import numpy as np

from masklab import (
    build_injection_masker, build_s_diamond, build_s_sharp, membership_q_p,
    membership_q_q, random_density, random_pure, random_unitary, sample_q_p,
    sample_q_q, verify_masking_mixed, verify_masking_pure,
)

# %%
# Densities sharing an eigenbasis are masked by S_diamond built on that basis.
d = 4
basis = random_unitary(d, seed=0)
rng = np.random.default_rng(0)
rhos = [(basis * p) @ basis.conj().T for p in rng.dirichlet(np.ones(d), 5)]
rep = verify_masking_mixed(build_s_diamond(basis), rhos)
print(rep.verdict.value, np.allclose(rep.reference_marginal_a, np.eye(d) / d))

# %%
# Any linearly independent set of pure states can be masked by an injective
# (non-isometric) masker.
states = [random_pure(3, seed=k) for k in range(3)]
s = build_injection_masker(states)
print(verify_masking_pure(s, states).verdict.value, s.is_isometry)

# %%
# S_sharp masks exactly the densities with a fixed diagonal p.
p = np.array([0.2, 0.3, 0.5])
member = sample_q_p(p, seed=1)
outsider = random_density(3, seed=2)
for rho in (member, outsider):
    masked = verify_masking_mixed(build_s_sharp(3), [np.diag(p), rho]).masked
    print(membership_q_p(rho, p), masked)

# %%
# S_diamond masks the densities whose Fourier-conjugated diagonal is q.
q = np.array([0.1, 0.6, 0.3])
rho = sample_q_q(q, seed=3)
print(membership_q_q(rho, q))
