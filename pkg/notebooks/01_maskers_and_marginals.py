"""
Maskers and their marginals
===========================

Build the standard maskers and look at what each subsystem sees.
"""

# %%
import numpy as np

from masklab import (
    build_multiparty_masker, build_s_diamond, build_s_fn, build_s_sharp,
    multiparty_marginals, random_pure, random_unitary, sample_q_r,
    verify_masking_pure,
)

np.set_printoptions(precision=3, suppress=True)

# %%
# S_F3 on a random orthonormal basis: both marginals come out maximally mixed.
basis = random_unitary(3, seed=1)
s = build_s_fn(basis)
rep = verify_masking_pure(s, list(basis.T))
print(rep.verdict.value, rep.max_deviation)
print(rep.reference_marginal_a)

# %%
# S_sharp hides the phases of a state but keeps its amplitude moduli.
# Every state with moduli r gives marginals diag(r**2) on both sides.
r = np.array([0.6, 0.8])
states = [sample_q_r(r, seed=k) for k in range(5)]
rep = verify_masking_pure(build_s_sharp(2), states)
print(rep.verdict.value)
print(rep.reference_marginal_a.real)

# %%
# S_diamond sends each basis vector to a maximally entangled state.
s = build_s_diamond(3)
print(np.abs(s.apply(np.eye(3)[0])).reshape(3, 3))

# %%
# The multiparty masker spreads one qubit over four parties; no single party
# learns anything about the input.
mp = build_multiparty_masker(2)
for m in multiparty_marginals(mp, random_pure(2, seed=3)):
    print(m.real.round(12))
