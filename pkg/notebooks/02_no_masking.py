"""
No single masker hides every state
==================================

Four states built from an orthonormal pair defeat every masker we try.
"""

# %%
import numpy as np

from masklab import (
    build_remark24_operator, build_s_diamond, build_s_fn, build_s_sharp,
    counterexample_states, cross_term, random_isometry, theorem21_certificate,
    verify_masking_pure,
)

ket0, ket1 = np.eye(2)
q = counterexample_states(ket0, ket1)

# %%
# The named maskers and a handful of random isometries all fail.
maskers = [build_s_fn(n=2), build_s_sharp(2), build_s_diamond(2), build_remark24_operator()]
maskers += [random_isometry(2, 3, seed=k) for k in range(5)]
for s in maskers:
    rep = verify_masking_pure(s, q)
    cert = theorem21_certificate(s, q)
    print(f"{s.kind:9s} {rep.verdict.value:10s} dev={rep.max_deviation:.3f} common Schmidt form: {cert.holds}")

# %%
# Why: if the first two states are masked, the superpositions add a cross
# term to the B marginal. S_F2 masks |0>, |1> but its cross term is nonzero.
s = build_s_fn(n=2)
print(np.linalg.norm(cross_term(s, q[0], q[1])))
print([verify_masking_pure(s, q[:2] + [x]).verdict.value for x in q[2:]])

# %%
# The C^2 -> C^2 (x) C^4 operator keeps the A side fixed at I/2 for all four
# states, yet its B side still changes: one fixed marginal is not enough.
rep = verify_masking_pure(build_remark24_operator(), q)
print([np.allclose(m, np.eye(2) / 2) for m in rep.marginals_a])
print([round(d_b, 3) for _, _, d_b in rep.per_state_deviations])
