"""The adjoint ladder on a driven Ising chain.

Each rung ``A -> i[H, A] + dA/dt`` applied to the boundary dephasing operator
doubles the dimension of the generated algebra until it fills B(H); at that
point the steady state is unique without any time integration.
"""
import numpy as np

from tdlindblad import zoo
from tdlindblad.dynamics import evolve_ensemble, random_states, window_contraction
from tdlindblad.symmetry import ad_ladder, c_int, uniqueness_by_ad

for v in (2, 3):
    e = zoo.build("driven-chain", V=v, B=1.0, omega=1.0)
    lad = ad_ladder(e.model)
    print(f"V = {v}: algebra dimension after each rung {lad.dims}  (full = {4**v})")
    print(f"        ladder algebra is all of B(H): {uniqueness_by_ad(e.model)}")

# With a trivial C_int every state relaxes to the identity.
e = zoo.build("driven-chain", V=2)
d = e.model.dim
print("\nC_int trivial:", c_int(e.model).is_trivial())
trajs = evolve_ensemble(e.model, random_states(d, 5, seed=0), 100.0, store_states=False)
for k, tr in enumerate(trajs):
    print(f"  state {k}: |rho_T - I/d| = {np.linalg.norm(tr.final - np.eye(d) / d):.2e}")

# The window contraction over one period is strictly below one.
period = e.model.period
print(f"\ncontraction of one period on traceless operators: {window_contraction(e.model, 0.0, period):.4f}")
