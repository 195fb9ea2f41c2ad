"""Two-level models: from commutants to steady states.

Classify the small zoo models algebraically, then integrate a few random
states and check that the late-time behaviour agrees.
"""
import math

import numpy as np

from tdlindblad import zoo
from tdlindblad.dynamics import evolve, evolve_ensemble, random_states, steady_state_probe
from tdlindblad.operators import SX, SY, SZ
from tdlindblad.symmetry import basis_labels, classify

# Commutant dimensions decide the class: (1,1) unique, (n,n) stationary family,
# (n,m) with m > n oscillating family, (1,m) unique up to oscillation.
for name in ["ex-3.1", "ex-3.2", "rotating-dephasing", "two-level-drive", "multi-frequency"]:
    e = zoo.build(name)
    r = classify(e.model)
    print(f"{name:20s} class {r.steady_class:3s} dim C_sch = {r.dim_c_sch}, dim C_int = {r.dim_c_int}")
    print(f"{'':20s} C_int spanned by {basis_labels(r.c_int)}")

# The empirical probe runs an ensemble and looks at the final window.
e = zoo.build("ex-3.2")
trajs = evolve_ensemble(e.model, random_states(2, 4, seed=1), 40.0, record_every=5)
print("\nex-3.2 probe:", steady_state_probe(e.model, trajs).steady_class)

# Rotating dephasing: the coherence survives and rotates at the drive frequency.
e = zoo.build("rotating-dephasing", omega=1.0, kappa=0.5)
rho0 = random_states(2, 1, seed=2)[0]
tr = evolve(e.model, rho0, 30.0, record_every=100)
print("\nrotating dephasing, |rho_01| and the phase of rho_01 e^{it} at late times:")
for t, rho in list(zip(tr.times, tr.states))[-5:]:
    print(f"  t = {t:5.1f}  |rho01| = {abs(rho[0, 1]):.6f}  co-rotating phase = {np.angle(rho[0, 1] * np.exp(1j * t)):+.6f}")
err = max(np.abs(rho - e.exact_solution(rho0, t)).max() for t, rho in zip(tr.times, tr.states))
print(f"  largest deviation from the closed form: {err:.1e}")

# Decaying dephasing is not recurrent: classify refuses it, but the closed
# form shows the state keeps a memory of where it started.
e = zoo.build("decaying-dephasing")
rho0 = random_states(2, 1, seed=3)[0]
final = evolve(e.model, rho0, 15.0, store_states=False).final
print("\ndecaying dephasing, final Bloch vector / initial:")
for s, label, k in [(SX, "x", 1), (SY, "y", 1), (SZ, "z", 2)]:
    ratio = np.trace(s @ final).real / np.trace(s @ rho0).real
    print(f"  {label}: {ratio:.6f}   (e^-{k} = {math.exp(-k):.6f})")
