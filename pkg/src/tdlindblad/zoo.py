"""Catalogue of named models with their expected classification.

``build(name, **overrides)`` returns a ``ZooEntry``: the model, the resolved
parameters, the expected class and commutant dimensions, and a few ready-made
observables.  Fermion entries also know their conserved particle-number
sector, where the class can differ from the full-space one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ModelError
from .model import GkslModel, TimeDependentOperator
from .operators import (
    SX,
    SY,
    SZ,
    HilbertSpec,
    UP,
    DOWN,
    fermion_ops,
    pauli_string,
    sector_isometry,
)
from .profiles import ExpDecayProfile, PiecewiseProfile, TrigProfile

GOLDEN = (1 + math.sqrt(5)) / 2
FIG2_MU = (-0.786, 0.657, -0.133, -0.176)


@dataclass
class ZooEntry:
    name: str
    params: dict
    model: GkslModel
    expected: dict
    observables: dict = field(default_factory=dict)
    description: str = ""
    sector: dict | None = None
    exact_solution: Callable | None = None

    def sector_isometry(self, n_particles: int | None = None) -> np.ndarray:
        if self.sector is None:
            raise ModelError(f"{self.name} has no particle-number sector")
        n = self.sector["N"] if n_particles is None else n_particles
        return sector_isometry(self.model.space, n)

    def sector_model(self, n_particles: int | None = None) -> GkslModel:
        iso = self.sector_isometry(n_particles)
        n = self.sector["N"] if n_particles is None else n_particles
        return self.model.restricted(iso, name=f"{self.name}[N={n}]")

    def sector_observables(self, n_particles: int | None = None) -> dict:
        iso = self.sector_isometry(n_particles)
        return {k: iso.conj().T @ v @ iso for k, v in self.observables.items()}


def _tdo(*terms) -> TimeDependentOperator:
    return TimeDependentOperator(tuple(terms))


def _const(a) -> TimeDependentOperator:
    return TimeDependentOperator.constant(a)


def _pauli_obs():
    return {"sx": SX, "sy": SY, "sz": SZ}


def _check_positive(params, *keys):
    for k in keys:
        if not params[k] > 0:
            raise ModelError(f"parameter {k} must be positive, got {params[k]}")


def _ex_3_1(p):
    _check_positive(p, "omega", "kappa")
    m = GkslModel(
        HilbertSpec.qubits(1), _const(p["omega"] / 2 * SX), [_const(math.sqrt(p["kappa"]) * SZ)], name="ex-3.1"
    )
    return m, {"class": "i", "dim_c_sch": 1, "dim_c_int": 1}


def _ex_3_2(p):
    _check_positive(p, "omega", "kappa")
    m = GkslModel(
        HilbertSpec.qubits(1), _const(p["omega"] / 2 * SZ), [_const(math.sqrt(p["kappa"]) * SZ)], name="ex-3.2"
    )
    return m, {"class": "ii", "dim_c_sch": 2, "dim_c_int": 2}


def _rotating(p):
    _check_positive(p, "omega", "kappa")
    w, k = p["omega"], math.sqrt(p["kappa"])
    jump = _tdo((TrigProfile.cos(w), k * SX), (TrigProfile.sin(w), k * SY))
    ham = _const(w / 2 * SZ) if p["hamiltonian"] else _const(np.zeros((2, 2)))
    m = GkslModel(HilbertSpec.qubits(1), ham, [jump], period=2 * math.pi / w, name="rotating-dephasing")
    if p["hamiltonian"]:
        return m, {"class": "iv", "dim_c_sch": 1, "dim_c_int": 2}
    return m, {"class": "i", "dim_c_sch": 1, "dim_c_int": 1}


def _rotating_exact(p):
    """Closed-form state of the rotating-dephasing model (with its Hamiltonian)."""
    w, kappa = p["omega"], p["kappa"]

    def solution(rho0, t):
        x0, y0, z0 = (np.trace(s @ rho0).real for s in (SX, SY, SZ))
        decay = math.exp(-2 * kappa * t)
        rot = 0.5 * (np.eye(2) + x0 * SX + decay * (y0 * SY + z0 * SZ))
        u = np.diag([np.exp(-0.5j * w * t), np.exp(0.5j * w * t)])
        return u @ rot @ u.conj().T

    return solution


def _decaying(p):
    _check_positive(p, "rate")
    r = p["rate"]
    jumps = [_tdo((ExpDecayProfile(1.0, r), SX)), _tdo((ExpDecayProfile(1.0, r), SY))]
    m = GkslModel(
        HilbertSpec.qubits(1), _const(np.zeros((2, 2))), jumps, quasiperiodic=False, name="decaying-dephasing"
    )
    return m, {"class": None, "dim_c_sch": 1, "dim_c_int": 1}


def _decaying_exact(p):
    """Bloch components decay as exp((e^{-2rt} - 1) / r) (x, y) and its square (z)."""
    r = p["rate"]

    def solution(rho0, t):
        x0, y0, z0 = (np.trace(s @ rho0).real for s in (SX, SY, SZ))
        f = math.exp((math.exp(-2 * r * t) - 1) / r)
        return 0.5 * (np.eye(2) + f * (x0 * SX + y0 * SY) + f * f * z0 * SZ)

    return solution


def _two_level_drive(p):
    _check_positive(p, "kappa")
    amps, freqs = list(p["amplitudes"]), list(p["omegas"])
    l = p["l"]
    if len(amps) < l or len(freqs) < l:
        raise ModelError(f"need {l} amplitudes and frequencies")
    terms = [(TrigProfile(1.0), SZ)] + [(TrigProfile.cos(freqs[j], amplitude=amps[j]), SX) for j in range(l)]
    period = 2 * math.pi / freqs[0] if l == 1 else None
    m = GkslModel(
        HilbertSpec.qubits(1), _tdo(*terms), [_const(math.sqrt(p["kappa"]) * SZ)], period=period,
        name=f"two-level-drive(l={l})",
    )
    return m, {"class": "i", "dim_c_sch": 1, "dim_c_int": 1}


def _multi_frequency(p):
    _check_positive(p, "kappa")
    w1, w2, w3 = p["omega1"], p["omega2"], p["omega3"]
    ham = _tdo((TrigProfile.cos(w1), SX), (TrigProfile.cos(w2, p["phase"]), SZ))
    jump = _tdo((TrigProfile.cos(w3), math.sqrt(p["kappa"]) * SZ))
    m = GkslModel(HilbertSpec.qubits(1), ham, [jump], name="multi-frequency")
    return m, {"class": "i", "dim_c_sch": 1, "dim_c_int": 1}


def _fibonacci(p):
    _check_positive(p, "T", "kappa")
    h0, h1 = np.asarray(p["h0"], complex), np.asarray(p["h1"], complex)
    l0, l1 = np.asarray(p["l0"], complex), np.asarray(p["l1"], complex)
    width = p["a"]
    fib_n = p["fib_n"]
    ind0 = PiecewiseProfile(p["T"], "fibonacci", {"0": 1.0, "1": 0.0}, width, 1.0, fib_n)
    ind1 = PiecewiseProfile(p["T"], "fibonacci", {"0": 0.0, "1": 1.0}, width, 1.0, fib_n)
    root0 = PiecewiseProfile(p["T"], "fibonacci", {"0": 1.0, "1": 0.0}, width, 0.5, fib_n)
    root1 = PiecewiseProfile(p["T"], "fibonacci", {"0": 0.0, "1": 1.0}, width, 0.5, fib_n)
    k = math.sqrt(p["kappa"])
    m = GkslModel(
        HilbertSpec.generic(h0.shape[0]),
        _tdo((ind0, h0), (ind1, h1)),
        [_tdo((root0, k * l0)), _tdo((root1, k * l1))],
        name="fibonacci",
    )
    return m, {"class": p["expected_class"], "dim_c_sch": 1, "dim_c_int": 1}


def _driven_chain(p):
    _check_positive(p, "B", "omega", "kappa")
    v = p["V"]
    if v < 1:
        raise ModelError("V must be at least 1")
    sp = HilbertSpec.qubits(v)
    zz = sum((pauli_string(sp, {j: "z", j + 1: "z"}) for j in range(1, v)), np.zeros((2**v, 2**v), complex))
    xs = sum(pauli_string(sp, {j: "x"}) for j in range(1, v + 1))
    ham = _tdo((TrigProfile(1.0), zz), (TrigProfile.cos(p["omega"], amplitude=p["B"]), xs))
    jump = _const(math.sqrt(p["kappa"]) * pauli_string(sp, {1: "z"}))
    m = GkslModel(sp, ham, [jump], period=2 * math.pi / p["omega"], name=f"driven-chain(V={v})")
    obs = {f"z{j}": pauli_string(sp, {j: "z"}) for j in range(1, v + 1)}
    return m, {"class": "i", "dim_c_sch": 1, "dim_c_int": 1}, obs


def hubbard_static_part(n_sites: int, tau: float, u: float, mu):
    """Hopping, on-site interaction and site potentials on an open chain."""
    sp = HilbertSpec.fermions(n_sites)
    f = fermion_ops(sp)
    d = sp.dim
    h = np.zeros((d, d), complex)
    for a, b in sp.bonds:
        for s in (UP, DOWN):
            hop = f.cdag[a, s] @ f.c[b, s]
            h -= tau * (hop + hop.conj().T)
    for j in range(1, n_sites + 1):
        h += u * f.n[j, UP] @ f.n[j, DOWN] + mu[j - 1] * f.site_number(j)
    return sp, f, h


def _site_mu(p):
    mu = list(p["mu"]) if p["mu"] is not None else list(FIG2_MU)
    n = p["n_sites"]
    if len(mu) < n:
        mu = (mu * n)[:n]
    return mu[:n]


def _kappas(p):
    k = p["kappa"]
    ks = [k] * p["n_sites"] if np.isscalar(k) else list(k)
    if any(x <= 0 for x in ks):
        raise ModelError("all dissipation rates must be positive")
    return ks


def _spin_observables(f, n_sites):
    obs = {}
    for j in range(1, n_sites + 1):
        obs[f"S{j}x"] = f.local_spin(j, "x")
        obs[f"S{j}y"] = f.local_spin(j, "y")
        obs[f"S{j}z"] = f.local_spin(j, "z")
    obs["N"] = f.number()
    return obs


def _spin_drive(f, amplitude, omega):
    """``amplitude * (cos(w t) S^x + sin(w t) S^y)``, the circular drive ``(B/2)(e^{-iwt} S^+ + h.c.)``."""
    sx = 0.5 * (f.s_plus() + f.s_minus())
    sy = (f.s_plus() - f.s_minus()) / 2j
    return [(TrigProfile.cos(omega, amplitude=amplitude), sx), (TrigProfile.sin(omega, amplitude=amplitude), sy)]


def _hubbard_static(p):
    if p["tau"] == 0 or p["B"] == 0:
        raise ModelError("tau and B must be non-zero")
    n = p["n_sites"]
    sp, f, h0 = hubbard_static_part(n, p["tau"], p["U"], _site_mu(p))
    h = h0 + 0.5 * p["B"] * sum(f.n[j, UP] - f.n[j, DOWN] for j in range(1, n + 1))
    jumps = [_const(math.sqrt(k) * f.site_number(j)) for j, k in enumerate(_kappas(p), start=1)]
    m = GkslModel(sp, _const(h), jumps, name=f"hubbard-static(L={n})")
    return m, f


def _hubbard_drive(p, drives, name):
    if p["tau"] == 0:
        raise ModelError("tau must be non-zero")
    n = p["n_sites"]
    sp, f, h0 = hubbard_static_part(n, p["tau"], p["U"], _site_mu(p))
    terms = [(TrigProfile(1.0), h0)]
    for amp, w in drives:
        if amp == 0 or w <= 0:
            raise ModelError("drive amplitudes must be non-zero and frequencies positive")
        terms += _spin_drive(f, amp, w)
    jumps = [_const(math.sqrt(k) * f.site_number(j)) for j, k in enumerate(_kappas(p), start=1)]
    period = 2 * math.pi / drives[0][1] if len(drives) == 1 else None
    m = GkslModel(sp, _tdo(*terms), jumps, period=period, name=name)
    return m, f


def _three_level(p):
    _check_positive(p, "omega1", "omega2")
    w1, w2 = p["omega1"], p["omega2"]
    e = np.zeros((3, 3, 3, 3), complex)
    for a in range(3):
        for b in range(3):
            e[a, b, a, b] = 1
    ham = np.diag([w1, 0.0, -w2]).astype(complex)
    jump = _tdo(
        (TrigProfile.cos(w1), e[0, 1] + e[1, 0]),
        (TrigProfile.sin(w1), -1j * e[0, 1] + 1j * e[1, 0]),
        (TrigProfile.cos(w2), e[1, 2] + e[2, 1]),
        (TrigProfile.sin(w2), -1j * e[1, 2] + 1j * e[2, 1]),
    )
    m = GkslModel(HilbertSpec.generic(3), _const(ham), [jump], name="three-level-quasi")
    return m, {"class": "iv", "dim_c_sch": 1, "dim_c_int": 3}


def _bump(p):
    _check_positive(p, "T", "kappa")
    period = p["T"]
    g = p["gT"] / period if p["gT"] is not None else p["g"]
    if g <= 0:
        raise ModelError("g must be positive")
    cell = period / 4
    width = p["width"]
    dissipate = PiecewiseProfile(cell, "1000", {"1": 1.0, "0": 0.0}, width, 0.5 if width else 1.0)
    rotate = PiecewiseProfile(cell, "0010", {"1": 1.0, "0": 0.0}, width)
    m = GkslModel(
        HilbertSpec.qubits(1),
        _tdo((rotate, g * SX)),
        [_tdo((dissipate, math.sqrt(p["kappa"]) * SZ))],
        period=period,
        name="bump",
    )
    gt = g * period
    resonant = abs(math.remainder(gt, 2 * math.pi)) < 1e-9
    expected = {"class": "iv", "dim_c_sch": 1, "dim_c_int": 2} if resonant else {"class": "i", "dim_c_sch": 1, "dim_c_int": 1}
    return m, expected


_DEFAULTS = {
    "ex-3.1": {"omega": 1.0, "kappa": 1.0},
    "ex-3.2": {"omega": 1.0, "kappa": 1.0},
    "rotating-dephasing": {"omega": 1.0, "kappa": 1.0, "hamiltonian": True},
    "decaying-dephasing": {"rate": 1.0},
    "two-level-drive": {"l": 1, "amplitudes": [1.0, 1.0], "omegas": [1.0, GOLDEN], "kappa": 1.0},
    "multi-frequency": {"omega1": 1.0, "omega2": math.sqrt(2), "omega3": GOLDEN, "phase": 0.3, "kappa": 1.0},
    "fibonacci": {
        "T": 1.0,
        "a": 0.1,
        "fib_n": 20,
        "kappa": 1.0,
        "h0": SX.tolist(),
        "h1": SZ.tolist(),
        "l0": SZ.tolist(),
        "l1": SZ.tolist(),
        "expected_class": "i",
    },
    "driven-chain": {"V": 2, "B": 1.0, "omega": 1.0, "kappa": 1.0},
    "hubbard-static": {"n_sites": 2, "tau": 1.0, "U": 1.0, "mu": None, "B": 1.0, "kappa": 1.0},
    "hubbard-1freq": {"n_sites": 2, "tau": 1.0, "U": 1.0, "mu": None, "B": math.pi, "omega": math.pi, "kappa": 1.0},
    "three-level-quasi": {"omega1": 1.0, "omega2": math.sqrt(2)},
    "hubbard-2freq": {
        "n_sites": 2,
        "tau": 1.0,
        "U": 1.0,
        "mu": None,
        "B1": math.pi,
        "B2": math.pi,
        "omega1": math.pi,
        "omega2": GOLDEN * math.pi,
        "kappa": 1.0,
    },
    "bump": {"g": math.pi, "T": 1.0, "kappa": 1.0, "gT": None, "width": None},
}

_DESCRIPTIONS = {
    "ex-3.1": "H = (w/2) sx, L = sqrt(k) sz: unique steady state",
    "ex-3.2": "H = (w/2) sz, L = sqrt(k) sz: sz conserved",
    "rotating-dephasing": "H = (w/2) sz, L = sqrt(k)(sx cos wt + sy sin wt): rotating coherence",
    "decaying-dephasing": "H = 0, L = (sx, sy) e^{-rt}: not recurrent, memory of the initial state",
    "two-level-drive": "H = sz + sum_j B_j cos(w_j t) sx, L = sqrt(k) sz",
    "multi-frequency": "H = cos(w1 t) sx + cos(w2 t + phi) sz, L = sqrt(k) cos(w3 t) sz",
    "fibonacci": "two generators switched by the Fibonacci word, coarse-grained over a width",
    "driven-chain": "Ising chain with transverse drive B cos(wt), boundary dephasing on site 1",
    "hubbard-static": "dissipative Hubbard chain with Zeeman field (strong dynamical symmetry S+)",
    "hubbard-1freq": "dissipative Hubbard chain with a circularly polarised spin drive",
    "three-level-quasi": "three levels, two incommensurate rotating couplings",
    "hubbard-2freq": "dissipative Hubbard chain with two incommensurate circular drives",
    "bump": "dephase for T/4, idle, rotate by g sx for T/4, idle (non-analytic periodic drive)",
}


# alternative names accepted by ``build``; not listed by ``catalogue``
ALIASES = {"ex-4.2": "decaying-dephasing"}


def catalogue() -> list:
    return list(_DEFAULTS)


def build(name: str, **overrides) -> ZooEntry:
    name = ALIASES.get(name, name)
    if name not in _DEFAULTS:
        raise KeyError(f"unknown model {name!r}; available: {', '.join(catalogue())}")
    unknown = set(overrides) - set(_DEFAULTS[name]) - ({"J"} if name.startswith("hubbard") else set())
    if unknown:
        raise ModelError(f"unknown parameters for {name}: {sorted(unknown)}")
    if name.startswith("hubbard") and "J" in overrides:
        overrides = dict(overrides)
        overrides["tau"] = overrides.pop("J")
    p = {**_DEFAULTS[name], **overrides}
    obs = _pauli_obs()
    sector = None
    exact = None
    if name == "ex-3.1":
        m, exp = _ex_3_1(p)
    elif name == "ex-3.2":
        m, exp = _ex_3_2(p)
    elif name == "rotating-dephasing":
        m, exp = _rotating(p)
        exact = _rotating_exact(p) if p["hamiltonian"] else None
    elif name == "decaying-dephasing":
        m, exp = _decaying(p)
        exact = _decaying_exact(p)
    elif name == "two-level-drive":
        m, exp = _two_level_drive(p)
    elif name == "multi-frequency":
        m, exp = _multi_frequency(p)
    elif name == "fibonacci":
        m, exp = _fibonacci(p)
        obs = {}
    elif name == "driven-chain":
        m, exp, obs = _driven_chain(p)
    elif name == "three-level-quasi":
        m, exp = _three_level(p)
        obs = {"Tx": np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], complex)}
    elif name == "bump":
        m, exp = _bump(p)
    else:
        n = p["n_sites"]
        if name == "hubbard-static":
            m, f = _hubbard_static(p)
        elif name == "hubbard-1freq":
            m, f = _hubbard_drive(p, [(p["B"], p["omega"])], f"hubbard-1freq(L={n})")
        else:
            m, f = _hubbard_drive(p, [(p["B1"], p["omega1"]), (p["B2"], p["omega2"])], f"hubbard-2freq(L={n})")
        obs = _spin_observables(f, n)
        exp, sector = _hubbard_expectations(name, n)
    return ZooEntry(name, p, m, exp, obs, _DESCRIPTIONS[name], sector, exact)


def _hubbard_expectations(name: str, n_sites: int):
    """Expected class and commutant dimensions (dimensions tabulated for the dimer).

    Every term (hopping, U, site potentials, the circular drives, the n_j
    jumps) is spin-rotation invariant, so the total spin Casimir S^2 commutes
    with all of them.  It therefore survives in ``C_sch`` next to N, and the
    half-filled sector keeps a non-trivial ``C_sch``: class (iii) there too.
    """
    sector = {"N": n_sites, "class": "iii"}
    if n_sites != 2:
        return {"class": "iii", "dim_c_sch": None, "dim_c_int": None}, {**sector, "dim_c_sch": None, "dim_c_int": None}
    if name == "hubbard-static":
        return {"class": "iii", "dim_c_sch": 10, "dim_c_int": 20}, {**sector, "dim_c_sch": 4, "dim_c_int": 10}
    return {"class": "iii", "dim_c_sch": 6, "dim_c_int": 20}, {**sector, "dim_c_sch": 2, "dim_c_int": 10}
