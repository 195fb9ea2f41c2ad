"""Trajectories of the GKSL equation and diagnostics built on them.

Integration is classical RK4 on the density matrix with the state
re-symmetrised after every step.  Steps never straddle a breakpoint of a
piecewise profile.  With Hermitian jumps the purity ``Tr rho^2`` cannot
increase; a step that increases it beyond ``TOL.purity_slack`` makes the run
restart with half the step.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from ._tol import TOL
from .errors import NumericalInconsistency
from .model import (
    GkslModel,
    apply_generator,
    evolution_superoperator,
    liouvillian_apply,
    propagator_path,
    segments,
)
from .operators import haar_state, hs_inner


class IntegrationError(NumericalInconsistency):
    pass


@dataclass
class Trajectory:
    """Recorded solution of one initial state.

    ``states`` is ``None`` when only observables were kept; ``final`` is the
    last state either way.
    """

    times: np.ndarray
    dt: float
    final: np.ndarray
    purity: np.ndarray
    states: np.ndarray | None = None
    observables: dict = field(default_factory=dict)
    min_eigenvalue: float = 0.0

    def expectation(self, op) -> np.ndarray:
        if self.states is None:
            raise ValueError("trajectory was recorded without states")
        return np.einsum("ij,tji->t", np.asarray(op), self.states)


def _expect(op, rho):
    """``Tr[op rho]`` for a single state or a stack."""
    return np.einsum("ij,...ji->...", op, rho)


def _step(m: GkslModel, rho, t, h):
    def gen(tt, x):
        ham, jumps = m.evaluate(tt)
        return apply_generator(ham, jumps, x)

    k1 = gen(t, rho)
    k2 = gen(t + h / 2, rho + 0.5 * h * k1)
    k3 = gen(t + h / 2, rho + 0.5 * h * k2)
    k4 = gen(t + h, rho + h * k3)
    out = rho + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def _purity(rho):
    return np.einsum("...ij,...ji->...", rho, rho).real


class _PurityIncrease(Exception):
    pass


def _run(m, rho0, t_end, dt, record_every, observables, store_states, check_purity):
    rho = np.array(rho0, dtype=complex)
    times, purities, states = [0.0], [_purity(rho)], [rho.copy()] if store_states else None
    obs = {k: [_expect(op, rho)] for k, op in observables.items()}
    min_eig = np.inf
    count = 0
    last_purity = _purity(rho)
    for a, b, n in segments(m, 0.0, t_end, dt):
        h = (b - a) / n
        for k in range(n):
            t = a + k * h
            rho = _step(m, rho, t, h)
            p = _purity(rho)
            if check_purity and np.any(p > last_purity + TOL.purity_slack):
                raise _PurityIncrease
            last_purity = p
            count += 1
            is_last = (k == n - 1) and b >= t_end
            if count % record_every == 0 or is_last:
                eig = np.linalg.eigvalsh(rho)[..., 0].min()
                min_eig = min(min_eig, eig)
                if eig < -TOL.positivity_abort:
                    raise IntegrationError(
                        f"state lost positivity (eigenvalue {eig:.3g}) at t={t + h:.6g}; reduce dt below {h:.3g}"
                    )
                times.append(t + h)
                purities.append(p)
                if store_states:
                    states.append(rho.copy())
                for key, op in observables.items():
                    obs[key].append(_expect(op, rho))
    if min_eig < -TOL.positivity_warn:
        warnings.warn(f"minimum eigenvalue {min_eig:.3g} below {-TOL.positivity_warn:g}; consider a smaller dt")
    return (
        np.array(times),
        rho,
        np.array(purities),
        np.array(states) if store_states else None,
        {k: np.array(v) for k, v in obs.items()},
        float(min_eig) if np.isfinite(min_eig) else 0.0,
    )


def _integrate(m, rho0, t_end, dt, record_every, observables, store_states, max_halvings=6):
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    if dt <= 0:
        raise ValueError("dt must be positive")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape[-1] != m.dim:
        raise ValueError(f"state dimension {rho0.shape[-1]} does not match model dimension {m.dim}")
    observables = {k: np.asarray(v, dtype=complex) for k, v in (observables or {}).items()}
    for attempt in range(max_halvings + 1):
        try:
            return dt, _run(m, rho0, t_end, dt, record_every, observables, store_states, True)
        except _PurityIncrease:
            if attempt == max_halvings:
                raise IntegrationError(f"purity kept increasing down to dt={dt:.3g}")
            dt /= 2
            record_every *= 2


def evolve(
    m: GkslModel,
    rho0,
    t_end: float,
    dt: float = 1e-2,
    record_every: int = 1,
    observables: dict | None = None,
    store_states: bool = True,
) -> Trajectory:
    """Integrate from ``rho0`` at ``t = 0`` to ``t_end``."""
    used, (times, final, pur, states, obs, min_eig) = _integrate(
        m, rho0, t_end, dt, record_every, observables, store_states
    )
    return Trajectory(times, used, final, pur, states, obs, min_eig)


def evolve_ensemble(
    m: GkslModel,
    states0,
    t_end: float,
    dt: float = 1e-2,
    record_every: int = 1,
    observables: dict | None = None,
    store_states: bool = True,
) -> list:
    """Integrate several initial states in one batched run."""
    stack = np.asarray(states0, dtype=complex)
    used, (times, final, pur, states, obs, min_eig) = _integrate(
        m, stack, t_end, dt, record_every, observables, store_states
    )
    out = []
    for k in range(stack.shape[0]):
        out.append(
            Trajectory(
                times,
                used,
                final[k],
                pur[:, k],
                states[:, k] if states is not None else None,
                {key: v[:, k] for key, v in obs.items()},
                min_eig,
            )
        )
    return out


def random_states(d: int, n: int, seed=None, projector=None) -> np.ndarray:
    """Haar-random pure states, optionally projected into a subspace."""
    rng = np.random.default_rng(seed)
    return np.array([haar_state(d, rng, projector) for _ in range(n)])


@dataclass
class SteadyVerdict:
    verdict: str
    distance_to_mixed: float
    oscillation: float
    average: np.ndarray
    stationary_average: bool


@dataclass
class ProbeResult:
    steady_class: str
    verdicts: list
    eps: float
    window: float

    def to_dict(self) -> dict:
        return {
            "empirical_class": self.steady_class,
            "eps_ss": self.eps,
            "window": self.window,
            "verdicts": [v.verdict for v in self.verdicts],
            "distance_to_mixed": [v.distance_to_mixed for v in self.verdicts],
            "oscillation": [v.oscillation for v in self.verdicts],
        }


def default_window(m: GkslModel) -> float:
    periods = [p.longest_period() for op in m.operators for p in op.profiles if hasattr(p, "longest_period") and p.longest_period()]
    return 10 * max(periods) if periods else 10.0


def _stationary(m: GkslModel, rho, t_end, n=16, rtol=1e-2) -> bool:
    """Whether ``rho`` is (approximately) annihilated by the generator at n times."""
    scale = np.linalg.norm(rho - np.eye(m.dim) / m.dim)
    if scale < 1e-12:
        return True
    for t in np.linspace(0.0, t_end, n):
        if np.linalg.norm(liouvillian_apply(m, t, rho)) > rtol * scale:
            return False
    return True


def steady_state_probe(m: GkslModel, trajectories, window: float | None = None, eps: float | None = None) -> ProbeResult:
    """Empirical class from the final window of each trajectory.

    Each trajectory is judged converged to the maximally mixed state, converged
    to a fixed state, or persistently time dependent (an oscillation whose
    amplitude still shrinks across the window is not); anything in between is
    inconclusive, and a single inconclusive trajectory makes the aggregate
    inconclusive rather than risk a wrong class.  Trajectories need recorded
    states.
    """
    window = default_window(m) if window is None else window
    eps = TOL.steady_eps if eps is None else eps
    d = m.dim
    mixed = np.eye(d) / d
    verdicts = []
    for tr in trajectories:
        if tr.states is None:
            raise ValueError("steady_state_probe needs trajectories with recorded states")
        t_end = tr.times[-1]
        sel = tr.times >= t_end - window
        block = tr.states[sel]
        # a Hann taper keeps leakage from incommensurate oscillations out of the average
        weights = np.hanning(block.shape[0] + 2)[1:-1]
        avg = np.tensordot(weights / weights.sum(), block, axes=1)
        dist = float(np.max(np.linalg.norm(block - mixed, axis=(1, 2))))
        dev = np.linalg.norm(block - avg, axis=(1, 2))
        osc = float(np.max(dev))
        half = dev.shape[0] // 2
        # a transient still decaying across the window is not a persistent oscillation
        decaying = half > 0 and np.max(dev[half:]) < 0.8 * np.max(dev[:half])
        if dist < eps:
            verdict = "mixed"
        elif osc < eps:
            verdict = "fixed"
        elif osc > 10 * eps and not decaying:
            verdict = "time-dependent"
        else:
            verdict = "inconclusive"
        stat = verdict == "time-dependent" and np.linalg.norm(avg - mixed) > 1e-2 and _stationary(m, avg, t_end)
        verdicts.append(SteadyVerdict(verdict, dist, osc, avg, bool(stat)))
    kinds = {v.verdict for v in verdicts}
    if "inconclusive" in kinds or not verdicts:
        cls = "inconclusive"
    elif kinds == {"mixed"}:
        cls = "i"
    elif "time-dependent" not in kinds:
        cls = "ii"
    elif "fixed" in kinds or any(v.stationary_average for v in verdicts):
        cls = "iii"
    else:
        cls = "iv"
    return ProbeResult(cls, verdicts, eps, window)


@dataclass
class ChargeReport:
    times: np.ndarray
    series: np.ndarray
    final: np.ndarray
    drift: np.ndarray
    drifting: np.ndarray


def interaction_conserved_charges(
    m: GkslModel,
    rho0,
    basis,
    t_end: float = 50.0,
    dt: float = 1e-2,
    record_every: int = 10,
    drift_tol: float = 1e-4,
) -> ChargeReport:
    """``<Q_i, U_t^dagger rho_t U_t>`` for each ``Q_i`` in a basis of ``C_int``.

    Drift is the spread of each charge over the final 20 % of the run.
    """
    tr = evolve(m, rho0, t_end, dt, record_every)
    us = propagator_path(m, tr.times)
    rot = np.conj(np.swapaxes(us, -1, -2)) @ tr.states @ us
    basis = np.asarray(basis, dtype=complex)
    series = np.einsum("kji,tji->tk", basis.conj(), rot)
    late = tr.times >= 0.8 * tr.times[-1]
    block = series[late]
    drift = np.max(np.abs(block - block[-1]), axis=0)
    return ChargeReport(tr.times, series, series[-1], drift, drift > drift_tol)


def traceless_projector(d: int) -> np.ndarray:
    v = np.eye(d).reshape(-1, order="F") / np.sqrt(d)
    return np.eye(d * d) - np.outer(v, v.conj())


def window_contraction(m: GkslModel, t0: float, delta: float, dt: float | None = None) -> float:
    """Largest singular value of ``V_{t0, t0+delta}`` restricted to traceless operators."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    v = evolution_superoperator(m, t0, t0 + delta, dt)
    p = traceless_projector(m.dim)
    return float(np.linalg.norm(p @ v @ p, 2))


@dataclass
class SpectrumResult:
    frequencies: np.ndarray
    magnitudes: np.ndarray
    window: tuple
    peaks: np.ndarray

    @property
    def peak_frequencies(self) -> np.ndarray:
        return self.frequencies[self.peaks]

    def distinct_peaks(self, zero_tol: float | None = None) -> np.ndarray:
        """Peak frequencies with ``w >= 0`` (each +/- pair counted once)."""
        if zero_tol is None:
            zero_tol = 0.5 * (self.frequencies[1] - self.frequencies[0])
        f = self.peak_frequencies
        return f[f >= -zero_tol]


def fourier_spectrum(
    times,
    values,
    window_center: float,
    window_width: float,
    pad: int = 4,
    prominence: float | None = None,
) -> SpectrumResult:
    """Magnitude of the Gaussian-windowed DFT on angular frequencies.

    The window is ``exp(-(t - center)^2 / width^2)``; the series is zero-padded
    to ``pad`` times its length.  Peaks need a prominence of at least
    ``prominence`` times the largest magnitude.
    """
    prominence = TOL.peak_prominence if prominence is None else prominence
    times = np.asarray(times, dtype=float)
    values = np.asarray(values)
    if times.ndim != 1 or times.size < 3 or times.size != values.size:
        raise ValueError("need matching one-dimensional time and value arrays")
    steps = np.diff(times)
    dt = steps.mean()
    if np.max(np.abs(steps - dt)) > 1e-6 * dt:
        raise ValueError("fourier_spectrum needs a uniform time grid")
    weighted = values * np.exp(-((times - window_center) ** 2) / window_width**2)
    nfft = pad * times.size
    spec = np.fft.fftshift(np.fft.fft(weighted, nfft)) * dt
    freqs = np.fft.fftshift(np.fft.fftfreq(nfft, dt)) * 2 * np.pi
    mags = np.abs(spec)
    peaks, _ = find_peaks(mags, prominence=prominence * mags.max()) if mags.max() > 0 else (np.array([], int), None)
    return SpectrumResult(freqs, mags, (window_center, window_width), peaks)
