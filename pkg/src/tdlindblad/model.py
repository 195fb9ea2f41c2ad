"""GKSL models with Hermitian jump operators.

The generator is

    L_t(rho) = -i[H_t, rho] + sum_m (L_m rho L_m - 1/2 {L_m^2, rho}),

with ``H_t`` and every ``L_m`` Hermitian at all times.  Superoperators act on
column-stacked vectors: ``vec(A X B) = (B^T kron A) vec(X)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from ._tol import TOL
from .operators import DimensionError, HilbertSpec, as_operator, hs_norm, is_hermitian
from .errors import ModelError
from .profiles import PiecewiseProfile, TrigProfile


def _as_profile(p):
    if isinstance(p, (int, float)):
        return TrigProfile(float(p))
    return p


@dataclass(frozen=True)
class FourierOperator:
    """``sum_w C_w cos(w t) + S_w sin(w t)`` with ``w >= 0`` (``S_0`` unused)."""

    dim: int
    modes: dict = field(default_factory=dict)

    def evaluate(self, t: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for w, (c, s) in self.modes.items():
            out += c * math.cos(w * t) + s * math.sin(w * t)
        return out

    def norm(self) -> float:
        return math.sqrt(sum(hs_norm(c) ** 2 + hs_norm(s) ** 2 for c, s in self.modes.values()))

    def coefficients(self) -> list:
        """Every non-zero operator coefficient (cos and sin parts)."""
        out = []
        for w, (c, s) in self.modes.items():
            out.append(c)
            if w > 0:
                out.append(s)
        return [x for x in out if np.abs(x).max(initial=0.0) > 0]

    def derivative(self) -> "FourierOperator":
        return FourierOperator(
            self.dim, {w: (w * s, -w * c) for w, (c, s) in self.modes.items() if w > 0}
        )

    def pruned(self, atol: float) -> "FourierOperator":
        keep = {}
        for w, (c, s) in self.modes.items():
            if w == 0:
                s = np.zeros_like(s)
            if max(hs_norm(c), hs_norm(s)) > atol:
                keep[w] = (c, s)
        return FourierOperator(self.dim, keep)


def _fourier_add(modes: dict, w: float, c, s, freq_rtol=None):
    freq_rtol = TOL.freq_rtol if freq_rtol is None else freq_rtol
    if w < 0:
        w, s = -w, -s
    scale = max(1.0, w)
    if w <= freq_rtol * scale:
        w, s = 0.0, np.zeros_like(s)
    for key in modes:
        if abs(key - w) <= freq_rtol * max(1.0, key, w):
            c0, s0 = modes[key]
            modes[key] = (c0 + c, s0 + s)
            return
    modes[w] = (c, s)


def fourier_commutator(h: FourierOperator, a: FourierOperator) -> FourierOperator:
    """Closed form of ``[H_t, A_t]`` for two trigonometric operator sums."""
    out: dict = {}
    for w1, (c1, s1) in h.modes.items():
        for w2, (c2, s2) in a.modes.items():
            cc = c1 @ c2 - c2 @ c1
            ss = s1 @ s2 - s2 @ s1
            sc = s1 @ c2 - c2 @ s1
            cs = c1 @ s2 - s2 @ c1
            # cos a cos b, sin a sin b, sin a cos b, cos a sin b
            _fourier_add(out, w1 - w2, 0.5 * (cc + ss), 0.5 * (sc - cs))
            _fourier_add(out, w1 + w2, 0.5 * (cc - ss), 0.5 * (sc + cs))
    return FourierOperator(h.dim, out)


def fourier_add(a: FourierOperator, b: FourierOperator) -> FourierOperator:
    out = dict(a.modes)
    for w, (c, s) in b.modes.items():
        _fourier_add(out, w, c, s)
    return FourierOperator(a.dim, out)


def fourier_scale(a: FourierOperator, z: complex) -> FourierOperator:
    return FourierOperator(a.dim, {w: (z * c, z * s) for w, (c, s) in a.modes.items()})


@dataclass(frozen=True)
class TimeDependentOperator:
    """``sum_k f_k(t) A_k`` with scalar profiles ``f_k`` and fixed matrices ``A_k``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((_as_profile(p), as_operator(a)) for p, a in self.terms)
        if not terms:
            raise ModelError("a time-dependent operator needs at least one term")
        dims = {a.shape[0] for _, a in terms}
        if len(dims) != 1:
            raise DimensionError(f"terms have mismatched dimensions {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def constant(cls, a) -> "TimeDependentOperator":
        return cls(((TrigProfile(1.0), a),))

    @property
    def dim(self) -> int:
        return self.terms[0][1].shape[0]

    @property
    def profiles(self) -> list:
        return [p for p, _ in self.terms]

    @property
    def coefficients(self) -> list:
        return [a for _, a in self.terms]

    @property
    def analytic(self) -> bool:
        return all(isinstance(p, TrigProfile) for p in self.profiles)

    def is_constant(self) -> bool:
        return all(isinstance(p, TrigProfile) and p.is_constant() for p in self.profiles)

    def piecewise_constant(self) -> bool:
        return all(
            (isinstance(p, TrigProfile) and p.is_constant())
            or (isinstance(p, PiecewiseProfile) and p.width is None)
            for p in self.profiles
        )

    def evaluate(self, t: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for p, a in self.terms:
            out += p.eval(t) * a
        return out

    __call__ = evaluate

    def fourier(self) -> FourierOperator:
        if not self.analytic:
            raise ModelError("closed-form Fourier data needs trigonometric profiles")
        modes: dict = {}
        zero = np.zeros((self.dim, self.dim), dtype=complex)
        for p, a in self.terms:
            if p.constant:
                _fourier_add(modes, 0.0, p.constant * a, zero)
            for amp, w, phi in p.terms:
                _fourier_add(modes, w, amp * math.cos(phi) * a, -amp * math.sin(phi) * a)
        if not modes:
            modes[0.0] = (zero, zero)
        return FourierOperator(self.dim, modes)

    def breakpoints(self, s: float, t: float) -> list:
        pts = set()
        for p in self.profiles:
            if isinstance(p, PiecewiseProfile):
                pts.update(p.breakpoints(s, t))
        return sorted(pts)

    def transformed(self, v: np.ndarray) -> "TimeDependentOperator":
        """Compress every coefficient as ``V^dagger A V``."""
        return TimeDependentOperator(tuple((p, v.conj().T @ a @ v) for p, a in self.terms))


def _time_dependent(x, d=None) -> TimeDependentOperator:
    if isinstance(x, TimeDependentOperator):
        return x
    return TimeDependentOperator.constant(x)


@dataclass(frozen=True)
class GkslModel:
    """A GKSL generator with Hermitian Hamiltonian and Hermitian jump operators.

    ``quasiperiodic`` is a declared property (it cannot be decided
    numerically).  ``period`` is set for time-periodic models.
    """

    space: HilbertSpec
    hamiltonian: TimeDependentOperator
    jumps: tuple
    quasiperiodic: bool = True
    period: float | None = None
    name: str = ""
    check_times: int = 32

    def __post_init__(self):
        ham = _time_dependent(self.hamiltonian)
        jumps = tuple(_time_dependent(j) for j in self.jumps)
        object.__setattr__(self, "hamiltonian", ham)
        object.__setattr__(self, "jumps", jumps)
        d = self.space.dim
        for op in (ham,) + jumps:
            if op.dim != d:
                raise DimensionError(f"operator dimension {op.dim} does not match space dimension {d}")
        rng = np.random.default_rng(20240611)
        horizon = min([100.0] + [self._horizon(op) for op in (ham,) + jumps])
        for t in rng.uniform(0.0, horizon, size=self.check_times):
            if not is_hermitian(ham.evaluate(t)):
                raise ModelError(f"Hamiltonian is not Hermitian at t={t:.6g}")
            for m, j in enumerate(jumps):
                if not is_hermitian(j.evaluate(t)):
                    raise ModelError(f"jump operator {m} is not Hermitian at t={t:.6g}")

    @staticmethod
    def _horizon(op: TimeDependentOperator) -> float:
        hs = [p.horizon for p in op.profiles if isinstance(p, PiecewiseProfile)]
        return min(hs) if hs else math.inf

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def operators(self) -> tuple:
        return (self.hamiltonian,) + self.jumps

    @property
    def analytic(self) -> bool:
        return all(op.analytic for op in self.operators)

    def is_time_independent(self) -> bool:
        return all(op.is_constant() for op in self.operators)

    def piecewise_constant(self) -> bool:
        return all(op.piecewise_constant() for op in self.operators)

    def horizon(self) -> float:
        return min(self._horizon(op) for op in self.operators)

    def breakpoints(self, s: float, t: float) -> list:
        pts = set()
        for op in self.operators:
            pts.update(op.breakpoints(s, t))
        return sorted(pts)

    def evaluate(self, t: float):
        """``(H_t, [L_1(t), ...])``."""
        return self.hamiltonian.evaluate(t), [j.evaluate(t) for j in self.jumps]

    def probe_window(self) -> float:
        """A time span long enough to see every drive frequency several times."""
        periods = []
        for op in self.operators:
            for p in op.profiles:
                if isinstance(p, TrigProfile) and p.terms:
                    periods.append(p.longest_period())
                elif isinstance(p, PiecewiseProfile):
                    periods.append(p.period if p.cyclic else 50.0)
        if not periods:
            return 1.0
        return min(4 * max(periods), self.horizon())

    def restricted(self, isometry: np.ndarray, name: str | None = None) -> "GkslModel":
        """The same model compressed to the range of ``isometry`` (must be invariant)."""
        v = np.asarray(isometry, dtype=complex)
        proj = v @ v.conj().T
        for op in self.operators:
            for a in op.coefficients:
                if hs_norm(a @ proj - proj @ a) > 1e-10 * max(1.0, hs_norm(a)):
                    raise ModelError("subspace is not invariant under the model operators")
        return GkslModel(
            HilbertSpec.generic(v.shape[1]),
            self.hamiltonian.transformed(v),
            tuple(j.transformed(v) for j in self.jumps),
            quasiperiodic=self.quasiperiodic,
            period=self.period,
            name=name or self.name,
        )


def _check_state_dim(m: GkslModel, rho):
    if rho.shape[-1] != m.dim or rho.shape[-2] != m.dim:
        raise DimensionError(f"state dimension {rho.shape[-2:]} does not match model dimension {m.dim}")


def apply_generator(h: np.ndarray, jumps, rho: np.ndarray) -> np.ndarray:
    """Generator action for fixed ``H`` and jumps; ``rho`` may be a stack.

    Uses ``K rho + rho K^dagger + sum L rho L`` with ``K = -iH - sum L^2 / 2``;
    diagonal jump operators are applied elementwise.
    """
    k = -1j * np.asarray(h, dtype=complex)
    out = np.zeros(np.shape(rho), dtype=complex)
    for l in jumps:
        diag = np.diagonal(l)
        if np.count_nonzero(l - np.diag(diag)) == 0:
            k = k - 0.5 * np.diag(diag * diag)
            out += np.multiply.outer(diag, diag) * rho
        else:
            k = k - 0.5 * (l @ l)
            out += l @ rho @ l
    out += k @ rho + rho @ k.conj().T
    return out


def liouvillian_apply(m: GkslModel, t: float, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    _check_state_dim(m, rho)
    h, jumps = m.evaluate(t)
    return apply_generator(h, jumps, rho)


def generator_matrix(h: np.ndarray, jumps) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d)
    out = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for l in jumps:
        l2 = l @ l
        out += np.kron(l.T, l) - 0.5 * np.kron(eye, l2) - 0.5 * np.kron(l2.T, eye)
    return out


def liouvillian_matrix(m: GkslModel, t: float) -> np.ndarray:
    h, jumps = m.evaluate(t)
    return generator_matrix(h, jumps)


def _sample_times(m: GkslModel, n: int = 64) -> np.ndarray:
    span = min(m.probe_window(), m.horizon())
    return np.linspace(0.0, span, n, endpoint=False)


def default_unitary_step(m: GkslModel) -> float:
    top = max(np.linalg.norm(m.hamiltonian.evaluate(t), 2) for t in _sample_times(m))
    return min(1e-2, 0.05 / top) if top > 0 else 1e-2


def default_superoperator_step(m: GkslModel) -> float:
    top = max(np.linalg.norm(liouvillian_matrix(m, t), 2) for t in _sample_times(m))
    return min(1e-2, 0.05 / top) if top > 0 else 1e-2


def segments(m: GkslModel, s: float, t: float, dt: float):
    """Split ``[s, t]`` at profile breakpoints into ``(start, end, n_steps)``."""
    edges = [s] + m.breakpoints(s, t) + [t]
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 1e-14 * max(1.0, abs(b)):
            continue
        out.append((a, b, max(1, int(math.ceil((b - a) / dt - 1e-9)))))
    return out


def polar_unitary(u: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def propagator_path(m: GkslModel, times, dt: float | None = None) -> np.ndarray:
    """``U_t`` at each of the given (non-negative) times, shape ``(n, d, d)``.

    Constant and piecewise-constant Hamiltonians are exponentiated exactly on
    each segment; smooth drives use RK4 with polar re-unitarisation.
    """
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("propagator times must be non-negative")
    order = np.argsort(times)
    d = m.dim
    out = np.empty((times.size, d, d), dtype=complex)
    ham = m.hamiltonian
    exact = ham.piecewise_constant()
    if dt is None:
        dt = default_unitary_step(m) if not exact else 1.0
    u = np.eye(d, dtype=complex)
    now = 0.0
    for idx in order:
        target = float(times[idx])
        for a, b, n in segments(m, now, target, dt):
            if exact:
                h = ham.evaluate(0.5 * (a + b))
                u = expm(-1j * h * (b - a)) @ u
                continue
            step = (b - a) / n
            for k in range(n):
                t0 = a + k * step
                k1 = -1j * ham.evaluate(t0) @ u
                hm = ham.evaluate(t0 + step / 2)
                k2 = -1j * hm @ (u + 0.5 * step * k1)
                k3 = -1j * hm @ (u + 0.5 * step * k2)
                k4 = -1j * ham.evaluate(t0 + step) @ (u + step * k3)
                u = polar_unitary(u + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        now = max(now, target)
        out[idx] = u
    return out


def propagator_unitary(m: GkslModel, t: float, dt: float | None = None) -> np.ndarray:
    return propagator_path(m, [t], dt)[0]


def interaction_jump(m: GkslModel, t: float, dt: float | None = None) -> list:
    """Frame-rotated jump operators ``U_t^dagger L_m(t) U_t``."""
    u = propagator_unitary(m, t, dt)
    return [u.conj().T @ j.evaluate(t) @ u for j in m.jumps]


def interaction_jump_path(m: GkslModel, times, dt: float | None = None) -> list:
    """Frame-rotated jump operators at each time: a list of lists."""
    us = propagator_path(m, times, dt)
    return [[u.conj().T @ j.evaluate(t) @ u for j in m.jumps] for t, u in zip(times, us)]


def evolution_superoperator(m: GkslModel, s: float, t: float, dt: float | None = None) -> np.ndarray:
    """``V_{s,t}`` as a ``d^2 x d^2`` matrix on column-stacked vectors.

    Piecewise-constant generators are exponentiated exactly per segment;
    otherwise RK4 with steps snapped to profile breakpoints.
    """
    if not 0 <= s <= t:
        raise ValueError("need 0 <= s <= t")
    n2 = m.dim**2
    v = np.eye(n2, dtype=complex)
    if t == s:
        return v
    if m.piecewise_constant():
        for a, b, _ in segments(m, s, t, math.inf):
            v = expm(liouvillian_matrix(m, 0.5 * (a + b)) * (b - a)) @ v
        return v
    if dt is None:
        dt = default_superoperator_step(m)
    for a, b, n in segments(m, s, t, dt):
        step = (b - a) / n
        for k in range(n):
            t0 = a + k * step
            g1 = liouvillian_matrix(m, t0)
            gm = liouvillian_matrix(m, t0 + step / 2)
            g2 = liouvillian_matrix(m, t0 + step)
            k1 = g1 @ v
            k2 = gm @ (v + 0.5 * step * k1)
            k3 = gm @ (v + 0.5 * step * k2)
            k4 = g2 @ (v + step * k3)
            v = v + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return v
