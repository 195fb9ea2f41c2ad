"""Scalar time profiles multiplying the operator terms of a model.

``TrigProfile`` is a finite real trigonometric polynomial
``c + sum_k a_k cos(w_k t + phi_k)``.  It is closed under differentiation and
multiplication, which keeps the adjoint ladder exact.

``PiecewiseProfile`` is constant on cells of length ``T`` with the value
chosen by a symbol word (an explicit word repeated cyclically, or the
Fibonacci word).  An optional width ``a`` replaces the raw value by its
running average over ``[t, t + a]``, which makes the profile continuous.

``ExpDecayProfile`` is ``c * exp(-r t)``.  It is smooth but not recurrent, so
models built from it are not quasiperiodic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._tol import TOL


class ProfileError(ValueError):
    pass


def _canonical_terms(constant, terms, freq_rtol=None):
    """Merge equal frequencies through complex phasors and fold signs."""
    freq_rtol = TOL.freq_rtol if freq_rtol is None else freq_rtol
    constant = float(constant)
    phasors = []
    for a, w, phi in terms:
        a, w, phi = float(a), float(w), float(phi)
        if w < 0:
            w, phi = -w, -phi
        phasors.append((w, a * np.exp(1j * phi)))
    if not phasors:
        return constant, ()
    w_scale = max(1.0, max(w for w, _ in phasors))
    zero_cut = freq_rtol * w_scale
    merged = []
    for w, z in sorted(phasors, key=lambda p: p[0]):
        if w <= zero_cut:
            constant += z.real
            continue
        if merged and w - merged[-1][0] <= freq_rtol * max(w, merged[-1][0]):
            merged[-1][1] += z
        else:
            merged.append([w, z])
    # relative to the inputs, so that cancelling terms leave no residue
    amp_scale = max([abs(constant)] + [abs(z) for _, z in phasors])
    amp_cut = 1e-14 * amp_scale
    out = tuple(
        (float(abs(z)), float(w), float(np.angle(z)))
        for w, z in merged
        if abs(z) > amp_cut
    )
    if abs(constant) <= amp_cut:
        constant = 0.0
    return float(constant), out


@dataclass(frozen=True)
class TrigProfile:
    """``constant + sum a cos(w t + phi)`` with distinct positive frequencies."""

    constant: float = 0.0
    terms: tuple = field(default=())

    def __post_init__(self):
        c, terms = _canonical_terms(self.constant, self.terms)
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def const(cls, value: float) -> "TrigProfile":
        return cls(value)

    @classmethod
    def cos(cls, omega: float, phase: float = 0.0, amplitude: float = 1.0) -> "TrigProfile":
        return cls(0.0, ((amplitude, omega, phase),))

    @classmethod
    def sin(cls, omega: float, phase: float = 0.0, amplitude: float = 1.0) -> "TrigProfile":
        return cls(0.0, ((amplitude, omega, phase - np.pi / 2),))

    @property
    def frequencies(self) -> tuple:
        return tuple(w for _, w, _ in self.terms)

    @property
    def n_terms(self) -> int:
        return len(self.terms) + (1 if self.constant != 0.0 else 0)

    def is_zero(self) -> bool:
        return self.constant == 0.0 and not self.terms

    def is_constant(self) -> bool:
        return not self.terms

    def longest_period(self) -> float | None:
        if not self.terms:
            return None
        return 2 * np.pi / min(self.frequencies)

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.constant)
        for a, w, phi in self.terms:
            out = out + a * np.cos(w * t + phi)
        return out if out.ndim else float(out)

    def derivative(self) -> "TrigProfile":
        return TrigProfile(0.0, tuple((a * w, w, phi + np.pi / 2) for a, w, phi in self.terms))

    def scale(self, s: float) -> "TrigProfile":
        return TrigProfile(self.constant * s, tuple((a * s, w, phi) for a, w, phi in self.terms))

    def __add__(self, other: "TrigProfile") -> "TrigProfile":
        return TrigProfile(self.constant + other.constant, self.terms + other.terms)

    def product(self, other: "TrigProfile") -> "TrigProfile":
        c = self.constant * other.constant
        terms = [(self.constant * a, w, phi) for a, w, phi in other.terms]
        terms += [(other.constant * a, w, phi) for a, w, phi in self.terms]
        for a1, w1, p1 in self.terms:
            for a2, w2, p2 in other.terms:
                terms.append((0.5 * a1 * a2, w1 - w2, p1 - p2))
                terms.append((0.5 * a1 * a2, w1 + w2, p1 + p2))
        return TrigProfile(c, tuple(terms))

    __mul__ = product

    def canonicalize(self) -> "TrigProfile":
        return TrigProfile(self.constant, self.terms)

    def to_dict(self) -> dict:
        return {
            "type": "trig",
            "constant": self.constant,
            "terms": [list(term) for term in self.terms],
        }


def linearly_independent(profiles) -> bool:
    """Full-rank test of the sampled Gram matrix of the profiles.

    Samples a window of four periods of the slowest frequency present, with
    at least eight points per period of the fastest one, on a grid shifted
    off the origin so that no harmonic is sampled only at its zeros.
    """
    profiles = list(profiles)
    if not profiles:
        raise ProfileError("need at least one profile")
    if any(p.is_zero() for p in profiles):
        return False
    freqs = [w for p in profiles for w in p.frequencies]
    window = 4 * 2 * np.pi / min(freqs) if freqs else 1.0
    per_fastest = int(np.ceil(8 * window * max(freqs) / (2 * np.pi))) if freqs else 0
    n = max(4 * sum(p.n_terms for p in profiles), 4 * len(profiles), per_fastest)
    times = (np.arange(n) + 0.382) * (window / n)
    samples = np.array([p.eval(times) for p in profiles])
    gram = samples @ samples.T
    s = np.linalg.svd(gram, compute_uv=False)
    return bool(s[-1] > 1e-8 * s[0])


def fibonacci_word(n: int = 20) -> str:
    """Word F_n with F_0 = "0", F_1 = "01" and F_n = F_{n-1} + F_{n-2}."""
    if n < 0:
        raise ProfileError("Fibonacci index must be non-negative")
    prev, cur = "0", "01"
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, cur + prev
    return cur


@dataclass(frozen=True)
class PiecewiseProfile:
    """Cell-wise constant profile selected by a symbol word.

    ``word`` is either an explicit string (repeated cyclically) or
    ``"fibonacci"`` (truncated at ``fib_n``; evaluating past its end is an
    error).  ``values`` maps symbols to reals.  With ``width`` set, the value
    at ``t`` is the mean of the raw profile over ``[t, t + width]``.
    ``exponent`` is applied last; an exponent of 0.5 turns an averaged
    indicator into the weight that multiplies a jump operator.
    """

    cell: float
    word: str
    values: dict
    width: float | None = None
    exponent: float = 1.0
    fib_n: int = 20
    _symbols: str = field(init=False, repr=False, compare=False, default="")
    _vals: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.cell <= 0:
            raise ProfileError("cell length must be positive")
        if self.width is not None and self.width <= 0:
            raise ProfileError("coarse-grain width must be positive")
        symbols = fibonacci_word(self.fib_n) if self.word == "fibonacci" else self.word
        if not symbols:
            raise ProfileError("empty symbol word")
        missing = set(symbols) - set(str(k) for k in self.values)
        if missing:
            raise ProfileError(f"no value given for symbols {sorted(missing)}")
        lookup = {str(k): float(v) for k, v in self.values.items()}
        object.__setattr__(self, "_symbols", symbols)
        object.__setattr__(self, "_vals", np.array([lookup[s] for s in symbols]))

    @property
    def cyclic(self) -> bool:
        return self.word != "fibonacci"

    @property
    def period(self) -> float | None:
        return self.cell * len(self._symbols) if self.cyclic else None

    @property
    def horizon(self) -> float:
        """Largest time at which the profile is defined."""
        if self.cyclic:
            return math.inf
        return self.cell * len(self._symbols) - (self.width or 0.0)

    def symbol_at(self, t: float) -> str:
        return self._symbols[self._cell_index(int(math.floor(t / self.cell)))]

    def _cell_index(self, k: int) -> int:
        if k < 0:
            raise ProfileError("piecewise profiles are defined for t >= 0 only")
        if self.cyclic:
            return k % len(self._symbols)
        if k >= len(self._symbols):
            raise ProfileError(
                f"time {k * self.cell} lies beyond the truncated Fibonacci word "
                f"(length {len(self._symbols)}); raise fib_n"
            )
        return k

    def _raw(self, t: float) -> float:
        return self._vals[self._cell_index(int(math.floor(t / self.cell)))]

    def _averaged(self, t: float) -> float:
        a, T = self.width, self.cell
        end = t + a
        k = int(math.floor(t / T))
        total, left = 0.0, t
        while left < end:
            right = min((k + 1) * T, end)
            total += self._vals[self._cell_index(k)] * (right - left)
            left = right
            k += 1
        return total / a

    def _scalar(self, t: float) -> float:
        if t < 0:
            raise ProfileError("piecewise profiles are defined for t >= 0 only")
        v = self._raw(t) if self.width is None else self._averaged(t)
        if self.exponent != 1.0:
            v = max(v, 0.0) ** self.exponent
        return v

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        if np.ndim(t) == 0:
            return float(self._scalar(float(t)))
        return np.array([self._scalar(float(x)) for x in np.ravel(t)]).reshape(np.shape(t))

    def derivative(self):
        raise ProfileError("piecewise profiles are not differentiable; the ad-ladder needs analytic profiles")

    def breakpoints(self, s: float, t: float) -> list:
        """Times in the open interval (s, t) where the profile is not smooth."""
        T = self.cell
        shifts = (0.0,) if self.width is None else (0.0, self.width)
        first = int(math.floor(s / T))
        last = int(math.ceil((t + (self.width or 0.0)) / T))
        out = {k * T - w for k in range(first, last + 1) for w in shifts}
        return sorted(x for x in out if s < x < t)

    def to_dict(self) -> dict:
        return {
            "type": "piecewise",
            "cell": self.cell,
            "word": self.word,
            "values": {str(k): v for k, v in self.values.items()},
            "width": self.width,
            "exponent": self.exponent,
            "fib_n": self.fib_n,
        }


@dataclass(frozen=True)
class ExpDecayProfile:
    """``amplitude * exp(-rate * t)``; smooth but not recurrent."""

    amplitude: float = 1.0
    rate: float = 1.0

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        out = self.amplitude * np.exp(-self.rate * np.asarray(t, dtype=float))
        return out if np.ndim(out) else float(out)

    def derivative(self) -> "ExpDecayProfile":
        return ExpDecayProfile(-self.rate * self.amplitude, self.rate)

    def to_dict(self) -> dict:
        return {"type": "exp", "amplitude": self.amplitude, "rate": self.rate}


def profile_from_dict(data):
    """Build a profile from its JSON literal (a bare number means a constant)."""
    if isinstance(data, (int, float)):
        return TrigProfile(float(data))
    kind = data.get("type", "trig")
    if kind == "trig":
        return TrigProfile(data.get("constant", 0.0), tuple(tuple(t) for t in data.get("terms", ())))
    if kind == "piecewise":
        return PiecewiseProfile(
            cell=data["cell"],
            word=data["word"],
            values=data["values"],
            width=data.get("width"),
            exponent=data.get("exponent", 1.0),
            fib_n=data.get("fib_n", 20),
        )
    if kind == "exp":
        return ExpDecayProfile(data.get("amplitude", 1.0), data.get("rate", 1.0))
    raise ProfileError(f"unknown profile type {kind!r}")
