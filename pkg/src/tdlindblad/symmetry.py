"""Strong symmetries and the four-class steady-state classification.

Two commutants decide the class of a quasiperiodic model:

* ``C_sch``: operators commuting with ``H_t`` and every ``L_m(t)`` at all t.
* ``C_int``: operators commuting with every frame-rotated jump
  ``U_t^dagger L_m(t) U_t``.

``C_sch`` is always contained in ``C_int``.  With ``a = dim C_sch`` and
``b = dim C_int`` the class is (i) if ``a = b = 1``, (ii) if ``a = b > 1``,
(iii) if ``1 < a < b`` and (iv) if ``a = 1 < b``.

For analytic (trigonometric) models ``C_int`` equals the commutant of the
algebra generated by the adjoint ladder ``ad^n(L_m)`` at ``t = 0``, where
``ad(A) = i[H_t, A] + dA/dt``.  The ladder is built in closed form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ._tol import TOL
from .algebra import OperatorAlgebra, commutant, generate_algebra, same_span, subspace_leq
from .errors import ModelError, NotQuasiperiodicError, NumericalInconsistency
from .model import (
    default_unitary_step,
    FourierOperator,
    GkslModel,
    fourier_add,
    fourier_commutator,
    fourier_scale,
    interaction_jump_path,
)
from .operators import PAULI, hs_inner, hs_norm, kron_all
from .profiles import PiecewiseProfile, TrigProfile, linearly_independent

GOLDEN = (1 + math.sqrt(5)) / 2


class RouteMismatch(NumericalInconsistency):
    pass


def ad_step(h: FourierOperator, a: FourierOperator) -> FourierOperator:
    """``i[H_t, A_t] + dA_t/dt`` in closed form."""
    return fourier_add(fourier_scale(fourier_commutator(h, a), 1j), a.derivative())


@dataclass
class AdLadder:
    """Rungs ``ad^n(L_m)`` for each jump ``m`` and their values at ``t0``.

    Rungs are rescaled to unit norm (the generated algebra does not depend on
    scalar factors); ``scales[m][n]`` records the factor removed.
    """

    t0: float
    rungs: list
    values: list
    scales: list
    dims: list = field(default_factory=list)

    @property
    def depth_reached(self) -> int:
        return len(self.rungs[0]) - 1 if self.rungs else 0

    def generators(self) -> list:
        return [v for per_jump in self.values for v in per_jump if np.abs(v).max(initial=0.0) > 0]


def ad_ladder(m: GkslModel, t0: float = 0.0, max_depth: int | None = None, patience: int = 3) -> AdLadder:
    """Build the adjoint ladder until the algebra of its values stops growing.

    The ladder stops once ``patience`` consecutive full rungs leave the
    dimension of the generated algebra unchanged, once that algebra is all of
    B(H), or at ``max_depth`` (default ``2 d^2``).
    """
    if not m.analytic:
        raise ModelError("ad-ladder requires analytic profiles")
    d = m.dim
    cap = 2 * d * d if max_depth is None else max_depth
    if cap < 1:
        raise ValueError("max_depth must be at least 1")
    h = m.hamiltonian.fourier()
    current = [j.fourier() for j in m.jumps]
    rungs = [[] for _ in current]
    values = [[] for _ in current]
    scales = [[] for _ in current]

    # a rung below this (relative to the unit-norm rung it came from) is rounding noise
    floor = 1e-12 * (1.0 + 2 * h.norm() + max([abs(w) for j in current for w in j.modes], default=0.0))

    def push(k, op, relative=True):
        norm = op.norm()
        if relative and norm <= floor:
            op, norm = fourier_scale(op, 0.0).pruned(1.0), 0.0
        if norm > 0:
            op = fourier_scale(op, 1.0 / norm).pruned(1e-13)
        rungs[k].append(op)
        values[k].append(op.evaluate(t0))
        scales[k].append(norm)
        return op

    for k, op in enumerate(current):
        current[k] = push(k, op, relative=False)
    ladder = AdLadder(t0, rungs, values, scales)
    dims = [generate_algebra([np.eye(d)] + ladder.generators()).dim]
    stall = 0
    for _ in range(cap):
        if dims[-1] == d * d or stall >= patience:
            break
        for k, op in enumerate(current):
            current[k] = push(k, ad_step(h, op) if op.norm() > 0 else op)
        dims.append(generate_algebra([np.eye(d)] + ladder.generators()).dim)
        stall = stall + 1 if dims[-1] == dims[-2] else 0
    ladder.dims = dims
    return ladder


def a_ad(m: GkslModel, t0: float = 0.0) -> OperatorAlgebra:
    ladder = ad_ladder(m, t0)
    return generate_algebra([np.eye(m.dim)] + ladder.generators())


def uniqueness_by_ad(m: GkslModel, t0: float = 0.0) -> bool:
    """True when the ladder algebra is all of B(H), which forces class (i)."""
    return a_ad(m, t0).is_full()


def golden_times(n: int, span: float, offset: float = 0.0) -> np.ndarray:
    """Low-discrepancy sample times in ``[0, span)``."""
    return span * np.mod(offset + (np.arange(n) + 0.5) / GOLDEN, 1.0)


def probe_span(m: GkslModel) -> float:
    """Window for sampled routes: four slowest periods, or 200 for Fibonacci drives."""
    periods = []
    for op in m.operators:
        for p in op.profiles:
            if isinstance(p, TrigProfile) and p.terms:
                periods.append(p.longest_period())
            elif isinstance(p, PiecewiseProfile):
                if not p.cyclic:
                    return min(200.0, p.horizon)
                periods.append(p.period)
    if not periods:
        return 1.0
    return 4 * max(periods)


def _coefficient_generators(m: GkslModel):
    """Operators whose joint commutant is ``C_sch``, or None without a certificate."""
    gens = []
    for op in m.operators:
        if not op.analytic:
            return None
        profiles = op.profiles
        if linearly_independent(profiles):
            gens.extend(op.coefficients)
            continue
        fo = op.fourier()
        harmonics = []
        for w in fo.modes:
            harmonics.append(TrigProfile.cos(w) if w > 0 else TrigProfile(1.0))
            if w > 0:
                harmonics.append(TrigProfile.sin(w))
        if not linearly_independent(harmonics):
            return None
        gens.extend(fo.coefficients())
    return [g for g in gens if np.abs(g).max(initial=0.0) > 0]


def _sampled_schrodinger_generators(m: GkslModel, n_samples: int) -> list:
    gens = []
    for t in golden_times(n_samples, probe_span(m)):
        h, jumps = m.evaluate(t)
        gens.append(h)
        gens.extend(jumps)
    return gens


def _commutant_or_full(ops, d, rtol):
    ops = [o for o in ops if np.abs(o).max(initial=0.0) > 0]
    if not ops:
        return commutant([np.eye(d)], rtol)
    return commutant(ops, rtol)


@dataclass
class SchrodingerResult:
    algebra: OperatorAlgebra
    routes: list


def c_sch(m: GkslModel, n_samples: int = 64, route: str = "auto") -> OperatorAlgebra:
    return c_sch_detail(m, n_samples, route).algebra


def c_sch_detail(m: GkslModel, n_samples: int = 64, route: str = "auto") -> SchrodingerResult:
    """Commutant of ``{H_t, L_m(t)}`` over all t.

    The coefficient route is exact when the profiles of each operator are
    certified linearly independent; the sampled route intersects commutants
    at ``n_samples`` golden-ratio times.  With ``route="auto"`` both run when
    possible and must agree.
    """
    d = m.dim
    result = {}
    if route in ("auto", "coefficients"):
        gens = _coefficient_generators(m)
        if gens is not None:
            result["coefficients"] = _commutant_or_full(gens, d, TOL.rank_rtol)
        elif route == "coefficients":
            raise ModelError("coefficient route needs linearly independent trigonometric profiles")
    if route in ("auto", "sampled"):
        result["sampled"] = _commutant_or_full(_sampled_schrodinger_generators(m, n_samples), d, TOL.rank_rtol)
    if len(result) == 2:
        a, b = result["coefficients"], result["sampled"]
        if not same_span(a, b, TOL.sampled_contains_rtol):
            raise RouteMismatch(
                f"C_sch routes disagree: coefficients give dimension {a.dim}, sampling gives {b.dim}"
            )
    chosen = result.get("coefficients", result.get("sampled"))
    return SchrodingerResult(chosen, sorted(result))


def c_int_ad(m: GkslModel, t0: float = 0.0) -> OperatorAlgebra:
    """``C_int`` from the adjoint ladder at ``t0 = 0`` (where ``U_0 = I``)."""
    ladder = ad_ladder(m, t0)
    return _commutant_or_full(ladder.generators(), m.dim, TOL.rank_rtol)


def c_int_sampled(
    m: GkslModel,
    n_samples: int = 64,
    dt: float | None = None,
    span: float | None = None,
    refine: bool = False,
    max_samples: int = 1024,
) -> OperatorAlgebra:
    """``C_int`` from frame-rotated jumps at golden-ratio times.

    With ``refine`` the sample count doubles until the dimension is the same
    for two consecutive doublings.
    """
    span = probe_span(m) if span is None else span
    d = m.dim
    if dt is None and not m.hamiltonian.piecewise_constant():
        # the default step leaves ~1e-6 propagator error, level with the rank cut
        dt = default_unitary_step(m) / 4

    def at(n):
        times = np.sort(golden_times(n, span))
        gens = [l for step in interaction_jump_path(m, times, dt) for l in step]
        return _commutant_or_full(gens, d, TOL.sampled_rank_rtol)

    alg = at(n_samples)
    if not refine:
        return alg
    stable, n = 0, n_samples
    while stable < 2 and 2 * n <= max_samples:
        n *= 2
        nxt = at(n)
        stable = stable + 1 if nxt.dim == alg.dim else 0
        alg = nxt
    return alg


def c_int(
    m: GkslModel,
    route: str = "auto",
    t0: float = 0.0,
    n_samples: int = 64,
    dt: float | None = None,
    refine: bool = False,
):
    """``C_int`` by ``route`` in {"ad-ladder", "sampled", "both", "auto"}.

    ``auto`` uses the ladder for analytic models and sampling otherwise.
    ``both`` requires equal dimensions and mutual inclusion.
    """
    return c_int_detail(m, route, t0, n_samples, dt, refine)[0]


def c_int_detail(m, route="auto", t0=0.0, n_samples=64, dt=None, refine=False):
    if route == "auto":
        route = "ad-ladder" if m.analytic else "sampled"
    if route not in ("ad-ladder", "sampled", "both"):
        raise ValueError(f"unknown route {route!r}")
    if route == "ad-ladder":
        return c_int_ad(m, t0), ["ad-ladder"]
    if route == "sampled":
        return c_int_sampled(m, n_samples, dt, refine=refine), ["sampled"]
    a = c_int_ad(m, t0)
    b = c_int_sampled(m, n_samples, dt, refine=refine)
    if not same_span(a, b, 1e-7):
        raise RouteMismatch(f"C_int routes disagree: ad-ladder gives dimension {a.dim}, sampling gives {b.dim}")
    return a, ["ad-ladder", "sampled"]


def class_from_dims(dim_sch: int, dim_int: int) -> str:
    if dim_sch > dim_int or dim_sch < 1:
        raise NumericalInconsistency(f"impossible dimensions dim C_sch={dim_sch}, dim C_int={dim_int}")
    if dim_int == 1:
        return "i"
    if dim_sch == 1:
        return "iv"
    return "ii" if dim_sch == dim_int else "iii"


def basis_labels(alg: OperatorAlgebra, max_terms: int = 6) -> list:
    """Readable labels: Pauli expansions on qubit dimensions up to 8, else indices."""
    d = alg.d
    n = int(round(math.log2(d))) if d > 1 else 0
    if d > 8 or 2**n != d:
        return [f"b{k}" for k in range(alg.dim)]
    strings = ["".join(s) for s in itertools.product("ixyz", repeat=n)]
    mats = [kron_all([PAULI[c] for c in s]) for s in strings]
    labels = []
    for b in alg.basis:
        coeffs = [(hs_inner(p, b) / d, s) for p, s in zip(mats, strings)]
        coeffs = [(c, s) for c, s in coeffs if abs(c) > 1e-9]
        coeffs.sort(key=lambda cs: -abs(cs[0]))
        parts = []
        for c, s in coeffs[:max_terms]:
            c = complex(np.round(c, 6))
            num = f"{c.real:g}" if abs(c.imag) < 1e-12 else f"({c.real:g}{c.imag:+g}j)"
            parts.append(f"{num}*{s.upper()}")
        labels.append(" + ".join(parts) if parts else "0")
    return labels


@dataclass
class ClassificationReport:
    dim_c_sch: int
    dim_c_int: int
    inclusion_verified: bool
    steady_class: str
    routes: dict
    c_sch: OperatorAlgebra
    c_int: OperatorAlgebra
    model: str = ""

    def to_dict(self) -> dict:
        return {
            "schema": "v1",
            "model": self.model,
            "class": self.steady_class,
            "dim_c_sch": self.dim_c_sch,
            "dim_c_int": self.dim_c_int,
            "inclusion_verified": self.inclusion_verified,
            "routes": self.routes,
            "tolerances": TOL.as_dict(),
            "basis_labels": {"c_sch": basis_labels(self.c_sch), "c_int": basis_labels(self.c_int)},
        }


def classify(
    m: GkslModel,
    route: str = "auto",
    n_samples: int = 64,
    dt: float | None = None,
    refine: bool | None = None,
) -> ClassificationReport:
    """Steady-state class from the two strong-symmetry commutants.

    Refuses models not declared quasiperiodic: the correspondence between
    commutant dimensions and steady-state classes needs bounded, continuous,
    recurrent generators.
    """
    if not m.quasiperiodic:
        raise NotQuasiperiodicError(
            f"model {m.name or '<unnamed>'} is not declared quasiperiodic; the commutant "
            "criteria only apply to bounded, recurrent (quasiperiodic) generators"
        )
    if refine is None:
        refine = not m.analytic
    sch = c_sch_detail(m, n_samples)
    inter, int_routes = c_int_detail(m, route, 0.0, n_samples, dt, refine)
    rtol = TOL.contains_rtol if int_routes == ["ad-ladder"] else TOL.sampled_contains_rtol
    if not subspace_leq(sch.algebra, inter, rtol):
        raise NumericalInconsistency(
            f"C_sch (dimension {sch.algebra.dim}) is not contained in C_int (dimension {inter.dim})"
        )
    steady = class_from_dims(sch.algebra.dim, inter.dim)
    return ClassificationReport(
        dim_c_sch=sch.algebra.dim,
        dim_c_int=inter.dim,
        inclusion_verified=True,
        steady_class=steady,
        routes={"c_sch": sch.routes, "c_int": int_routes},
        c_sch=sch.algebra,
        c_int=inter,
        model=m.name,
    )


@dataclass
class DynamicalSymmetryReport:
    is_sds: bool
    omega: float
    trivial: bool
    in_c_sch: bool
    in_c_int: bool

    def to_dict(self) -> dict:
        return {
            "is_sds": self.is_sds,
            "omega": self.omega,
            "trivial": self.trivial,
            "in_c_sch": self.in_c_sch,
            "in_c_int": self.in_c_int,
        }


def strong_dynamical_symmetry_check(m: GkslModel, a, atol: float = 1e-9) -> DynamicalSymmetryReport:
    """Check ``[H, A] = Omega A`` and ``[L_m, A] = 0`` for a time-independent model.

    ``A`` proportional to the identity is reported as a trivial symmetry with
    ``Omega = 0``; any other ``A`` with ``Omega = 0`` is an ordinary strong
    symmetry, not a dynamical one.
    """
    if not m.is_time_independent():
        raise ModelError("strong dynamical symmetries are defined for time-independent models")
    a = np.asarray(a, dtype=complex)
    h, jumps = m.evaluate(0.0)
    na = hs_norm(a)
    if na == 0:
        raise ValueError("A must be non-zero")
    comm = h @ a - a @ h
    omega = hs_inner(a, comm) / hs_inner(a, a)
    scale = na * max(1.0, np.linalg.norm(h, 2))
    relation = hs_norm(comm - omega * a) <= atol * scale and abs(omega.imag) <= atol * max(1.0, abs(omega))
    commutes = all(hs_norm(l @ a - a @ l) <= atol * na * max(1.0, np.linalg.norm(l, 2)) for l in jumps)
    omega = float(omega.real)
    trivial = hs_norm(a - np.trace(a) / m.dim * np.eye(m.dim)) <= atol * na
    ok = relation and commutes
    sch = c_sch(m)
    inter = c_int_ad(m)
    in_sch, in_int = sch.contains(a), inter.contains(a)
    is_sds = ok and (trivial or abs(omega) > atol * scale)
    if is_sds and not trivial and (in_sch or not in_int):
        raise NumericalInconsistency(
            "a strong dynamical symmetry must lie in C_int and outside C_sch "
            f"(in C_sch: {in_sch}, in C_int: {in_int})"
        )
    return DynamicalSymmetryReport(bool(is_sds), omega, bool(trivial), in_sch, in_int)
