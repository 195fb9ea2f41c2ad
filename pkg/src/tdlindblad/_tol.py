"""Numerical tolerances shared across the package.

Every threshold used for a rank decision, Hermiticity check or convergence
verdict lives here so that reports can echo them.
"""
from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class Tolerances:
    hermitian_rtol: float = 1e-12
    unitary_atol: float = 1e-10      # times sqrt(d)
    freq_rtol: float = 1e-10
    rank_rtol: float = 1e-10         # singular-value cut for exact data
    sampled_rank_rtol: float = 1e-6  # singular-value cut for propagated data
    contains_rtol: float = 1e-8
    sampled_contains_rtol: float = 1e-5
    steady_eps: float = 1e-4
    purity_slack: float = 1e-8
    positivity_warn: float = 1e-7
    positivity_abort: float = 1e-5
    choi_neg_tol: float = 1e-7
    peak_prominence: float = 0.05

    def as_dict(self):
        return asdict(self)


TOL = Tolerances()


@contextmanager
def overridden(**changes):
    """Temporarily replace fields of the shared ``TOL`` record (restored on exit)."""
    names = {f.name for f in fields(Tolerances)}
    unknown = set(changes) - names
    if unknown:
        raise KeyError(f"unknown tolerances {sorted(unknown)}; known: {sorted(names)}")
    saved = {k: getattr(TOL, k) for k in changes}
    try:
        for k, v in changes.items():
            object.__setattr__(TOL, k, float(v))
        yield TOL
    finally:
        for k, v in saved.items():
            object.__setattr__(TOL, k, v)
