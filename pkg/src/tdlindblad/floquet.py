"""One-period channels: Choi matrices, Kraus operators, mixing and peripheral spectrum.

Channels are ``d^2 x d^2`` matrices on column-stacked vectors, so
``Phi[(a, b), (i, j)]`` (row index ``a + d b``, column ``i + d j``) is the
coefficient of ``|a><b|`` in ``Phi(|i><j|)``.  The Choi matrix used here is
``J = sum_ij |i><j| kron Phi(|i><j|)``, with rows ``(i, a)`` and columns
``(j, b)``; a Kraus operator is a Choi eigenvector reshaped so that
``K[a, i] = v[(i, a)]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._tol import TOL
from .algebra import _extend, _vectors
from .errors import ModelError, NumericalInconsistency
from .model import GkslModel, evolution_superoperator


class ChoiError(NumericalInconsistency):
    pass


def choi_matrix(phi: np.ndarray) -> np.ndarray:
    n = phi.shape[0]
    d = int(round(np.sqrt(n)))
    # phi4[a, b, i, j] after reading the column-major index pairs
    phi4 = phi.reshape(d, d, d, d, order="F")
    # J[(i, a), (j, b)]
    return phi4.transpose(2, 0, 3, 1).reshape(n, n)


def channel_from_kraus(kraus) -> np.ndarray:
    return sum(np.kron(k.conj(), k) for k in kraus)


@dataclass
class KrausSet:
    operators: list
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def rank(self) -> int:
        return len(self.operators)

    def apply(self, rho) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.operators)

    def completeness_error(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.linalg.norm(s - np.eye(self.dim)))

    def superoperator(self) -> np.ndarray:
        return channel_from_kraus(self.operators)


def kraus_from_choi(phi: np.ndarray, rank_tol: float = 1e-10, neg_tol: float | None = None) -> KrausSet:
    """Kraus operators from the eigendecomposition of the Choi matrix."""
    neg_tol = TOL.choi_neg_tol if neg_tol is None else neg_tol
    n = phi.shape[0]
    d = int(round(np.sqrt(n)))
    j = choi_matrix(phi)
    j = 0.5 * (j + j.conj().T)
    w, v = np.linalg.eigh(j)
    top = w.max()
    if w.min() < -neg_tol * max(1.0, top):
        raise ChoiError(f"Choi matrix has eigenvalue {w.min():.3g}; the map is not completely positive")
    keep = np.flatnonzero(w > rank_tol * top)[::-1]
    ops = [np.sqrt(w[k]) * v[:, k].reshape(d, d).T for k in keep]
    return KrausSet(ops, w[keep])


def one_cycle_map(m: GkslModel, period: float | None = None, dt: float | None = None) -> np.ndarray:
    """Evolution over one period starting at ``t = 0``; checked to be completely positive."""
    period = m.period if period is None else period
    if period is None:
        raise ModelError("one_cycle_map needs a time-periodic model (set period)")
    phi = evolution_superoperator(m, 0.0, period, dt)
    w = np.linalg.eigvalsh(0.5 * (choi_matrix(phi) + choi_matrix(phi).conj().T))
    if w.min() < -TOL.choi_neg_tol * max(1.0, w.max()):
        raise ChoiError(f"one-cycle map is not completely positive (Choi eigenvalue {w.min():.3g}); reduce dt")
    return phi


def mixing_check(kraus: KrausSet, rtol: float = 1e-9, max_length: int | None = None) -> bool:
    """Whether Kraus words of some fixed length span all of B(H).

    The span ``S_n`` of words of length ``n`` obeys ``S_{n+1} = S_n K``, so
    the sequence of subspaces is determined by its last term; the search
    stops at full span, at a repeated subspace, or at length ``d^4``.
    Full span means the channel is primitive; for the unital channels of
    Hermitian-jump models (full-rank fixed point) that is the same as mixing.
    """
    ks = kraus.operators
    d = kraus.dim
    cap = d**4 if max_length is None else max_length
    q = _extend(np.zeros((d * d, 0), complex), _vectors(ks), rtol)
    seen = []
    for _ in range(cap):
        if q.shape[1] == d * d:
            return True
        proj = q @ q.conj().T
        if any(p.shape == proj.shape and np.linalg.norm(p - proj) < 1e-8 for p in seen):
            return False
        seen.append(proj)
        mats = q.T.reshape(-1, d, d).transpose(0, 2, 1)
        words = [m @ k for m in mats for k in ks]
        q = _extend(np.zeros((d * d, 0), complex), _vectors(words), rtol)
    return q.shape[1] == d * d


def peripheral_spectrum(phi: np.ndarray, band: float = 1e-6) -> np.ndarray:
    """Eigenvalues with modulus at least ``1 - band``."""
    ev = np.linalg.eigvals(phi)
    out = ev[np.abs(ev) >= 1 - band]
    return out[np.argsort(-np.angle(out))]


def bump_kraus(g: float, period: float, kappa: float) -> list:
    """Closed-form Kraus pair of the four-segment bump protocol (dephase, idle, rotate, idle)."""
    c, s = np.cos(g * period / 4), np.sin(g * period / 4)
    e = np.exp(-kappa * period / 2)
    eye = np.eye(2)
    sx = np.array([[0, 1], [1, 0]], complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    k0 = np.sqrt((1 + e) / 2) * (c * eye - 1j * s * sx)
    k1 = np.sqrt((1 - e) / 2) * (c * sz - s * sy)
    return [k0, k1]


@dataclass
class FloquetReport:
    period: float
    peripheral: np.ndarray
    kraus_rank: int
    mixing: bool

    def to_dict(self) -> dict:
        return {
            "schema": "v1",
            "period": self.period,
            "peripheral_eigenvalues": [[float(z.real), float(z.imag)] for z in self.peripheral],
            "kraus_rank": self.kraus_rank,
            "mixing": self.mixing,
        }


def floquet_report(m: GkslModel, period: float | None = None, dt: float | None = None) -> FloquetReport:
    """One-cycle channel summary.

    Piecewise-constant models give the channel to rounding error; otherwise it
    is propagated, and Choi eigenvalues below the propagated-data cut are
    treated as integration noise so they cannot fake a full Kraus word span.
    """
    period = m.period if period is None else period
    phi = one_cycle_map(m, period, dt)
    rank_tol = 1e-10 if m.piecewise_constant() else TOL.sampled_rank_rtol
    kraus = kraus_from_choi(phi, rank_tol=rank_tol)
    return FloquetReport(period, peripheral_spectrum(phi), kraus.rank, mixing_check(kraus, rtol=max(rank_tol, 1e-9)))
