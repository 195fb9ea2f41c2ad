"""Finite-dimensional operator algebras: generated algebras and commutants.

Subspaces of B(H) are stored through an orthonormal (Hilbert-Schmidt) basis.
Rank decisions use singular values against a relative cut; the default cut
suits exactly known matrices, and propagated (integrated) data should pass a
looser one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._tol import TOL
from .errors import NumericalInconsistency
from .operators import DimensionError, as_operator


class AlgebraError(NumericalInconsistency):
    """Internal inconsistency in an algebra computation."""


def _vectors(ops) -> np.ndarray:
    """Stack operators as columns of column-stacked vectors, shape (d^2, k)."""
    ops = [as_operator(a) for a in ops]
    if not ops:
        raise ValueError("need at least one operator")
    d = ops[0].shape[0]
    if any(a.shape != (d, d) for a in ops):
        raise DimensionError("operators have mismatched dimensions")
    return np.stack([a.reshape(-1, order="F") for a in ops], axis=1)


def _extend(q: np.ndarray, cands: np.ndarray, rtol: float) -> np.ndarray:
    """Orthonormal columns spanning the part of ``cands`` outside ``span(q)``.

    Candidates are normalised first, projected off ``q`` twice, and the
    remainder's singular vectors with ``s > rtol`` are kept.
    """
    norms = np.linalg.norm(cands, axis=0)
    keep = norms > 0
    if not np.any(keep):
        return cands[:, :0]
    c = cands[:, keep] / norms[keep]
    for _ in range(2):
        if q.shape[1]:
            c = c - q @ (q.conj().T @ c)
    u, s, _ = np.linalg.svd(c, full_matrices=False)
    return u[:, s > rtol]


def _orth(vectors: np.ndarray, rtol: float) -> np.ndarray:
    return _extend(vectors[:, :0], vectors, rtol)


def _hermitian_basis(q: np.ndarray, d: int, rtol: float) -> np.ndarray | None:
    """A Hermitian orthonormal basis of span(q) when the span is closed under adjoint."""
    mats = q.T.reshape(-1, d, d).transpose(0, 2, 1)
    herm = [(m + m.conj().T) / 2 for m in mats] + [(m - m.conj().T) / 2j for m in mats]
    herm_vecs = np.stack([h.reshape(-1, order="F") for h in herm], axis=1)
    resid = herm_vecs - q @ (q.conj().T @ herm_vecs)
    if np.linalg.norm(resid) > 1e-6 * max(1.0, np.linalg.norm(herm_vecs)):
        return None
    real = np.concatenate([herm_vecs.real, herm_vecs.imag], axis=0)
    u, s, _ = np.linalg.svd(real, full_matrices=False)
    rank = q.shape[1]
    if rank > s.size or s[rank - 1] <= rtol * s[0]:
        return None
    u = u[:, :rank]
    n = d * d
    return u[:n] + 1j * u[n:]


@dataclass(frozen=True)
class OperatorAlgebra:
    """Orthonormal basis of a subspace of B(H).

    ``basis`` has shape ``(k, d, d)``; ``kind`` is ``"generated-algebra"``,
    ``"commutant"`` or ``"plain-subspace"``.
    """

    basis: np.ndarray
    kind: str = "plain-subspace"

    @classmethod
    def from_vectors(cls, q: np.ndarray, d: int, kind: str) -> "OperatorAlgebra":
        mats = q.T.reshape(-1, d, d).transpose(0, 2, 1)
        return cls(np.ascontiguousarray(mats), kind)

    @property
    def d(self) -> int:
        return self.basis.shape[-1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self) -> int:
        return self.dim

    @property
    def vectors(self) -> np.ndarray:
        return self.basis.transpose(0, 2, 1).reshape(self.dim, -1).T

    def project(self, x) -> np.ndarray:
        x = as_operator(x)
        if x.shape[0] != self.d:
            raise DimensionError(f"operator dimension {x.shape[0]} does not match algebra dimension {self.d}")
        q = self.vectors
        v = q @ (q.conj().T @ x.reshape(-1, order="F"))
        return v.reshape(self.d, self.d, order="F")

    def contains(self, x, rtol: float | None = None) -> bool:
        rtol = TOL.contains_rtol if rtol is None else rtol
        x = as_operator(x)
        nx = np.linalg.norm(x)
        if nx == 0:
            return True
        return bool(np.linalg.norm(x - self.project(x)) <= rtol * nx)

    def is_full(self) -> bool:
        return self.dim == self.d**2

    def is_trivial(self) -> bool:
        if self.dim != 1:
            return False
        overlap = abs(np.trace(self.basis[0])) / np.sqrt(self.d)
        if abs(overlap - 1.0) > 1e-10:
            raise AlgebraError("one-dimensional algebra whose element is not proportional to the identity")
        return True

    def is_hermitian_basis(self) -> bool:
        return bool(np.allclose(self.basis, self.basis.conj().transpose(0, 2, 1), atol=1e-10))

    def closed_under_products(self, rtol: float = 1e-8) -> bool:
        return all(self.contains(a @ b, rtol) for a in self.basis for b in self.basis)

    def closed_under_adjoint(self, rtol: float = 1e-10) -> bool:
        return all(self.contains(a.conj().T, rtol) for a in self.basis)


def span(ops, rtol: float | None = None) -> OperatorAlgebra:
    """Orthonormal basis of the linear span of the given operators."""
    rtol = TOL.rank_rtol if rtol is None else rtol
    vecs = _vectors(ops)
    d = int(round(np.sqrt(vecs.shape[0])))
    q = _orth(vecs, rtol)
    return OperatorAlgebra.from_vectors(q, d, "plain-subspace")


def generate_algebra(generators, include_identity: bool = True, rtol: float | None = None) -> OperatorAlgebra:
    """Smallest (unital) associative algebra containing the generators.

    The span is grown by right-multiplying the newest basis elements by every
    generator until no new direction appears.
    """
    rtol = TOL.rank_rtol if rtol is None else rtol
    gens = [as_operator(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].shape[0]
    if any(g.shape != (d, d) for g in gens):
        raise DimensionError("generators have mismatched dimensions")
    start = ([np.eye(d, dtype=complex)] if include_identity else []) + gens
    q = _orth(_vectors(start), rtol)
    gen_q = _orth(_vectors(gens), rtol)
    gen_mats = gen_q.T.reshape(-1, d, d).transpose(0, 2, 1)
    frontier = q
    rounds = 0
    while frontier.shape[1] and q.shape[1] < d * d:
        rounds += 1
        if rounds > 4 * d * d:
            raise AlgebraError("algebra closure did not stabilise")
        front = frontier.T.reshape(-1, d, d).transpose(0, 2, 1)
        prods = (front[:, None] @ gen_mats[None, :]).reshape(-1, d, d)
        cands = prods.transpose(0, 2, 1).reshape(prods.shape[0], -1).T
        frontier = _extend(q, cands, rtol)
        q = np.concatenate([q, frontier], axis=1)
    if q.shape[1] > d * d:
        raise AlgebraError(f"algebra dimension {q.shape[1]} exceeds d^2 = {d * d}")
    herm = _hermitian_basis(q, d, rtol) if q.shape[1] < d * d else None
    if herm is not None:
        q = herm
    return OperatorAlgebra.from_vectors(q, d, "generated-algebra")


def commutant(generators, rtol: float | None = None) -> OperatorAlgebra:
    """All operators commuting with every generator.

    Solves ``(I kron A - A^T kron I) vec(O) = 0`` jointly for all generators;
    the stacked system is reduced by incremental QR and the null space read
    from the singular values of the triangular factor.
    """
    rtol = TOL.rank_rtol if rtol is None else rtol
    vecs = _vectors(generators)
    d = int(round(np.sqrt(vecs.shape[0])))
    eye = np.eye(d)
    gq = _orth(vecs, rtol)
    gens = gq.T.reshape(-1, d, d).transpose(0, 2, 1)
    n = d * d
    r = np.zeros((0, n), dtype=complex)
    for a in gens:
        block = np.kron(eye, a) - np.kron(a.T, eye)
        r = scipy.linalg.qr(np.vstack([r, block]), mode="r")[0][:n]
    if r.shape[0] == 0:
        q = np.eye(n, dtype=complex)
    else:
        _, s, vh = np.linalg.svd(r)
        s_full = np.zeros(n)
        s_full[: s.size] = s
        # generators are orthonormalised, so the stacked map has norm of order one;
        # flooring the scale keeps commutators that are pure rounding noise out of the rank
        top = max(s_full[0], 1.0)
        q = vh[s_full <= rtol * top].conj().T
    ident = eye.reshape(-1, order="F") / np.sqrt(d)
    if np.linalg.norm(ident - q @ (q.conj().T @ ident)) > 1e-8:
        raise AlgebraError("commutant does not contain the identity")
    herm = _hermitian_basis(q, d, rtol)
    if herm is not None:
        q = herm
    return OperatorAlgebra.from_vectors(q, d, "commutant")


def subspace_leq(a: OperatorAlgebra, b: OperatorAlgebra, rtol: float | None = None) -> bool:
    if a.d != b.d:
        raise DimensionError("algebras act on spaces of different dimension")
    return all(b.contains(x, rtol) for x in a.basis)


def same_span(a: OperatorAlgebra, b: OperatorAlgebra, rtol: float | None = None) -> bool:
    return a.dim == b.dim and subspace_leq(a, b, rtol) and subspace_leq(b, a, rtol)


def intersection(a: OperatorAlgebra, b: OperatorAlgebra, rtol: float | None = None) -> OperatorAlgebra:
    """Intersection of two subspaces via principal angles."""
    rtol = TOL.rank_rtol if rtol is None else rtol
    qa, qb = a.vectors, b.vectors
    u, s, _ = np.linalg.svd(qa.conj().T @ qb, full_matrices=False)
    q = qa @ u[:, s >= 1 - rtol]
    return OperatorAlgebra.from_vectors(q, a.d, "plain-subspace")
