"""Dense operators on finite Hilbert spaces.

Operators are plain complex ``numpy`` arrays of shape ``(d, d)``.  Sites,
Majorana indices and fermion sites are 1-based, matching the usual physics
notation.

Jordan-Wigner convention for spinful fermions: the spin-up modes of all sites
come first, then the spin-down modes, each block in site order.  Qubit state
``|1>`` means "occupied".
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from ._tol import TOL

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"i": I2, "x": SX, "y": SY, "z": SZ}

# annihilates |1> (occupied) into |0>
_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)

UP, DOWN = "up", "down"


class DimensionError(ValueError):
    pass


def as_operator(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"operator must be square, got shape {a.shape}")
    return a


def _check_same(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr[A^dagger B]."""
    a, b = as_operator(a), as_operator(b)
    _check_same(a, b)
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    return float(np.linalg.norm(as_operator(a)))


def commutator(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _check_same(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _check_same(a, b)
    return a @ b + b @ a


def dagger(a) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a, rtol: float | None = None) -> bool:
    rtol = TOL.hermitian_rtol if rtol is None else rtol
    a = as_operator(a)
    scale = np.abs(a).max(initial=0.0)
    return bool(np.abs(a - a.conj().T).max(initial=0.0) <= rtol * max(scale, 1e-300))


def is_unitary(u, atol: float | None = None) -> bool:
    atol = TOL.unitary_atol if atol is None else atol
    u = as_operator(u)
    d = u.shape[0]
    return hs_norm(u.conj().T @ u - np.eye(d)) <= atol * np.sqrt(d)


def vec(a) -> np.ndarray:
    """Column-stacking vectorisation."""
    return np.asarray(a).reshape(-1, order="F")


def unvec(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    return v.reshape(d, d, order="F")


def kron_all(ops) -> np.ndarray:
    return reduce(np.kron, ops, np.eye(1, dtype=complex))


@dataclass(frozen=True)
class HilbertSpec:
    """Which Hilbert space a model lives on.

    ``kind`` is ``"generic"``, ``"qubits"`` or ``"fermions"`` (spinful).  For
    qubits ``size`` is the number of sites V; for fermions it is the number of
    lattice sites and ``bonds`` lists nearest-neighbour pairs (1-based).
    """

    kind: str
    size: int
    bonds: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("generic", "qubits", "fermions"):
            raise ValueError(f"unknown Hilbert space kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("size must be positive")
        for bond in self.bonds:
            if len(bond) != 2 or not all(1 <= s <= self.size for s in bond):
                raise ValueError(f"bond {bond} references a site outside 1..{self.size}")

    @classmethod
    def generic(cls, d: int) -> "HilbertSpec":
        return cls("generic", d)

    @classmethod
    def qubits(cls, n_sites: int) -> "HilbertSpec":
        return cls("qubits", n_sites)

    @classmethod
    def fermions(cls, n_sites: int, bonds=None) -> "HilbertSpec":
        if bonds is None:
            bonds = tuple((j, j + 1) for j in range(1, n_sites))
        return cls("fermions", n_sites, tuple(tuple(b) for b in bonds))

    @property
    def dim(self) -> int:
        if self.kind == "qubits":
            return 2**self.size
        if self.kind == "fermions":
            return 4**self.size
        return self.size

    @property
    def n_modes(self) -> int:
        if self.kind == "fermions":
            return 2 * self.size
        if self.kind == "qubits":
            return self.size
        raise ValueError("generic spaces have no mode structure")

    def is_connected(self) -> bool:
        if self.kind != "fermions":
            return True
        adj = {j: set() for j in range(1, self.size + 1)}
        for a, b in self.bonds:
            adj[a].add(b)
            adj[b].add(a)
        seen, todo = {1}, deque([1])
        while todo:
            for k in adj[todo.popleft()] - seen:
                seen.add(k)
                todo.append(k)
        return len(seen) == self.size


def pauli_string(space: HilbertSpec, assignments: dict) -> np.ndarray:
    """Tensor product with the given Pauli letters on the given sites.

    >>> pauli_string(HilbertSpec.qubits(2), {1: "z"}).real.diagonal()
    array([ 1.,  1., -1., -1.])
    """
    if space.kind != "qubits":
        raise ValueError("pauli_string needs a qubit space")
    factors = [I2] * space.size
    for site, letter in assignments.items():
        if not 1 <= site <= space.size:
            raise IndexError(f"site {site} outside 1..{space.size}")
        factors[site - 1] = PAULI[letter.lower()]
    return kron_all(factors)


def majorana(space: HilbertSpec, j: int) -> np.ndarray:
    """Majorana operator built from an X-string followed by Z (odd j) or Y (even j)."""
    if space.kind != "qubits":
        raise ValueError("majorana needs a qubit space")
    if not 1 <= j <= 2 * space.size:
        raise IndexError(f"Majorana index {j} outside 1..{2 * space.size}")
    site = (j + 1) // 2
    letters = {k: "x" for k in range(1, site)}
    letters[site] = "z" if j % 2 else "y"
    return pauli_string(space, letters)


@dataclass(frozen=True)
class FermionOps:
    """Annihilation, creation and number operators keyed by ``(site, spin)``."""

    space: HilbertSpec
    c: dict
    cdag: dict
    n: dict

    def mode_index(self, site: int, spin: str) -> int:
        return (site - 1) + (0 if spin == UP else self.space.size)

    def number(self) -> np.ndarray:
        return sum(self.n.values())

    def site_number(self, site: int) -> np.ndarray:
        return self.n[site, UP] + self.n[site, DOWN]

    def s_plus(self) -> np.ndarray:
        return sum(self.cdag[j, UP] @ self.c[j, DOWN] for j in self._sites())

    def s_minus(self) -> np.ndarray:
        return sum(self.cdag[j, DOWN] @ self.c[j, UP] for j in self._sites())

    def s_z(self) -> np.ndarray:
        return 0.5 * sum(self.n[j, UP] - self.n[j, DOWN] for j in self._sites())

    def local_spin(self, site: int, axis: str) -> np.ndarray:
        up_down = self.cdag[site, UP] @ self.c[site, DOWN]
        down_up = self.cdag[site, DOWN] @ self.c[site, UP]
        if axis == "x":
            return 0.5 * (up_down + down_up)
        if axis == "y":
            return (up_down - down_up) / 2j
        if axis == "z":
            return 0.5 * (self.n[site, UP] - self.n[site, DOWN])
        raise ValueError(f"axis must be x, y or z, got {axis!r}")

    def _sites(self):
        return range(1, self.space.size + 1)


def fermion_ops(space: HilbertSpec) -> FermionOps:
    if space.kind != "fermions":
        raise ValueError("fermion_ops needs a fermion space")
    n_modes = space.n_modes
    c, cdag, n = {}, {}, {}
    for spin_block, spin in enumerate((UP, DOWN)):
        for site in range(1, space.size + 1):
            k = spin_block * space.size + (site - 1)
            factors = [SZ] * k + [_LOWER] + [I2] * (n_modes - k - 1)
            op = kron_all(factors)
            c[site, spin] = op
            cdag[site, spin] = op.conj().T
            n[site, spin] = op.conj().T @ op
    return FermionOps(space, c, cdag, n)


def occupation_numbers(space: HilbertSpec) -> np.ndarray:
    """Total particle number of each computational basis state."""
    idx = np.arange(space.dim)
    return np.array([bin(i).count("1") for i in idx])


def number_sector_projector(space: HilbertSpec, n_particles: int) -> np.ndarray:
    if not 0 <= n_particles <= space.n_modes:
        raise ValueError(f"particle number {n_particles} outside 0..{space.n_modes}")
    return np.diag((occupation_numbers(space) == n_particles).astype(complex))


def sector_isometry(space: HilbertSpec, n_particles: int) -> np.ndarray:
    """Columns are the basis states with the given particle number."""
    keep = np.flatnonzero(occupation_numbers(space) == n_particles)
    iso = np.zeros((space.dim, keep.size), dtype=complex)
    iso[keep, np.arange(keep.size)] = 1.0
    return iso


def sector_dimension(n_modes: int, n_particles: int) -> int:
    return math.comb(n_modes, n_particles)


def haar_state(d: int, rng: np.random.Generator, projector=None) -> np.ndarray:
    """Haar-random pure density matrix, optionally projected into a subspace."""
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    if projector is not None:
        psi = projector @ psi
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + a.conj().T) / 2
