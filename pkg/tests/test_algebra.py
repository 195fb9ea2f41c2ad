import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from tdlindblad.algebra import (
    AlgebraError,
    OperatorAlgebra,
    commutant,
    generate_algebra,
    intersection,
    same_span,
    span,
    subspace_leq,
)
from tdlindblad.operators import SX, SY, SZ, hs_inner, random_hermitian

EYE2 = np.eye(2)


def test_generated_algebra_examples():
    assert generate_algebra([EYE2, SX, SZ]).dim == 4
    assert generate_algebra([EYE2, SX, SZ]).is_full()
    assert generate_algebra([EYE2, SZ]).dim == 2
    assert not generate_algebra([EYE2, SZ]).is_full()
    assert generate_algebra([EYE2]).dim == 1
    assert generate_algebra([SZ], include_identity=False).dim == 2  # sz^2 = I


def test_commutant_examples():
    assert commutant([EYE2]).dim == 4
    c = commutant([SZ])
    assert c.dim == 2 and c.contains(SZ) and c.contains(EYE2)
    assert commutant([SX, SZ]).dim == 1
    assert commutant([SX, SZ]).is_trivial()
    assert not commutant([SZ]).is_trivial()
    assert not commutant([EYE2]).is_trivial()


def test_is_trivial_rejects_a_non_scalar_line():
    alg = OperatorAlgebra(SZ[None] / np.sqrt(2), "plain-subspace")
    with pytest.raises(AlgebraError):
        alg.is_trivial()


def test_contains_uses_relative_tolerance():
    alg = span([EYE2, SZ])
    assert alg.contains(3 * SZ + 2 * EYE2)
    assert not alg.contains(SX)
    assert alg.contains(SZ + 1e-10 * SX)


def test_commutant_of_one_body_ops_on_two_qubits():
    a = np.kron(SZ, EYE2)
    b = np.kron(EYE2, SX)
    c = commutant([a, b])
    # commutant of {Z1, X2} is generated by Z1 and X2 themselves
    assert c.dim == 4
    assert c.contains(a @ b)


def _block_generators(rng, blocks, n_gens=2):
    """Random Hermitian generators of  (+)_i M_{n_i} (x) I_{m_i}  in a random basis."""
    d = sum(n * m for n, m in blocks)
    gens = []
    for _ in range(n_gens):
        parts = [np.kron(random_hermitian(n, rng), np.eye(m)) for n, m in blocks]
        g = np.zeros((d, d), complex)
        k = 0
        for p in parts:
            g[k : k + p.shape[0], k : k + p.shape[0]] = p
            k += p.shape[0]
        gens.append(g)
    # distinct scalar weights keep equal-size blocks inequivalent
    weights = np.zeros((d, d), complex)
    k = 0
    for i, (n, m) in enumerate(blocks):
        weights[k : k + n * m, k : k + n * m] = (i + 1) * np.eye(n * m)
        k += n * m
    gens.append(weights)
    u = unitary_group.rvs(d, random_state=rng)
    return [u @ g @ u.conj().T for g in gens]


block_lists = st.lists(st.tuples(st.integers(1, 3), st.integers(1, 2)), min_size=1, max_size=3).filter(
    lambda b: 2 <= sum(n * m for n, m in b) <= 6
)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), block_lists)
def test_bicommutant_duality(seed, blocks):
    rng = np.random.default_rng(seed)
    gens = _block_generators(rng, blocks)
    alg = generate_algebra(gens)
    com = commutant(gens)
    # dimensions from the block structure
    assert alg.dim == sum(n * n for n, _ in blocks)
    assert com.dim == sum(m * m for _, m in blocks)
    # commutant of the commutant is the generated algebra
    assert same_span(commutant(list(com.basis)), alg, 1e-7)
    assert same_span(commutant(list(alg.basis)), com, 1e-7)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), block_lists)
def test_algebra_invariants(seed, blocks):
    rng = np.random.default_rng(seed)
    gens = _block_generators(rng, blocks)
    for alg in (generate_algebra(gens), commutant(gens)):
        gram = np.array([[hs_inner(a, b) for b in alg.basis] for a in alg.basis])
        assert np.allclose(gram, np.eye(alg.dim), atol=1e-10)
        assert alg.closed_under_products()
        assert alg.closed_under_adjoint(1e-9)
        assert alg.contains(np.eye(alg.d))
    assert commutant(gens).is_hermitian_basis()


def test_subspace_relations():
    a = span([EYE2, SZ])
    b = span([EYE2, SZ, SX])
    assert subspace_leq(a, b)
    assert not subspace_leq(b, a)
    assert same_span(a, span([EYE2 + SZ, EYE2 - SZ]))
    i = intersection(b, span([SZ, SY]))
    assert i.dim == 1 and i.contains(SZ)


def test_full_algebra_from_generic_pair():
    rng = np.random.default_rng(4)
    assert generate_algebra([random_hermitian(4, rng), random_hermitian(4, rng)]).is_full()
