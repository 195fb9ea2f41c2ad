import math

import numpy as np
import pytest

from tdlindblad import zoo
from tdlindblad.algebra import generate_algebra
from tdlindblad.dynamics import evolve, random_states
from tdlindblad.errors import ModelError
from tdlindblad.model import interaction_jump
from tdlindblad.operators import SX, commutator, fermion_ops
from tdlindblad.symmetry import c_int, c_sch, classify

RECURRENT = [n for n in zoo.catalogue() if n != "decaying-dephasing"]


def test_catalogue_builds():
    names = zoo.catalogue()
    assert len(names) == 13 and len(set(names)) == 13
    for name in names:
        e = zoo.build(name)
        assert e.name == name and e.description
        assert e.model.dim == len(e.model.hamiltonian.evaluate(0.0))


@pytest.mark.parametrize("name", RECURRENT)
def test_expected_metadata_matches_classification(name):
    e = zoo.build(name)
    r = classify(e.model)
    assert r.steady_class == e.expected["class"]
    assert (r.dim_c_sch, r.dim_c_int) == (e.expected["dim_c_sch"], e.expected["dim_c_int"])
    if e.sector is not None:
        rs = classify(e.sector_model())
        assert (rs.steady_class, rs.dim_c_sch, rs.dim_c_int) == (
            e.sector["class"],
            e.sector["dim_c_sch"],
            e.sector["dim_c_int"],
        )


def test_variants_change_the_expectation():
    e = zoo.build("rotating-dephasing", hamiltonian=False)
    assert classify(e.model).steady_class == e.expected["class"] == "i"
    e = zoo.build("bump", gT=2 * math.pi)
    r = classify(e.model)
    assert (r.steady_class, r.dim_c_int) == ("iv", 2) == (e.expected["class"], e.expected["dim_c_int"])


@pytest.mark.parametrize("name", ["hubbard-static", "hubbard-1freq", "hubbard-2freq"])
def test_hubbard_conserves_particle_number(name):
    e = zoo.build(name)
    n = fermion_ops(e.model.space).number()
    for t in np.linspace(0, 7.3, 16):
        h, jumps = e.model.evaluate(t)
        for op in [h] + jumps:
            assert np.abs(commutator(op, n)).max() < 1e-12


@pytest.mark.parametrize("name", ["hubbard-1freq", "hubbard-2freq"])
def test_total_spin_is_a_strong_symmetry_of_the_driven_chain(name):
    e = zoo.build(name)
    f = fermion_ops(e.model.space)
    sp, sm, sz = f.s_plus(), f.s_minus(), f.s_z()
    s2 = 0.5 * (sp @ sm + sm @ sp) + sz @ sz
    alg = c_sch(e.model)
    assert alg.contains(s2) and alg.contains(f.number())
    # S^2 is not a polynomial in N, so C_sch is larger than the algebra of N
    assert generate_algebra([f.number()]).dim < alg.dim


def test_three_level_observable_generates_c_int():
    e = zoo.build("three-level-quasi")
    tx = e.observables["Tx"]
    assert c_int(e.model).contains(tx)
    assert generate_algebra([tx]).dim == 3


def test_rotating_dephasing_jump_is_static_in_the_frame():
    e = zoo.build("rotating-dephasing", kappa=0.5)
    (l0,) = interaction_jump(e.model, 0.0)
    assert np.allclose(l0, math.sqrt(0.5) * SX)


def test_j_alias_and_errors():
    a = zoo.build("hubbard-static", J=0.7)
    b = zoo.build("hubbard-static", tau=0.7)
    assert np.allclose(a.model.hamiltonian.evaluate(0.0), b.model.hamiltonian.evaluate(0.0))
    with pytest.raises(KeyError, match="available"):
        zoo.build("no-such-model")
    with pytest.raises(ModelError):
        zoo.build("ex-3.1", bogus=1.0)
    with pytest.raises(ModelError):
        zoo.build("ex-3.1", kappa=-1.0)
    with pytest.raises(ModelError):
        zoo.build("two-level-drive", l=3)
    with pytest.raises(ModelError):
        zoo.build("ex-3.1").sector_model()


def test_sector_observables_are_compressions():
    e = zoo.build("hubbard-1freq")
    iso = e.sector_isometry()
    obs = e.sector_observables()
    assert iso.shape == (16, 6)
    assert np.allclose(obs["S1y"], iso.conj().T @ e.observables["S1y"] @ iso)


@pytest.mark.parametrize("name", ["rotating-dephasing", "decaying-dephasing"])
def test_exact_solutions_agree_with_integration(name):
    e = zoo.build(name)
    rho0 = random_states(2, 1, seed=12)[0]
    tr = evolve(e.model, rho0, 4.0, dt=1e-2, record_every=50)
    for t, rho in zip(tr.times, tr.states):
        assert np.allclose(rho, e.exact_solution(rho0, t), atol=1e-9)


def test_alias_builds_the_same_model():
    assert zoo.build("ex-4.2").name == "decaying-dephasing"
    assert "ex-4.2" not in zoo.catalogue()


@pytest.mark.xfail(strict=True, reason="S^2 also commutes with the driven model, so C_sch is larger than the algebra of N")
@pytest.mark.parametrize("name", ["hubbard-1freq", "hubbard-2freq"])
def test_c_sch_of_driven_dimer_is_generated_by_particle_number(name):
    e = zoo.build(name)
    n = fermion_ops(e.model.space).number()
    assert c_sch(e.model).dim == generate_algebra([np.eye(16), n]).dim


def test_small_models_match_hand_built_matrices():
    sx, sy, sz = SX, np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])
    h, (l,) = zoo.build("ex-3.1", omega=0.6, kappa=0.25).model.evaluate(0.0)
    assert np.allclose(h, 0.3 * sx) and np.allclose(l, 0.5 * sz)
    t = 0.8
    h, (l,) = zoo.build("rotating-dephasing", omega=1.5, kappa=4.0).model.evaluate(t)
    assert np.allclose(h, 0.75 * sz) and np.allclose(l, 2 * (math.cos(1.5 * t) * sx + math.sin(1.5 * t) * sy))
    h, (l,) = zoo.build("two-level-drive", l=2, amplitudes=[0.5, 0.7], omegas=[1.0, 2.0]).model.evaluate(t)
    assert np.allclose(h, sz + (0.5 * math.cos(t) + 0.7 * math.cos(2 * t)) * sx)
    h, (l,) = zoo.build("driven-chain", V=2, B=0.9, omega=1.1, kappa=1.0).model.evaluate(t)
    eye = np.eye(2)
    want = np.kron(sz, sz) + 0.9 * math.cos(1.1 * t) * (np.kron(sx, eye) + np.kron(eye, sx))
    assert np.allclose(h, want) and np.allclose(l, np.kron(sz, eye))
