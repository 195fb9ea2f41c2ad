import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from tdlindblad import zoo
from tdlindblad.algebra import generate_algebra, same_span
from tdlindblad.errors import ModelError, NotQuasiperiodicError, NumericalInconsistency
from tdlindblad.model import GkslModel, TimeDependentOperator
from tdlindblad.operators import SX, SY, SZ, HilbertSpec, fermion_ops, random_hermitian
from tdlindblad.profiles import TrigProfile
from tdlindblad.symmetry import (
    ad_ladder,
    ad_step,
    basis_labels,
    c_int,
    c_sch,
    class_from_dims,
    classify,
    golden_times,
    strong_dynamical_symmetry_check,
    uniqueness_by_ad,
)

EYE2 = np.eye(2)


def test_class_map():
    assert class_from_dims(1, 1) == "i"
    assert class_from_dims(2, 2) == "ii"
    assert class_from_dims(2, 5) == "iii"
    assert class_from_dims(1, 3) == "iv"
    with pytest.raises(NumericalInconsistency):
        class_from_dims(3, 2)


def test_golden_times_cover_the_window():
    t = golden_times(64, 10.0)
    assert t.min() >= 0 and t.max() < 10
    assert len(np.unique(np.round(t, 12))) == 64
    assert np.histogram(t, bins=4, range=(0, 10))[0].min() >= 12


def test_ad_step_kills_the_co_rotating_jump():
    e = zoo.build("rotating-dephasing")
    h = e.model.hamiltonian.fourier()
    rung = ad_step(h, e.model.jumps[0].fourier())
    assert rung.norm() < 1e-12


def test_ladder_of_static_dephasing():
    e = zoo.build("ex-3.1")
    lad = ad_ladder(e.model)
    # L = sz, i[H, L] ~ sy: two rungs already generate B(H)
    assert lad.dims[-1] == 4
    assert np.allclose(lad.values[0][0], SZ / math.sqrt(2))


def _sympy_rungs(v, b, w, n_rungs):
    """ad^n(L) at t = 0 by symbolic differentiation (independent of the Fourier code)."""
    t = sp.symbols("t", real=True)

    def pauli(letter, site):
        mats = {"x": sp.Matrix([[0, 1], [1, 0]]), "z": sp.Matrix([[1, 0], [0, -1]]), "i": sp.eye(2)}
        out = sp.Matrix([[1]])
        for k in range(1, v + 1):
            out = sp.kronecker_product(out, mats[letter] if k == site else mats["i"])
        return out

    zz = sp.zeros(2**v)
    for j in range(1, v):
        zz += pauli("z", j) * pauli("z", j + 1)
    xs = sp.zeros(2**v)
    for j in range(1, v + 1):
        xs += pauli("x", j)
    h = zz + b * sp.cos(w * t) * xs
    a = pauli("z", 1)
    out = []
    for _ in range(n_rungs):
        out.append(np.array(a.subs(t, 0).evalf(), dtype=complex))
        a = sp.simplify(sp.I * (h * a - a * h) + a.diff(t))
    return out


@pytest.mark.parametrize("v", [2])
def test_chain_ladder_against_symbolic_rungs(v):
    e = zoo.build("driven-chain", V=v, B=0.7, omega=1.3)
    lad = ad_ladder(e.model)
    rungs = _sympy_rungs(v, sp.Rational(7, 10), sp.Rational(13, 10), 2 * v)
    d = 2**v
    for n in range(2 * v):
        ref = generate_algebra([np.eye(d)] + rungs[: n + 1])
        assert ref.dim == 2 ** (n + 1)
        assert lad.dims[n] == ref.dim
    assert uniqueness_by_ad(e.model)


def test_ladder_needs_analytic_profiles():
    with pytest.raises(ModelError):
        ad_ladder(zoo.build("bump").model)


def test_c_sch_examples():
    assert c_sch(zoo.build("ex-3.1").model).dim == 1
    alg = c_sch(zoo.build("ex-3.2").model)
    assert alg.dim == 2 and alg.contains(SZ)


def test_c_int_of_rotating_dephasing_contains_sx():
    alg = c_int(zoo.build("rotating-dephasing").model)
    assert alg.dim == 2 and alg.contains(SX) and not alg.contains(SZ)


def test_c_int_of_three_level_model():
    alg = c_int(zoo.build("three-level-quasi").model, route="both")
    tx = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], complex)
    assert alg.dim == 3 and alg.contains(tx) and alg.contains(tx @ tx)


def test_classification_of_two_level_examples():
    r = classify(zoo.build("ex-3.1").model)
    assert (r.steady_class, r.dim_c_sch, r.dim_c_int) == ("i", 1, 1)
    r = classify(zoo.build("ex-3.2").model)
    assert (r.steady_class, r.dim_c_sch, r.dim_c_int) == ("ii", 2, 2)
    r = classify(zoo.build("rotating-dephasing").model)
    assert (r.steady_class, r.dim_c_sch, r.dim_c_int) == ("iv", 1, 2)
    assert r.inclusion_verified


def test_classify_refuses_non_recurrent_models():
    with pytest.raises(NotQuasiperiodicError):
        classify(zoo.build("decaying-dephasing").model)


def test_report_serialisation():
    data = classify(zoo.build("ex-3.2").model).to_dict()
    assert data["schema"] == "v1"
    assert data["class"] == "ii"
    assert any("Z" in label for label in data["basis_labels"]["c_int"])
    assert "sampled_rank_rtol" in data["tolerances"]


def test_basis_labels_fall_back_to_indices():
    alg = c_sch(zoo.build("three-level-quasi").model)
    assert basis_labels(alg) == ["b0"]


def test_strong_dynamical_symmetry_of_static_hubbard():
    e = zoo.build("hubbard-static", B=0.8)
    f = fermion_ops(e.model.space)
    rep = strong_dynamical_symmetry_check(e.model, f.s_plus())
    assert rep.is_sds and not rep.trivial
    assert rep.omega == pytest.approx(0.8)
    assert rep.in_c_int and not rep.in_c_sch
    ordinary = strong_dynamical_symmetry_check(e.model, f.number())
    assert not ordinary.is_sds and ordinary.in_c_sch
    trivial = strong_dynamical_symmetry_check(e.model, np.eye(16))
    assert trivial.is_sds and trivial.trivial


def test_strong_dynamical_symmetry_needs_static_model():
    with pytest.raises(ModelError):
        strong_dynamical_symmetry_check(zoo.build("rotating-dephasing").model, SX)


def _random_driven(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    w = float(rng.uniform(0.5, 2.0))
    if rng.random() < 0.5:
        # commuting structure: everything diagonal gives a non-trivial C_int
        diag = lambda: np.diag(rng.normal(size=d)).astype(complex)
        ham = TimeDependentOperator(((TrigProfile(1.0), diag()), (TrigProfile.cos(w), diag())))
        jumps = [TimeDependentOperator(((TrigProfile.cos(w), diag()),))]
    else:
        ham = TimeDependentOperator(((TrigProfile(1.0), random_hermitian(d, rng)), (TrigProfile.sin(w), random_hermitian(d, rng))))
        jumps = [TimeDependentOperator.constant(random_hermitian(d, rng))]
    return GkslModel(HilbertSpec.generic(d), ham, jumps, period=2 * math.pi / w)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ladder_and_sampling_agree_on_random_models(seed):
    m = _random_driven(seed)
    a = c_int(m, route="ad-ladder")
    b = c_int(m, route="sampled")
    assert same_span(a, b, 1e-6)
    assert c_sch(m).dim <= a.dim
