import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdlindblad.profiles import (
    ExpDecayProfile,
    PiecewiseProfile,
    ProfileError,
    TrigProfile,
    fibonacci_word,
    linearly_independent,
    profile_from_dict,
)

amps = st.floats(-3, 3, allow_nan=False)
freqs = st.floats(0.1, 5)
phases = st.floats(-math.pi, math.pi)
terms = st.lists(st.tuples(amps, freqs, phases), max_size=3)


def direct(constant, ts, t):
    return constant + sum(a * np.cos(w * t + p) for a, w, p in ts)


@settings(max_examples=60, deadline=None)
@given(amps, terms, st.floats(0, 50))
def test_canonical_form_evaluates_like_the_raw_sum(c, ts, t):
    prof = TrigProfile(c, tuple(ts))
    assert prof.eval(t) == pytest.approx(direct(c, ts, t), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(amps, terms, st.floats(0, 20))
def test_derivative_matches_finite_difference(c, ts, t):
    prof = TrigProfile(c, tuple(ts))
    h = 1e-5
    fd = (direct(c, ts, t + h) - direct(c, ts, t - h)) / (2 * h)
    assert prof.derivative().eval(t) == pytest.approx(fd, abs=1e-5)


@settings(max_examples=60, deadline=None)
@given(amps, terms, amps, terms, st.floats(0, 20))
def test_product_is_pointwise(c1, t1, c2, t2, t):
    a, b = TrigProfile(c1, tuple(t1)), TrigProfile(c2, tuple(t2))
    assert (a * b).eval(t) == pytest.approx(a.eval(t) * b.eval(t), abs=1e-8)
    assert (a + b).eval(t) == pytest.approx(a.eval(t) + b.eval(t), abs=1e-9)


def test_canonicalisation_merges_and_folds():
    p = TrigProfile(0.0, ((1.0, 2.0, 0.0), (1.0, 2.0, 0.0)))
    assert p.terms == ((2.0, 2.0, 0.0),)
    q = TrigProfile(0.0, ((1.0, -2.0, 0.3),))
    assert q.frequencies == (2.0,)
    assert q.eval(0.7) == pytest.approx(math.cos(-1.4 + 0.3))
    r = TrigProfile(1.0, ((2.0, 0.0, 0.0),))
    assert r.is_constant() and r.constant == pytest.approx(3.0)
    z = TrigProfile.cos(1.0) + TrigProfile.cos(1.0, amplitude=-1.0)
    assert z.is_zero()


def test_cos_squared_identity():
    p = TrigProfile.cos(1.0) * TrigProfile.cos(1.0)
    assert p.constant == pytest.approx(0.5)
    assert p.frequencies == pytest.approx((2.0,))


def test_sin_is_shifted_cos():
    assert TrigProfile.sin(1.3).eval(0.4) == pytest.approx(math.sin(1.3 * 0.4))


def test_longest_period():
    p = TrigProfile.cos(2.0) + TrigProfile.cos(0.5)
    assert p.longest_period() == pytest.approx(4 * math.pi)
    assert TrigProfile(1.0).longest_period() is None


def test_linear_independence():
    assert linearly_independent([TrigProfile(1.0), TrigProfile.cos(1.0), TrigProfile.sin(1.0)])
    assert not linearly_independent([TrigProfile.cos(1.0), TrigProfile.cos(1.0, amplitude=2.0)])
    assert linearly_independent([TrigProfile.cos(1.0), TrigProfile.cos(math.sqrt(2))])
    assert not linearly_independent([TrigProfile(1.0), TrigProfile(0.0)])
    # cos and sin of one frequency must not alias to zero on the sample grid
    assert linearly_independent([TrigProfile.cos(1.0), TrigProfile.sin(1.0)])


def test_fibonacci_word_recursion():
    assert fibonacci_word(0) == "0"
    assert fibonacci_word(1) == "01"
    for n in range(2, 12):
        assert fibonacci_word(n) == fibonacci_word(n - 1) + fibonacci_word(n - 2)
    assert fibonacci_word(5) == "0100101001001"
    fib = [1, 2]
    while len(fib) < 21:
        fib.append(fib[-1] + fib[-2])
    assert len(fibonacci_word(20)) == fib[20] == 17711


def test_piecewise_raw_values_follow_the_word():
    p = PiecewiseProfile(1.0, "fibonacci", {"0": 1.0, "1": 2.0})
    word = fibonacci_word(20)
    for t in [0.0, 0.5, 1.5, 2.2, 7.9, 100.3]:
        assert p.eval(t) == (1.0 if word[int(t)] == "0" else 2.0)


def test_piecewise_average_matches_quadrature():
    p = PiecewiseProfile(1.0, "fibonacci", {"0": 1.0, "1": 2.0}, width=0.1)
    raw = PiecewiseProfile(1.0, "fibonacci", {"0": 1.0, "1": 2.0})
    for t in [0.0, 0.95, 1.93, 4.5]:
        grid = t + (np.arange(2000) + 0.5) * (0.1 / 2000)
        assert p.eval(t) == pytest.approx(np.mean(raw.eval(grid)), abs=1e-9)
    assert p.eval(0.95) == pytest.approx(1.5)


def test_piecewise_cyclic_and_breakpoints():
    p = PiecewiseProfile(0.25, "1000", {"1": 1.0, "0": 0.0})
    assert p.period == pytest.approx(1.0)
    assert p.eval(0.1) == 1.0 and p.eval(1.1) == 1.0 and p.eval(0.3) == 0.0
    assert p.breakpoints(0.0, 1.0) == pytest.approx([0.25, 0.5, 0.75])
    q = PiecewiseProfile(1.0, "01", {"0": 0.0, "1": 1.0}, width=0.1)
    assert q.breakpoints(0.0, 2.0) == pytest.approx([0.9, 1.0, 1.9])


def test_piecewise_errors():
    with pytest.raises(ProfileError):
        PiecewiseProfile(1.0, "012", {"0": 1.0, "1": 0.0})
    with pytest.raises(ProfileError):
        PiecewiseProfile(0.0, "01", {"0": 1.0, "1": 0.0})
    p = PiecewiseProfile(1.0, "fibonacci", {"0": 1.0, "1": 0.0}, fib_n=3)
    with pytest.raises(ProfileError):
        p.eval(10.0)
    with pytest.raises(ProfileError):
        p.derivative()
    with pytest.raises(ProfileError):
        p.eval(-1.0)


def test_piecewise_exponent():
    p = PiecewiseProfile(1.0, "01", {"0": 0.25, "1": 1.0}, exponent=0.5)
    assert p.eval(0.5) == pytest.approx(0.5)


def test_exp_decay():
    p = ExpDecayProfile(2.0, 0.5)
    assert p.eval(2.0) == pytest.approx(2 * math.exp(-1))
    assert p.derivative().eval(2.0) == pytest.approx(-math.exp(-1))


@pytest.mark.parametrize(
    "prof",
    [
        TrigProfile(0.5, ((1.0, 2.0, 0.1),)),
        PiecewiseProfile(1.0, "fibonacci", {"0": 1.0, "1": 0.0}, width=0.1, exponent=0.5),
        PiecewiseProfile(0.5, "0110", {"0": 1.0, "1": -1.0}),
        ExpDecayProfile(1.0, 2.0),
    ],
)
def test_dict_round_trip(prof):
    back = profile_from_dict(prof.to_dict())
    for t in [0.0, 0.3, 2.7]:
        assert back.eval(t) == pytest.approx(prof.eval(t))


def test_number_literal_is_constant():
    assert profile_from_dict(2).eval(5.0) == 2.0
    with pytest.raises(ProfileError):
        profile_from_dict({"type": "nope"})
