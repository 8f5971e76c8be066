import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import betainc

import varprop as vp
from varprop.sampling import RandomStream


class StubStream:
    def __init__(self, values):
        self.values = list(values)

    def next(self):
        return self.values.pop(0)


def test_beta_inverse_uniform_identity():
    for r in (0.0, 0.1, 0.37, 0.5, 0.99, 1.0):
        assert vp.beta_inverse_cdf(1, 1, r) == pytest.approx(r, abs=1e-9)


def test_beta_inverse_closed_forms():
    # Beta(2,1) has CDF x^2; Beta(1,2) has CDF 1-(1-x)^2
    assert vp.beta_inverse_cdf(2, 1, 0.25) == pytest.approx(0.5, abs=1e-9)
    assert vp.beta_inverse_cdf(1, 2, 0.75) == pytest.approx(0.5, abs=1e-9)


def test_beta_inverse_endpoints():
    assert vp.beta_inverse_cdf(3, 4, 0.0) == 0.0
    assert vp.beta_inverse_cdf(3, 4, 1.0) == 1.0


def test_beta_inverse_meets_tolerance():
    for alpha, beta in [(1, 3), (4, 2), (7, 7), (1.5, 9)]:
        for r in (0.01, 0.2, 0.5, 0.8, 0.999):
            x = vp.beta_inverse_cdf(alpha, beta, r, tol=1e-10)
            assert abs(betainc(alpha, beta, x) - r) <= 1e-10


@given(st.floats(min_value=1, max_value=20), st.floats(min_value=1, max_value=20))
@settings(max_examples=30, deadline=None)
def test_beta_inverse_monotone_in_r(alpha, beta):
    rs = np.linspace(0.0, 1.0, 41)
    xs = [vp.beta_inverse_cdf(alpha, beta, r) for r in rs]
    assert xs[0] == 0.0 and xs[-1] == 1.0
    assert all(b >= a - 1e-9 for a, b in zip(xs, xs[1:]))


def test_beta_inverse_rejects_bad_args():
    with pytest.raises(ValueError):
        vp.beta_inverse_cdf(0.5, 1, 0.3)
    with pytest.raises(ValueError):
        vp.beta_inverse_cdf(1, 1, 1.5)


def test_stick_breaking_worked_values():
    # Dirichlet(0,0,0): stage 1 inverts Beta(1,2) at .5 -> 1 - sqrt(.5)
    p = vp.sample_parameter_vector(vp.dirichlet_spec([0, 0, 0]), StubStream([0.5, 0.5]))
    assert p[0] == pytest.approx(1 - math.sqrt(0.5), abs=1e-9)
    assert p[1] == pytest.approx((1 - p[0]) * 0.5, abs=1e-9)
    assert p[2] == pytest.approx(1 - p[0] - p[1], abs=1e-15)


def test_point_spec_sampling_ignores_stream():
    p = vp.sample_parameter_vector(vp.point_spec([0.3, 0.7]), StubStream([0.9]))
    assert np.allclose(p, [0.3, 0.7])


def test_finite_spec_cumulative_weight_rule():
    spec = vp.finite_spec([((0.25, 0.75), 0.5), ((0.75, 0.25), 0.5)])
    assert np.allclose(vp.sample_parameter_vector(spec, StubStream([0.2])), [0.25, 0.75])
    assert np.allclose(vp.sample_parameter_vector(spec, StubStream([0.7])), [0.75, 0.25])


def test_stream_determinism():
    a = RandomStream(42)
    b = RandomStream(42)
    assert [a.next() for _ in range(10)] == [b.next() for _ in range(10)]
    c = RandomStream.derive(42, 1, 7)
    d = RandomStream.derive(42, 1, 7)
    e = RandomStream.derive(42, 2, 7)
    seq_c = [c.next() for _ in range(5)]
    assert seq_c == [d.next() for _ in range(5)]
    assert seq_c != [e.next() for _ in range(5)]


@pytest.mark.parametrize("spec", [
    vp.dirichlet_spec([0, 0]),
    vp.dirichlet_spec([3, 1, 0, 2]),
    vp.finite_spec([((0.2, 0.8), 0.25), ((0.5, 0.5), 0.75)]),
])
def test_samples_are_simplex_valid(spec):
    stream = RandomStream(9)
    for _ in range(200):
        p = vp.sample_parameter_vector(spec, stream)
        assert np.all(p >= 0)
        assert abs(p.sum() - 1.0) <= 1e-12


def test_sampling_matches_moments():
    # empirical moments from the stick-breaking sampler vs the closed forms
    n = 10**5
    spec = vp.dirichlet_spec([1, 2, 0])
    mt = vp.dirichlet_moments([1, 2, 0])
    stream = RandomStream(2024)
    draws = np.asarray([vp.sample_parameter_vector(spec, stream) for _ in range(n)])
    assert np.max(np.abs(draws.mean(axis=0) - mt.mean)) < 0.01
    emp_second = draws.T @ draws / n
    assert np.max(np.abs(emp_second - mt.second)) < 0.01

    fspec = vp.finite_spec([((0.25, 0.75), 0.5), ((0.75, 0.25), 0.5)])
    fmt = vp.spec_moments(fspec)
    draws = np.asarray([vp.sample_parameter_vector(fspec, stream) for _ in range(n)])
    assert np.max(np.abs(draws.mean(axis=0) - fmt.mean)) < 0.01
    emp_second = draws.T @ draws / n
    assert np.max(np.abs(emp_second - fmt.second)) < 0.01
