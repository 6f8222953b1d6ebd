import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapbound import geometry
from gapbound.comparison import big_g
from gapbound.errors import AdmissibilityError, InvalidClass
from gapbound.geometry import (
    Kahler,
    QuaternionKahler,
    Riemannian,
    class_from_dict,
    class_to_dict,
    classical_envelope,
    clip_diameter,
    drift_spec,
    drift_value,
    index_upper_bound,
    max_diameter,
)
from gapbound.verify import envelope_domination_worst

HALF_PI = math.pi / 2


def test_drift_spec_examples():
    assert drift_spec(Riemannian(2, 0.0), 1.0).as_tuples() == [(1, 0.0, 1)]
    assert drift_spec(Kahler(2, 1.0, 1.0), HALF_PI * (1 - 1e-9)).as_tuples() == [(2, 1.0, 1), (2, 1.0, 2)]
    assert drift_spec(QuaternionKahler(1, 1.0, 0.0), HALF_PI * (1 - 1e-9)).as_tuples() == [
        (0, 0.0, 1), (6, 1.0, 2)]


def test_drift_value_examples():
    spec = drift_spec(Kahler(1, 1.0, 0.0), HALF_PI * (1 - 1e-9))
    assert drift_value(spec, math.pi / 4) == pytest.approx(-4.0, rel=1e-15)
    spec = drift_spec(Riemannian(5, 0.0), 3.0)
    assert drift_value(spec, 1.234) == 0.0
    spec = drift_spec(Kahler(2, 1.0, 1.0), HALF_PI * (1 - 1e-9))
    # -4 tan(pi/8) - 4 = -4 sqrt(2)
    assert drift_value(spec, math.pi / 4) == pytest.approx(-4 * math.sqrt(2), rel=1e-14)
    assert drift_value(spec, math.pi / 4) == pytest.approx(-5.65685425, abs=1e-8)


def test_index_upper_bound_matches_drift():
    cls = QuaternionKahler(3, 0.4, -0.7)
    spec = drift_spec(cls, 1.0)
    r = np.linspace(0.05, 0.95, 11)
    np.testing.assert_array_equal(drift_value(spec, r), [index_upper_bound(cls, x) for x in r])


def test_max_diameter_examples():
    assert max_diameter(Kahler(3, 1.0, 0.0)) == HALF_PI
    assert max_diameter(Riemannian(4, -1.0)) == math.inf
    assert max_diameter(Kahler(2, 0.25, 1.0)) == pytest.approx(math.pi)
    assert max_diameter(Riemannian(3, 4.0)) == HALF_PI
    # k2 carries no weight when m = 1
    assert max_diameter(Kahler(1, 0.0, 100.0)) == math.inf
    assert max_diameter(QuaternionKahler(2, -1.0, 4.0)) == HALF_PI


def test_admissibility_messages():
    with pytest.raises(AdmissibilityError, match=r"π/\(2√k₁\)"):
        drift_spec(Kahler(2, 1.0, 1.0), HALF_PI)
    with pytest.raises(AdmissibilityError, match=r"π/√k₂"):
        drift_spec(Kahler(2, 0.0, 1.0), math.pi)
    with pytest.raises(AdmissibilityError, match=r"π/√k"):
        drift_spec(Riemannian(3, 1.0), 4.0)
    with pytest.raises(AdmissibilityError):
        drift_spec(Riemannian(3, 0.0), 0.0)
    drift_spec(Kahler(2, 1.0, 1.0), clip_diameter(HALF_PI))


def test_binding_constraint_named():
    # both constraints violated: the smaller bound is reported
    with pytest.raises(AdmissibilityError, match=r"π/\(2√k₁\)"):
        drift_spec(QuaternionKahler(2, 1.0, 1.0), 4.0)


def test_envelope_examples():
    assert classical_envelope(Kahler(2, 1.0, 1.0)) == Riemannian(4, 2.0)
    assert classical_envelope(Kahler(1, 1.0, 123.0)) == Riemannian(2, 4.0)
    assert classical_envelope(QuaternionKahler(1, 1.0, 0.0)) == Riemannian(4, 4.0)
    with pytest.raises(InvalidClass):
        classical_envelope(Riemannian(3, 1.0))


def test_invalid_classes():
    with pytest.raises(InvalidClass):
        Riemannian(1, 0.0)
    with pytest.raises(InvalidClass):
        Kahler(0, 1.0, 1.0)
    with pytest.raises(InvalidClass):
        QuaternionKahler(2, math.inf, 0.0)


def test_kahler_m1_reduces_to_riemannian():
    spec = drift_spec(Kahler(1, 1.0, 0.0), 1.5)
    r = np.linspace(0.01, 1.49, 50)
    np.testing.assert_allclose(drift_value(spec, r), big_g(4.0, r), rtol=1e-13)


def test_scale_two_elimination():
    r = np.linspace(0.01, 1.5, 40)
    for k in (-1.3, 0.0, 0.2, 1.0):
        np.testing.assert_allclose(6 * big_g(k, 2 * r), 3 * big_g(4 * k, r), rtol=1e-12, atol=1e-12)


def test_envelope_domination_1000_samples():
    assert envelope_domination_worst(1000) >= -1e-12


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from([Kahler, QuaternionKahler]),
    st.integers(1, 8),
    st.floats(-2, 2),
    st.floats(-2, 2),
    st.floats(0.001, 0.999),
)
def test_envelope_domination_property(kind, m, k1, k2, frac):
    cls = kind(m, k1, k2)
    r = frac * min(max_diameter(cls), 10.0)
    env = classical_envelope(cls)
    assert index_upper_bound(cls, r) <= index_upper_bound(env, r) + 1e-12 * max(1, abs(index_upper_bound(env, r)))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([Kahler, QuaternionKahler]), st.integers(1, 6),
       st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 1), st.floats(0, 1))
def test_max_diameter_monotone(kind, m, k1, k2, d1, d2):
    base = max_diameter(kind(m, k1, k2))
    assert max_diameter(kind(m, k1 + d1, k2)) <= base
    assert max_diameter(kind(m, k1, k2 + d2)) <= base


def test_class_round_trip():
    for cls in (Riemannian(5, -0.5), Kahler(3, 1.0, 0.25), QuaternionKahler(2, -1.0, 0.0)):
        assert class_from_dict(class_to_dict(cls)) == cls
    with pytest.raises(InvalidClass):
        class_from_dict({"family": "spin"})
    with pytest.raises(InvalidClass):
        class_from_dict({"family": "kahler", "m": 2})


def test_ricci_lower_bound():
    assert geometry.ricci_lower_bound(Kahler(3, 1.0, 1.0)) == 8.0
    assert geometry.ricci_lower_bound(QuaternionKahler(2, 1.0, 1.0)) == 16.0
