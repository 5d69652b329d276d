import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helson import catalog
from helson.measures import (Atom, CoshExpDensity, DensityPart, ExponentialDensity,
                             ExpPowerDensity, LogDensity, MeasureError, MeasureSpec,
                             OscillatoryDensity, PointMass, PowerDensity,
                             ShiftedPowerDensity, TabulatedDensity, asymptotic_class,
                             combine, hahn_decompose, laplace, laplace_many, tail_integral,
                             validate, zero_measure)

LN2 = math.log(2.0)
S_GRID = [LN2, 1.0, 2.0, 5.0, 10.0]


def mp_laplace(density, s):
    mpmath.mp.dps = 30
    f = lambda t: density(t) * mpmath.e ** (-s * t)  # noqa: E731
    return float(mpmath.quad(f, [0, 1, 10, mpmath.inf]))


# -- validation ---------------------------------------------------------------

def test_point_mass_at_zero_rejected():
    rep = validate(MeasureSpec.of(PointMass(0.0, 1.0)))
    assert not rep.ok
    assert "c=0 point mass" in rep.reasons[0]


def test_zero_measure_admissible():
    assert validate(zero_measure()).ok


def test_exponential_admissible():
    assert validate(MeasureSpec.of(ExponentialDensity(1.0))).ok


@pytest.mark.parametrize("p", [-1.0, -1.5, -3.0])
def test_power_divergent_at_ln2(p):
    rep = validate(MeasureSpec.of(PowerDensity(p)))
    assert not rep.ok and "divergent at ln 2" in rep.reasons[0]


def test_power_unbounded_family_flag():
    rep = validate(MeasureSpec.of(PowerDensity(-0.5)))
    assert rep.ok
    assert any("unbounded-family" in f for f in rep.flags)


@pytest.mark.parametrize("atom", [
    TabulatedDensity(((0.0, 1.0), (0.0, 2.0)), 1.0, 1.0),
    TabulatedDensity(((0.0, 1.0), (1.0, math.inf)), 1.0, 1.0),
    TabulatedDensity(((0.0, 1.0), (1.0, 1.0))),
    TabulatedDensity(((0.0, 1.0), (1.0, 1.0)), 1.0, -1.0),
    CoshExpDensity(1.0, 2.0),
    ExpPowerDensity(1.0, 1.0),
    ExpPowerDensity(-1.0, 0.5),
    OscillatoryDensity(0.0),
    OscillatoryDensity(1.0, "tan"),
    ExponentialDensity(-1.0),
])
def test_inadmissible_atoms(atom):
    assert not validate(MeasureSpec.of(atom)).ok


# -- closed forms ----------------------------------------------------------------

def test_point_mass_transform():
    v = laplace(MeasureSpec.of(PointMass(1.0, 1.0)), LN2)
    assert v.value == pytest.approx(0.5, rel=1e-15)
    assert v.method == "closed-form" and v.abs_error_bound == 0.0


def test_power_transform_value():
    assert laplace(MeasureSpec.of(PowerDensity(1.0)), 1.0).value == 1.0


def test_lebesgue_like_exponential():
    v = laplace(MeasureSpec.of(ExponentialDensity(0.0)), math.log(4.0)).value
    assert v == pytest.approx(0.7213475204444817, rel=1e-15)


def test_domain_restricted():
    with pytest.raises(MeasureError):
        laplace(MeasureSpec.of(ExponentialDensity(1.0)), 0.5)


# Quadrature against the closed forms, using the generic panel engine.
@pytest.mark.parametrize("atom", [ExponentialDensity(0.0), ExponentialDensity(3.0),
                                  PowerDensity(0.0), PowerDensity(1.0), PowerDensity(2.5),
                                  PowerDensity(-0.5), CoshExpDensity(2.0, 1.5)])
def test_closed_form_vs_quadrature(atom):
    s = np.array(S_GRID)
    closed, _ = atom.transform(s)
    quad, err = Atom.transform(atom, s)
    assert np.all(np.abs(quad / closed - 1) <= 1e-8)
    assert np.all(err <= 1e-10)


# Quadrature atoms against independent mpmath integrals / closed forms.
QUAD_CASES = [
    (ShiftedPowerDensity(1.0, -1), lambda t: (1 + t) ** -1),
    (ShiftedPowerDensity(2.5, -1), lambda t: (1 + t) ** -2.5),
    (ShiftedPowerDensity(2.0, 1), lambda t: (1 + t) ** 2),
    (LogDensity(), lambda t: mpmath.log(1 + t)),
    (ExpPowerDensity(1.0, 0.5), lambda t: mpmath.e ** (mpmath.sqrt(t))),
    (OscillatoryDensity(1.0, "sin"), lambda t: t * mpmath.sin(t)),
    (OscillatoryDensity(1.5, "cos"), lambda t: t ** 1.5 * mpmath.cos(t)),
]


@pytest.mark.parametrize("atom,density", QUAD_CASES)
def test_quadrature_atoms_vs_mpmath(atom, density):
    s = np.array(S_GRID)
    v, err = atom.transform(s)
    for si, vi, ei in zip(S_GRID, v, err):
        ref = mp_laplace(density, si)
        assert abs(vi - ref) <= max(10 * ei, 1e-12) + 1e-12 * abs(ref)


def test_oscillatory_closed_forms():
    s = np.array(S_GRID)
    sin_v, _ = OscillatoryDensity(1.0, "sin").transform(s)
    cos_v, _ = OscillatoryDensity(1.0, "cos").transform(s)
    assert np.allclose(sin_v, 2 * s / (s * s + 1) ** 2, rtol=0, atol=1e-13)
    assert np.allclose(cos_v, (s * s - 1) / (s * s + 1) ** 2, rtol=0, atol=1e-13)


def test_tabulated_head_and_tail():
    atom = TabulatedDensity(((0.0, 1.0), (1.0, 1.0)), 1.0, 2.0)
    s = np.array(S_GRID)
    v, _ = atom.transform(s)
    ref = (1 - np.exp(-s)) / s + np.exp(-(2 + s)) / (2 + s)
    assert np.allclose(v, ref, rtol=0, atol=1e-13)


def test_shifted_power_frozen_value():
    v = laplace(MeasureSpec.of(ShiftedPowerDensity(1.0)), math.log(4.0))
    assert v.value == pytest.approx(0.4746482257884927, abs=1e-13)
    assert v.method == "quadrature" and v.abs_error_bound > 0


# -- combine -----------------------------------------------------------------------

def test_combine_identities():
    a = MeasureSpec.of(ExponentialDensity(1.0))
    b = MeasureSpec.of(PointMass(0.5))
    assert combine(a, b, 1.0) is a
    assert combine(a, b, 0.0) is b


def test_convex_exponentials_bracket():
    a1, a2 = 0.5, 3.0
    mix = combine(MeasureSpec.of(ExponentialDensity(a1)), MeasureSpec.of(ExponentialDensity(a2)), 0.5)
    for n in range(2, 200):
        v = laplace(mix, math.log(n)).value
        assert 1 / (max(a1, a2) + math.log(n)) <= v <= 1 / math.log(n)


specs = st.sampled_from([
    MeasureSpec.of(ExponentialDensity(1.0)), MeasureSpec.of(PointMass(0.3, 2.0)),
    MeasureSpec.of(PowerDensity(0.5)), MeasureSpec.of(CoshExpDensity(1.0, 0.5)),
    MeasureSpec.of(ShiftedPowerDensity(1.0)), MeasureSpec.of(LogDensity()),
])


@settings(max_examples=40, deadline=None)
@given(specs, specs, st.floats(0.0, 1.0), st.floats(LN2, 40.0))
def test_combine_linear(mu1, mu2, r, s):
    lhs = laplace(combine(mu1, mu2, r), s)
    a, b = laplace(mu1, s), laplace(mu2, s)
    rhs = r * a.value + (1 - r) * b.value
    budget = r * a.abs_error_bound + (1 - r) * b.abs_error_bound + lhs.abs_error_bound
    assert abs(lhs.value - rhs) <= budget + 4 * np.spacing(abs(rhs) + 1e-300)


@pytest.mark.parametrize("name", sorted(catalog.builtin()))
def test_positive_specs_nonincreasing(name):
    spec = catalog.builtin()[name]
    if not spec.is_positive():
        pytest.skip("signed")
    s = np.linspace(LN2, 30.0, 400)
    v, e = laplace_many(spec, s)
    assert np.all(np.diff(v) <= e[1:] + e[:-1] + 1e-15)


# -- Hahn decomposition ----------------------------------------------------------

def test_hahn_positive_passthrough():
    spec = MeasureSpec.of(ExponentialDensity(1.0))
    plus, minus, tv = hahn_decompose(spec)
    assert plus is spec and tv is spec and minus.is_zero()


def test_hahn_oscillatory_first_half_period():
    spec = MeasureSpec.of(OscillatoryDensity(1.0, "sin"))
    plus, minus, tv = hahn_decompose(spec)
    t = np.linspace(0.01, math.pi - 0.01, 50)
    assert np.allclose(plus.density(t), t * np.sin(t))
    assert np.all(minus.density(t) == 0)
    t2 = np.linspace(math.pi + 0.01, 2 * math.pi - 0.01, 50)
    assert np.all(plus.density(t2) == 0)
    assert np.allclose(tv.density(t2), t2 * np.abs(np.sin(t2)))


def test_hahn_breaks_at_half_periods():
    part = DensityPart(((1.0, OscillatoryDensity(2.0, "cos")),), "plus")
    z = part.sign_changes(10.0)
    assert np.allclose(z, [math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2])


@pytest.mark.parametrize("spec", [
    MeasureSpec.of(OscillatoryDensity(1.0, "sin")),
    MeasureSpec.of(OscillatoryDensity(0.5, "cos")),
    MeasureSpec(((1.0, ExponentialDensity(1.0)), (-1.0, ExponentialDensity(3.0)),
                 (-0.5, PointMass(0.5)), (0.25, PointMass(0.5)))),
    MeasureSpec(((1.0, PowerDensity(0.0)), (-2.0, ExponentialDensity(1.0)))),
])
def test_hahn_reconstructs(spec):
    plus, minus, tv = hahn_decompose(spec)
    for s in [LN2, 1.0, 2.5, 7.0]:
        a, b, c = laplace(plus, s), laplace(minus, s), laplace(spec, s)
        budget = a.abs_error_bound + b.abs_error_bound + c.abs_error_bound + 1e-15
        assert abs(a.value - b.value - c.value) <= budget
        assert laplace(tv, s).value >= abs(c.value) - budget


def test_total_variation_bound_oscillatory():
    for p in (0.5, 1.0, 2.0):
        _, _, tv = hahn_decompose(MeasureSpec.of(OscillatoryDensity(p, "sin")))
        for m in (2, 3, 10, 100):
            s = 2 * math.log(m)
            assert laplace(tv, s).value <= math.gamma(p + 1) / s ** (p + 1) * (1 + 1e-12)


# -- asymptotics -------------------------------------------------------------------

def test_asymptotic_power_minus_half():
    a = asymptotic_class(MeasureSpec.of(PowerDensity(-0.5)))
    assert a.kind == "diverges"
    assert a.coefficient == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert a.exponent == 0.5


def test_asymptotic_exponential_limit_one():
    a = asymptotic_class(MeasureSpec.of(ExponentialDensity(3.0)))
    assert a.kind == "tends_to" and a.limit == 1.0
    # oracle: s / (3 + s) at s = 10^k approaches the limit
    for k in range(1, 8):
        s = 10.0 ** k
        assert abs(s * laplace(MeasureSpec.of(ExponentialDensity(3.0)), s).value - 1) <= 3.0 / s


def test_asymptotic_families():
    assert asymptotic_class(zero_measure()).limit == 0
    assert asymptotic_class(MeasureSpec.of(PointMass(1.0))).limit == 0
    assert asymptotic_class(MeasureSpec.of(PowerDensity(2.0))).limit == 0
    mix = MeasureSpec(((2.0, ExponentialDensity(1.0)), (1.0, ShiftedPowerDensity(1.0))))
    assert asymptotic_class(mix).limit == 3.0
    tab = asymptotic_class(catalog.lebesgue_head_exp_tail())
    assert tab.kind == "unknown" and len(tab.trend) == 8


# -- tails and JSON ------------------------------------------------------------------

def test_tail_integral_power():
    assert tail_integral(MeasureSpec.of(PowerDensity(1.0)), 2.0) == pytest.approx(0.5)
    assert math.isinf(tail_integral(MeasureSpec.of(PowerDensity(0.0)), 2.0))


def test_tail_integral_cancelling_group():
    diff = MeasureSpec(((1.0, PowerDensity(0.0)), (-1.0, ExponentialDensity(1.0))))
    # int_Y^inf (1/y - 1/(1+y)) dy = ln((Y+1)/Y)
    assert tail_integral(diff, 2.0) == pytest.approx(math.log(1.5), rel=1e-11)


@pytest.mark.parametrize("name", sorted(catalog.builtin()))
def test_json_round_trip(name):
    spec = catalog.builtin()[name]
    doc = json.loads(spec.dumps())
    back = MeasureSpec.from_json(doc)
    assert back.terms == spec.terms


def test_json_document_shape():
    doc = {"terms": [{"coef": 1.0, "atom": {"kind": "exp", "a": 1.0}}]}
    spec = MeasureSpec.from_json(doc)
    assert spec.terms == ((1.0, ExponentialDensity(1.0)),)
    assert spec.to_json() == doc


def test_json_unknown_kind():
    with pytest.raises(MeasureError):
        MeasureSpec.from_json({"terms": [{"coef": 1.0, "atom": {"kind": "nope"}}]})
