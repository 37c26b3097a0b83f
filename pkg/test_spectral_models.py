"""
Tests for the spectral model fixtures.

Acceptance criteria:
1. Correlation values, Hermitian symmetry, domain errors on cuts and outside strips
2. Densities are Fourier-consistent with the correlation functions
3. Derivatives of C at the origin reproduce the density moments
4. Brute-force oracle moments match closed forms
"""
import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from paley_wiener import ComplexExponential, GaussianEntire, Monomial, Polynomial, Sinc
from quadrature_core import bessel_k1
from spectral_errors import DomainError, NoDensity
from spectral_models import (
    FIXTURES,
    AnalyticityClass,
    SpectralModel,
    correlation_at,
    density_at,
    exponential,
    free_particle,
    gaussian,
    oracle_generalized_moment,
    strip,
    uniform,
)

FREE_MASS = 1.0 / (4.0 * math.pi)


def richardson_moment(model, k, h=0.05):
    """i^{-k} C^{(k)}(0) from central differences at h, h/2, h/4 with Richardson extrapolation."""
    stencils = {
        1: ([-1, 1], [-0.5, 0.5]),
        2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
        3: ([-2, -1, 1, 2], [-0.5, 1.0, -1.0, 0.5]),
        4: ([-2, -1, 0, 1, 2], [1.0, -4.0, 6.0, -4.0, 1.0]),
    }
    offsets, weights = stencils[k]

    def derivative(step):
        total = sum(w * correlation_at(model, o * step) for o, w in zip(offsets, weights))
        return total / step ** k

    d1, d2, d3 = derivative(h), derivative(h / 2), derivative(h / 4)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d3 - d2) / 3.0
    value = (16.0 * r2 - r1) / 15.0
    return (value / (1j) ** k).real


def test_correlation_examples():
    print("\n=== TEST: correlation examples ===")
    model = exponential()
    assert abs(correlation_at(model, 1.0) - 0.5) <= 1e-15
    assert abs(correlation_at(model, 0.0) - 1.0) <= 1e-15
    z = 0.1 + 1.5j
    assert abs(correlation_at(model, z) - 1.0 / (1.0 + z * z)) <= 1e-15

    fp = free_particle(2.0, 1.0)
    print(f"  free particle C(0) = {correlation_at(fp, 0.0)}")
    assert abs(correlation_at(fp, 0.0) - FREE_MASS) <= 1e-15
    assert abs(correlation_at(fp, 1.0) - FREE_MASS / 2.0 ** 1.5) <= 1e-15
    assert fp.total_mass == pytest.approx(FREE_MASS)

    assert abs(correlation_at(gaussian(), 1.0) - math.exp(-0.5)) <= 1e-15
    assert abs(correlation_at(uniform(1.0), 2.0) - math.sin(2.0) / 2.0) <= 1e-15

    values = correlation_at(model, np.array([0.0, 1.0]))
    assert values.shape == (2,)


def test_domain_errors():
    print("\n=== TEST: domain errors ===")
    with pytest.raises(DomainError) as info:
        correlation_at(exponential(), 2.0j)
    assert info.value.z == 2.0j
    assert "cuts" in info.value.domain

    with pytest.raises(DomainError):
        correlation_at(strip(1.0), 0.5 + 1.2j)
    with pytest.raises(DomainError):
        correlation_at(free_particle(), 1.0j)

    # off the cut the continuation is fine
    correlation_at(free_particle(), 0.2 + 3.0j)
    correlation_at(gaussian(), 10.0j)


def test_hermitian_symmetry():
    print("\n=== TEST: Hermitian symmetry ===")
    ts = np.linspace(-3.0, 3.0, 13)
    for name, factory in FIXTURES.items():
        model = factory()
        for t in ts:
            forward = correlation_at(model, t)
            backward = correlation_at(model, -t)
            assert abs(forward - backward.conjugate()) <= 1e-13, (name, t)
        print(f"  [PASS] {name}")


def test_densities():
    print("\n=== TEST: densities ===")
    assert density_at(exponential(), 0.0) == pytest.approx(0.5)
    assert density_at(uniform(1.0), 2.0) == 0.0
    assert density_at(uniform(1.0), 0.5) == pytest.approx(0.5)

    value = density_at(free_particle(), 1.0)
    expected = bessel_k1(1.0) / (4.0 * math.pi ** 2)
    print(f"  free particle density(1) = {value:.6f}")
    assert abs(value - expected) <= 1e-14
    assert abs(value - 0.0152) <= 1e-4
    assert abs(density_at(free_particle(), 0.0) - FREE_MASS / math.pi) <= 1e-15

    bare = SpectralModel("bare", 1.0, 1.0, AnalyticityClass.STRIP_ONLY,
                         correlation=lambda z: 1.0 / (1.0 + z * z))
    with pytest.raises(NoDensity):
        density_at(bare, 0.0)
    with pytest.raises(NoDensity):
        oracle_generalized_moment(bare, Sinc(0.5))


def test_fourier_consistency():
    print("\n=== TEST: Fourier consistency ===")
    for model in (exponential(), free_particle()):
        for t in (0.0, 0.5, 1.0):
            from_density = oracle_generalized_moment(model, ComplexExponential(t))
            direct = correlation_at(model, t)
            assert abs(from_density - direct) <= 1e-6, (model.name, t)
        print(f"  [PASS] {model.name}")


def test_moment_consistency():
    """Central differences of C at 0 against density moments, k <= 4."""
    print("\n=== TEST: moment consistency ===")
    for model in (exponential(), free_particle(), gaussian()):
        for k in range(1, 5):
            fd = richardson_moment(model, k)
            exact = float(np.real(oracle_generalized_moment(model, Monomial(k))))
            assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact)), (model.name, k, fd, exact)
        print(f"  [PASS] {model.name}")


def test_oracle_examples():
    print("\n=== TEST: oracle examples ===")
    value = oracle_generalized_moment(exponential(), Sinc(0.5))
    print(f"  exponential/sinc(0.5) = {value:.10f}")
    assert abs(value - math.atan(0.5)) <= 1e-9

    value = oracle_generalized_moment(uniform(1.0), GaussianEntire())
    exact = math.sqrt(math.pi / 2.0) * math.erf(1.0 / math.sqrt(2.0))
    print(f"  uniform/gaussian = {value:.10f}")
    assert abs(value - exact) <= 1e-9
    assert abs(value - 0.855624) <= 1e-6

    for name, factory in FIXTURES.items():
        model = factory()
        value = oracle_generalized_moment(model, Polynomial((1.0,)))
        assert abs(value - model.total_mass) <= 1e-9, name

    assert abs(oracle_generalized_moment(exponential(), Monomial(2)) - 2.0) <= 1e-8
    assert abs(oracle_generalized_moment(exponential(), Monomial(4)) - 24.0) <= 1e-8
    assert abs(oracle_generalized_moment(free_particle(), Monomial(2)) - 3.0 / (4.0 * math.pi)) <= 1e-8


def test_model_metadata():
    assert exponential().analyticity_class is AnalyticityClass.PLANE_MINUS_BRANCH_CUTS
    assert strip(1.5).tau0 == 1.5
    assert strip(1.5).describe() == "strip:tau0=1.5"
    assert str(uniform(2.0).support) == "Compact(2)"
    assert str(exponential().support) == "RealLine"
    assert math.isinf(gaussian().tau0)


TESTS = [
    ("Correlation examples", test_correlation_examples),
    ("Domain errors", test_domain_errors),
    ("Hermitian symmetry", test_hermitian_symmetry),
    ("Densities", test_densities),
    ("Fourier consistency", test_fourier_consistency),
    ("Moment consistency", test_moment_consistency),
    ("Oracle examples", test_oracle_examples),
    ("Model metadata", test_model_metadata),
]


def run_all_tests():
    """Run all spectral model tests."""
    print("=" * 60)
    print("SPECTRAL MODEL TEST SUITE")
    print("=" * 60)

    results = []
    for name, test in TESTS:
        try:
            test()
            results.append((name, True))
        except AssertionError as e:
            print(f"  [FAIL] {name}: {e}")
            results.append((name, False))

    print("\n" + "=" * 60)
    print("TEST SUMMARY")
    print("=" * 60)
    for name, passed in results:
        print(f"  {'[PASS]' if passed else '[FAIL]'}: {name}")
    all_passed = all(r[1] for r in results)
    print("\n" + ("ALL TESTS PASSED" if all_passed else "SOME TESTS FAILED"))
    return all_passed


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
