import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy.special import eval_gegenbauer

from framepot.bounds import design_bound
from framepot.certify import (
    FunctionWithDerivatives,
    NodeSet,
    PolynomialFunction,
    PowerKernel,
    certify_half_circle,
    divided_differences,
    gegenbauer_basis,
    gegenbauer_eval,
    gegenbauer_expand,
    hermite_interpolant,
    hermite_quotient,
    lp_certify,
    transported_pframe,
)
from framepot.core import gram
from framepot.potentials import fp_eval

from .conftest import random_config

EXP = FunctionWithDerivatives(lambda t, order: np.exp(t))


def random_nodes(rng, degree):
    """Distinct nodes in [-1, 1) with multiplicities summing to ``degree``."""
    mults = []
    while sum(mults) < degree:
        mults.append(int(rng.integers(1, min(3, degree - sum(mults)) + 1)))
    ts = np.sort(rng.uniform(-1, 0.95, len(mults)))
    return NodeSet(tuple(zip(ts, mults)))


def test_divided_differences_of_polynomial():
    a = PolynomialFunction([1.0, -2.0, 0.5, 3.0])  # cubic with leading coefficient 3
    assert divided_differences(a, [0.1, 0.4, 0.4, 0.9])[-1] == pytest.approx(3.0, rel=1e-12)
    assert divided_differences(EXP, [0.2, 0.2, 0.2])[-1] == pytest.approx(math.exp(0.2) / 2, rel=1e-12)


def test_hermite_interpolant_matches_derivatives(rng):
    for _ in range(10):
        g = random_nodes(rng, int(rng.integers(1, 7)))
        h = hermite_interpolant(EXP, g)
        assert h.degree() < g.degree
        for t, m in g.nodes:
            for k in range(m):
                assert h.deriv(k)(t) == pytest.approx(math.exp(t), rel=1e-8)


def test_quotient_definition(rng):
    g = random_nodes(rng, 4)
    q = hermite_quotient(EXP, g)
    h = hermite_interpolant(EXP, g)
    for t in np.linspace(-0.99, 0.99, 17):
        if np.min(np.abs([t - z for z, _ in g.nodes])) > 1e-3:
            assert q(t) == pytest.approx((math.exp(t) - h(t)) / g.polynomial()(t), rel=1e-7)


def test_composition_identity(rng):
    for _ in range(40):
        a = PolynomialFunction(Polynomial(rng.standard_normal(11)))
        d1 = int(rng.integers(1, 5))
        g1 = random_nodes(rng, d1)
        g2 = random_nodes(rng, int(rng.integers(1, 7 - d1)))
        if rng.random() < 0.3:  # share a node between the factors
            g2 = NodeSet(((g1.nodes[0][0], 1),))
        lhs = hermite_interpolant(a, g1 * g2)
        rhs = hermite_interpolant(a, g1) + g1.polynomial() * hermite_interpolant(hermite_quotient(a, g1), g2)
        grid = np.linspace(-1, 1, 201)
        assert np.max(np.abs(lhs(grid) - rhs(grid))) < 1e-9
        q12 = hermite_quotient(a, g1 * g2)
        q_q = hermite_quotient(hermite_quotient(a, g1), g2)
        for t in (-0.7, 0.13, 0.96):
            assert abs(q12(t) - q_q(t)) < 1e-9


def test_mean_value_form_is_nonnegative(rng):
    for _ in range(20):
        g = random_nodes(rng, int(rng.integers(1, 7)))
        q = hermite_quotient(EXP, g)
        vals = q(np.linspace(-1, 0.999, 301))
        assert np.all(vals >= -1e-10)


def test_power_kernel_derivatives():
    k = PowerKernel(2.5)
    u, h = 0.3, 1e-6
    assert k(u, 1) == pytest.approx((k(u + h) - k(u - h)) / (2 * h), rel=1e-7)
    assert k(-1.0) == 0.0
    assert PowerKernel(3.0, offset=0.0, slope=1.0)(-0.5) == pytest.approx(-0.125)
    assert transported_pframe(4)(2 * 0.6**2 - 1) == pytest.approx(0.6**4)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_gegenbauer_basis(d):
    basis = gegenbauer_basis(d, 8)
    for k, b in enumerate(basis):
        assert b(1.0) == pytest.approx(1.0, abs=1e-13)
        if d > 2:
            lam = (d - 2) / 2
            t = np.linspace(-1, 1, 9)
            assert np.allclose(b(t), eval_gegenbauer(k, lam, t) / eval_gegenbauer(k, lam, 1.0), atol=1e-12)
        else:
            t = np.linspace(-1, 1, 9)
            assert np.allclose(b(t), np.cos(k * np.arccos(t)), atol=1e-12)


def test_gegenbauer_round_trip(rng):
    for d in (2, 3, 5):
        h = Polynomial(rng.standard_normal(9))
        coeffs = gegenbauer_expand(h, d)
        t = np.linspace(-1, 1, 401)
        assert np.max(np.abs(gegenbauer_eval(coeffs, d, t) - h(t))) < 1e-10


def test_gegenbauer_expand_known():
    assert np.allclose(gegenbauer_expand(Polynomial([0, 0, 1]), 2), [0.5, 0, 0.5])
    assert np.allclose(gegenbauer_expand(Polynomial([0, 0, 1]), 3), [1 / 3, 0, 2 / 3])


@pytest.mark.parametrize("n,p", [(5, 6), (6, 8), (4, 2), (4, 4), (7, 12), (8, 14)])
def test_half_circle_certificates_are_tight(n, p):
    cert = certify_half_circle(n, p)
    assert cert.valid
    assert abs(cert.gap) < 1e-8
    assert cert.lower_bound == pytest.approx(design_bound(n, 2, p).value, abs=1e-8)


@pytest.mark.parametrize("n,p", [(5, 10), (6, 20)])
def test_certificates_beyond_design_range(n, p):
    cert = certify_half_circle(n, p)
    assert cert.valid and abs(cert.gap) < 1e-8


def test_odd_p_reported_not_certified():
    cert = certify_half_circle(5, 3)
    assert not cert.valid and cert.offending_index is not None
    assert cert.to_dict()["valid"] is False


def test_lp_certify_general_dimension():
    # the regular simplex is 1-sharp, so exp-energy is certified tight
    cert = lp_certify(EXP, 4, 3, [-1 / 3])
    assert cert.valid
    assert cert.lower_bound == pytest.approx(12 * math.exp(-1 / 3), abs=1e-12)


def test_lp_certify_rejects_bad_nodes():
    with pytest.raises(ValueError):
        lp_certify(EXP, 3, 2, [1.0])
    with pytest.raises(ValueError):
        NodeSet(((0.2, 1), (0.1, 1)))


def test_certificate_soundness(rng):
    certs = [certify_half_circle(n, p) for n, p in [(4, 2), (4, 4), (5, 6), (6, 8), (5, 10)]]
    general = lp_certify(EXP, 4, 3, [-1 / 3])
    for _ in range(100):
        for cert in certs:
            x = random_config(rng, cert.n, 2)
            assert cert.lower_bound <= fp_eval(x, cert.extra["p"]) + 1e-8
        y = random_config(rng, 4, 3)
        g = gram(y)[~np.eye(4, dtype=bool)]
        assert general.lower_bound <= np.sum(np.exp(g)) + 1e-8
