import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moduli_lab.complex_surface.weierstrass import EllipticCurve, LatticePointError


def eisenstein(tau, terms=400):
    """E4(tau), E6(tau) from their divisor-sum q-expansions."""
    q = np.exp(2j * np.pi * tau)
    n = np.arange(1, terms + 1)
    sig3 = np.array([sum(d ** 3 for d in range(1, m + 1) if m % d == 0) for m in n], dtype=float)
    sig5 = np.array([sum(d ** 5 for d in range(1, m + 1) if m % d == 0) for m in n], dtype=float)
    qn = q ** n
    return 1 + 240 * np.sum(sig3 * qn), 1 - 504 * np.sum(sig5 * qn)


def laurent_zeta(curve, z, nterms=40):
    """zeta = 1/z - sum c_n z^(2n+1)/(2n+1) with c_1 = 3 G4, c_2 = 5 G6 and the usual recursion."""
    w1, tau = curve.omega1, curve.tau
    e4, e6 = eisenstein(tau)
    g4 = np.pi ** 4 / 45 * e4 / w1 ** 4
    g6 = 2 * np.pi ** 6 / 945 * e6 / w1 ** 6
    c = {1: 3 * g4, 2: 5 * g6}
    for n in range(3, nterms + 1):
        c[n] = 3 / ((2 * n + 3) * (n - 2)) * sum(c[m] * c[n - 1 - m] for m in range(1, n - 1))
    return 1 / z - sum(c[n] * z ** (2 * n + 1) / (2 * n + 1) for n in range(1, nterms + 1))


TAUS = [1j, 0.5 + 0.8660254037844386j, 0.3 + 1.7j, -0.2 + 0.9j, 0.1 + 0.35j, 2.3 + 0.6j, 0.45 + 3.0j,
        -1.7 + 1.1j, 0.05 + 0.2j, 1j * 2.5, 0.5 + 0.5j]


@pytest.mark.parametrize("tau", TAUS)
def test_zeta_matches_laurent_series(tau):
    E = EllipticCurve.from_tau(tau)
    rmin = min(abs(m + n * tau) for m in range(-6, 7) for n in range(-6, 7) if (m, n) != (0, 0))
    rng = np.random.default_rng(0)
    z = 0.3 * rmin * np.exp(2j * np.pi * rng.uniform(size=8)) * rng.uniform(0.2, 1, 8)
    want = laurent_zeta(E, z)
    assert np.max(np.abs(E.zeta(z) - want) / np.maximum(1, np.abs(want))) <= 1e-10


@pytest.mark.parametrize("tau", TAUS)
def test_legendre_relation(tau):
    assert EllipticCurve.from_tau(tau).legendre_defect() <= 1e-10


@pytest.mark.parametrize("tau", TAUS)
def test_quasi_periodicity(tau):
    E = EllipticCurve.from_tau(tau)
    rng = np.random.default_rng(1)
    z = E.to_point(rng.uniform(0.1, 0.9, 10), rng.uniform(0.1, 0.9, 10))
    base = E.zeta(z)
    for m, n in ((1, 0), (0, 1), (-2, 3), (1, 1)):
        shifted = E.zeta(z + m * E.omega1 + n * E.omega2)
        assert np.max(np.abs(shifted - base - E.quasi_period(m, n))) <= 1e-10 * (1 + abs(m) + abs(n))


@pytest.mark.parametrize("tau", TAUS)
def test_eta_is_twice_zeta_at_half_periods(tau):
    E = EllipticCurve.from_tau(tau)
    assert abs(E.eta1 - 2 * E.zeta(E.omega1 / 2)) <= 1e-10 * max(1, abs(E.eta1))
    assert abs(E.eta2 - 2 * E.zeta(E.omega2 / 2)) <= 1e-10 * max(1, abs(E.eta2))


def test_square_lattice_values():
    # for Z + iZ: eta1 = pi, eta2 = -i pi
    E = EllipticCurve.from_tau(1j)
    assert abs(E.eta1 - np.pi) <= 1e-13
    assert abs(E.eta2 + 1j * np.pi) <= 1e-13


def test_zeta_is_odd_and_simple_pole():
    E = EllipticCurve(1.3 - 0.2j, 0.4 + 1.1j)
    rng = np.random.default_rng(2)
    z = E.to_point(rng.uniform(-1, 1, 20), rng.uniform(-1, 1, 20))
    assert np.max(np.abs(E.zeta(-z) + E.zeta(z))) <= 1e-10
    for r in (1e-3, 1e-4):
        w = r * np.exp(2j * np.pi * rng.uniform(size=5))
        # zeta - 1/z = O(|z|^3)
        assert np.max(np.abs(E.zeta(w) - 1 / w)) <= 1e-6


def test_zeta_pole_raises():
    E = EllipticCurve.from_tau(1j)
    with pytest.raises(LatticePointError):
        E.zeta(0)
    with pytest.raises(LatticePointError):
        E.zeta(2 + 3j)


def test_invalid_periods():
    with pytest.raises(ValueError):
        EllipticCurve(1.0, 0.5)
    with pytest.raises(ValueError):
        EllipticCurve(1.0, -1j)


def test_angle_round_trip():
    E = EllipticCurve(0.7 + 0.2j, -0.3 + 1.4j)
    x, y = E.to_angles(E.to_point(0.25, -1.75))
    assert abs(x - 0.25) <= 1e-14 and abs(y + 1.75) <= 1e-14
    assert abs(E.area - abs((E.omega1.conjugate() * E.omega2).imag)) == 0


@settings(max_examples=150, deadline=None)
@given(st.floats(-3, 3), st.floats(0.05, 4), st.floats(0.2, 3), st.floats(-3.1, 3.1))
def test_legendre_relation_random_lattices(re, im, scale, angle):
    E = EllipticCurve(scale * np.exp(1j * angle), scale * np.exp(1j * angle) * complex(re, im))
    assert E.legendre_defect() <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.87, 3.0))
def test_laurent_oracle_on_fundamental_domain(re, im):
    tau = complex(re, im)
    if abs(tau) < 1:
        return
    E = EllipticCurve.from_tau(tau)
    z = np.array([0.2, 0.15j, 0.1 + 0.1j, -0.25 + 0.05j])
    want = laurent_zeta(E, z)
    assert np.max(np.abs(E.zeta(z) - want)) <= 1e-11
