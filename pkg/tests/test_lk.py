import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eisenstein_lk.eisenstein import phi_sharp_matrix, rho_tensor
from eisenstein_lk.errors import WindowMismatch
from eisenstein_lk.group import a_t, canonical_coords, cutoff, exp_alg, inverse, kappa
from eisenstein_lk.levy import GeneratorTriple, LevyMeasureDiscrete
from eisenstein_lk.lk import eta_matrix, fit_exponent, matrix_exp, psi_matrix, verify_lk

ZERO = np.zeros((3, 3))
modes = np.arange(-6, 7)


def eig_exp(m, t):
    """Independent oracle: exp via eigendecomposition."""
    w, V = np.linalg.eig(t * m)
    return V @ np.diag(np.exp(w)) @ np.linalg.inv(V)


def test_zero_triple():
    assert np.all(psi_matrix(1.0, 4, GeneratorTriple.zero()).entries == 0)
    assert np.array_equal(matrix_exp(np.zeros((9, 9)), 3.0), np.eye(9))


def test_empty_levy_eta():
    assert np.all(eta_matrix(1.0, 3, LevyMeasureDiscrete()) == 0)


def test_pure_rotation_drift():
    psi = psi_matrix(0.5, 6, GeneratorTriple([0, 0, 0.8], ZERO)).entries
    assert np.allclose(psi, np.diag(-0.8j * modes), atol=1e-14)


@pytest.mark.parametrize("phi", [0.3, 0.55])
def test_eta_rotation_atom(phi):
    c = 1.7
    eta = eta_matrix(0.9, 6, LevyMeasureDiscrete([(kappa(phi), c)]))
    x3 = phi * cutoff(kappa(phi))
    assert abs(canonical_coords(kappa(phi))[2] - x3) < 1e-15
    assert np.allclose(eta, np.diag(c * (np.exp(-1j * modes * phi) - 1 + 1j * modes * x3)), atol=1e-13)


def test_eta_atom_outside_cutoff():
    tau = a_t(1.5)
    eta = eta_matrix(0.4, 4, LevyMeasureDiscrete([(tau, 2.0)]))
    assert np.allclose(eta, 2.0 * (phi_sharp_matrix(0.4, 4, tau).entries - np.eye(9)), atol=1e-14)


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.5])
def test_brownian_psi_is_diagonal(lam):
    alpha = 0.25
    psi = psi_matrix(lam, 6, GeneratorTriple(np.zeros(3), alpha * np.diag([1, 1, 0]))).entries
    assert np.allclose(psi, np.diag(-alpha * (1 + lam**2 + modes**2) / 2), atol=1e-13)


def test_truncated_products_flagged():
    rho = rho_tensor(1.0, 4)
    psi = psi_matrix(1.0, 4, GeneratorTriple(np.zeros(3), np.eye(3) * 0.1), rho=rho)
    assert not psi.exact_products
    assert psi_matrix(1.0, 4, GeneratorTriple.zero()).exact_products
    with pytest.raises(WindowMismatch):
        psi_matrix(1.0, 5, GeneratorTriple.zero(), rho=rho)


def test_hermitian_pairing():
    g = exp_alg((0.3, -0.2, 0.1))
    levy = LevyMeasureDiscrete([(g, 0.8), (inverse(g), 0.8)])
    gen = GeneratorTriple(np.zeros(3), np.diag([0.2, 0.1, 0.3]), levy)
    psi = psi_matrix(1.3, 6, gen).entries
    assert np.allclose(psi, psi.conj().T, atol=1e-12)


def test_matrix_exp_scalar_and_identity():
    assert abs(matrix_exp(np.array([[0.3 - 2j]]), 1.5)[0, 0] - np.exp(1.5 * (0.3 - 2j))) < 1e-15
    assert np.array_equal(matrix_exp(np.eye(3), 0.0), np.eye(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.floats(0, 2), st.floats(0, 2))
def test_matrix_exp_semigroup(seed, s, t):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    lhs = matrix_exp(m, s + t)
    assert np.allclose(lhs, matrix_exp(m, s) @ matrix_exp(m, t), atol=1e-10 * max(1, np.abs(lhs).max()))
    assert np.allclose(matrix_exp(m, t), eig_exp(m, t), atol=1e-9 * max(1, np.abs(lhs).max()))


def test_derivative_at_zero():
    gen = GeneratorTriple([0.1, 0.2, -0.3], np.diag([0.2, 0.1, 0.05]),
                          LevyMeasureDiscrete([(exp_alg((0.3, 0, 0)), 1.0)]))
    psi = psi_matrix(0.8, 5, gen)
    h = 1e-4
    fd = (matrix_exp(psi, h) - matrix_exp(psi, -h)) / (2 * h)
    assert np.allclose(fd, psi.entries, atol=1e-5)


def test_inner_block_converges_under_window_doubling():
    gen = GeneratorTriple(np.zeros(3), ZERO, LevyMeasureDiscrete([(exp_alg((0.3, 0, 0)), 1.0)]))
    E = {N: matrix_exp(psi_matrix(1.0, N, gen), 1.0) for N in (8, 16, 32)}

    def block(N):
        return E[N][N - 2:N + 3, N - 2:N + 3]

    first = np.max(np.abs(block(8) - block(16)))
    second = np.max(np.abs(block(16) - block(32)))
    assert second < first / 10 and second < 1e-6


ACCEPTANCE_GENERATORS = {
    "compound_poisson": GeneratorTriple(np.zeros(3), ZERO, LevyMeasureDiscrete([(exp_alg((0.3, 0, 0)), 1.0)])),
    "brownian": GeneratorTriple(np.zeros(3), 0.25 * np.diag([1, 1, 0])),
}


@pytest.mark.parametrize("name", sorted(ACCEPTANCE_GENERATORS))
@pytest.mark.parametrize("lam", [0.0, 1.0, 2.0])
def test_inner_block_drift_at_acceptance_window(name, lam):
    gen = ACCEPTANCE_GENERATORS[name]
    small = matrix_exp(psi_matrix(lam, 8, gen), 1.0)
    big = matrix_exp(psi_matrix(lam, 16, gen), 1.0)
    assert np.max(np.abs(small[6:11, 6:11] - big[14:19, 14:19])) < 1e-7


def test_verify_zero_triple():
    rep = verify_lk(GeneratorTriple.zero(), [0.0, 1.0], 3, 1.0, 4, 10)
    assert rep.passed
    for r in rep.rows:
        n1, n2 = r["entry"]
        assert r["emp_re"] == pytest.approx(float(n1 == n2), abs=1e-14)
        assert r["th_re"] == pytest.approx(float(n1 == n2), abs=1e-14)


def test_verify_rotation_and_wrong_convention():
    gen = GeneratorTriple([0, 0, 0.6], ZERO)
    good = verify_lk(gen, [0.5], 4, 1.0, 2, 20)
    assert good.passed and all(r["mc_se"] == 0 for r in good.rows)
    bad = verify_lk(gen, [0.5], 4, 1.0, 2, 20, convention="plain")
    assert not bad.passed


def test_verify_haar_start_compares_row_zero():
    gen = GeneratorTriple(np.zeros(3), np.diag([0.1, 0.1, 0.0]))
    rep = verify_lk(gen, [1.0], 3, 0.5, 2000, 50, seed=4, start="haar_K")
    assert {tuple(r["entry"])[0] for r in rep.rows} == {0}
    assert rep.passed


def test_report_serialisation():
    rep = verify_lk(GeneratorTriple.zero(), [0.0], 1, 1.0, 2, 2)
    assert rep.to_csv().splitlines()[0] == "lambda,nprime,n,emp_re,emp_im,th_re,th_im,mc_se,tail_est,pass"
    assert '"passed": true' in rep.to_json()


def test_fit_exponent():
    lams = np.array([0, 0.5, 1, 1.5, 2])
    c, misfit = fit_exponent(lams, 0.3 * (1 + lams**2))
    assert c == pytest.approx(0.3) and misfit < 1e-14
    c, misfit = fit_exponent(lams, 0.3 * (1 + lams**2) ** 2)
    assert misfit > 0.05
