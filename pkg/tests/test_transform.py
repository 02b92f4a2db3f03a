import math

import numpy as np
import pytest

from eisenstein_lk.eisenstein import phi_matrix, phi_sharp_matrix
from eisenstein_lk.errors import InvariantViolation, NotInvariantised
from eisenstein_lk.group import GroupElement, a_t, exp_alg, horocycle_bracket, inverse, kappa, to_disc
from eisenstein_lk.specfun import phi_closed
from eisenstein_lk.transform import (
    Measure, convolve, eisenstein_transform, helgason_ft, measure_from_json, measure_to_json,
    right_K_invariantise, symmetric_row,
)

from conftest import random_element

E = GroupElement.identity()


def near_identity_measure(rng, k=3):
    return Measure.discrete([(exp_alg(rng.uniform(-0.2, 0.2, 3)), w) for w in rng.dirichlet(np.ones(k))])


def test_measure_validation():
    with pytest.raises(ValueError):
        Measure.discrete([(E, 0.5), (a_t(0.1), 0.4)])
    with pytest.raises(ValueError):
        Measure.discrete([(E, 1.5), (a_t(0.1), -0.5)])
    with pytest.raises(ValueError):
        Measure.empirical([])
    with pytest.raises(InvariantViolation):
        Measure("dirac", np.array([1.0 + 0j]), np.array([0.5 + 0j]), np.array([1.0]))


def test_dirac_transform():
    g = random_element(np.random.default_rng(1))
    assert np.allclose(eisenstein_transform(Measure.dirac(E), 1.0, 4).entries, np.eye(9), atol=1e-15)
    assert np.allclose(eisenstein_transform(Measure.dirac(g), 1.0, 4).entries,
                       phi_sharp_matrix(1.0, 4, g).entries, atol=1e-14)


def test_transform_linear():
    g = random_element(np.random.default_rng(2))
    mu = Measure.discrete([(g, 0.5), (E, 0.5)])
    expected = 0.5 * phi_sharp_matrix(0.5, 4, g, nodes=1024).entries + 0.5 * np.eye(9)
    assert np.allclose(eisenstein_transform(mu, 0.5, 4, nodes=1024).entries, expected, atol=1e-14)


def test_degenerate_sample():
    g = random_element(np.random.default_rng(3))
    mu = Measure.empirical([g] * 7)
    assert np.allclose(eisenstein_transform(mu, 2.0, 3, nodes=512).entries,
                       phi_sharp_matrix(2.0, 3, g, nodes=512).entries, atol=1e-14)


def test_convolve_diracs():
    g, h = random_element(np.random.default_rng(4)), random_element(np.random.default_rng(5))
    c = convolve(Measure.dirac(g), Measure.dirac(h))
    assert c.variant == "dirac" and c.atoms[0][0] == g @ h
    mu = near_identity_measure(np.random.default_rng(6))
    same = convolve(Measure.dirac(E), mu)
    assert np.allclose(np.sort_complex(same.a), np.sort_complex(mu.a))


def test_convolve_counts_and_merges():
    rng = np.random.default_rng(7)
    m1, m2 = near_identity_measure(rng), near_identity_measure(rng)
    assert len(convolve(m1, m2)) == 9
    k = Measure.discrete([(kappa(0.5), 0.5), (kappa(-0.5), 0.5)])
    kk = convolve(k, k)  # kappa(0) appears twice
    assert len(kk) == 3 and abs(kk.w.sum() - 1) < 1e-15


def test_convolution_theorem():
    rng = np.random.default_rng(8)
    m1, m2 = near_identity_measure(rng), near_identity_measure(rng)
    c = convolve(m1, m2)
    errs = []
    for N in (6, 12):
        d = eisenstein_transform(c, 1.0, N).entries - (
            eisenstein_transform(m1, 1.0, N).entries @ eisenstein_transform(m2, 1.0, N).entries)
        errs.append(np.max(np.abs(d[N - 2:N + 3, N - 2:N + 3])))
    assert errs[1] < errs[0] and errs[1] < 1e-7


def test_empirical_convolution_flags():
    rng = np.random.default_rng(9)
    s = Measure.empirical([random_element(rng) for _ in range(5)])
    assert convolve(s, s).approximate
    assert not convolve(Measure.dirac(E), s).approximate
    with pytest.raises(ValueError):
        convolve(s, near_identity_measure(rng))


def test_invariantise_dirac_e():
    inv = right_K_invariantise(Measure.dirac(E), 16)
    assert inv.invariantised and len(inv) == 16
    assert np.allclose(np.sort(np.angle(inv.a) % (2 * math.pi)), 2 * math.pi * np.arange(16) / 16)
    row = symmetric_row(inv, 1.0, 4)
    assert np.allclose(row.values, np.eye(9)[4], atol=1e-14)


def test_invariantise_idempotent():
    mu = near_identity_measure(np.random.default_rng(10))
    once = right_K_invariantise(mu, 8)
    twice = right_K_invariantise(once, 8)
    assert len(twice) == len(once)
    T1 = eisenstein_transform(once, 1.0, 4, k_average=False).entries
    T2 = eisenstein_transform(twice, 1.0, 4, k_average=False).entries
    assert np.allclose(T1, T2, atol=1e-14)


def test_invariantised_rows_vanish():
    mu = right_K_invariantise(Measure.discrete([(random_element(np.random.default_rng(11)), 1.0)]), 64)
    T = eisenstein_transform(mu, 1.5, 12, k_average=False).entries
    assert np.max(np.abs(np.delete(T, 12, axis=0))) < 1e-10


def test_symmetric_row_requires_flag():
    with pytest.raises(NotInvariantised):
        symmetric_row(Measure.dirac(E), 1.0, 2)


@pytest.mark.parametrize("t", [0.2, 0.9])
def test_symmetric_row_spherical(t):
    row = symmetric_row(right_K_invariantise(Measure.dirac(a_t(t))), 1.3, 6)
    assert abs(row[0] - phi_closed(1.3, 0, math.tanh(t))) < 1e-12


def test_symmetric_row_is_spherical_transform(rng):
    mu = Measure.discrete([(random_element(rng), w) for w in (0.2, 0.3, 0.5)])
    inv = right_K_invariantise(mu)
    expected = sum(w * phi_closed(0.7, 0, abs(to_disc(inverse(g)))) for g, w in mu.atoms)
    assert abs(symmetric_row(inv, 0.7, 4)[0] - expected) < 1e-10


def test_helgason_dirac_e():
    f = helgason_ft(right_K_invariantise(Measure.dirac(E)), 1.0, np.linspace(0, 6, 9), 6)
    assert np.allclose(f, 1, atol=1e-14)


def test_helgason_parseval():
    mu = right_K_invariantise(Measure.discrete([(a_t(0.4), 0.5), (exp_alg((0.1, 0.3, 0.2)), 0.5)]))
    N = 12
    beta = 2 * math.pi * np.arange(64) / 64
    f = helgason_ft(mu, 0.9, beta, N)
    row = symmetric_row(mu, 0.9, N).values
    assert abs(np.mean(np.abs(f) ** 2) - np.sum(np.abs(row) ** 2)) < 1e-12


def test_helgason_disc_oracle():
    mu = Measure.discrete([(a_t(0.3), 0.6), (a_t(-0.5), 0.4)])
    inv = right_K_invariantise(mu)
    beta = np.linspace(0, 2 * math.pi, 7)
    f = helgason_ft(inv, 1.2, beta, 40)
    direct = sum(w * np.exp((1j * 1.2 + 1) * horocycle_bracket(to_disc(inverse(g)), beta)) for g, w in mu.atoms)
    assert np.allclose(f, direct, atol=1e-10)


def test_transform_bounded(rng):
    mu = Measure.discrete([(random_element(rng), w) for w in rng.dirichlet(np.ones(4))])
    assert np.max(np.abs(eisenstein_transform(mu, 2.5, 8).entries)) <= 1 + 1e-9


def test_empirical_converges():
    rng = np.random.default_rng(12)
    atoms = [(random_element(rng, 0.4), w) for w in (0.3, 0.7)]
    mu = Measure.discrete(atoms)
    M = 4000
    pick = rng.random(M) < 0.3
    sample = Measure.empirical(a=np.where(pick, atoms[0][0].a, atoms[1][0].a),
                               b=np.where(pick, atoms[0][0].b, atoms[1][0].b))
    exact = eisenstein_transform(mu, 1.0, 4, nodes=512).entries
    emp = eisenstein_transform(sample, 1.0, 4, nodes=512).entries
    assert np.max(np.abs(emp - exact)) < 3 / math.sqrt(M) * math.sqrt(2)


def test_json_round_trip():
    mu = right_K_invariantise(near_identity_measure(np.random.default_rng(13)), 4)
    back = measure_from_json(measure_to_json(mu))
    assert back.variant == "discrete" and back.invariantised
    assert np.array_equal(back.a, mu.a) and np.array_equal(back.w, mu.w)
    s = Measure.empirical([E, a_t(0.1)])
    assert measure_from_json(measure_to_json(s)).variant == "empirical"
