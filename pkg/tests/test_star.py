import itertools
import math

import numpy as np
import pytest
from hypothesis import given

from conftest import E3, multivectors
from oracles import rep, star_series, unrep
from starspin.exterior import AlgebraSignature, Multivector, grade_project, random_multivector, wedge
from starspin.spin import fourier_dirichlet, spin_hamiltonian_z, star_exponential, wigner_projectors
from starspin.star import (
    bivector_basis,
    clifford_star,
    clifford_star_integral,
    exterior_part,
    inner_product,
    n_fold_star,
    outer_product,
    quaternion_units,
    scalar_part,
    sigma,
    star_anticommutator,
    star_commutator,
    star_exp_series,
)

BASIS = [Multivector(E3, {m: 1.0}) for m in range(8)]
S1, S2, S3 = sigma(E3)
ONE = Multivector.scalar(E3)


class TestOracles:
    @given(multivectors(), multivectors())
    def test_matches_matrix_representation(self, a, b):
        assert np.allclose(rep(clifford_star(a, b)), rep(a) @ rep(b), atol=1e-10)

    def test_matrix_rep_round_trip(self, rng):
        a = random_multivector(E3, rng)
        assert unrep(rep(a), E3).isclose(a, 1e-12)

    @pytest.mark.parametrize("metric", [(1.0, 1.0, 1.0, 1.0), (1.0, -1.0, 0.0, 2.5), (0.0, 0.0, 0.0, 0.0)])
    def test_matches_bidifferential_series(self, metric, rng):
        sig = AlgebraSignature(("a", "b", "c", "d"), metric)
        for _ in range(10):
            a, b = random_multivector(sig, rng), random_multivector(sig, rng)
            assert clifford_star(a, b).isclose(star_series(a, b), 1e-10)


class TestBasisLaw:
    def test_generator_pairs(self):
        for (i, a), (j, b) in itertools.product(enumerate(sigma(E3)), repeat=2):
            expected = wedge(a, b) + ONE.scale(float(i == j))
            assert (a * b).max_diff(expected) <= 1e-12

    def test_quaternions(self):
        qi, qj, qk = quaternion_units(E3)
        for x in (qi * qi, qj * qj, qk * qk, qi * qj * qk):
            assert x.max_diff(-ONE) <= 1e-12

    def test_bivector_brackets(self):
        b = bivector_basis(E3)
        eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (1, 0, 2): -1, (2, 1, 0): -1, (0, 2, 1): -1}
        for i, j in itertools.product(range(3), repeat=2):
            assert star_anticommutator(b[i], b[j]).scale(0.5).max_diff(ONE.scale(-float(i == j))) <= 1e-12
            expected = Multivector.zero(E3)
            for k in range(3):
                expected = expected - b[k].scale(eps.get((i, j, k), 0))
            assert star_commutator(b[i], b[j]).scale(0.5).max_diff(expected) <= 1e-12

    def test_wedge_when_metric_vanishes(self, rng):
        sig = AlgebraSignature(("x", "y", "z"), (0.0, 0.0, 0.0))
        a, b = random_multivector(sig, rng), random_multivector(sig, rng)
        assert clifford_star(a, b) == wedge(a, b)

    def test_associative_on_basis_triples(self):
        for a, b, c in itertools.product(BASIS, repeat=3):
            assert ((a * b) * c).max_diff(a * (b * c)) == 0.0

    @given(multivectors(), multivectors(), multivectors())
    def test_associative_random(self, a, b, c):
        assert ((a * b) * c).isclose(a * (b * c), 1e-9)


class TestIntegralForm:
    def test_examples(self):
        assert clifford_star_integral(S1, S2) == wedge(S1, S2)
        assert clifford_star_integral(S1, S1).max_diff(ONE) <= 1e-12

    def test_unit(self, rng):
        b = random_multivector(E3, rng)
        assert clifford_star_integral(ONE, b).isclose(b, 1e-12)

    def test_random_pairs(self, rng):
        worst = 0.0
        for _ in range(200):
            a, b = random_multivector(E3, rng), random_multivector(E3, rng)
            worst = max(worst, clifford_star_integral(a, b).max_diff(clifford_star(a, b)))
        assert worst <= 1e-10

    def test_rejects_other_signatures(self):
        sig = AlgebraSignature.euclidean(2)
        x = Multivector.scalar(sig)
        with pytest.raises(ValueError):
            clifford_star_integral(x, x)


class TestProductParts:
    def test_dot_example(self):
        a, b = S1 + S2.scale(2), S1.scale(3)
        assert scalar_part(a, b).max_diff(ONE.scale(3)) == 0.0

    @given(multivectors(max_terms=3))
    def test_vector_parts(self, x):
        a = grade_project(x, 1)
        b = S1.scale(0.3) - S3
        assert set(scalar_part(a, b).grades()) <= {0}
        assert set(exterior_part(a, b).grades()) <= {2}
        assert exterior_part(a, b).isclose(wedge(a, b), 1e-12)
        assert exterior_part(a, a).is_zero(1e-12)

    def test_real_vector_square(self, rng):
        v = rng.normal(size=3)
        a = sum((g.scale(c) for g, c in zip(sigma(E3), v)), Multivector.zero(E3))
        assert abs(scalar_part(a, a).scalar_part - float(v @ v)) <= 1e-12

    def test_generalized_grades(self):
        b12 = wedge(S1, S2)
        assert inner_product(S1, b12) == S2
        assert outer_product(S3, b12) == wedge(b12, S3)
        with pytest.raises(ValueError):
            inner_product(S1 + b12, S1)
        with pytest.raises(ValueError):
            scalar_part(b12, S1)


class TestPowersAndExponentials:
    def test_n_fold(self, rng):
        b12 = wedge(S1, S2)
        assert n_fold_star(b12, 2) == -ONE
        a = random_multivector(E3, rng)
        assert n_fold_star(a, 0) == ONE
        assert n_fold_star(a, 1) == a
        assert n_fold_star(a, 5).isclose(a * a * a * a * a, 1e-9)
        with pytest.raises(ValueError):
            n_fold_star(a, -1)

    def test_printed_z_exponential(self):
        w = 0.9
        h = spin_hamiltonian_z(w)
        for t in np.linspace(0, 10, 13):
            expected = ONE.scale(math.cos(w * t / 2)) - wedge(S1, S2).scale(math.sin(w * t / 2))
            assert star_exponential(h, t).max_diff(expected) <= 1e-12

    def test_against_series(self):
        h = spin_hamiltonian_z(1.7)
        for t in np.linspace(0, 2 * math.pi / h.abs_e, 20):
            series = star_exp_series(h.H.scale(-1j * t), 40)
            assert star_exponential(h, t).max_diff(series) <= 1e-10

    def test_fourier_dirichlet(self):
        h = spin_hamiltonian_z(1.3)
        pp, pm = wigner_projectors(h)
        for t in np.linspace(0, 4 * math.pi / h.abs_e, 50):
            expected = pp.scale(np.exp(-1j * h.abs_e * t)) + pm.scale(np.exp(1j * h.abs_e * t))
            assert star_exponential(h, t).max_diff(expected) <= 1e-10
            assert fourier_dirichlet(h, t).max_diff(expected) <= 1e-10

    def test_group_and_n_fold(self, rng):
        h = spin_hamiltonian_z(0.8)
        for t1, t2 in rng.uniform(-5, 5, size=(20, 2)):
            lhs = star_exponential(h, t1) * star_exponential(h, t2)
            assert lhs.max_diff(star_exponential(h, t1 + t2)) <= 1e-10
        assert n_fold_star(star_exponential(h, 0.3), 7).max_diff(star_exponential(h, 2.1)) <= 1e-10
        assert star_exponential(h, 0.0) == ONE

    def test_schroedinger_analogue(self):
        h = spin_hamiltonian_z(1.1)
        step = 1e-5
        for t in np.linspace(0, 6, 9):
            fwd, back = star_exponential(h, t + step), star_exponential(h, t - step)
            deriv = (fwd - back).scale(1j / (2 * step))
            assert deriv.max_diff(h.H * star_exponential(h, t)) <= 1e-8
