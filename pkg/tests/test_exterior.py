import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import E3, multivectors
from starspin import config
from starspin.exterior import (
    AlgebraSignature,
    Multivector,
    SignatureMismatch,
    exp_wedge,
    grade_project,
    is_real,
    left_derivative,
    random_multivector,
    relabel,
    reversion,
    right_derivative,
    substitute,
    wedge,
    wedge_sign,
)

BASIS = [Multivector(E3, {m: 1.0}) for m in range(8)]


def blade(*labels, c=1.0):
    return Multivector.blade(E3, labels, c)


class TestSignature:
    def test_euclidean_labels(self):
        assert E3.labels == ("s1", "s2", "s3")
        assert E3.metric == (1.0, 1.0, 1.0)

    def test_replicated_inert_copies(self):
        sig = AlgebraSignature.replicated(3)
        assert sig.labels[3:6] == ("s1'", "s2'", "s3'")
        assert sig.metric == (1.0,) * 3 + (0.0,) * 6

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            AlgebraSignature(("a", "a"), (1, 1))

    def test_metric_length_checked(self):
        with pytest.raises(ValueError):
            AlgebraSignature(("a", "b"), (1,))

    def test_capacity(self):
        AlgebraSignature.euclidean(24)
        with pytest.raises(ValueError):
            AlgebraSignature.euclidean(25)

    def test_unknown_generator(self):
        with pytest.raises(KeyError):
            E3.index("s9")

    def test_blade_out_of_range(self):
        with pytest.raises(ValueError):
            Multivector(E3, {8: 1.0})


class TestWedge:
    def test_canonical_order(self):
        s1, s2 = Multivector.generator(E3, "s1"), Multivector.generator(E3, "s2")
        assert wedge(s1, s2).terms == {0b011: 1.0}
        assert wedge(s2, s1).terms == {0b011: -1.0}
        assert wedge(s1, s1).is_zero(0.0)

    def test_blade_constructor_sign(self):
        assert blade("s3", "s1") == blade("s1", "s3", c=-1.0)
        assert blade("s2", "s3", "s1") == blade("s1", "s2", "s3")
        assert blade("s1", "s1").is_zero(0.0)

    def test_wedge_sign_transpositions(self):
        # brute-force parity of concatenating two ascending lists
        for a, b in itertools.product(range(16), repeat=2):
            if a & b:
                continue
            seq = [i for i in range(4) if a >> i & 1] + [i for i in range(4) if b >> i & 1]
            inv = sum(1 for x, y in itertools.combinations(seq, 2) if x > y)
            assert wedge_sign(a, b) == (-1) ** inv

    def test_associative_on_basis_triples(self):
        for a, b, c in itertools.product(BASIS, repeat=3):
            assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))

    @given(multivectors(), multivectors(), multivectors())
    def test_bilinear(self, a, b, c):
        assert wedge(a + b, c).isclose(wedge(a, c) + wedge(b, c), 1e-9)
        assert wedge(a.scale(2 - 1j), c).isclose(wedge(a, c).scale(2 - 1j), 1e-9)

    def test_signature_mismatch(self):
        other = AlgebraSignature.euclidean(2)
        with pytest.raises(SignatureMismatch):
            wedge(Multivector.scalar(E3), Multivector.scalar(other))

    def test_operator_forms(self):
        s1, s2 = Multivector.generator(E3, "s1"), Multivector.generator(E3, "s2")
        assert (s1 ^ s2) == wedge(s1, s2)
        assert (2 ^ s1) == s1.scale(2)


class TestGrades:
    def test_projection_examples(self):
        a = 1 + blade("s1") + blade("s1", "s2")
        assert grade_project(a, 1) == blade("s1")
        assert grade_project(blade("s1", "s2"), 3).is_zero(0.0)
        assert grade_project(a, 7).is_zero(0.0)

    @given(multivectors())
    def test_resolution_of_identity(self, a):
        total = sum((grade_project(a, k) for k in range(4)), Multivector.zero(E3))
        assert total == a or total.isclose(a, 0.0)

    @given(multivectors())
    def test_idempotent(self, a):
        for k in range(4):
            assert grade_project(grade_project(a, k), k) == grade_project(a, k)


class TestReversion:
    def test_bivector_flips(self):
        b = blade("s1", "s2", c=0.3) + blade("s2", "s3", c=-1.2)
        assert reversion(b) == -b

    def test_examples(self):
        assert reversion(Multivector.scalar(E3, 1j)) == Multivector.scalar(E3, -1j)
        assert reversion(blade("s1")) == blade("s1")
        assert reversion(blade("s1", "s2", "s3")) == -blade("s1", "s2", "s3")

    @given(multivectors())
    def test_involution(self, a):
        assert reversion(reversion(a)) == a

    def test_anti_automorphism_on_basis(self):
        for a, b in itertools.product(BASIS, repeat=2):
            assert reversion(wedge(a, b)) == wedge(reversion(b), reversion(a))

    def test_is_real(self):
        assert is_real(blade("s1"))
        assert not is_real(blade("s1", "s2"))
        assert is_real(blade("s1", "s2", c=1j))


class TestDerivatives:
    def test_examples(self):
        b12 = blade("s1", "s2")
        assert left_derivative(b12, "s1") == blade("s2")
        assert left_derivative(b12, "s2") == -blade("s1")
        assert right_derivative(b12, "s2") == blade("s1")
        assert right_derivative(b12, "s1") == -blade("s2")
        assert left_derivative(blade("s3"), "s1").is_zero(0.0)

    def test_unknown_generator(self):
        with pytest.raises(KeyError):
            left_derivative(blade("s1"), "t")

    @given(multivectors(), st.integers(0, 3), st.sampled_from(["s1", "s2", "s3"]))
    def test_left_anti_derivation(self, b, k, lab):
        a = grade_project(random_multivector(E3, np.random.default_rng(k)), k)
        lhs = left_derivative(wedge(a, b), lab)
        rhs = wedge(left_derivative(a, lab), b) + wedge(a, left_derivative(b, lab)).scale((-1) ** k)
        assert lhs.isclose(rhs, 1e-9)

    @given(multivectors(), st.integers(0, 3), st.sampled_from(["s1", "s2", "s3"]))
    def test_right_anti_derivation(self, a, k, lab):
        b = grade_project(random_multivector(E3, np.random.default_rng(k + 7)), k)
        lhs = right_derivative(wedge(a, b), lab)
        rhs = wedge(a, right_derivative(b, lab)) + wedge(right_derivative(a, lab), b).scale((-1) ** k)
        assert lhs.isclose(rhs, 1e-9)

    def test_derivatives_anticommute(self, rng):
        a = random_multivector(E3, rng)
        x = left_derivative(left_derivative(a, "s1"), "s2")
        y = left_derivative(left_derivative(a, "s2"), "s1")
        assert x.isclose(-y, 0.0)


class TestSubstitution:
    def test_relabel_into_larger_signature(self):
        big = AlgebraSignature.replicated(3)
        a = blade("s1", "s3", c=2.0)
        moved = relabel(a, {"s1": "s1'", "s3": "s3'"}, big)
        assert moved == Multivector.blade(big, ("s1'", "s3'"), 2.0)

    def test_homomorphism(self, rng):
        a, b = random_multivector(E3, rng), random_multivector(E3, rng)
        images = {"s1": blade("s2") + blade("s3", c=0.5), "s2": blade("s1", c=-1.0), "s3": blade("s3", c=2.0)}
        assert substitute(wedge(a, b), images).isclose(wedge(substitute(a, images), substitute(b, images)), 1e-9)

    def test_swap_reverses_sign(self):
        swapped = relabel(blade("s1", "s2"), {"s1": "s2", "s2": "s1"})
        assert swapped == -blade("s1", "s2")


class TestSerialization:
    @given(multivectors())
    def test_json_round_trip_is_bit_exact(self, a):
        back = Multivector.from_json(E3, a.to_json())
        assert back == a

    def test_json_format(self):
        a = 1 + blade("s1", "s2", c=2j)
        assert json.loads(a.to_json()) == {"": [1.0, 0.0], "s1 s2": [0.0, 2.0]}

    def test_non_canonical_key_rejected(self):
        with pytest.raises(ValueError):
            Multivector.from_json(E3, {"s2 s1": [1, 0]})

    def test_printing(self):
        assert str(blade("s2", "s1")) == "-s1 s2"
        assert str(Multivector.zero(E3)) == "0"
        assert str(1 - blade("s1", "s2", c=0.5j)) == "1 - 0.5i*s1 s2"
        assert str(Multivector.scalar(E3, -0.0)) == "0"
        assert str(blade("s1", c=1 + 2j)) == "(1+2i)*s1"


class TestMisc:
    def test_prune(self):
        assert Multivector(E3, {1: 1e-15}).is_zero(0.0)

    def test_dense_round_trip(self, rng):
        a = random_multivector(E3, rng)
        assert Multivector.from_vector(E3, a.to_vector()) == a

    def test_exp_wedge_of_nilpotent(self):
        big = AlgebraSignature(("a", "b", "c", "d"), (0,) * 4)
        x = Multivector.blade(big, ("a", "b")) + Multivector.blade(big, ("c", "d"))
        expected = 1 + x + Multivector.blade(big, ("a", "b", "c", "d"))
        assert exp_wedge(x) == expected

    def test_exp_wedge_needs_even(self):
        with pytest.raises(ValueError):
            exp_wedge(blade("s1"))

    def test_tolerance_env(self, monkeypatch):
        monkeypatch.delenv("STARSPIN_TOL", raising=False)
        assert config.tolerance() == 1e-10
        monkeypatch.setenv("STARSPIN_TOL", "1e-3")
        assert config.tolerance() == 1e-3
        assert Multivector(E3, {1: 1e-4}).is_zero()
        monkeypatch.setenv("STARSPIN_TOL", "nope")
        with pytest.raises(ValueError):
            config.tolerance()
