import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from starspin.berezin import grassmann_fourier, triple
from starspin.exterior import Multivector, grade_project, random_multivector, reversion, wedge
from starspin.expr import (
    DEFAULT_SIGNATURE,
    Binary,
    Call,
    ExprError,
    Gen,
    GenSet,
    Num,
    Session,
    Unary,
    Var,
    evaluate,
    parse,
    to_source,
    tokenize,
)
from starspin.spin import rotor, spin_hamiltonian_z, star_exponential

CORPUS = Path(__file__).parent / "data" / "expressions.txt"
SIG = DEFAULT_SIGNATURE


def kinds(text):
    return [(t.kind, t.text) for t in tokenize(text)][:-1]


def mv(*labels, c=1.0):
    return Multivector.blade(SIG, labels, c)


class TestTokenize:
    def test_star(self):
        assert kinds("s1 * s2") == [("GEN", "s1"), ("OP", "*"), ("GEN", "s2")]

    def test_literals(self):
        assert kinds("0.5*(1 - 1i*s1^s2)") == [
            ("NUM", "0.5"), ("OP", "*"), ("OP", "("), ("NUM", "1"), ("OP", "-"), ("IMAG", "1i"),
            ("OP", "*"), ("GEN", "s1"), ("OP", "^"), ("GEN", "s2"), ("OP", ")")]

    def test_primes(self):
        toks = tokenize("s1''")
        assert toks[0].kind == "GEN" and toks[0].value == "s1''"

    def test_bare_i_and_exponents(self):
        assert kinds("i + 2.5e-3i + 1E2") == [("IMAG", "i"), ("OP", "+"), ("IMAG", "2.5e-3i"),
                                              ("OP", "+"), ("NUM", "1E2")]

    def test_positions(self):
        assert [t.pos for t in tokenize("s1  +s2")] == [0, 4, 5, 7]

    def test_unexpected_character(self):
        with pytest.raises(ExprError) as exc:
            tokenize("s1 $ s2")
        assert exc.value.pos == 3

    def test_prime_on_name(self):
        with pytest.raises(ExprError):
            tokenize("hsz'")


class TestParse:
    def test_precedence(self):
        assert parse("s1*s2 + 1") == Binary("add", Binary("star", Gen("s1"), Gen("s2")), Num(1))

    def test_left_associative_equal_precedence(self):
        assert parse("s1*s2^s3") == Binary("wedge", Binary("star", Gen("s1"), Gen("s2")), Gen("s3"))
        assert parse("s1 - s2 - s3") == Binary("sub", Binary("sub", Gen("s1"), Gen("s2")), Gen("s3"))

    def test_unary_binds_tighter(self):
        assert parse("-s1*s2") == Binary("star", Unary("neg", Gen("s1")), Gen("s2"))

    def test_call(self):
        node = parse("int(s1^s2^s3, s1 s2 s3)")
        assert isinstance(node, Call) and node.name == "int"
        assert node.args[1] == GenSet(("s1", "s2", "s3"))

    def test_grade_and_rev(self):
        assert parse("grade(s1, 1)") == Unary("grade", Gen("s1"), 1)
        assert parse("rev(hsz)") == Unary("rev", Var("hsz"))

    @pytest.mark.parametrize("text,pos", [
        ("rev(s1*s2", 9),
        ("s1 +", 4),
        ("(s1", 3),
        ("s1 s2", 3),
        ("int(s1, )", 8),
        ("grade(s1, 1.5)", 10),
        ("exp_c", 5),
    ])
    def test_syntax_errors(self, text, pos):
        with pytest.raises(ExprError) as exc:
            parse(text)
        assert exc.value.pos == pos

    def test_end_of_input_message(self):
        with pytest.raises(ExprError, match="end of input"):
            parse("rev(s1*s2")

    def test_unknown_function(self):
        with pytest.raises(ExprError, match="unknown function"):
            parse("sin(s1)")


class TestPrinter:
    @pytest.mark.parametrize("text,canon", [
        ("s1*s2 + 1", "s1*s2 + 1"),
        ("(s1 * s2)", "s1*s2"),
        ("s1*(s2*s3)", "s1*(s2*s3)"),
        ("(s1*s2)*s3", "s1*s2*s3"),
        ("s1 - (s2 - s3)", "s1 - (s2 - s3)"),
        ("(s1 + s2)^s3", "(s1 + s2)^s3"),
        ("- (s1 + s2)", "-(s1 + s2)"),
        ("+s1", "s1"),
        ("2.50", "2.5"),
        ("1e-3i", "0.001i"),
        ("int(s1 ,s1 s2)", "int(s1, s1 s2)"),
        ("grade( 1 + s1 , 0 )", "grade(1 + s1, 0)"),
    ])
    def test_canonical_forms(self, text, canon):
        assert to_source(parse(text)) == canon

    def test_complex_literal_node(self):
        assert to_source(Binary("star", Num(1 + 2j), Gen("s1"))) == "(1 + 2i)*s1"


class TestCorpus:
    def test_corpus_size(self):
        assert len(CORPUS.read_text().splitlines()) == 200

    def test_print_parse_print(self):
        for line in CORPUS.read_text().splitlines():
            once = to_source(parse(line))
            assert to_source(parse(once)) == once, line

    def test_canonical_text_evaluates_the_same(self):
        for line in CORPUS.read_text().splitlines():
            assert evaluate(to_source(parse(line))).isclose(evaluate(line), 1e-9), line


class TestEvaluate:
    def test_basis_products(self):
        assert evaluate("s1*s1") == Multivector.scalar(SIG)
        assert str(evaluate("s2*s1")) == "-s1 s2"

    def test_projectors_annihilate(self):
        assert evaluate("pi_plus(hsz) * pi_minus(hsz)").is_zero()
        assert evaluate("pi_plus(hsz) + pi_minus(hsz)") == Multivector.scalar(SIG)

    def test_grade(self):
        assert evaluate("grade(1 + s1 + s1^s2, 2)") == mv("s1", "s2")

    def test_inert_generators_do_not_contract(self):
        assert evaluate("s1'*s1'").is_zero()
        assert evaluate("s1*s1'") == mv("s1", "s1'")

    def test_calls(self):
        assert evaluate("int(s1^s2^s3, s1 s2 s3)") == Multivector.scalar(SIG)
        assert evaluate("delta(s1 s2 s3, s1' s2' s3')").grades() == {3}
        h = spin_hamiltonian_z(1.0, SIG)
        assert evaluate("exp_c(hsz, 0.3)").isclose(star_exponential(h, 0.3))
        assert evaluate("rotor(s1^s2, 1.2)").isclose(rotor(mv("s1", "s2"), 1.2))
        assert evaluate("lift(s1, s1)") == Multivector.scalar(SIG)
        assert evaluate("rev(s1^s2 + i)") == -mv("s1", "s2") - 1j
        f = mv("s1", "s2")
        assert evaluate("ft(s1^s2, s1 s2 s3, s1' s2' s3')").isclose(
            grassmann_fourier(f, triple(), triple("'")))

    def test_imaginary_unit(self):
        assert evaluate("i*i") == Multivector.scalar(SIG, -1)
        assert evaluate("I*I") == Multivector.scalar(SIG, -1)

    @pytest.mark.parametrize("text,pos", [
        ("s1 + foo", 5),
        ("s1 + s9", 5),
        ("exp_c(s1^s2^s3, 1)", 0),
        ("rotor(s1^s2, s1)", 13),
        ("int(s1, s4)", 8),
    ])
    def test_errors_carry_positions(self, text, pos):
        with pytest.raises(ExprError) as exc:
            evaluate(text)
        assert exc.value.pos == pos

    def test_bindings(self, rng):
        session = Session.default()
        session.bind("a", "s1 + 2*s2")
        assert evaluate("a*a", session).isclose(Multivector.scalar(SIG, 5))
        with pytest.raises(ValueError):
            session.bind("s1", "1")
        with pytest.raises(ValueError):
            session.bind("int", "1")

    @given(st.integers(0, 2**32 - 1))
    def test_star_faithfulness(self, seed):
        rng = np.random.default_rng(seed)
        support = 0b111 | 0b111000
        a = random_multivector(SIG, rng, support=support)
        b = random_multivector(SIG, rng, support=support)
        env = {"a": a, "b": b}
        assert evaluate("a * b", bindings=env).isclose(a * b, 1e-12)
        assert evaluate("a ^ b", bindings=env).isclose(wedge(a, b), 1e-12)
        assert evaluate("rev(a) - grade(b, 2)", bindings=env).isclose(reversion(a) - grade_project(b, 2), 1e-12)

    def test_round_trip_preserves_value(self):
        text = "0.5*(1 - 1i*s1^s2)"
        assert evaluate(text).isclose(evaluate(to_source(parse(text))))
        assert evaluate(text).coeff(0) == 0.5
        assert math.isclose(evaluate(text).coeff(3).imag, -0.5)
