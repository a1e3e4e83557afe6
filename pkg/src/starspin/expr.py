"""Tokenizer, parser, printer and evaluator for multivector expressions.

Grammar (loosest first)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "^") unary)*
    unary   := ("-" | "+") unary | primary
    primary := number | imag | generator | name | call | "(" expr ")"

``*`` is the Clifford star, ``^`` the wedge. Imaginary literals carry an
``i`` suffix (``2i``); a bare ``i`` is the imaginary unit. Generator sets in
call arguments are written as space-separated generators: ``s1 s2 s3``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Union

from .berezin import berezin_integrate, delta_function, grassmann_fourier
from .exterior import AlgebraSignature, Multivector, grade_project, reversion, wedge
from .printing import format_real
from .spin import operator_lift, rotor, star_exponential, validate_spin_hamiltonian, wigner_projectors


class ExprError(ValueError):
    """Syntax or evaluation error; ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos


# -- tokens -------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # NUM IMAG GEN NAME OP END
    text: str
    pos: int
    value: object = None


_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_GEN = re.compile(r"s\d+$")
_OPS = set("+-*^(),")


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            out.append(Token("OP", c, i))
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            j = m.end()
            if j < n and text[j] == "i" and not (j + 1 < n and (text[j + 1].isalnum() or text[j + 1] == "_")):
                out.append(Token("IMAG", text[i:j + 1], i, float(m.group())))
                i = j + 1
            else:
                out.append(Token("NUM", m.group(), i, float(m.group())))
                i = j
            continue
        m = _NAME.match(text, i)
        if m:
            name, j = m.group(), m.end()
            while j < n and text[j] == "'":
                j += 1
            primes = j - m.end()
            if _GEN.match(name):
                out.append(Token("GEN", text[i:j], i, text[i:j]))
            elif primes:
                raise ExprError(f"primes are only allowed on generators, not {name!r}", m.end())
            elif name == "i":
                out.append(Token("IMAG", "i", i, 1.0))
            else:
                out.append(Token("NAME", name, i, name))
            i = j
            continue
        raise ExprError(f"unexpected character {c!r}", i)
    out.append(Token("END", "", n))
    return out


# -- syntax tree --------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: complex
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Gen:
    label: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GenSet:
    labels: tuple[str, ...]
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # neg, rev, grade
    operand: "Node"
    k: int | None = None
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str  # add, sub, star, wedge
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    pos: int = field(default=0, compare=False)


Node = Union[Num, Gen, Var, GenSet, Unary, Binary, Call]

# argument kinds: e = expression, s = generator set
FUNCTIONS: dict[str, str] = {
    "int": "es",
    "ft": "ess",
    "delta": "ss",
    "exp_c": "ee",
    "pi_plus": "e",
    "pi_minus": "e",
    "rotor": "ee",
    "lift": "ee",
}
UNARY_CALLS = {"rev", "grade"}
_BINOPS = {"+": "add", "-": "sub", "*": "star", "^": "wedge"}
_SYMBOL = {v: k for k, v in _BINOPS.items()}
_PREC = {"add": 1, "sub": 1, "star": 2, "wedge": 2}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _fail(self, what: str):
        t = self.tok
        where = "end of input" if t.kind == "END" else repr(t.text)
        raise ExprError(f"expected {what}, found {where}", t.pos)

    def _take(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            self._fail(repr(text) if text else kind.lower())
        self.i += 1
        return t

    def _is(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "END":
            self._fail("operator or end of input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is("+") or self._is("-"):
            t = self._take("OP")
            node = Binary(_BINOPS[t.text], node, self.term(), t.pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is("*") or self._is("^"):
            t = self._take("OP")
            node = Binary(_BINOPS[t.text], node, self.unary(), t.pos)
        return node

    def unary(self) -> Node:
        if self._is("-"):
            t = self._take("OP")
            return Unary("neg", self.unary(), pos=t.pos)
        if self._is("+"):
            self._take("OP")
            return self.unary()
        return self.primary()

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "NUM":
            self.i += 1
            return Num(complex(t.value), t.pos)
        if t.kind == "IMAG":
            self.i += 1
            return Num(complex(0, t.value), t.pos)
        if t.kind == "GEN":
            self.i += 1
            return Gen(t.value, t.pos)
        if t.kind == "NAME":
            self.i += 1
            if self._is("("):
                return self.call(t)
            if t.text in FUNCTIONS or t.text in UNARY_CALLS:
                self._fail("'('")
            return Var(t.text, t.pos)
        if self._is("("):
            self._take("OP")
            node = self.expr()
            self._take("OP", ")")
            return node
        self._fail("an operand")

    def call(self, name: Token) -> Node:
        self._take("OP", "(")
        if name.text == "rev":
            arg = self.expr()
            self._take("OP", ")")
            return Unary("rev", arg, pos=name.pos)
        if name.text == "grade":
            arg = self.expr()
            self._take("OP", ",")
            k = self._take("NUM")
            if k.value != int(k.value) or k.value < 0:
                raise ExprError("grade must be a non-negative integer", k.pos)
            self._take("OP", ")")
            return Unary("grade", arg, int(k.value), pos=name.pos)
        kinds = FUNCTIONS.get(name.text)
        if kinds is None:
            raise ExprError(f"unknown function {name.text!r}", name.pos)
        args = []
        for j, kind in enumerate(kinds):
            if j:
                self._take("OP", ",")
            args.append(self.genset() if kind == "s" else self.expr())
        self._take("OP", ")")
        return Call(name.text, tuple(args), name.pos)

    def genset(self) -> GenSet:
        start = self.tok.pos
        labels = []
        while self.tok.kind == "GEN":
            labels.append(self._take("GEN").value)
        if not labels:
            self._fail("a generator set")
        return GenSet(tuple(labels), start)


def parse(source: str | list[Token]) -> Node:
    tokens = tokenize(source) if isinstance(source, str) else source
    return _Parser(tokens).parse()


# -- printing -----------------------------------------------------------------

def _format_num(z: complex) -> str:
    if z.imag == 0:
        return format_real(z.real)
    if z.real == 0:
        return f"{format_real(z.imag)}i"
    return f"({format_real(z.real)} + {format_real(z.imag)}i)"


def _prec(node: Node) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return 3
    if isinstance(node, Num) and (node.value.real < 0 or node.value.imag < 0 or (node.value.real and node.value.imag)):
        return 3
    return 4


def to_source(node: Node) -> str:
    """Canonical source text: minimal parentheses, single spaces around + and -."""
    if isinstance(node, Num):
        return _format_num(node.value)
    if isinstance(node, Gen):
        return node.label
    if isinstance(node, Var):
        return node.name
    if isinstance(node, GenSet):
        return " ".join(node.labels)
    if isinstance(node, Unary):
        inner = to_source(node.operand)
        if node.op == "neg":
            return "-" + (f"({inner})" if _prec(node.operand) < 3 else inner)
        if node.op == "rev":
            return f"rev({inner})"
        return f"grade({inner}, {node.k})"
    if isinstance(node, Binary):
        p = _PREC[node.op]
        left, right = to_source(node.left), to_source(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        sym = _SYMBOL[node.op]
        return f"{left} {sym} {right}" if p == 1 else f"{left}{sym}{right}"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_source(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation ---------------------------------------------------------------

DEFAULT_SIGNATURE = AlgebraSignature.replicated(3)


@dataclass
class Session:
    sig: AlgebraSignature = DEFAULT_SIGNATURE
    bindings: dict[str, Multivector] = field(default_factory=dict)

    @classmethod
    def default(cls) -> "Session":
        """Signature s1..s3 (Euclidean) plus inert copies s_i', s_i''; binds I and hsz."""
        sig = DEFAULT_SIGNATURE
        return cls(sig, {
            "I": Multivector.blade(sig, ("s1", "s2", "s3")),
            "hsz": Multivector.blade(sig, ("s1", "s2"), 1 / 2j),
        })

    def bind(self, name: str, value: Multivector | str) -> None:
        if not _NAME.fullmatch(name) or _GEN.match(name) or name == "i" or name in FUNCTIONS or name in UNARY_CALLS:
            raise ValueError(f"cannot bind {name!r}")
        if isinstance(value, str):
            value = evaluate(value, self)
        self.bindings[name] = value


def _real_scalar(x: Multivector, pos: int, what: str) -> float:
    if not x.is_scalar() or abs(x.scalar_part.imag) > 1e-12:
        raise ExprError(f"{what} must be a real scalar", pos)
    return x.scalar_part.real


class _Evaluator:
    def __init__(self, session: Session):
        self.s = session
        self.sig = session.sig

    def __call__(self, node: Node) -> Multivector:
        try:
            return self._eval(node)
        except ExprError:
            raise
        except (ValueError, KeyError, ArithmeticError) as exc:
            msg = exc.args[0] if exc.args else type(exc).__name__
            raise ExprError(str(msg), getattr(node, "pos", 0)) from exc

    def _eval(self, node: Node) -> Multivector:
        if isinstance(node, Num):
            return Multivector.scalar(self.sig, node.value)
        if isinstance(node, Gen):
            try:
                return Multivector.generator(self.sig, node.label)
            except KeyError:
                raise ExprError(f"unknown generator {node.label!r}", node.pos) from None
        if isinstance(node, Var):
            if node.name not in self.s.bindings:
                raise ExprError(f"unbound name {node.name!r}", node.pos)
            return self.s.bindings[node.name]
        if isinstance(node, Unary):
            x = self(node.operand)
            if node.op == "neg":
                return -x
            if node.op == "rev":
                return reversion(x)
            return grade_project(x, node.k)
        if isinstance(node, Binary):
            a, b = self(node.left), self(node.right)
            try:
                if node.op == "add":
                    return a + b
                if node.op == "sub":
                    return a - b
                if node.op == "star":
                    return a * b
                return wedge(a, b)
            except ValueError as exc:
                raise ExprError(str(exc), node.pos) from exc
        if isinstance(node, Call):
            return self._call(node)
        raise ExprError("a generator set is not a value", getattr(node, "pos", 0))

    def _set(self, node: GenSet) -> tuple[str, ...]:
        for lab in node.labels:
            if lab not in self.sig.labels:
                raise ExprError(f"unknown generator {lab!r}", node.pos)
        return node.labels

    def _call(self, node: Call) -> Multivector:
        name, args = node.name, node.args
        try:
            if name == "int":
                return berezin_integrate(self(args[0]), self._set(args[1]))
            if name == "ft":
                return grassmann_fourier(self(args[0]), self._set(args[1]), self._set(args[2]))
            if name == "delta":
                return delta_function(self.sig, self._set(args[0]), self._set(args[1]))
            if name in ("exp_c", "pi_plus", "pi_minus"):
                h = validate_spin_hamiltonian(self(args[0]))
                if name == "exp_c":
                    return star_exponential(h, _real_scalar(self(args[1]), args[1].pos, "time"))
                pp, pm = wigner_projectors(h)
                return pp if name == "pi_plus" else pm
            if name == "rotor":
                return rotor(self(args[0]), _real_scalar(self(args[1]), args[1].pos, "angle"))
            if name == "lift":
                return operator_lift(self(args[0]))(self(args[1]))
        except ExprError:
            raise
        except (ValueError, KeyError) as exc:
            msg = exc.args[0] if exc.args else type(exc).__name__
            raise ExprError(f"{name}: {msg}", node.pos) from exc
        raise ExprError(f"unknown function {name!r}", node.pos)


def evaluate(source: str | Node, session: Session | None = None,
             bindings: Mapping[str, Multivector] | None = None) -> Multivector:
    session = Session.default() if session is None else session
    if bindings:
        session = Session(session.sig, {**session.bindings, **bindings})
    node = parse(source) if isinstance(source, str) else source
    return _Evaluator(session)(node)
