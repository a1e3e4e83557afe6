"""Polynomial phase-space functions, the Moyal product, and the combined Moyal-Clifford product."""
from __future__ import annotations

import math
import re
from itertools import product
from typing import Mapping, Sequence

from .exterior import AlgebraSignature, Multivector
from .star import _contract

PRUNE = 1e-14


class PhaseSpacePolynomial:
    """Sparse polynomial in (q1..qd, p1..pd) with complex coefficients.

    Keys are exponent tuples of length 2d, q exponents first.
    """

    __slots__ = ("d", "_terms")

    def __init__(self, d: int = 3, terms: Mapping[tuple[int, ...], complex] | None = None):
        self.d = d
        clean = {}
        for k, v in (terms or {}).items():
            k = tuple(int(e) for e in k)
            if len(k) != 2 * d or min(k, default=0) < 0:
                raise ValueError(f"bad exponent vector {k} for d={d}")
            if abs(v) > PRUNE:
                clean[k] = complex(v)
        self._terms = clean

    @classmethod
    def constant(cls, c: complex, d: int = 3) -> "PhaseSpacePolynomial":
        return cls(d, {(0,) * (2 * d): c})

    @classmethod
    def q(cls, i: int, d: int = 3) -> "PhaseSpacePolynomial":
        e = [0] * (2 * d)
        e[i - 1] = 1
        return cls(d, {tuple(e): 1.0})

    @classmethod
    def p(cls, i: int, d: int = 3) -> "PhaseSpacePolynomial":
        e = [0] * (2 * d)
        e[d + i - 1] = 1
        return cls(d, {tuple(e): 1.0})

    @property
    def terms(self) -> dict[tuple[int, ...], complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def norm(self) -> float:
        return max((abs(v) for v in self._terms.values()), default=0.0)

    def degree(self) -> int:
        return max((sum(k) for k in self._terms), default=0)

    def _coerce(self, other):
        if isinstance(other, PhaseSpacePolynomial):
            if other.d != self.d:
                raise ValueError("polynomials over different phase spaces")
            return other
        if isinstance(other, (int, float, complex)):
            return PhaseSpacePolynomial.constant(other, self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return PhaseSpacePolynomial(self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return PhaseSpacePolynomial(self.d, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Pointwise (commutative) product; numbers scale."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ka, va in self._terms.items():
            for kb, vb in other._terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return PhaseSpacePolynomial(self.d, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = PhaseSpacePolynomial.constant(other, self.d)
        if not isinstance(other, PhaseSpacePolynomial):
            return NotImplemented
        return self.d == other.d and self._terms == other._terms

    __hash__ = None

    def max_diff(self, other) -> float:
        return (self - other).norm()

    def derivative(self, var: int) -> "PhaseSpacePolynomial":
        """Partial derivative by variable index (0..d-1 are q, d..2d-1 are p)."""
        out: dict = {}
        for k, v in self._terms.items():
            if k[var]:
                e = list(k)
                e[var] -= 1
                out[tuple(e)] = out.get(tuple(e), 0) + v * k[var]
        return PhaseSpacePolynomial(self.d, out)

    def var_names(self) -> list[str]:
        return [f"q{i}" for i in range(1, self.d + 1)] + [f"p{i}" for i in range(1, self.d + 1)]

    def monomial_string(self, k: tuple[int, ...]) -> str:
        names = self.var_names()
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)

    def to_json_dict(self) -> dict[str, list[float]]:
        return {self.monomial_string(k): [v.real, v.imag] for k, v in sorted(self._terms.items())}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Sequence[float]], d: int = 3) -> "PhaseSpacePolynomial":
        names = {n: i for i, n in enumerate(cls(d).var_names())}
        terms: dict = {}
        for key, (re_, im) in data.items():
            e = [0] * (2 * d)
            for tok in key.split():
                m = re.fullmatch(r"([qp]\d+)(?:\^(\d+))?", tok)
                if not m or m.group(1) not in names:
                    raise ValueError(f"bad monomial {key!r}")
                e[names[m.group(1)]] += int(m.group(2) or 1)
            terms[tuple(e)] = terms.get(tuple(e), 0) + complex(re_, im)
        return cls(d, terms)

    def __repr__(self):
        if not self._terms:
            return "PhaseSpacePolynomial(0)"
        body = " + ".join(f"{v:.6g}*{self.monomial_string(k) or '1'}" for k, v in sorted(self._terms.items()))
        return f"PhaseSpacePolynomial({body})"


def _falling(n: int, k: int) -> int:
    return math.perm(n, k)


def moyal_star(f: PhaseSpacePolynomial, g: PhaseSpacePolynomial, hbar: float = 1.0) -> PhaseSpacePolynomial:
    """f exp[(i hbar/2) sum_i (<-d_qi ->d_pi - <-d_pi ->d_qi)] g, exact on polynomials.

    The pair operators commute, so the exponential factorizes into a
    multinomial sum over how often each pair fires; the series stops once
    the derivatives exhaust the exponents.
    """
    if f.d != g.d:
        raise ValueError("polynomials over different phase spaces")
    d = f.d
    half = 0.5j * hbar
    out: dict = {}
    for kf, vf in f.items():
        for kg, vg in g.items():
            # alpha_i: uses of <-d_qi ->d_pi ; beta_i: uses of <-d_pi ->d_qi
            ranges = [range(min(kf[i], kg[d + i]) + 1) for i in range(d)]
            ranges += [range(min(kf[d + i], kg[i]) + 1) for i in range(d)]
            for counts in product(*ranges):
                alpha, beta = counts[:d], counts[d:]
                c = vf * vg
                order = sum(counts)
                if order:
                    c *= half ** order * (-1) ** sum(beta)
                e = [0] * (2 * d)
                for i in range(d):
                    a, b = alpha[i], beta[i]
                    # left factor loses a q_i and b p_i; right factor loses a p_i and b q_i
                    c *= _falling(kf[i], a) * _falling(kf[d + i], b) * _falling(kg[d + i], a) * _falling(kg[i], b)
                    c /= math.factorial(a) * math.factorial(b)
                    e[i] = kf[i] - a + kg[i] - b
                    e[d + i] = kf[d + i] - b + kg[d + i] - a
                e = tuple(e)
                out[e] = out.get(e, 0) + c
    return PhaseSpacePolynomial(d, out)


def moyal_commutator(f, g, hbar: float = 1.0) -> PhaseSpacePolynomial:
    return moyal_star(f, g, hbar) - moyal_star(g, f, hbar)


def poisson_bracket(f: PhaseSpacePolynomial, g: PhaseSpacePolynomial) -> PhaseSpacePolynomial:
    d = f.d
    out = PhaseSpacePolynomial(d)
    for i in range(d):
        out = out + f.derivative(i) * g.derivative(d + i) - f.derivative(d + i) * g.derivative(i)
    return out


class PhaseSpaceMultivector:
    """Blade bitmask -> PhaseSpacePolynomial, over a Grassmann signature and d phase-space pairs."""

    __slots__ = ("sig", "d", "_terms")

    def __init__(self, sig: AlgebraSignature, d: int = 3,
                 terms: Mapping[int, PhaseSpacePolynomial] | None = None):
        self.sig = sig
        self.d = d
        self._terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def from_multivector(cls, mv: Multivector, d: int = 3) -> "PhaseSpaceMultivector":
        return cls(mv.sig, d, {k: PhaseSpacePolynomial.constant(v, d) for k, v in mv.items()})

    @classmethod
    def from_polynomial(cls, sig: AlgebraSignature, poly: PhaseSpacePolynomial, blade: int = 0):
        return cls(sig, poly.d, {blade: poly})

    def items(self):
        return self._terms.items()

    def coeff(self, blade=0) -> PhaseSpacePolynomial:
        if not isinstance(blade, int):
            blade = self.sig.mask(blade.split() if isinstance(blade, str) else blade)
        return self._terms.get(blade, PhaseSpacePolynomial(self.d))

    def grade(self, k: int) -> "PhaseSpaceMultivector":
        return PhaseSpaceMultivector(self.sig, self.d, {m: v for m, v in self._terms.items() if m.bit_count() == k})

    def norm(self) -> float:
        return max((v.norm() for v in self._terms.values()), default=0.0)

    def _check(self, other: "PhaseSpaceMultivector"):
        if other.sig != self.sig or other.d != self.d:
            raise ValueError("phase-space multivectors over different signatures")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out[k] + v if k in out else v
        return PhaseSpaceMultivector(self.sig, self.d, out)

    def __neg__(self):
        return PhaseSpaceMultivector(self.sig, self.d, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: complex) -> "PhaseSpaceMultivector":
        return PhaseSpaceMultivector(self.sig, self.d, {k: v * c for k, v in self._terms.items()})

    def max_diff(self, other) -> float:
        return (self - other).norm()

    def to_multivector(self) -> Multivector:
        """Drop to a plain multivector; every coefficient must be constant."""
        zero = (0,) * (2 * self.d)
        out = {}
        for k, v in self._terms.items():
            if set(v.terms) - {zero}:
                raise ValueError("coefficient is not constant")
            out[k] = v.terms.get(zero, 0)
        return Multivector(self.sig, out)

    def to_json_dict(self) -> dict:
        return {self.sig.blade_string(k): v.to_json_dict()
                for k, v in sorted(self._terms.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))}


def combined_star(a: PhaseSpaceMultivector, b: PhaseSpaceMultivector, hbar: float = 1.0) -> PhaseSpaceMultivector:
    """Moyal product on the coefficients tensored with the Clifford star on the blades."""
    a._check(b)
    metric = a.sig.metric
    out: dict[int, PhaseSpacePolynomial] = {}
    for ka, fa in a.items():
        for kb, fb in b.items():
            c, k = _contract(ka, kb, metric)
            if not c:
                continue
            term = moyal_star(fa, fb, hbar) * c
            out[k] = out[k] + term if k in out else term
    return PhaseSpaceMultivector(a.sig, a.d, out)


def symmetric_gauge_potential(field: Sequence[float]) -> tuple[PhaseSpacePolynomial, ...]:
    """A = (B x q)/2 componentwise: (B2 q3 - B3 q2, B3 q1 - B1 q3, B1 q2 - B2 q1)/2."""
    b1, b2, b3 = field
    q1, q2, q3 = (PhaseSpacePolynomial.q(i) for i in (1, 2, 3))
    return ((q3 * b2 - q2 * b3) * 0.5, (q1 * b3 - q3 * b1) * 0.5, (q2 * b1 - q1 * b2) * 0.5)


def vector_field(sig: AlgebraSignature, comps: Sequence[PhaseSpacePolynomial]) -> PhaseSpaceMultivector:
    return PhaseSpaceMultivector(sig, comps[0].d, {1 << i: c for i, c in enumerate(comps)})


def gradient_product(sig: AlgebraSignature, comps: Sequence[PhaseSpacePolynomial]) -> PhaseSpaceMultivector:
    """(sum_i s_i d/dq_i) * (sum_j A_j s_j) with the Clifford star on the blades."""
    out: dict[int, PhaseSpacePolynomial] = {}
    for i in range(3):
        for j, aj in enumerate(comps):
            c, k = _contract(1 << i, 1 << j, sig.metric)
            if not c:
                continue
            term = aj.derivative(i) * c
            out[k] = out[k] + term if k in out else term
    return PhaseSpaceMultivector(sig, comps[0].d, out)


def landau_split(field: Sequence[float], e: float, m: float, hbar: float = 1.0,
                 sig: AlgebraSignature | None = None):
    """Square the kinetic vector (p + eA)_i s_i under the combined product.

    Returns (H, H0, HS): the full Hamiltonian (1/2m) [(p_i + e A_i) s_i]^{2*},
    its scalar (orbital) part, and its bivector (spin) part.
    """
    if m == 0:
        raise ValueError("mass must be nonzero")
    sig = AlgebraSignature.euclidean(3) if sig is None else sig
    pot = symmetric_gauge_potential(field)
    kinetic = vector_field(sig, [PhaseSpacePolynomial.p(i + 1) + pot[i] * e for i in range(3)])
    h = combined_star(kinetic, kinetic, hbar).scale(1 / (2 * m))
    return h, h.grade(0), h.grade(2)


def landau_expected(field: Sequence[float], e: float, m: float, hbar: float = 1.0,
                    sig: AlgebraSignature | None = None):
    """Closed-form split: H0 = (1/2m) sum (p_i + eA_i)^{2*M},  HS = sum eps_ikl (hbar w_i / 4i) s_k s_l."""
    sig = AlgebraSignature.euclidean(3) if sig is None else sig
    pot = symmetric_gauge_potential(field)
    h0 = PhaseSpacePolynomial(3)
    for i in range(3):
        k = PhaseSpacePolynomial.p(i + 1) + pot[i] * e
        h0 = h0 + moyal_star(k, k, hbar)
    h0 = h0 * (1 / (2 * m))
    omega = [e * b / m for b in field]
    hs = Multivector.zero(sig)
    for (i, k, l), eps in _LEVI_CIVITA.items():
        hs = hs + Multivector.blade(sig, (sig.labels[k], sig.labels[l]), eps * hbar * omega[i] / 4j)
    return (PhaseSpaceMultivector.from_polynomial(sig, h0),
            PhaseSpaceMultivector.from_multivector(hs))


_LEVI_CIVITA = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
