"""Sparse Grassmann multivectors over a finite set of anticommuting generators.

A blade is stored as a bitmask (bit ``i`` set means generator ``i`` is
present) and always in ascending generator order; any permutation sign is
folded into the coefficient.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import config

MAX_GENERATORS = 24
PRUNE = 1e-14

__all__ = [
    "AlgebraSignature",
    "Multivector",
    "SignatureMismatch",
    "wedge",
    "grade_project",
    "reversion",
    "left_derivative",
    "right_derivative",
    "is_real",
    "substitute",
    "relabel",
]


class SignatureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraSignature:
    labels: tuple[str, ...]
    metric: tuple[float, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        metric = tuple(float(x) for x in self.metric)
        if len(labels) != len(metric):
            raise ValueError("metric length must equal the number of generators")
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        if len(labels) > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators are supported")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @classmethod
    def euclidean(cls, n: int = 3, prefix: str = "s") -> "AlgebraSignature":
        return cls(tuple(f"{prefix}{i}" for i in range(1, n + 1)), (1.0,) * n)

    @classmethod
    def replicated(cls, n: int = 3, suffixes: Sequence[str] = ("", "'", "''"),
                   euclidean: Sequence[str] = ("",), prefix: str = "s") -> "AlgebraSignature":
        """Several copies of an ``n``-generator set, e.g. s1..s3, s1'..s3', s1''..s3''.

        Only the copies named in ``euclidean`` carry a unit metric; the others
        are inert (metric 0) so the star product never contracts them.
        """
        labels, metric = [], []
        for suf in suffixes:
            for i in range(1, n + 1):
                labels.append(f"{prefix}{i}{suf}")
                metric.append(1.0 if suf in euclidean else 0.0)
        return cls(tuple(labels), tuple(metric))

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.n:
                raise KeyError(f"generator index {label} out of range")
            return int(label)
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown generator {label!r}") from None

    def mask(self, labels: Iterable) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def blade_labels(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in range(self.n) if mask >> i & 1)

    def blade_string(self, mask: int) -> str:
        return " ".join(self.blade_labels(mask))


# -- bitmask kernels ---------------------------------------------------------

@lru_cache(maxsize=1 << 20)
def wedge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation (blade a)(blade b) into ascending order."""
    swaps = 0
    a >>= 1
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def _left_sign(mask: int, i: int) -> int:
    # generators standing in front of i
    return -1 if (mask & ((1 << i) - 1)).bit_count() & 1 else 1


def _right_sign(mask: int, i: int) -> int:
    # generators standing behind i
    return -1 if (mask >> (i + 1)).bit_count() & 1 else 1


def _pruned(terms: Mapping[int, complex]) -> dict[int, complex]:
    return {k: complex(v) for k, v in terms.items() if abs(v) > PRUNE}


# -- the value type -----------------------------------------------------------

class Multivector:
    """Immutable sparse map blade-bitmask -> complex coefficient.

    ``*`` is the Clifford star product of the signature's metric, ``^`` is the
    wedge product; plain numbers act as scalars.
    """

    __slots__ = ("sig", "_terms")

    def __init__(self, sig: AlgebraSignature, terms: Mapping[int, complex] | None = None):
        self.sig = sig
        terms = _pruned(terms or {})
        limit = 1 << sig.n
        for k in terms:
            if not 0 <= k < limit:
                raise ValueError(f"blade bitmask {k} out of range for {sig.n} generators")
        self._terms = terms

    # construction
    @classmethod
    def scalar(cls, sig: AlgebraSignature, c: complex = 1.0) -> "Multivector":
        return cls(sig, {0: c})

    @classmethod
    def zero(cls, sig: AlgebraSignature) -> "Multivector":
        return cls(sig)

    @classmethod
    def generator(cls, sig: AlgebraSignature, label) -> "Multivector":
        return cls(sig, {1 << sig.index(label): 1.0})

    @classmethod
    def blade(cls, sig: AlgebraSignature, labels: Sequence, coeff: complex = 1.0) -> "Multivector":
        """Wedge of the listed generators in the given order."""
        mask, sign = 0, 1
        for lab in labels:
            bit = 1 << sig.index(lab)
            if mask & bit:
                return cls(sig)
            sign *= wedge_sign(mask, bit)
            mask |= bit
        return cls(sig, {mask: sign * coeff})

    @classmethod
    def from_terms(cls, sig: AlgebraSignature, terms: Mapping[str | tuple, complex]) -> "Multivector":
        """Build from ``{"s1 s2": c, "": c0}`` or ``{("s1", "s2"): c}`` (listed order)."""
        out = cls(sig)
        for key, c in terms.items():
            labels = key.split() if isinstance(key, str) else key
            out = out + cls.blade(sig, labels, c)
        return out

    # access
    @property
    def terms(self) -> dict[int, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms))

    def coeff(self, blade=0) -> complex:
        if not isinstance(blade, (int, np.integer)):
            blade = self.sig.mask(blade.split() if isinstance(blade, str) else blade)
        return self._terms.get(int(blade), 0j)

    @property
    def scalar_part(self) -> complex:
        return self._terms.get(0, 0j)

    def grades(self) -> set[int]:
        return {k.bit_count() for k in self._terms}

    def support(self) -> int:
        m = 0
        for k in self._terms:
            m |= k
        return m

    def is_zero(self, tol: float | None = None) -> bool:
        return self.norm() <= (config.tolerance() if tol is None else tol)

    def is_scalar(self, tol: float | None = None) -> bool:
        tol = config.tolerance() if tol is None else tol
        return all(abs(v) <= tol for k, v in self._terms.items() if k)

    def is_even(self, tol: float | None = None) -> bool:
        tol = config.tolerance() if tol is None else tol
        return all(abs(v) <= tol for k, v in self._terms.items() if k.bit_count() & 1)

    def norm(self) -> float:
        """Largest coefficient magnitude."""
        return max((abs(v) for v in self._terms.values()), default=0.0)

    def max_diff(self, other) -> float:
        return (self - other).norm()

    def isclose(self, other, tol: float | None = None) -> bool:
        return self.max_diff(other) <= (config.tolerance() if tol is None else tol)

    def to_vector(self) -> np.ndarray:
        """Dense coefficient array indexed by bitmask."""
        v = np.zeros(1 << self.sig.n, dtype=complex)
        for k, c in self._terms.items():
            v[k] = c
        return v

    @classmethod
    def from_vector(cls, sig: AlgebraSignature, v) -> "Multivector":
        return cls(sig, {i: c for i, c in enumerate(np.asarray(v, dtype=complex)) if c != 0})

    # arithmetic
    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureMismatch("multivectors live in different signatures")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Multivector.scalar(self.sig, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return Multivector(self.sig, out)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.sig, {k: -v for k, v in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: complex) -> "Multivector":
        return Multivector(self.sig, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Multivector):
            from .star import clifford_star
            return clifford_star(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(1 / other)
        return NotImplemented

    def __xor__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return wedge(self, other)

    def __rxor__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return wedge(other, self)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Multivector.scalar(self.sig, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and self._terms == other._terms

    __hash__ = None

    # unary operations
    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def reverse(self) -> "Multivector":
        return reversion(self)

    @property
    def bar(self) -> "Multivector":
        return reversion(self)

    def conjugate(self) -> "Multivector":
        """Complex conjugation of the coefficients only."""
        return Multivector(self.sig, {k: v.conjugate() for k, v in self._terms.items()})

    def ld(self, label) -> "Multivector":
        return left_derivative(self, label)

    def rd(self, label) -> "Multivector":
        return right_derivative(self, label)

    # I/O
    def to_json_dict(self) -> dict[str, list[float]]:
        return {self.sig.blade_string(k): [v.real, v.imag]
                for k, v in sorted(self._terms.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, sig: AlgebraSignature, data: str | Mapping) -> "Multivector":
        if isinstance(data, str):
            data = json.loads(data)
        terms = {}
        for key, (re, im) in data.items():
            labels = key.split()
            mask = sig.mask(labels)
            if list(sig.blade_labels(mask)) != labels:
                raise ValueError(f"blade {key!r} is not in canonical ascending order")
            terms[mask] = complex(re, im)
        return cls(sig, terms)

    def __str__(self):
        from .printing import format_multivector
        return format_multivector(self)

    def __repr__(self):
        return f"Multivector({self})"


# -- operations ---------------------------------------------------------------

def _same_sig(a: Multivector, b: Multivector) -> None:
    if a.sig != b.sig:
        raise SignatureMismatch("multivectors live in different signatures")


def wedge(a: Multivector, b: Multivector) -> Multivector:
    _same_sig(a, b)
    out: dict[int, complex] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            if ka & kb:
                continue
            k = ka | kb
            out[k] = out.get(k, 0) + wedge_sign(ka, kb) * va * vb
    return Multivector(a.sig, out)


def grade_project(a: Multivector, k: int) -> Multivector:
    return Multivector(a.sig, {m: v for m, v in a.items() if m.bit_count() == k})


def reversion(a: Multivector) -> Multivector:
    """Reverse generator order and conjugate coefficients (the bar involution)."""
    out = {}
    for m, v in a.items():
        g = m.bit_count()
        sign = -1 if (g * (g - 1) // 2) & 1 else 1
        out[m] = sign * v.conjugate()
    return Multivector(a.sig, out)


def left_derivative(a: Multivector, label) -> Multivector:
    """Anticommute the generator to the front of each blade, then delete it."""
    i = a.sig.index(label)
    bit = 1 << i
    return Multivector(a.sig, {m ^ bit: _left_sign(m, i) * v for m, v in a.items() if m & bit})


def right_derivative(a: Multivector, label) -> Multivector:
    """Anticommute the generator to the back of each blade, then delete it."""
    i = a.sig.index(label)
    bit = 1 << i
    return Multivector(a.sig, {m ^ bit: _right_sign(m, i) * v for m, v in a.items() if m & bit})


def is_real(a: Multivector, tol: float | None = None) -> bool:
    return reversion(a).isclose(a, tol)


def substitute(a: Multivector, images: Mapping, target: AlgebraSignature | None = None) -> Multivector:
    """Algebra homomorphism of the Grassmann algebra fixed by generator images.

    ``images`` maps source generator labels to multivectors in ``target``
    (default: the source signature). Generators not listed map to the
    generator of the same label in ``target``. Images must be odd for the
    result to be a homomorphism; this is not checked.
    """
    target = a.sig if target is None else target
    img: dict[int, Multivector] = {}
    for lab, x in images.items():
        if x.sig != target:
            raise SignatureMismatch(f"image of {lab!r} is not in the target signature")
        img[a.sig.index(lab)] = x

    def gen_image(i: int) -> Multivector:
        if i not in img:
            img[i] = Multivector.generator(target, a.sig.labels[i])
        return img[i]

    cache: dict[int, Multivector] = {0: Multivector.scalar(target)}

    def blade_image(mask: int) -> Multivector:
        if mask in cache:
            return cache[mask]
        top = mask.bit_length() - 1
        res = wedge(blade_image(mask & ~(1 << top)), gen_image(top))
        cache[mask] = res
        return res

    out: dict[int, complex] = {}
    for m, v in a.items():
        for k, c in blade_image(m).items():
            out[k] = out.get(k, 0) + v * c
    return Multivector(target, out)


def relabel(a: Multivector, mapping: Mapping[str, str], target: AlgebraSignature | None = None) -> Multivector:
    """Rename generators, possibly into another signature (permutation substitution)."""
    target = a.sig if target is None else target
    images = {src: Multivector.generator(target, dst) for src, dst in mapping.items()}
    return substitute(a, images, target)


def random_multivector(sig: AlgebraSignature, rng: np.random.Generator, *, real: bool = False,
                       grades: Iterable[int] | None = None, support: int | None = None) -> Multivector:
    """Dense random multivector with normal coefficients (test and demo helper)."""
    grades = None if grades is None else set(grades)
    support = (1 << sig.n) - 1 if support is None else support
    terms = {}
    for m in range(1 << sig.n):
        if m & ~support or (grades is not None and m.bit_count() not in grades):
            continue
        c = rng.normal()
        if not real:
            c = complex(c, rng.normal())
        terms[m] = c
    return Multivector(sig, terms)


def exp_wedge(x: Multivector) -> Multivector:
    """Grassmann exponential of an even element: exp(scalar part) times a finite series."""
    c0 = x.scalar_part
    nil = x - c0
    if not nil.is_even(0.0):
        raise ValueError("exp_wedge needs an even argument")
    result = Multivector.scalar(x.sig)
    power = Multivector.scalar(x.sig)
    k = 1
    while True:
        power = wedge(power, nil).scale(1 / k)
        if not len(power):
            break
        result = result + power
        k += 1
    return result.scale(complex(np.exp(c0))) if c0 else result


def dot_sets(sig: AlgebraSignature, left: Sequence[str], right: Sequence[str]) -> Multivector:
    """The pairing sum_i left_i right_i between two equal-length generator sets."""
    if len(left) != len(right):
        raise ValueError("generator sets differ in length")
    out = Multivector.zero(sig)
    for a, b in zip(left, right):
        out = out + Multivector.blade(sig, (a, b))
    return out


def linear_combination(sig: AlgebraSignature, coeffs: Sequence[complex], labels: Sequence[str]) -> Multivector:
    return Multivector(sig, {1 << sig.index(l): c for c, l in zip(coeffs, labels)})
