"""Berezin integration and the Grassmann Fourier / delta machinery built on it."""
from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from .exterior import (
    AlgebraSignature,
    Multivector,
    dot_sets,
    exp_wedge,
    left_derivative,
    substitute,
    wedge,
)

GeneratorSet = Sequence[str]


class GaussianParityWarning(UserWarning):
    """Raised (as a warning) for odd slice counts, where the pair integral is not 1."""


def triple(suffix: str = "", prefix: str = "s") -> tuple[str, str, str]:
    return tuple(f"{prefix}{i}{suffix}" for i in (1, 2, 3))


def _check_set(sig: AlgebraSignature, s: GeneratorSet) -> None:
    for lab in s:
        sig.index(lab)
    if len(set(s)) != len(s):
        raise ValueError(f"repeated generator in {tuple(s)}")


def _check_disjoint(a: GeneratorSet, b: GeneratorSet) -> None:
    if set(a) & set(b):
        raise ValueError(f"generator sets {tuple(a)} and {tuple(b)} overlap")


def berezin_integrate(a: Multivector, s: GeneratorSet) -> Multivector:
    """Iterated Berezin integral over ``s``.

    The first listed generator is integrated first, so for s = (s1, s2, s3)
    this is  int ds3 int ds2 int ds1  and  int d^3s (s1 s2 s3) = 1.
    Each single integral is the left derivative.
    """
    _check_set(a.sig, s)
    for lab in s:
        a = left_derivative(a, lab)
    return a


def integrate_sets(a: Multivector, *sets: GeneratorSet) -> Multivector:
    """``int d^3 sets[0] d^3 sets[1] ... a``: the rightmost measure acts first."""
    for s in reversed(sets):
        a = berezin_integrate(a, s)
    return a


def top_coefficient(a: Multivector, s: GeneratorSet) -> complex:
    return berezin_integrate(a, s).scalar_part


def delta_function(sig: AlgebraSignature, s: GeneratorSet, s_prime: GeneratorSet) -> Multivector:
    """prod_i (s_i - s'_i), in listed order.

    Integrating over ``s`` against f(s), with the delta on the left, returns
    f(s'); this is delta(s' - s) in the usual notation.
    """
    _check_set(sig, s)
    _check_set(sig, s_prime)
    _check_disjoint(s, s_prime)
    if len(s) != len(s_prime):
        raise ValueError("generator sets differ in length")
    out = Multivector.scalar(sig)
    for a, b in zip(s, s_prime):
        out = wedge(out, Multivector.generator(sig, a) - Multivector.generator(sig, b))
    return out


def sift(f: Multivector, s: GeneratorSet, s_prime: GeneratorSet) -> Multivector:
    """int d^3s delta(s' - s) f(s)."""
    return berezin_integrate(wedge(delta_function(f.sig, s, s_prime), f), s)


def grassmann_fourier(f: Multivector, src: GeneratorSet, dst: GeneratorSet) -> Multivector:
    """F(dst) = int d^3src f(src) exp(i src.dst)."""
    _check_set(f.sig, src)
    _check_set(f.sig, dst)
    _check_disjoint(src, dst)
    kernel = exp_wedge(dot_sets(f.sig, src, dst).scale(1j))
    return berezin_integrate(wedge(f, kernel), src)


def inverse_grassmann_fourier(F: Multivector, src: GeneratorSet, dst: GeneratorSet) -> Multivector:
    """f(dst) = -i int d^3src F(src) exp(i src.dst), with ``src`` the transformed set."""
    _check_set(F.sig, src)
    _check_set(F.sig, dst)
    _check_disjoint(src, dst)
    kernel = exp_wedge(dot_sets(F.sig, src, dst).scale(1j))
    return berezin_integrate(wedge(F, kernel), src).scale(-1j)


def linear_substitution(a: Multivector, matrix, src: GeneratorSet, dst: GeneratorSet) -> tuple[Multivector, complex]:
    """Replace src_i by sum_j M_ij dst_j.

    Returns the substituted multivector and det(M). For ``a`` free of
    ``dst`` generators (or src == dst),
    int d dst  a(M dst) = det(M) * int d src  a(src).
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (len(src), len(dst)) or m.shape[0] != m.shape[1]:
        raise ValueError("substitution matrix must be square and match the generator sets")
    _check_set(a.sig, src)
    _check_set(a.sig, dst)
    det = complex(np.linalg.det(m))
    if abs(det) < 1e-12:
        raise np.linalg.LinAlgError("singular substitution matrix")
    images = {}
    for i, lab in enumerate(src):
        images[lab] = Multivector(a.sig, {1 << a.sig.index(d): m[i, j] for j, d in enumerate(dst)})
    return substitute(a, images), det


def gaussian_pair_integral(n_slices: int, prefix: str = "s") -> complex:
    """int prod_m d^3 s_m  exp(sum_{n=1}^{N-1} s_{n+1}.s_n).

    The measure is read like the single-set one: the set of slice 1 is
    integrated first. Equals 1 for even N; for odd N the chain has an
    unpaired zero mode and the value (0) is returned with a warning.
    """
    if n_slices < 1:
        raise ValueError("need at least one slice")
    sets = [triple(f"_{m}", prefix) for m in range(1, n_slices + 1)]
    sig = AlgebraSignature(tuple(l for s in sets for l in s), (0.0,) * (3 * n_slices))
    action = Multivector.zero(sig)
    for n in range(n_slices - 1):
        action = action + dot_sets(sig, sets[n + 1], sets[n])
    integrand = _exp_pairs(action)
    value = integrate_sets(integrand, *reversed(sets)).scalar_part
    if n_slices % 2:
        warnings.warn(f"Gaussian pair integral with odd N={n_slices} is not normalized",
                      GaussianParityWarning, stacklevel=2)
    return value


def _exp_pairs(x: Multivector) -> Multivector:
    # exp of a sum of commuting, square-zero even terms factorizes
    if x.grades() - {2}:
        return exp_wedge(x)
    out = Multivector.scalar(x.sig)
    for mask, c in x.items():
        out = out + wedge(out, Multivector(x.sig, {mask: c}))
    return out


def star_under_integral(a: Multivector, b: Multivector, s: GeneratorSet | None = None) -> tuple[complex, complex]:
    """(int d^3s a*b, int d^3s a^b) over a three-generator Euclidean set."""
    s = a.sig.labels if s is None else tuple(s)
    lhs = berezin_integrate(a * b, s).scalar_part
    rhs = berezin_integrate(wedge(a, b), s).scalar_part
    return lhs, rhs
