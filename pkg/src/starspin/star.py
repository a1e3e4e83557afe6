"""Clifford star product (differential and integral forms) and star powers/exponentials."""
from __future__ import annotations


from .berezin import integrate_sets, triple
from .exterior import (
    AlgebraSignature,
    Multivector,
    SignatureMismatch,
    _left_sign,
    _right_sign,
    dot_sets,
    grade_project,
    relabel,
    wedge,
    wedge_sign,
)

_KERNELS: dict[tuple[float, ...], dict[tuple[int, int], tuple[complex, int]]] = {}


def _contract(a: int, b: int, metric: tuple[float, ...]) -> tuple[complex, int]:
    """One blade pair through exp[eta_ij  <-d/ds_i  ->d/ds_j].

    The order-k term sums over k-subsets of the shared generators; a subset
    that leaves a shared generator uncontracted dies in the final wedge, so
    only the full overlap survives (and only if every shared generator
    carries a nonzero metric). The 1/k! is cancelled by the k! orderings of
    the mutually commuting pair operators.
    """
    common = a & b
    coeff = 1.0
    sign = 1
    i = 0
    rest = common
    while rest:
        if rest & 1:
            eta = metric[i]
            if eta == 0.0:
                return 0.0, 0
            coeff *= eta
            sign *= _right_sign(a, i) * _left_sign(b, i)
            a ^= 1 << i
            b ^= 1 << i
        rest >>= 1
        i += 1
    return coeff * sign * wedge_sign(a, b), a | b


def _kernel(sig: AlgebraSignature):
    return _KERNELS.setdefault(sig.metric, {})


def clifford_star(a: Multivector, b: Multivector) -> Multivector:
    if a.sig != b.sig:
        raise SignatureMismatch("multivectors live in different signatures")
    metric = a.sig.metric
    cache = _kernel(a.sig)
    out: dict[int, complex] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = (ka, kb)
            hit = cache.get(key)
            if hit is None:
                hit = cache[key] = _contract(ka, kb, metric)
            c, k = hit
            if c:
                out[k] = out.get(k, 0) + c * va * vb
    return Multivector(a.sig, out)


def star_commutator(a: Multivector, b: Multivector) -> Multivector:
    return a * b - b * a


def star_anticommutator(a: Multivector, b: Multivector) -> Multivector:
    return a * b + b * a


def _integral_signature(labels: tuple[str, ...]) -> tuple[AlgebraSignature, tuple, tuple, tuple]:
    base = tuple(labels)
    first = tuple(l + "'" for l in base)
    second = tuple(l + "''" for l in base)
    sig = AlgebraSignature(base + first + second, (0.0,) * (3 * len(base)))
    return sig, base, first, second


def clifford_star_integral(a: Multivector, b: Multivector) -> Multivector:
    """A * B  =  int d^3s' d^3s''  A(s') B(s'') exp[sum_i (s_i s'_i + s'_i s''_i + s''_i s_i)].

    Only defined on a three-generator Euclidean signature. The exponential
    is expanded as a finite wedge series in the nine-generator algebra.
    """
    if a.sig != b.sig:
        raise SignatureMismatch("multivectors live in different signatures")
    sig3 = a.sig
    if sig3.n != 3 or sig3.metric != (1.0, 1.0, 1.0):
        raise ValueError("the integral form needs a three-generator Euclidean signature")
    big, base, first, second = _integral_signature(sig3.labels)
    a1 = relabel(a, dict(zip(base, first)), big)
    b2 = relabel(b, dict(zip(base, second)), big)
    kernel = _exp_pair_kernel(big, base, first, second)
    integrand = wedge(wedge(a1, b2), kernel)
    res = integrate_sets(integrand, first, second)
    return relabel(res, {l: l for l in base}, sig3)


_PAIR_KERNELS: dict = {}


def _exp_pair_kernel(sig, s, s1, s2) -> Multivector:
    key = (sig, tuple(s), tuple(s1), tuple(s2))
    if key not in _PAIR_KERNELS:
        from .berezin import _exp_pairs
        action = dot_sets(sig, s, s1) + dot_sets(sig, s1, s2) + dot_sets(sig, s2, s)
        _PAIR_KERNELS[key] = _exp_pairs(action)
    return _PAIR_KERNELS[key]


def _homogeneous_grade(x: Multivector) -> int:
    gs = x.grades()
    if len(gs) > 1:
        raise ValueError("input must be homogeneous in grade")
    return gs.pop() if gs else 0


def inner_product(a: Multivector, b: Multivector) -> Multivector:
    """<A * B>_{|m-n|} for homogeneous A (grade m), B (grade n); for vectors, (AB + BA)/2."""
    m, n = _homogeneous_grade(a), _homogeneous_grade(b)
    return grade_project(a * b, abs(m - n))


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    """<A * B>_{m+n}; for vectors equal to (AB - BA)/2 = a ^ b."""
    m, n = _homogeneous_grade(a), _homogeneous_grade(b)
    return grade_project(a * b, m + n)


def scalar_part(a: Multivector, b: Multivector) -> Multivector:
    """Symmetric part of the star product of two vectors."""
    if a.grades() - {1} or b.grades() - {1}:
        raise ValueError("scalar_part expects grade-1 inputs")
    return star_anticommutator(a, b).scale(0.5)


def exterior_part(a: Multivector, b: Multivector) -> Multivector:
    """Antisymmetric part of the star product of two vectors."""
    if a.grades() - {1} or b.grades() - {1}:
        raise ValueError("exterior_part expects grade-1 inputs")
    return star_commutator(a, b).scale(0.5)


def n_fold_star(a: Multivector, n: int) -> Multivector:
    """a * a * ... * a (n factors); n = 0 gives 1. Uses repeated squaring."""
    if n < 0:
        raise ValueError("star power must be non-negative")
    result = Multivector.scalar(a.sig)
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def star_exp_series(x: Multivector, order: int = 40) -> Multivector:
    """Truncated sum_{k<=order} x^{k*}/k!."""
    term = Multivector.scalar(x.sig)
    total = term
    for k in range(1, order + 1):
        term = (term * x).scale(1 / k)
        total = total + term
    return total


def pseudoscalar(sig: AlgebraSignature, labels=None) -> Multivector:
    labels = sig.labels[:3] if labels is None else labels
    return Multivector.blade(sig, labels)


def bivector_basis(sig: AlgebraSignature) -> tuple[Multivector, Multivector, Multivector]:
    """B_i = I * s_i, i.e. (s2 s3, s3 s1, s1 s2)."""
    i3 = pseudoscalar(sig)
    return tuple(i3 * Multivector.generator(sig, l) for l in sig.labels[:3])


def quaternion_units(sig: AlgebraSignature) -> tuple[Multivector, Multivector, Multivector]:
    b1, b2, b3 = bivector_basis(sig)
    return b1, -b2, b3


def sigma(sig: AlgebraSignature | None = None):
    """Convenience: the generators of a Euclidean 3-signature."""
    sig = AlgebraSignature.euclidean(3) if sig is None else sig
    return tuple(Multivector.generator(sig, l) for l in sig.labels)


__all__ = [
    "clifford_star",
    "clifford_star_integral",
    "star_commutator",
    "star_anticommutator",
    "inner_product",
    "outer_product",
    "scalar_part",
    "exterior_part",
    "n_fold_star",
    "star_exp_series",
    "pseudoscalar",
    "bivector_basis",
    "quaternion_units",
    "triple",
]
