"""Discretized fermionic propagator and Green's functions on sets of Grassmann generators.

Green's functions are pure Grassmann (metric 0) multivectors in two sets,
an outgoing set and an incoming one. Propagation integrates the incoming
set against a wave function; composition integrates an intermediate set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .berezin import (
    _exp_pairs,
    berezin_integrate,
    delta_function,
    linear_substitution,
    triple,
)
from .exterior import (
    MAX_GENERATORS,
    AlgebraSignature,
    Multivector,
    dot_sets,
    relabel,
    substitute,
    wedge,
)
from .spin import SpinHamiltonian, star_exponential
from .star import clifford_star_integral, n_fold_star

T_SET = triple("_t")
T0_SET = triple("_0")
PRIME_SET = triple("'")


class LatticeCapacityError(ValueError):
    pass


def boundary_signature(out=T_SET, inp=T0_SET) -> AlgebraSignature:
    return AlgebraSignature(tuple(out) + tuple(inp), (0.0,) * (len(out) + len(inp)))


@dataclass(frozen=True)
class SliceLattice:
    """Generator sets s_0 ... s_N for a time interval split into N slices.

    s_0 is the initial boundary set, s_N the final one; one extra set
    (s') serves as the Fourier integration variable of a single slice.
    """

    n: int
    t: float
    t0: float = 0.0
    sets: tuple = field(init=False)
    prime: tuple = field(init=False)
    sig: AlgebraSignature = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one slice")
        total = 3 * (self.n + 2)
        if total > MAX_GENERATORS:
            raise LatticeCapacityError(
                f"{self.n} slices need {total} generators, more than {MAX_GENERATORS}")
        sets = tuple(triple(f"_{m}") for m in range(self.n + 1))
        labels = tuple(l for s in sets for l in s) + PRIME_SET
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "prime", PRIME_SET)
        object.__setattr__(self, "sig", AlgebraSignature(labels, (0.0,) * len(labels)))

    @property
    def dt(self) -> float:
        return (self.t - self.t0) / self.n


def _in_sig(e: Multivector, sig: AlgebraSignature, images: dict) -> Multivector:
    return substitute(e, images, sig)


def _gen(sig, lab) -> Multivector:
    return Multivector.generator(sig, lab)


class OddPropagatorError(ValueError):
    """The star exponential has odd components, so it does not commute with the measures."""


def _slice_exponential(h: SpinHamiltonian, dt: float, real: bool = False) -> Multivector:
    e = star_exponential(h, dt, real)
    if not e.is_even(1e-14):
        raise OddPropagatorError("Green's functions need an even star exponential "
                                 "(a bivector Hamiltonian, or a vector one in the real algebra)")
    return e


def greens_function_delta_form(h: SpinHamiltonian, dt: float, out=T_SET, inp=T0_SET,
                               real: bool = False) -> Multivector:
    """Exp_C(H(s_out) dt) * delta(s_out - s_in), the star acting on s_out only.

    The delta is prod_i (s_in,i - s_out,i), the kernel that sifts
    int d^3 s_in  delta  psi(s_in) = psi(s_out).
    """
    star_sig = AlgebraSignature(tuple(out) + tuple(inp), (1.0,) * len(out) + (0.0,) * len(inp))
    e = _in_sig(_slice_exponential(h, dt, real), star_sig,
                {a: _gen(star_sig, b) for a, b in zip(h.sig.labels, out)})
    g = e * delta_function(star_sig, inp, out)
    return relabel(g, {l: l for l in star_sig.labels}, boundary_signature(out, inp))


def _three_set_signature(out, inp, prime=PRIME_SET) -> AlgebraSignature:
    labels = tuple(out) + tuple(inp) + tuple(prime)
    return AlgebraSignature(labels, (0.0,) * len(labels))


def greens_function_integral_form(h: SpinHamiltonian, dt: float, out=T_SET, inp=T0_SET,
                                  sign: float = -1.0, real: bool = False) -> Multivector:
    """sign * int d^3s'  Exp_C(H(s') dt) exp(s_out.s' + s'.s_in + s_in.s_out).

    The leading sign defaults to -1, the value for which this agrees with
    the delta form under the sifting delta above.
    """
    sig = _three_set_signature(out, inp)
    e = _in_sig(_slice_exponential(h, dt, real), sig,
                {a: _gen(sig, b) for a, b in zip(h.sig.labels, PRIME_SET)})
    action = dot_sets(sig, out, PRIME_SET) + dot_sets(sig, PRIME_SET, inp) + dot_sets(sig, inp, out)
    g = berezin_integrate(wedge(e, _exp_pairs(action)), PRIME_SET).scale(sign)
    return relabel(g, {l: l for l in tuple(out) + tuple(inp)}, boundary_signature(out, inp))


def greens_function_fourier_form(h: SpinHamiltonian, dt: float, out=T_SET, inp=T0_SET,
                                 sig: AlgebraSignature | None = None, prime=PRIME_SET,
                                 real: bool = False) -> Multivector:
    """int d^3s'  Exp_C(H(s_out - s') dt) exp(s'.(s_out - s_in)).

    Returned in ``sig`` if given (which must contain out, inp and prime),
    else in the boundary signature of (out, inp).
    """
    work = _three_set_signature(out, inp, prime) if sig is None else sig
    images = {a: _gen(work, o) - _gen(work, p) for a, o, p in zip(h.sig.labels, out, prime)}
    e = _in_sig(_slice_exponential(h, dt, real), work, images)
    action = dot_sets(work, prime, out) - dot_sets(work, prime, inp)
    g = berezin_integrate(wedge(e, _exp_pairs(action)), prime)
    if sig is not None:
        return g
    return relabel(g, {l: l for l in tuple(out) + tuple(inp)}, boundary_signature(out, inp))


def _sets_of(g: Multivector, out, inp) -> None:
    for lab in tuple(out) + tuple(inp):
        g.sig.index(lab)


def propagate(psi: Multivector, g: Multivector, out=T_SET, inp=T0_SET) -> Multivector:
    """psi(s_out) = int d^3s_in  G(s_out; s_in) psi(s_in).

    ``psi`` may live in any three-generator signature; its generators are
    read as the incoming set. The result lives in the Euclidean signature
    of the outgoing labels.
    """
    try:
        _sets_of(g, out, inp)
    except KeyError as exc:
        raise ValueError(f"Green's function lacks generator {exc}") from None
    if psi.sig.n != len(inp):
        raise ValueError("wave function and incoming set differ in size")
    p = relabel(psi, dict(zip(psi.sig.labels, inp)), g.sig)
    res = berezin_integrate(wedge(g, p), inp)
    return relabel(res, {l: l for l in out}, AlgebraSignature(tuple(out), (1.0,) * len(out)))


def compose_propagators(g21: Multivector, g10: Multivector, out=T_SET, inp=T0_SET,
                        mid=triple("_m")) -> Multivector:
    """G(t2; t0) = int d^3s_mid  G(t2; t1) G(t1; t0), later factor on the left.

    Both factors and the result are Green's functions on (out, inp); the
    incoming set of ``g21`` and the outgoing set of ``g10`` are moved to
    ``mid`` before integrating it.
    """
    for g in (g21, g10):
        try:
            _sets_of(g, out, inp)
        except KeyError as exc:
            raise ValueError(f"propagator lacks generator {exc}") from None
    labels = tuple(out) + tuple(mid) + tuple(inp)
    sig = AlgebraSignature(labels, (0.0,) * len(labels))
    a = relabel(g21, {**{l: l for l in out}, **dict(zip(inp, mid))}, sig)
    b = relabel(g10, {**dict(zip(out, mid)), **{l: l for l in inp}}, sig)
    res = berezin_integrate(wedge(a, b), mid)
    return relabel(res, {l: l for l in tuple(out) + tuple(inp)}, boundary_signature(out, inp))


def _place(g: Multivector, src, dst) -> Multivector:
    """Move a Green's function between lattice sets by a permutation substitution."""
    m = np.eye(len(src))
    moved, jac = linear_substitution(g, m, src, dst)
    if abs(jac - 1) > 1e-12:
        raise AssertionError("slice relabeling must have unit jacobian")
    return moved


def sliced_propagator(h: SpinHamiltonian, lattice: SliceLattice, real: bool = False) -> Multivector:
    """Exp_C(H t) from N Green's-function slices, integrating s_1 ... s_{N-1} in turn.

    Each slice is the Fourier-form Green's function between neighbouring
    sets; the element of the algebra is read off by propagating the
    constant wave function 1.
    """
    sig, sets = lattice.sig, lattice.sets
    base = greens_function_fourier_form(h, lattice.dt, sets[1], sets[0], sig=sig,
                                       prime=lattice.prime, real=real)
    acc = base
    for k in range(1, lattice.n):
        step = _place(base, sets[1] + sets[0], sets[k + 1] + sets[k])
        acc = berezin_integrate(wedge(step, acc), sets[k])
    e = berezin_integrate(acc, sets[0])  # propagate psi = 1
    return relabel(e, dict(zip(sets[-1], h.sig.labels)), h.sig)


def integral_star_power(h: SpinHamiltonian, dt: float, n: int) -> Multivector:
    """[Exp_C(H dt)]^{n*} with every product taken in the Berezin integral form."""
    e = star_exponential(h, dt)
    acc = e
    for _ in range(n - 1):
        acc = clifford_star_integral(e, acc)
    return acc


@dataclass(frozen=True)
class PropagatorResult:
    value: Multivector
    closed_form: Multivector
    star_power: Multivector

    @property
    def deviation(self) -> float:
        return self.value.max_diff(self.closed_form)


def discretized_propagator(h: SpinHamiltonian, t: float, n: int, tol: float = 1e-9,
                           details: bool = False, real: bool = False):
    """[Exp_C(H t/N)]^{N*} evaluated on a slice lattice.

    Route (a) is the star power of the closed-form slice exponential,
    route (b) the lattice evaluation; they must agree within ``tol``.
    Returns (b), or a PropagatorResult when ``details`` is set.
    """
    lattice = SliceLattice(n, t)
    a = n_fold_star(star_exponential(h, lattice.dt, real), n)
    b = sliced_propagator(h, lattice, real)
    if a.max_diff(b) > tol:
        raise AssertionError(f"slice routes disagree by {a.max_diff(b):.3e}")
    if details:
        return PropagatorResult(b, star_exponential(h, t, real), a)
    return b
