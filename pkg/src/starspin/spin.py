"""Spin Hamiltonians, Wigner projectors, star exponentials, rotors and spinors.

Everything here lives in the three-generator Euclidean algebra; the star
product is the Clifford product of that signature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import config
from .berezin import berezin_integrate
from .exterior import AlgebraSignature, Multivector, left_derivative, reversion, wedge
from .star import bivector_basis, pseudoscalar

EUCLIDEAN3 = AlgebraSignature.euclidean(3)


class DegenerateHamiltonian(ValueError):
    pass


def _gens(sig: AlgebraSignature):
    return tuple(Multivector.generator(sig, l) for l in sig.labels[:3])


def _check_euclidean3(sig: AlgebraSignature) -> None:
    if sig.n != 3 or sig.metric != (1.0, 1.0, 1.0):
        raise ValueError("expected the three-generator Euclidean signature")


# -- Hamiltonians -------------------------------------------------------------

@dataclass(frozen=True)
class SpinHamiltonian:
    """A multivector H with zero scalar part whose star square is a positive real number."""

    H: Multivector
    abs_e: float

    @property
    def sig(self) -> AlgebraSignature:
        return self.H.sig

    @property
    def eigenvalues(self) -> tuple[float, float]:
        return self.abs_e, -self.abs_e


def validate_spin_hamiltonian(h: Multivector, tol: float = 1e-10) -> SpinHamiltonian:
    if abs(h.scalar_part) > tol:
        raise DegenerateHamiltonian("spin Hamiltonian must have zero scalar part")
    sq = h * h
    if not sq.is_scalar(tol):
        raise DegenerateHamiltonian("H * H is not a scalar")
    e2 = sq.scalar_part
    if abs(e2) < 1e-12:
        raise DegenerateHamiltonian("H * H vanishes")
    if abs(e2.imag) > tol or e2.real <= 0:
        raise DegenerateHamiltonian(f"H * H = {e2} is not a positive real number")
    return SpinHamiltonian(h, math.sqrt(e2.real))


def spin_hamiltonian_z(hbar_omega: float = 1.0, sig: AlgebraSignature = EUCLIDEAN3) -> SpinHamiltonian:
    """(hbar w / 2i) s1 s2: a magnetic field along the third axis."""
    return validate_spin_hamiltonian(Multivector.blade(sig, sig.labels[:2], hbar_omega / 2j))


def spin_hamiltonian_from_field(omega: Sequence[float], hbar: float = 1.0,
                                sig: AlgebraSignature = EUCLIDEAN3) -> SpinHamiltonian:
    """(hbar / 2i) sum_i w_i B_i, the bivector part produced by the Landau split."""
    b = bivector_basis(sig)
    h = Multivector.zero(sig)
    for w, bi in zip(omega, b):
        h = h + bi.scale(hbar * w / 2j)
    return validate_spin_hamiltonian(h)


def real_spin_hamiltonian_z(hbar_omega: float = 1.0, sig: AlgebraSignature = EUCLIDEAN3) -> SpinHamiltonian:
    """(hbar w / 2) s3, the same field in the real algebra."""
    return validate_spin_hamiltonian(Multivector.generator(sig, sig.labels[2]).scale(hbar_omega / 2))


def _unit(h: SpinHamiltonian) -> Multivector:
    return h.H.scale(1 / h.abs_e)


def wigner_projectors(h: SpinHamiltonian) -> tuple[Multivector, Multivector]:
    """pi_+- = (1 +- H/|E|)/2, eigenfunctions of H * . with eigenvalues +-|E|."""
    u = _unit(h)
    return (1 + u).scale(0.5), (1 - u).scale(0.5)


def star_exponential(h: SpinHamiltonian, t: float, real: bool = False) -> Multivector:
    """Exp_C(H t) = cos(|E| t) - i (H/|E|) sin(|E| t).

    With ``real=True`` the imaginary unit is replaced by the pseudoscalar
    (the real-algebra form e_*^{-I H t}).
    """
    u = _unit(h)
    if real:
        u = pseudoscalar(h.sig) * u
    else:
        u = u.scale(1j)
    a = h.abs_e * t
    return math.cos(a) - u.scale(math.sin(a))


def fourier_dirichlet(h: SpinHamiltonian, t: float, real: bool = False) -> Multivector:
    """sum_E pi_E e^{-iEt} (or pi_E * e_*^{-I E t} in the real algebra)."""
    pp, pm = wigner_projectors(h)
    a = h.abs_e * t
    if not real:
        return pp.scale(np.exp(-1j * a)) + pm.scale(np.exp(1j * a))
    i3 = pseudoscalar(h.sig)
    return pp * (math.cos(a) - i3.scale(math.sin(a))) + pm * (math.cos(a) + i3.scale(math.sin(a)))


def evolve_generator(label, h: SpinHamiltonian, t: float, real: bool = False) -> Multivector:
    """s_i(t) = bar(Exp) * s_i * Exp."""
    e = star_exponential(h, t, real)
    return reversion(e) * Multivector.generator(h.sig, label) * e


def spectral_residual(h: SpinHamiltonian) -> float:
    pp, pm = wigner_projectors(h)
    return h.H.max_diff(pp.scale(h.abs_e) - pm.scale(h.abs_e))


# -- rotors -------------------------------------------------------------------

def rotor(b: Multivector, phi: float, tol: float = 1e-10) -> Multivector:
    """R = e_*^{B phi/2} = cos(phi/2) + B sin(phi/2) for B * B = -1.

    With B = I * s3 = s1 s2 the map x -> R x bar(R) turns s1 towards -s2,
    i.e. rotate(rotor(s1 s2, pi/2), s1) = -s2.
    """
    if not (b * b).isclose(Multivector.scalar(b.sig, -1.0), tol):
        raise ValueError("rotor generator must satisfy B * B = -1")
    return math.cos(phi / 2) + b.scale(math.sin(phi / 2))


def axis_bivector(n: Sequence[float], sig: AlgebraSignature = EUCLIDEAN3) -> Multivector:
    """I * n for a unit axis n."""
    v = np.asarray(n, dtype=float)
    v = v / np.linalg.norm(v)
    vec = Multivector(sig, {1 << i: v[i] for i in range(3)})
    return pseudoscalar(sig) * vec


def rotate(r: Multivector, x: Multivector) -> Multivector:
    return r * x * reversion(r)


def rotor_between(a: Sequence[float], b: Sequence[float], sig: AlgebraSignature = EUCLIDEAN3) -> Multivector:
    """A rotor R with R a bar(R) = b for unit vectors a, b."""
    a = np.asarray(a, dtype=float) / np.linalg.norm(a)
    b = np.asarray(b, dtype=float) / np.linalg.norm(b)
    va = Multivector(sig, {1 << i: a[i] for i in range(3)})
    vb = Multivector(sig, {1 << i: b[i] for i in range(3)})
    c = float(a @ b)
    if c < -1 + 1e-12:
        # antiparallel: half-turn about any axis orthogonal to a
        perp = np.cross(a, [1.0, 0.0, 0.0])
        if np.linalg.norm(perp) < 1e-6:
            perp = np.cross(a, [0.0, 1.0, 0.0])
        return rotor(axis_bivector(perp, sig), math.pi)
    return (1 + vb * va).scale(1 / math.sqrt(2 * (1 + c)))


# -- ladder operators ---------------------------------------------------------

def _z_direction(h: SpinHamiltonian) -> np.ndarray:
    """Axis n with H = -i|E| I * n; raises for Hamiltonians not of this form."""
    tol = config.tolerance()
    n_mv = (pseudoscalar(h.sig) * _unit(h)).scale(-1j)
    if n_mv.grades() - {1} or any(abs(v.imag) > tol for _, v in n_mv.items()):
        raise ValueError("ladder operators need a Hamiltonian of the form -i|E| I*n with real axis n")
    return np.array([n_mv.coeff(1 << i).real for i in range(3)])


def ladder_operators(h: SpinHamiltonian, flavor: str = "vector", primed: bool = False) -> tuple[Multivector, Multivector]:
    """Lowering/raising pair (f, bar f) with bar f * pi_+ * f = pi_- and f * pi_- * bar f = pi_+.

    The field-along-s3 case is built as printed (f = pi_+ * s1 and its
    bivector variant s3 * f); other directions are the rotor-conjugated z
    operators.
    """
    if flavor not in ("vector", "bivector"):
        raise ValueError("flavor must be 'vector' or 'bivector'")
    sig = h.sig
    _check_euclidean3(sig)
    n = _z_direction(h)
    hz = spin_hamiltonian_z(2 * h.abs_e, sig)
    pp, _ = wigner_projectors(hz)
    s1, s2, s3 = _gens(sig)
    x = s2 if primed else s1
    f, fbar = pp * x, x * pp
    if flavor == "bivector":
        f, fbar = s3 * f, fbar * s3
    if np.allclose(n, [0.0, 0.0, 1.0], atol=1e-12):
        return f, fbar
    r = rotor_between([0.0, 0.0, 1.0], n, sig)
    return rotate(r, f), rotate(r, fbar)


def holomorphic_decomposition(sig: AlgebraSignature = EUCLIDEAN3) -> dict[str, float]:
    """Residuals of the relations between s1, s2, the z projectors and the ladder pair.

    The pseudoscalar-like element -i s1 s2 is checked both as 2 f^bar f
    (wedge) and as 2 f*bar f - 1; the printed variant 2(f*bar f - 1) is
    reported separately and is not an identity.
    """
    hz = spin_hamiltonian_z(1.0, sig)
    pp, pm = wigner_projectors(hz)
    f, fbar = ladder_operators(hz)
    s1, s2, _ = _gens(sig)
    b12 = (s1 ^ s2).scale(-1j)
    return {
        "s1 = f + fbar": s1.max_diff(f + fbar),
        "s2 = -i(f - fbar)": s2.max_diff((f - fbar).scale(-1j)),
        "-i s1 s2 = 2 f^fbar": b12.max_diff(wedge(f, fbar).scale(2)),
        "-i s1 s2 = 2 f*fbar - 1": b12.max_diff((f * fbar).scale(2) - 1),
        "pi+ = f*fbar": pp.max_diff(f * fbar),
        "pi- = fbar*f": pm.max_diff(fbar * f),
        "printed: -i s1 s2 = 2(f*fbar - 1)": b12.max_diff((f * fbar - 1).scale(2)),
    }


def real_projectors(sig: AlgebraSignature = EUCLIDEAN3) -> tuple[Multivector, Multivector]:
    s3 = Multivector.generator(sig, sig.labels[2])
    return (1 + s3).scale(0.5), (1 - s3).scale(0.5)


def real_ladder(sig: AlgebraSignature = EUCLIDEAN3) -> tuple[Multivector, Multivector]:
    """f = (s1 + I*s2)/2, bar f = (s1 - I*s2)/2 in the real algebra."""
    s1, s2, _ = _gens(sig)
    i_s2 = pseudoscalar(sig) * s2
    return (s1 + i_s2).scale(0.5), (s1 - i_s2).scale(0.5)


# -- spinors ------------------------------------------------------------------

@dataclass(frozen=True)
class Spinor:
    """Even element psi0 + psi^i B_i of the real algebra."""

    psi: Multivector

    def __post_init__(self):
        _check_euclidean3(self.psi.sig)
        if not self.psi.is_even(0.0):
            raise ValueError("a spinor must be an even multivector")

    @property
    def normalized(self) -> bool:
        one = Multivector.scalar(self.psi.sig)
        bar = reversion(self.psi)
        return (bar * self.psi).isclose(one) and (self.psi * bar).isclose(one)

    def as_tuple(self) -> np.ndarray:
        return spinor_to_tuple(self.psi)


def _psi(x) -> Multivector:
    return x.psi if isinstance(x, Spinor) else x


def spinor_components(psi: Multivector) -> tuple[complex, complex, complex, complex]:
    """(psi0, psi1, psi2, psi3) in psi = psi0 + psi^i B_i with B = (s2 s3, s3 s1, s1 s2)."""
    psi = _psi(psi)
    if not psi.is_even(0.0):
        raise ValueError("spinor must be even")
    sig = psi.sig
    i1, i2, i3 = 1, 2, 4
    return (psi.coeff(0), psi.coeff(i2 | i3), -psi.coeff(i1 | i3), psi.coeff(i1 | i2))


def spinor_to_tuple(psi) -> np.ndarray:
    """(psi0 + i psi3, -psi2 + i psi1)."""
    c0, c1, c2, c3 = spinor_components(psi)
    if any(abs(c.imag) > 1e-14 for c in (c0, c1, c2, c3)):
        raise ValueError("spinor components must be real")
    c0, c1, c2, c3 = (c.real for c in (c0, c1, c2, c3))
    return np.array([c0 + 1j * c3, -c2 + 1j * c1])


def tuple_to_spinor(pair, sig: AlgebraSignature = EUCLIDEAN3) -> Multivector:
    up, down = (complex(x) for x in pair)
    c0, c3 = up.real, up.imag
    c2, c1 = -down.real, down.imag
    b1, b2, b3 = bivector_basis(sig)
    return c0 + b1.scale(c1) + b2.scale(c2) + b3.scale(c3)


def spinor_eigen_residual(psi, label, lam: complex) -> Multivector:
    """lam psi - s_i * psi * s3."""
    psi = _psi(psi)
    sig = psi.sig
    si = Multivector.generator(sig, label)
    s3 = Multivector.generator(sig, sig.labels[2])
    return psi.scale(lam) - si * psi * s3


def wigner_from_spinor(psi, tol: float = 1e-10) -> Multivector:
    """pi = psi * (1 + s3)/2 * bar(psi) for a normalized spinor."""
    psi = _psi(psi)
    _check_euclidean3(psi.sig)
    one = Multivector.scalar(psi.sig)
    bar = reversion(psi)
    if not ((bar * psi).isclose(one, tol) and (psi * bar).isclose(one, tol)):
        raise ValueError("spinor is not normalized")
    up, _ = real_projectors(psi.sig)
    return psi * up * bar


def wigner_eigen_residual(pi: Multivector, label, lam: complex) -> Multivector:
    """lam pi - s_i * pi."""
    return pi.scale(lam) - Multivector.generator(pi.sig, label) * pi


# -- isomorphisms -------------------------------------------------------------

def iso_even_cl3_to_cl2(a: Multivector, target: AlgebraSignature | None = None) -> Multivector:
    """Even Cl3(C) -> Cl2(C): -i s2 s3 -> s1, -i s3 s1 -> s2 (so s1 s2 -> s1 s2)."""
    _check_euclidean3(a.sig)
    if not a.is_even(0.0):
        raise ValueError("the map is defined on the even subalgebra only")
    target = AlgebraSignature.euclidean(2) if target is None else target
    c0, c1, c2, c3 = spinor_components(a)
    t1, t2 = (Multivector.generator(target, l) for l in target.labels)
    return c0 + t1.scale(1j * c1) + t2.scale(1j * c2) + (t1 ^ t2).scale(c3)


def iso_cl2_to_even_cl3(a: Multivector, target: AlgebraSignature = EUCLIDEAN3) -> Multivector:
    if a.sig.n != 2:
        raise ValueError("expected a two-generator algebra")
    b1, b2, b3 = bivector_basis(target)
    return (a.scalar_part + b1.scale(-1j * a.coeff(1)) + b2.scale(-1j * a.coeff(2))
            + b3.scale(a.coeff(3)))


def iso_complex_to_real(a: Multivector) -> Multivector:
    """Even Cl3(C) -> Cl3(R): the imaginary unit becomes the pseudoscalar I."""
    _check_euclidean3(a.sig)
    if not a.is_even(0.0):
        raise ValueError("the map is defined on the even subalgebra only")
    i3 = pseudoscalar(a.sig)
    re = Multivector(a.sig, {k: v.real for k, v in a.items()})
    im = Multivector(a.sig, {k: v.imag for k, v in a.items()})
    return re + i3 * im


def iso_real_to_complex(x: Multivector, tol: float = 1e-14) -> Multivector:
    _check_euclidean3(x.sig)
    if any(abs(v.imag) > tol for _, v in x.items()):
        raise ValueError("expected real coefficients")
    even = Multivector(x.sig, {k: v.real for k, v in x.items() if not k.bit_count() & 1})
    odd = Multivector(x.sig, {k: v.real for k, v in x.items() if k.bit_count() & 1})
    return even + (pseudoscalar(x.sig) * odd).scale(-1j)


# -- operator formalism -------------------------------------------------------

class LiftedOperator:
    """Left star multiplication by A written with s_i -> (s_i ^ . + eta_ii d/ds_i)."""

    def __init__(self, a: Multivector):
        self.a = a
        self.sig = a.sig

    def _hat(self, i: int, b: Multivector) -> Multivector:
        out = wedge(Multivector(self.sig, {1 << i: 1.0}), b)
        eta = self.sig.metric[i]
        if eta:
            out = out + left_derivative(b, i).scale(eta)
        return out

    def __call__(self, b: Multivector) -> Multivector:
        total = Multivector.zero(self.sig)
        for mask, c in self.a.items():
            y = b
            # the rightmost generator of the blade acts first
            for i in reversed([j for j in range(self.sig.n) if mask >> j & 1]):
                y = self._hat(i, y)
            total = total + y.scale(c)
        return total

    @property
    def matrix(self) -> np.ndarray:
        dim = 1 << self.sig.n
        m = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            m[:, col] = self(Multivector(self.sig, {col: 1.0})).to_vector()
        return m


def operator_lift(a: Multivector) -> LiftedOperator:
    return LiftedOperator(a)


def tilde(psi: Multivector) -> Multivector:
    """I * bar(psi)."""
    return pseudoscalar(psi.sig) * reversion(psi)


def scalar_product(psi_prime: Multivector, psi: Multivector) -> complex:
    """int d^3s  tilde(psi') psi."""
    _check_euclidean3(psi.sig)
    return berezin_integrate(wedge(tilde(psi_prime), psi), psi.sig.labels).scalar_part


def wave_function_evolve(psi: Multivector, h: SpinHamiltonian, t: float) -> Multivector:
    """psi(t) = Exp_C(H t) * psi."""
    return star_exponential(h, t) * psi


def evolution_matrix(h: SpinHamiltonian, t: float) -> np.ndarray:
    """exp(-i lift(H) t) on the blade space, from the two-level spectral split."""
    pp, pm = wigner_projectors(h)
    a = h.abs_e * t
    return np.exp(-1j * a) * operator_lift(pp).matrix + np.exp(1j * a) * operator_lift(pm).matrix


# -- random samples (tests and demos) ----------------------------------------

def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_spin_hamiltonian(rng: np.random.Generator, kind: str | None = None,
                            sig: AlgebraSignature = EUCLIDEAN3) -> SpinHamiltonian:
    """A valid H of one of three kinds: real vector, -i I*u bivector, or orthogonal mix."""
    kind = kind or rng.choice(["vector", "bivector", "mixed"])
    i3 = pseudoscalar(sig)
    v = rng.normal(size=3)
    u = rng.normal(size=3)
    u -= (u @ v) / (v @ v) * v
    vec = Multivector(sig, {1 << i: v[i] for i in range(3)})
    biv = (i3 * Multivector(sig, {1 << i: u[i] for i in range(3)})).scale(-1j)
    h = {"vector": vec, "bivector": biv, "mixed": vec + biv}[kind]
    return validate_spin_hamiltonian(h)


def random_rotor(rng: np.random.Generator, sig: AlgebraSignature = EUCLIDEAN3) -> Multivector:
    return rotor(axis_bivector(random_unit_vector(rng), sig), rng.uniform(0, 2 * math.pi))


MultivectorMap = Callable[[Multivector], Multivector]
