"""Acceptance suites 1-15, shared by ``starspin check`` and the test suite.

Each suite returns a CheckResult holding the largest deviation seen and
the tolerance it was compared against.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .berezin import (
    GaussianParityWarning,
    berezin_integrate,
    delta_function,
    gaussian_pair_integral,
    grassmann_fourier,
    inverse_grassmann_fourier,
    sift,
    star_under_integral,
    triple,
)
from .exterior import (
    AlgebraSignature,
    Multivector,
    dot_sets,
    exp_wedge,
    left_derivative,
    random_multivector,
    relabel,
    wedge,
)
from .path_integral import (
    T0_SET,
    T_SET,
    compose_propagators,
    discretized_propagator,
    greens_function_delta_form,
    greens_function_fourier_form,
    greens_function_integral_form,
    propagate,
)
from .phasespace import landau_expected, landau_split
from .spin import (
    EUCLIDEAN3,
    iso_complex_to_real,
    iso_even_cl3_to_cl2,
    ladder_operators,
    operator_lift,
    random_rotor,
    random_spin_hamiltonian,
    real_ladder,
    real_projectors,
    real_spin_hamiltonian_z,
    scalar_product,
    spin_hamiltonian_z,
    spinor_eigen_residual,
    star_exponential,
    evolve_generator,
    fourier_dirichlet,
    validate_spin_hamiltonian,
    wave_function_evolve,
    wigner_eigen_residual,
    wigner_from_spinor,
    wigner_projectors,
)
from .star import bivector_basis, clifford_star_integral, quaternion_units, star_exp_series

SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    deviation: float
    tol: float
    note: str = ""
    ok: bool | None = None  # set when a suite mixes tolerances

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol if self.ok is None else self.ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.note})" if self.note else ""
        return f"{status} {self.number:2d} {self.name}: max deviation {self.deviation:.3e} <= {self.tol:.0e}{extra}"


class _Tracker:
    def __init__(self):
        self.worst = 0.0

    def diff(self, a, b) -> float:
        if isinstance(a, Multivector):
            d = a.max_diff(b)
        else:
            d = abs(complex(a) - complex(b))
        self.worst = max(self.worst, d)
        return d

    def flag(self, ok: bool) -> None:
        # boolean conditions count as a unit deviation when violated
        if not ok:
            self.worst = max(self.worst, 1.0)


def _rng(k: int) -> np.random.Generator:
    return np.random.default_rng(SEED + k)


def _gens(sig=EUCLIDEAN3):
    return tuple(Multivector.generator(sig, l) for l in sig.labels)


def check_basis_products() -> CheckResult:
    t = _Tracker()
    s = _gens()
    for i in range(3):
        for j in range(3):
            t.diff(s[i] * s[j], wedge(s[i], s[j]) + (1.0 if i == j else 0.0))
    return CheckResult(1, "basis product law", t.worst, 1e-12)


def check_quaternions() -> CheckResult:
    t = _Tracker()
    qi, qj, qk = quaternion_units(EUCLIDEAN3)
    m1 = Multivector.scalar(EUCLIDEAN3, -1)
    for x in (qi * qi, qj * qj, qk * qk, qi * qj * qk):
        t.diff(x, m1)
    return CheckResult(2, "quaternion relations", t.worst, 1e-12)


def check_integral_star() -> CheckResult:
    t = _Tracker()
    rng = _rng(3)
    for _ in range(200):
        a = random_multivector(EUCLIDEAN3, rng)
        b = random_multivector(EUCLIDEAN3, rng)
        t.diff(clifford_star_integral(a, b), a * b)
    return CheckResult(3, "integral = differential star product", t.worst, 1e-10)


def _projector_checks(t: _Tracker, h) -> None:
    pp, pm = wigner_projectors(h)
    zero = Multivector.zero(h.sig)
    t.diff(pp * pp, pp)
    t.diff(pm * pm, pm)
    t.diff(pp * pm, zero)
    t.diff(pm * pp, zero)
    t.diff(pp + pm, Multivector.scalar(h.sig))
    t.diff(h.H * pp, pp.scale(h.abs_e))
    t.diff(h.H * pm, pm.scale(-h.abs_e))


def check_projectors() -> CheckResult:
    t = _Tracker()
    hbar_omega = 1.7
    h = spin_hamiltonian_z(hbar_omega)
    t.diff(h.abs_e, hbar_omega / 2)
    s1, s2, _ = _gens()
    b12 = wedge(s1, s2)
    pp, pm = wigner_projectors(h)
    t.diff(pp, (1 - b12.scale(1j)).scale(0.5))
    t.diff(pm, (1 + b12.scale(1j)).scale(0.5))
    _projector_checks(t, h)
    rng = _rng(4)
    for _ in range(20):
        _projector_checks(t, random_spin_hamiltonian(rng))
    return CheckResult(4, "Wigner projector suite", t.worst, 1e-10)


def check_star_exponential() -> CheckResult:
    t = _Tracker()
    rng = _rng(5)
    hams = [spin_hamiltonian_z(1.0)] + [random_spin_hamiltonian(rng) for _ in range(2)]
    for h in hams:
        # the order-40 series is accurate to ~1e-16 while |E| t <= 2 pi
        for tt in np.linspace(0.0, 2 * math.pi / h.abs_e, 50):
            t.diff(star_exponential(h, tt), star_exp_series(h.H.scale(-1j * tt), 40))
        for tt in np.linspace(0.0, 4 * math.pi / h.abs_e, 50):
            t.diff(star_exponential(h, tt), fourier_dirichlet(h, tt))
        for _ in range(20):
            t1, t2 = rng.uniform(-3, 3, size=2)
            t.diff(star_exponential(h, t1) * star_exponential(h, t2), star_exponential(h, t1 + t2))
    return CheckResult(5, "star exponential", t.worst, 1e-10)


def check_precession() -> CheckResult:
    t = _Tracker()
    hbar_omega = 1.3
    h = spin_hamiltonian_z(hbar_omega)
    s1, s2, s3 = _gens()
    for tt in np.linspace(0.0, 2 * math.pi / hbar_omega, 50):
        c, s = math.cos(hbar_omega * tt), math.sin(hbar_omega * tt)
        t.diff(evolve_generator("s1", h, tt), s1.scale(c) - s2.scale(s))
        t.diff(evolve_generator("s2", h, tt), s1.scale(s) + s2.scale(c))
        t.diff(evolve_generator("s3", h, tt), s3)
    return CheckResult(6, "generator precession", t.worst, 1e-10)


def check_ladders() -> CheckResult:
    t = _Tracker()
    h = spin_hamiltonian_z(1.0)
    pp, pm = wigner_projectors(h)
    s1, s2, s3 = _gens()
    for flavor in ("vector", "bivector"):
        for primed in (False, True):
            f, fb = ladder_operators(h, flavor, primed)
            t.diff(fb * pp * f, pm)
            t.diff(f * pm * fb, pp)
    f, fb = ladder_operators(h)
    t.diff(f, (s1 + s2.scale(1j)).scale(0.5))
    t.diff(fb, (s1 - s2.scale(1j)).scale(0.5))
    bf, bfb = ladder_operators(h, "bivector")
    t.diff(bf, (s3 * s1 - (s2 * s3).scale(1j)).scale(0.5))
    t.diff(bfb, (s3 * s1 + (s2 * s3).scale(1j)).scale(-0.5))
    t.diff(s1 * pp * s1, pm)
    t.diff(s1 * pm * s1, pp)
    rp, rm = real_projectors()
    rf, rfb = real_ladder()
    t.diff(rfb * rp * rf, rm)
    t.diff(rf * rm * rfb, rp)
    return CheckResult(7, "ladder identities", t.worst, 1e-12)


def check_landau() -> CheckResult:
    t = _Tracker()
    rng = _rng(8)
    for _ in range(20):
        field = rng.normal(size=3)
        e, m, hbar = rng.uniform(0.2, 2.0, size=3)
        _, h0, hs = landau_split(field, e, m, hbar)
        x0, xs = landau_expected(field, e, m, hbar)
        t.diff(0, h0.max_diff(x0))
        t.diff(0, hs.max_diff(xs))
    return CheckResult(8, "Landau splitting", t.worst, 1e-10)


def check_berezin_fourier() -> CheckResult:
    t = _Tracker()
    sig = AlgebraSignature.replicated(3)
    s, sp, spp = triple(), triple("'"), triple("''")
    t.diff(berezin_integrate(Multivector.blade(sig, s), s), Multivector.scalar(sig))
    for mask in range(8):
        f = Multivector(sig, {mask: 1.0})
        f_prime = relabel(f, dict(zip(s, sp)), sig)
        t.diff(sift(f, s, sp), f_prime)
        back = inverse_grassmann_fourier(grassmann_fourier(f, s, spp), spp, sp)
        t.diff(back, f_prime)
    fd = grassmann_fourier(delta_function(sig, s, sp), s, spp)
    t.diff(fd, exp_wedge(dot_sets(sig, sp, spp).scale(1j)))
    return CheckResult(9, "Berezin integral and Fourier transform", t.worst, 1e-12)


def check_gaussian() -> CheckResult:
    t = _Tracker()
    with warnings.catch_warnings():
        warnings.simplefilter("error", GaussianParityWarning)
        for n in (2, 4, 6):
            t.diff(gaussian_pair_integral(n), 1.0)
    return CheckResult(10, "Grassmann Gaussian pair integral", t.worst, 1e-12)


def check_operator_lift() -> CheckResult:
    t = _Tracker()
    sig = EUCLIDEAN3
    basis = [Multivector(sig, {m: 1.0}) for m in range(8)]
    for a in basis:
        lift = operator_lift(a)
        for b in basis:
            t.diff(lift(b), a * b)
    h = spin_hamiltonian_z(1.4)
    lift_h = operator_lift(h.H)
    for b in basis:
        # -|E| i (s1 + d1)(s2 + d2) applied literally
        inner = wedge(_gens()[1], b) + left_derivative(b, "s2")
        outer = wedge(_gens()[0], inner) + left_derivative(inner, "s1")
        t.diff(lift_h(b), outer.scale(-1j * h.abs_e))
    return CheckResult(11, "operator lift", t.worst, 1e-12)


def check_scalar_product() -> CheckResult:
    t = _Tracker()
    s1, s2, _ = _gens()
    psi_p = (1 - wedge(s1, s2).scale(1j)).scale(1 / math.sqrt(2))
    t.diff(scalar_product(psi_p, psi_p), 1.0)
    rng = _rng(12)
    for _ in range(20):
        v = rng.normal(size=8)
        psi = Multivector.from_vector(EUCLIDEAN3, v)
        t.diff(scalar_product(psi, psi), float(v @ v))
    for _ in range(50):
        a = random_multivector(EUCLIDEAN3, rng)
        b = random_multivector(EUCLIDEAN3, rng)
        lhs, rhs = star_under_integral(a, b)
        t.diff(lhs, rhs)
    return CheckResult(12, "fermionic scalar product", t.worst, 1e-10)


def _joint_zero(r1: float, r2: float) -> bool:
    return (r1 < 1e-10 and r2 < 1e-10) or (r1 > 1e-3 and r2 > 1e-3)


def check_spinor_wigner() -> CheckResult:
    t = _Tracker()
    rp, rm = real_projectors()
    psi_p = Multivector.scalar(EUCLIDEAN3)
    psi_m = bivector_basis(EUCLIDEAN3)[1]
    t.diff(wigner_from_spinor(psi_p), rp)
    t.diff(wigner_from_spinor(psi_m), rm)
    rng = _rng(13)
    spinors = [psi_p, psi_m] + [random_rotor(rng) for _ in range(10)]
    for k, psi in enumerate(spinors):
        pi = wigner_from_spinor(psi)
        if k >= 2:
            t.diff(pi * pi, pi)
        for label in EUCLIDEAN3.labels:
            for lam in (1.0, -1.0):
                r1 = spinor_eigen_residual(psi, label, lam).norm()
                r2 = wigner_eigen_residual(pi, label, lam).norm()
                t.flag(_joint_zero(r1, r2))
    return CheckResult(13, "spinor to Wigner function", t.worst, 1e-10)


def _even_basis(sig=EUCLIDEAN3):
    return [Multivector(sig, {m: 1.0}) for m in (0, 3, 5, 6)]


def check_isomorphisms() -> CheckResult:
    t = _Tracker()
    basis = _even_basis()
    for a in basis:
        for b in basis:
            t.diff(iso_even_cl3_to_cl2(a * b), iso_even_cl3_to_cl2(a) * iso_even_cl3_to_cl2(b))
    real_basis = basis + [x.scale(1j) for x in basis]
    for a in real_basis:
        for b in real_basis:
            t.diff(iso_complex_to_real(a * b), iso_complex_to_real(a) * iso_complex_to_real(b))
    hbar_omega = 1.1
    h = spin_hamiltonian_z(hbar_omega)
    cl2 = AlgebraSignature.euclidean(2)
    h2 = validate_spin_hamiltonian(Multivector.blade(cl2, cl2.labels, hbar_omega / 2j))
    t.diff(iso_even_cl3_to_cl2(h.H), h2.H)
    hr = real_spin_hamiltonian_z(hbar_omega)
    t.diff(iso_complex_to_real(h.H), hr.H)
    for x, y in zip(wigner_projectors(h), wigner_projectors(h2)):
        t.diff(iso_even_cl3_to_cl2(x), y)
    for x, y in zip(wigner_projectors(h), wigner_projectors(hr)):
        t.diff(iso_complex_to_real(x), y)
    t.diff(iso_complex_to_real(Multivector.scalar(EUCLIDEAN3, 1j)), Multivector.blade(EUCLIDEAN3, EUCLIDEAN3.labels))
    for tt in np.linspace(-1.5, 1.5, 7):
        e = star_exponential(h, tt)
        t.diff(iso_even_cl3_to_cl2(e), star_exponential(h2, tt))
        t.diff(iso_complex_to_real(e), star_exponential(hr, tt, real=True))
    return CheckResult(14, "algebra isomorphisms", t.worst, 1e-12)


def check_path_integral() -> CheckResult:
    rng = _rng(15)
    tol_slices = 1e-9
    t_total = 1.3
    hams = [spin_hamiltonian_z(1.2), random_spin_hamiltonian(rng, "bivector")]
    slice_dev = 0.0
    for h in hams:
        for n in range(1, 7):
            r = discretized_propagator(h, t_total, n, details=True)
            slice_dev = max(slice_dev, r.deviation, r.star_power.max_diff(r.value))
    other = 0.0
    for _ in range(10):
        h = random_spin_hamiltonian(rng, "bivector")
        dt = rng.uniform(-2, 2)
        gd = greens_function_delta_form(h, dt)
        other = max(other, gd.max_diff(greens_function_fourier_form(h, dt)),
                    gd.max_diff(greens_function_integral_form(h, dt)))
        psi = random_multivector(EUCLIDEAN3, rng)
        direct = wave_function_evolve(psi, h, dt)
        out = propagate(psi, gd)
        other = max(other, out.max_diff(relabel(direct, dict(zip(EUCLIDEAN3.labels, T_SET)), out.sig)))
    for h in hams:
        d1, d2 = rng.uniform(-1, 1, size=2)
        g = compose_propagators(greens_function_delta_form(h, d2), greens_function_delta_form(h, d1))
        slice_dev = max(slice_dev, g.max_diff(greens_function_delta_form(h, d1 + d2)))
    return CheckResult(15, "discretized path integral", max(slice_dev, other), tol_slices,
                       note=f"Green forms and propagation {other:.1e} <= 1e-10",
                       ok=slice_dev <= tol_slices and other <= 1e-10)


SUITES: dict[int, Callable[[], CheckResult]] = {
    1: check_basis_products,
    2: check_quaternions,
    3: check_integral_star,
    4: check_projectors,
    5: check_star_exponential,
    6: check_precession,
    7: check_ladders,
    8: check_landau,
    9: check_berezin_fourier,
    10: check_gaussian,
    11: check_operator_lift,
    12: check_scalar_product,
    13: check_spinor_wigner,
    14: check_isomorphisms,
    15: check_path_integral,
}


def run(number: int) -> CheckResult:
    try:
        return SUITES[number]()
    except Exception as exc:  # a crashing suite is a failed suite
        return CheckResult(number, SUITES[number].__name__, math.inf, 0.0, note=f"{type(exc).__name__}: {exc}")


def run_all() -> list[CheckResult]:
    return [run(k) for k in sorted(SUITES)]
