"""Command line front end: ``starspin eval``, ``starspin demo ...``, ``starspin check ...``."""
from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

from . import checks
from .expr import ExprError, Session, evaluate
from .exterior import Multivector
from .path_integral import LatticeCapacityError, discretized_propagator
from .phasespace import landau_expected, landau_split
from .printing import format_coeff, format_real
from .spin import (
    evolve_generator,
    ladder_operators,
    spectral_residual,
    spin_hamiltonian_z,
    wigner_projectors,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _tsv(rows: Sequence[Sequence[object]]) -> str:
    return "\n".join("\t".join(str(c) for c in row) for row in rows)


def _num(x: float) -> str:
    return format_real(float(x))


def _cmd_eval(args) -> int:
    session = Session.default()
    try:
        for item in args.let or ():
            name, sep, source = item.partition("=")
            if not sep:
                raise UsageError(f"--let expects NAME=EXPR, got {item!r}")
            session.bind(name.strip(), source)
        value = evaluate(args.expr, session)
    except ExprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(value.to_json() if args.json else str(value))
    return EXIT_OK


def demo_precession(omega: float, steps: int, hbar: float = 1.0) -> str:
    """s1(t), s2(t) coefficients over one period, against the closed form."""
    if steps < 1:
        raise UsageError("--steps must be positive")
    w = hbar * omega
    if w <= 0:
        raise UsageError("hbar * omega must be positive")
    h = spin_hamiltonian_z(w)
    rows = [("t", "s1(t).s1", "s1(t).s2", "s2(t).s1", "s2(t).s2", "deviation")]
    period = 2 * math.pi / w
    for k in range(steps + 1):
        t = period * k / steps
        x1, x2 = evolve_generator("s1", h, t), evolve_generator("s2", h, t)
        c, s = math.cos(w * t), math.sin(w * t)
        expected = (c, -s, s, c)
        got = (x1.coeff(1), x1.coeff(2), x2.coeff(1), x2.coeff(2))
        dev = max(abs(g - e) for g, e in zip(got, expected))
        dev = max(dev, (x1 - x1.grade(1)).norm(), (x2 - x2.grade(1)).norm())
        rows.append((_num(t), *(_num(g.real) for g in got), f"{dev:.3e}"))
    return _tsv(rows)


def demo_projectors(omega: float = 1.0, hbar: float = 1.0) -> str:
    h = spin_hamiltonian_z(hbar * omega)
    pp, pm = wigner_projectors(h)
    f, fb = ladder_operators(h)
    one = Multivector.scalar(h.sig)
    rows = [("quantity", "value")]
    rows += [("H", str(h.H)), ("|E|", _num(h.abs_e)), ("pi+", str(pp)), ("pi-", str(pm)),
             ("f", str(f)), ("fbar", str(fb))]
    rows += [("residual pi+*pi+ - pi+", f"{(pp * pp).max_diff(pp):.3e}"),
             ("residual pi-*pi- - pi-", f"{(pm * pm).max_diff(pm):.3e}"),
             ("residual pi+*pi-", f"{(pp * pm).norm():.3e}"),
             ("residual pi+ + pi- - 1", f"{(pp + pm).max_diff(one):.3e}"),
             ("residual H*pi+ - |E|pi+", f"{(h.H * pp).max_diff(pp.scale(h.abs_e)):.3e}"),
             ("residual H*pi- + |E|pi-", f"{(h.H * pm).max_diff(pm.scale(-h.abs_e)):.3e}"),
             ("residual H - |E|(pi+ - pi-)", f"{spectral_residual(h):.3e}"),
             ("residual fbar*pi+*f - pi-", f"{(fb * pp * f).max_diff(pm):.3e}"),
             ("residual f*pi-*fbar - pi+", f"{(f * pm * fb).max_diff(pp):.3e}")]
    return _tsv(rows)


def _parse_vector(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected three comma-separated numbers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"expected three comma-separated numbers, got {text!r}")
    return vals


def demo_landau(field: Sequence[float], e: float, m: float, hbar: float = 1.0) -> str:
    if m == 0:
        raise UsageError("--m must be nonzero")
    h, h0, hs = landau_split(field, e, m, hbar)
    x0, xs = landau_expected(field, e, m, hbar)
    rows = [("part", "blade", "monomial", "coefficient")]
    for part, x in (("H0", h0), ("HS", hs)):
        for blade, poly in sorted(x.to_json_dict().items(), key=lambda kv: (len(kv[0].split()), kv[0])):
            for mono, (re_, im) in sorted(poly.items()):
                rows.append((part, blade or "1", mono or "1", format_coeff(complex(re_, im))))
    rows.append(("deviation", "", "", f"{max(h0.max_diff(x0), hs.max_diff(xs)):.3e}"))
    return _tsv(rows)


def demo_path_integral(slices: int, omega: float = 1.0, t: float = 1.0) -> str:
    if slices < 1:
        raise UsageError("--slices must be positive")
    h = spin_hamiltonian_z(omega)
    rows = [("N", "deviation", "star_power_deviation")]
    for n in range(1, slices + 1):
        try:
            r = discretized_propagator(h, t, n, details=True)
        except LatticeCapacityError as exc:
            raise UsageError(str(exc)) from exc
        rows.append((n, f"{r.deviation:.3e}", f"{r.star_power.max_diff(r.closed_form):.3e}"))
    return _tsv(rows)


def _cmd_demo(args) -> int:
    if args.which == "precession":
        out = demo_precession(args.omega, args.steps, args.hbar)
    elif args.which == "projectors":
        out = demo_projectors(args.omega, args.hbar)
    elif args.which == "landau":
        out = demo_landau(_parse_vector(args.B), args.e, args.m, args.hbar)
    else:
        out = demo_path_integral(args.slices, args.omega, args.t)
    print(out)
    return EXIT_OK


def _cmd_check(args) -> int:
    wanted = args.suites
    if wanted == ["all"]:
        numbers = sorted(checks.SUITES)
    else:
        try:
            numbers = [int(x) for x in wanted]
        except ValueError:
            raise UsageError("check expects 'all' or suite numbers") from None
        bad = [n for n in numbers if n not in checks.SUITES]
        if bad:
            raise UsageError(f"unknown suite(s) {bad}; valid: 1-{max(checks.SUITES)}")
    results = [checks.run(n) for n in numbers]
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} suites passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starspin", description="Grassmann star products and spin dynamics")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a multivector expression")
    ev.add_argument("expr")
    ev.add_argument("--json", action="store_true", help="print the JSON multivector format")
    ev.add_argument("--let", action="append", metavar="NAME=EXPR", help="bind a name before evaluating")
    ev.set_defaults(func=_cmd_eval)

    demo = sub.add_parser("demo", help="run a demonstration (TSV output)")
    dsub = demo.add_subparsers(dest="which", required=True)
    pr = dsub.add_parser("precession")
    pr.add_argument("--omega", type=float, default=1.0)
    pr.add_argument("--steps", type=int, default=12)
    pr.add_argument("--hbar", type=float, default=1.0)
    pj = dsub.add_parser("projectors")
    pj.add_argument("--omega", type=float, default=1.0)
    pj.add_argument("--hbar", type=float, default=1.0)
    la = dsub.add_parser("landau")
    la.add_argument("--B", required=True, help="field components bx,by,bz")
    la.add_argument("--e", type=float, default=1.0)
    la.add_argument("--m", type=float, default=1.0)
    la.add_argument("--hbar", type=float, default=1.0)
    pi = dsub.add_parser("path-integral")
    pi.add_argument("--slices", type=int, default=6)
    pi.add_argument("--omega", type=float, default=1.0)
    pi.add_argument("--t", type=float, default=1.0)
    demo.set_defaults(func=_cmd_demo)

    ck = sub.add_parser("check", help="run acceptance suites ('all' or numbers)")
    ck.add_argument("suites", nargs="+")
    ck.set_defaults(func=_cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
