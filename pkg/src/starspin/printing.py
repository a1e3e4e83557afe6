"""Canonical text form of multivectors: terms by (grade, bitmask), 12 significant digits."""
from __future__ import annotations


def format_real(x: float) -> str:
    s = format(x, ".12g")
    return "0" if s in ("-0", "0") else s


def format_coeff(c: complex) -> str:
    re, im = format_real(c.real), format_real(c.imag)
    if im == "0":
        return re
    if re == "0":
        return f"{im}i"
    sign = "-" if im.startswith("-") else "+"
    return f"({re}{sign}{im.lstrip('-')}i)"


def format_multivector(mv) -> str:
    parts = []
    for mask in sorted(mv.terms, key=lambda m: (m.bit_count(), m)):
        c = mv.coeff(mask)
        coeff = format_coeff(c)
        if coeff == "0":
            continue
        blade = mv.sig.blade_string(mask)
        if not blade:
            term = coeff
        elif coeff == "1":
            term = blade
        elif coeff == "-1":
            term = "-" + blade
        else:
            term = f"{coeff}*{blade}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for term in parts[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out
