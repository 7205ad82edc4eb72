"""Sparse polynomials in p_1..p_k as ``{exponent tuple: coefficient}`` dicts."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement


def add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = tuple(x + y for x, y in zip(m1, m2))
            out[mono] = out.get(mono, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def power(a: dict, e: int, k: int) -> dict:
    out = {(0,) * k: Fraction(1)}
    for _ in range(e):
        out = mul(out, a)
    return out


def linear(coeffs) -> dict:
    """Degree-1 polynomial sum_a coeffs[a] p_a."""
    k = len(coeffs)
    out = {}
    for a, c in enumerate(coeffs):
        if c:
            mono = tuple(int(a == b) for b in range(k))
            out[mono] = Fraction(c)
    return out


def monomial(mono) -> dict:
    return {tuple(mono): Fraction(1)}


def degree(mono) -> int:
    return sum(mono)


@lru_cache(maxsize=None)
def monomials(k: int, deg: int) -> tuple:
    """All degree-``deg`` exponent tuples in ``k`` variables, lex ascending."""
    out = []
    for combo in combinations_with_replacement(range(k), deg):
        e = [0] * k
        for a in combo:
            e[a] += 1
        out.append(tuple(e))
    return tuple(sorted(out))


def to_string(poly: dict, names=None) -> str:
    if not poly:
        return "0"
    terms = []
    for mono in sorted(poly, key=lambda m: (sum(m), tuple(-x for x in m))):
        c = poly[mono]
        factors = []
        for a, e in enumerate(mono):
            name = names[a] if names else f"p{a + 1}"
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        if not body:
            terms.append(str(c))
        elif c == 1:
            terms.append(body)
        elif c == -1:
            terms.append("-" + body)
        else:
            terms.append(f"{c}*{body}")
    return " + ".join(terms).replace("+ -", "- ")
