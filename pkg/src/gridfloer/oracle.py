"""Classical invariants used to cross-check the grid computations.

The Alexander polynomial of a braid closure comes from the reduced Burau
representation:  Delta(t) = det(I - B(t)) * (1 - t) / (1 - t^n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

import sympy

from .braid import BraidWord, component_count, is_knot
from .errors import MultiComponentClosure, NoMatch
from .grid import GridDiagram

_t = sympy.Symbol("t")


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial in ``t``; exponents may be half-integers."""

    coeffs: Dict[Fraction, int]

    def __post_init__(self):
        clean = {Fraction(e): int(c) for e, c in self.coeffs.items() if c}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({Fraction(0): 1})

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: Dict[Fraction, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def shift(self, s) -> "LaurentPoly":
        return LaurentPoly({e + s: c for e, c in self.coeffs.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        out = LaurentPoly.one()
        for _ in range(n):
            out = out * self
        return out

    @property
    def min_exp(self) -> Optional[Fraction]:
        return min(self.coeffs) if self.coeffs else None

    @property
    def max_exp(self) -> Optional[Fraction]:
        return max(self.coeffs) if self.coeffs else None

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get(-e) == c for e, c in self.coeffs.items())

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            es = str(e) if e.denominator == 1 else f"({e})"
            parts.append(f"{self.coeffs[e]}*t^{es}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``."""
        text = text.strip()
        if text == "0":
            return cls({})
        out: Dict[Fraction, int] = {}
        for term in text.split(" + "):
            c, e = term.split("*t^")
            e = Fraction(e.strip("()"))
            out[e] = out.get(e, 0) + int(c)
        return cls(out)


def _from_sympy(expr) -> LaurentPoly:
    expr = sympy.expand(expr)
    out: Dict[Fraction, int] = {}
    for term in sympy.Add.make_args(expr):
        c, e = term.as_coeff_exponent(_t)
        out[Fraction(int(e))] = out.get(Fraction(int(e)), 0) + int(c)
    return LaurentPoly(out)


def burau_matrix(n: int, i: int, inverse: bool = False) -> sympy.Matrix:
    """Reduced Burau matrix of ``sigma_i`` (1-based) on ``n`` strands."""
    d = n - 1
    M = sympy.eye(d)
    a = i - 1
    M[a, a] = -_t
    if a > 0:
        M[a, a - 1] = _t
    if a < d - 1:
        M[a, a + 1] = 1
    return M.inv() if inverse else M


def alexander_from_braid(b: BraidWord) -> LaurentPoly:
    """Symmetrized Alexander polynomial of the closure, with ``Delta(1) = 1``."""
    if not is_knot(b):
        raise MultiComponentClosure(component_count(b))
    n = b.strands
    if n == 1:
        return LaurentPoly.one()
    B = sympy.eye(n - 1)
    for e in b.letters:
        B = B * burau_matrix(n, abs(e), inverse=e < 0)
    det = sympy.cancel((sympy.eye(n - 1) - B).det() * (1 - _t) / (1 - _t**n))
    num, den = sympy.fraction(sympy.factor(det))
    num_p, den_p = _from_sympy(num), _from_sympy(den)
    if len(den_p.coeffs) != 1:
        raise ArithmeticError(f"Burau quotient is not a Laurent polynomial: {det}")
    (de, dc), = den_p.coeffs.items()
    if any(c % dc for c in num_p.coeffs.values()):
        raise ArithmeticError(f"Burau quotient has non-integer coefficients: {det}")
    p = LaurentPoly({e - de: c // dc for e, c in num_p.coeffs.items()})
    return symmetrize(p)


def symmetrize(p: LaurentPoly) -> LaurentPoly:
    """Shift to a symmetric polynomial and fix the sign by ``p(1) = 1``."""
    mid = (p.min_exp + p.max_exp) / 2
    q = p.shift(-mid)
    if q.at_one() < 0:
        q = -q
    return q


def euler_characteristic(ranks) -> LaurentPoly:
    """``sum (-1)^M rank t^A`` of a rank table."""
    out: Dict[Fraction, int] = {}
    for (a, m), r in ranks.ranks.items():
        out[a] = out.get(a, 0) + (-1) ** (m % 2) * r
    return LaurentPoly(out)


def euler_check(G: GridDiagram, ranks, delta: LaurentPoly) -> Fraction:
    """Match the graded Euler characteristic against ``delta (1 - t^-1)^(k-1)``.

    Returns the exponent ``s`` with ``chi = +- t^s * expected``; raises
    ``NoMatch`` when no unit relates them.
    """
    chi = euler_characteristic(ranks)
    expected = delta * LaurentPoly({Fraction(0): 1, Fraction(-1): -1}) ** (G.size - 1)
    if not chi.coeffs or not expected.coeffs:
        raise NoMatch("empty Euler characteristic")
    s = chi.min_exp - expected.min_exp
    for sign in (1, -1):
        cand = expected.shift(s) if sign == 1 else -expected.shift(s)
        if cand == chi:
            return s
    raise NoMatch(f"chi = {chi} does not match {expected} up to a unit")
