"""Exact scalar domains: rationals and exponential polynomials.

Everything on the verification path is either a ``fractions.Fraction`` or an
:class:`ExpPoly`, a finite sum ``sum_r c_r * exp(r*t)`` with rational
exponents and coefficients.  Floats appear only in redundant cross-checks.
"""

from __future__ import annotations

import math
from fractions import Fraction


def rat(x) -> Fraction:
    """Coerce an int, string or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(s: str) -> Fraction:
    """Parse 'p' or 'p/q' with optional sign."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def format_rational(q: Fraction) -> str:
    """Inverse of :func:`parse_rational`; '3', '-1/2', ..."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ExpPoly:
    """Finite sum of terms c * exp(r*t), keyed by the rational exponent r.

    Supports exact ring arithmetic (exponents add under multiplication), the
    exact limit t -> +inf, float evaluation, and exact evaluation at
    t = K*log(base) where every r*K is an integer.  Instances are immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for r, c in terms.items():
                r = Fraction(r)
                c = Fraction(c)
                if c != 0:
                    clean[r] = clean.get(r, Fraction(0)) + c
                    if clean[r] == 0:
                        del clean[r]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("ExpPoly is immutable")

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls({Fraction(0): Fraction(c)})

    @classmethod
    def exp(cls, r, c=1) -> "ExpPoly":
        """The single term c * exp(r*t)."""
        return cls({Fraction(r): Fraction(c)})

    @staticmethod
    def coerce(x) -> "ExpPoly":
        if isinstance(x, ExpPoly):
            return x
        return ExpPoly.const(Fraction(x))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = ExpPoly.coerce(other)
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, Fraction(0)) + c
        return ExpPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-ExpPoly.coerce(other))

    def __rsub__(self, other):
        return ExpPoly.coerce(other) + (-self)

    def __mul__(self, other):
        other = ExpPoly.coerce(other)
        out = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                r = r1 + r2
                out[r] = out.get(r, Fraction(0)) + c1 * c2
        return ExpPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExpPoly.const(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- ordering by eventual dominance ------------------------------------

    def leading(self):
        """(r, c) of the term dominating as t -> +inf, or (0, 0) if zero."""
        if not self.terms:
            return Fraction(0), Fraction(0)
        r = max(self.terms)
        return r, self.terms[r]

    def eventually_positive(self) -> bool:
        return self.leading()[1] > 0

    def __lt__(self, other):
        d = ExpPoly.coerce(other) - self
        return d.eventually_positive()

    def __gt__(self, other):
        d = self - ExpPoly.coerce(other)
        return d.eventually_positive()

    def __abs__(self):
        return -self if self.leading()[1] < 0 else self

    # -- limits and evaluation ----------------------------------------------

    def is_constant(self) -> bool:
        return all(r == 0 for r in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(Fraction(0), Fraction(0))

    def has_limit(self) -> bool:
        """True iff the limit as t -> +inf is finite (every exponent <= 0)."""
        return all(r <= 0 for r in self.terms)

    def limit(self) -> Fraction:
        """Exact limit as t -> +inf; None when a positive exponent survives."""
        if not self.has_limit():
            return None
        return self.terms.get(Fraction(0), Fraction(0))

    def eval_at(self, t: float, guard: float = 230.0) -> float:
        """Binary64 value at time t; raises on exp arguments beyond guard."""
        total = 0.0
        for r, c in self.terms.items():
            x = float(r) * t
            if x > guard:
                raise OverflowError(f"exp({x}) exceeds the overflow guard")
            total += float(c) * math.exp(x)
        return total

    def eval_base(self, k: int, base: int = 2) -> Fraction:
        """Exact value at t = k*log(base), i.e. with exp(t) := base**k.

        Every exponent r must satisfy r*k integral so that base**(r*k) is
        rational.
        """
        total = Fraction(0)
        for r, c in self.terms.items():
            rk = r * k
            if rk.denominator != 1:
                raise ValueError(f"exponent {r} * {k} is not an integer")
            total += c * Fraction(base) ** int(rk)
        return total

    def exponent_denominator_lcm(self) -> int:
        out = 1
        for r in self.terms:
            out = math.lcm(out, r.denominator)
        return out

    def __repr__(self):
        if not self.terms:
            return "ExpPoly(0)"
        bits = []
        for r in sorted(self.terms, reverse=True):
            c = self.terms[r]
            if r == 0:
                bits.append(format_rational(c))
            else:
                bits.append(f"{format_rational(c)}*e^({format_rational(r)}t)")
        return "ExpPoly(" + " + ".join(bits) + ")"


def scalar_to_float(x) -> float:
    if isinstance(x, ExpPoly):
        raise TypeError("ExpPoly needs an evaluation time")
    return float(x)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, ExpPoly))
