"""Exact scalar arithmetic in the deformation parameter q.

Two scalar types live here:

* ``LaurentScalar``: an exact rational function of q with arbitrary-precision
  integer coefficients, kept in a canonical reduced form so that equal values
  have identical representations.  Laurent polynomials are the common case
  (denominator 1) and take fast paths throughout.
* ``RhoScalar``: a polynomial in the formal scalar rho with LaurentScalar
  coefficients.

Representation: a "poly dict" maps an integer q-exponent to a nonzero integer
coefficient; the empty dict is zero.  A LaurentScalar stores a numerator poly
dict (any exponents) and a denominator poly dict normalized so that its lowest
exponent is 0 and its leading integer coefficient is positive, with numerator
and denominator sharing no common factor over Z[q].

Everything is exact; no floats appear anywhere.  Values are immutable after
construction and all operations are pure, so they are safe to share between
threads without synchronization.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

# ---------------------------------------------------------------------------
# poly-dict helpers: dict[int exponent -> int coefficient], no zero values
# ---------------------------------------------------------------------------


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        n = out.get(e, 0) + c
        if n:
            out[e] = n
        else:
            del out[e]
    return out


def _pneg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def _psub(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        n = out.get(e, 0) - c
        if n:
            out[e] = n
        else:
            del out[e]
    return out


def _pmul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            n = out.get(e, 0) + ca * cb
            if n:
                out[e] = n
            elif e in out:
                del out[e]
    return out


def _pshift(a: dict, k: int) -> dict:
    if k == 0:
        return dict(a)
    return {e + k: c for e, c in a.items()}


def _pscale(a: dict, s: int) -> dict:
    if s == 0:
        return {}
    return {e: c * s for e, c in a.items()}


def _pval(a: dict) -> int:
    return min(a)


def _pdeg(a: dict) -> int:
    return max(a)


def _pcontent(a: dict) -> int:
    g = 0
    for c in a.values():
        g = math.gcd(g, c)
    return g


def _pprim(a: dict) -> dict:
    """Divide out the integer content (result has content 1, same sign)."""
    g = _pcontent(a)
    if g <= 1:
        return dict(a)
    return {e: c // g for e, c in a.items()}


def _pexact_div(a: dict, b: dict) -> dict:
    """Exact division of poly dicts over Z; raises if it does not divide."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    db = _pdeg(b)
    lb = b[db]
    out: dict = {}
    r = dict(a)
    while r:
        dr = _pdeg(r)
        if dr < db:
            raise ArithmeticError("inexact polynomial division")
        lr = r[dr]
        if lr % lb:
            raise ArithmeticError("inexact polynomial division")
        c = lr // lb
        out[dr - db] = c
        for e, cb in b.items():
            ee = e + dr - db
            n = r.get(ee, 0) - c * cb
            if n:
                r[ee] = n
            elif ee in r:
                del r[ee]
    return out


def _pprem(a: dict, b: dict) -> dict:
    """Pseudo-remainder of a by b (both nonzero, deg a >= deg b allowed not)."""
    db = _pdeg(b)
    lb = b[db]
    r = dict(a)
    while r and _pdeg(r) >= db:
        dr = _pdeg(r)
        lr = r[dr]
        # r <- lb*r - lr*q^(dr-db)*b
        r = _psub(_pscale(r, lb), _pshift(_pscale(b, lr), dr - db))
    return r


def _pgcd(a: dict, b: dict) -> dict:
    """GCD over Z[q] (content times primitive part), positive leading coeff.

    Inputs are plain poly dicts with nonnegative exponents; either may be
    empty.  Uses a primitive pseudo-remainder sequence, which is plenty for
    the degrees arising here.
    """
    if not a:
        g = dict(b)
    elif not b:
        g = dict(a)
    else:
        ca, cb = abs(_pcontent(a)), abs(_pcontent(b))
        c = math.gcd(ca, cb)
        pa, pb = _pprim(a), _pprim(b)
        if _pdeg(pa) < _pdeg(pb):
            pa, pb = pb, pa
        while pb:
            r = _pprem(pa, pb)
            pa, pb = pb, (_pprim(r) if r else {})
        g = _pscale(_pprim(pa), c) if c != 1 else _pprim(pa)
    if g and g[_pdeg(g)] < 0:
        g = _pneg(g)
    return g


_ONE_POLY = {0: 1}


def _normalize(num: dict, den: dict) -> tuple[dict, dict]:
    """Canonical form of the fraction num/den.

    Denominator gets lowest exponent 0 and positive leading coefficient;
    the gcd over Z[q] (including integer content) is divided out.
    """
    if not den:
        raise ZeroDivisionError("LaurentScalar with zero denominator")
    if not num:
        return {}, dict(_ONE_POLY)
    if den == _ONE_POLY:
        return dict(num), dict(_ONE_POLY)
    vn, vd = _pval(num), _pval(den)
    n = _pshift(num, -vn)
    d = _pshift(den, -vd)
    shift = vn - vd
    g = _pgcd(n, d)
    if g != _ONE_POLY:
        n = _pexact_div(n, g)
        d = _pexact_div(d, g)
    if d[_pdeg(d)] < 0:
        n = _pneg(n)
        d = _pneg(d)
    return _pshift(n, shift), d


# ---------------------------------------------------------------------------
# LaurentScalar
# ---------------------------------------------------------------------------


class LaurentScalar:
    """An exact rational function of q over the integers, canonically reduced.

    >>> str(q_int(3))
    'q^2 + 1 + q^-2'
    >>> str(exact_div(q_int(2), q_int(4)))
    '(q^2)/(q^4 + 1)'
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: dict | int = 0, den: dict | int = 1):
        if isinstance(num, int):
            num = {0: num} if num else {}
        else:
            num = {e: c for e, c in num.items() if c}
        if isinstance(den, int):
            den = {0: den} if den else {}
        else:
            den = {e: c for e, c in den.items() if c}
        n, d = _normalize(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: dict, den: dict) -> "LaurentScalar":
        """Internal constructor for values already in canonical form."""
        self = object.__new__(cls)
        self.num = num
        self.den = den
        self._hash = None
        return self

    @classmethod
    def q_power(cls, e: int) -> "LaurentScalar":
        return cls._raw({e: 1}, dict(_ONE_POLY))

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_one(self) -> bool:
        return self.num == _ONE_POLY and self.den == _ONE_POLY

    @property
    def is_polynomial(self) -> bool:
        """True when the canonical denominator is 1 (a Laurent polynomial)."""
        return self.den == _ONE_POLY

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentScalar):
            return other
        if isinstance(other, int):
            return LaurentScalar._raw({0: other} if other else {}, dict(_ONE_POLY))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == _ONE_POLY and o.den == _ONE_POLY:
            return LaurentScalar._raw(_padd(self.num, o.num), dict(_ONE_POLY))
        num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return LaurentScalar(num, _pmul(self.den, o.den))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == _ONE_POLY and o.den == _ONE_POLY:
            return LaurentScalar._raw(_psub(self.num, o.num), dict(_ONE_POLY))
        num = _psub(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return LaurentScalar(num, _pmul(self.den, o.den))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentScalar._raw(_pneg(self.num), dict(self.den))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == _ONE_POLY and o.den == _ONE_POLY:
            return LaurentScalar._raw(_pmul(self.num, o.num), dict(_ONE_POLY))
        return LaurentScalar(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division of LaurentScalar by zero")
        return LaurentScalar(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** (-n))
        result = LaurentScalar._raw(dict(_ONE_POLY), dict(_ONE_POLY))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure ----------------------------------------------------------

    def bar(self) -> "LaurentScalar":
        """The image under q -> q^-1."""
        return LaurentScalar({-e: c for e, c in self.num.items()},
                             {-e: c for e, c in self.den.items()})

    def substitute(self, value: Fraction) -> Fraction:
        """Evaluate at an exact rational point q = value (value != 0)."""
        value = Fraction(value)
        if value == 0:
            raise ZeroDivisionError("cannot evaluate at q = 0")
        num = sum((c * value ** e for e, c in self.num.items()), Fraction(0))
        den = sum((c * value ** e for e, c in self.den.items()), Fraction(0))
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the given point")
        return num / den

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.items())),
                               tuple(sorted(self.den.items()))))
        return self._hash

    def __bool__(self):
        return not self.is_zero

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        if not self.num:
            return "0"
        if self.den == _ONE_POLY:
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"LaurentScalar({str(self)!r})"


def _poly_str(d: dict) -> str:
    """Canonical text of a poly dict: strictly descending q-exponents."""
    parts = []
    for e in sorted(d, reverse=True):
        c = d[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = "q" if e == 1 else f"q^{e}"
            body = power if mag == 1 else f"{mag}{power}"
        parts.append(("-" if c < 0 else "+", body))
    sign0, body0 = parts[0]
    pieces = [("-" + body0) if sign0 == "-" else body0]
    for sign, body in parts[1:]:
        pieces.append(f" {sign} {body}")
    return "".join(pieces)


_TERM_RE = re.compile(r"^(-)?(\d+)?(q(\^(-?\d+))?)?$")


def _parse_poly(text: str) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    tokens = re.split(r"\s+([+-])\s+", text)
    out: dict = {}
    sign = 1
    for i, tok in enumerate(tokens):
        if i % 2 == 1:
            sign = -1 if tok == "-" else 1
            continue
        m = _TERM_RE.match(tok.strip())
        if not m or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse term {tok!r}")
        neg, digits, qpart, _, exp = m.groups()
        coeff = int(digits) if digits else 1
        if neg:
            coeff = -coeff
        coeff *= sign
        e = int(exp) if exp is not None else (1 if qpart else 0)
        out[e] = out.get(e, 0) + coeff
    return {e: c for e, c in out.items() if c}


def parse_laurent(text: str) -> LaurentScalar:
    """Parse the canonical rendering back into a LaurentScalar."""
    text = text.strip()
    if text.startswith("(") and ")/(" in text and text.endswith(")"):
        num_s, den_s = text[1:-1].split(")/(", 1)
        return LaurentScalar(_parse_poly(num_s), _parse_poly(den_s))
    return LaurentScalar(_parse_poly(text))


ZERO = LaurentScalar._raw({}, dict(_ONE_POLY))
ONE = LaurentScalar._raw(dict(_ONE_POLY), dict(_ONE_POLY))
Q = LaurentScalar.q_power(1)


# ---------------------------------------------------------------------------
# q-integers, factorials, binomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def q_int(n: int) -> LaurentScalar:
    """The symmetric q-integer [n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n).

    [0]_q = 0 (empty sum); n must be nonnegative.
    """
    if n < 0:
        raise ValueError("q_int requires n >= 0")
    return LaurentScalar._raw({n - 1 - 2 * i: 1 for i in range(n)}, dict(_ONE_POLY))


@lru_cache(maxsize=None)
def q_factorial(n: int) -> LaurentScalar:
    """The q-factorial [n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1."""
    if n < 0:
        raise ValueError("q_factorial requires n >= 0")
    if n == 0:
        return ONE
    return q_factorial(n - 1) * q_int(n)


@lru_cache(maxsize=None)
def q_binomial(n: int, m: int) -> LaurentScalar:
    """The q-binomial coefficient [n]_q!/([m]_q! [n-m]_q!).

    Always a Laurent polynomial; m outside 0..n is rejected.
    """
    if m < 0 or m > n:
        raise ValueError(f"q_binomial requires 0 <= m <= n, got ({n}, {m})")
    result = exact_div(q_factorial(n), q_factorial(m) * q_factorial(n - m))
    if not result.is_polynomial:
        raise ArithmeticError("q-binomial failed to reduce to a Laurent polynomial")
    return result


def exact_div(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    """a/b in canonical form; b must be nonzero.

    The result's ``is_polynomial`` flag tells whether the quotient reduced to
    a Laurent polynomial (denominator 1).
    """
    return a / b


# ---------------------------------------------------------------------------
# RhoScalar
# ---------------------------------------------------------------------------


class RhoScalar:
    """A polynomial in the formal scalar rho with LaurentScalar coefficients.

    ``coeffs[p]`` is the coefficient of rho^p; trailing zeros are trimmed and
    the zero value has an empty coefficient tuple (degree -inf).
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[LaurentScalar | int] = ()):
        cs = [c if isinstance(c, LaurentScalar) else LaurentScalar(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def from_laurent(cls, s: LaurentScalar) -> "RhoScalar":
        return cls((s,))

    @classmethod
    def rho_power(cls, p: int, coeff: LaurentScalar | int = 1) -> "RhoScalar":
        if p < 0:
            raise ValueError("rho_power requires p >= 0")
        return cls((ZERO,) * p + ((coeff if isinstance(coeff, LaurentScalar) else LaurentScalar(coeff)),))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """rho-degree; -inf sentinel for the zero value."""
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def coefficient(self, p: int) -> LaurentScalar:
        return self.coeffs[p] if 0 <= p < len(self.coeffs) else ZERO

    def _coerce(self, other):
        if isinstance(other, RhoScalar):
            return other
        if isinstance(other, (LaurentScalar, int)):
            s = other if isinstance(other, LaurentScalar) else LaurentScalar(other)
            return RhoScalar((s,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return RhoScalar(tuple(self.coefficient(p) + o.coefficient(p) for p in range(n)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return RhoScalar(tuple(self.coefficient(p) - o.coefficient(p) for p in range(n)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = RhoScalar.__new__(RhoScalar)
        out.coeffs = tuple(-c for c in self.coeffs)
        out._hash = None
        return out

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return RHO_ZERO
        n = len(self.coeffs) + len(o.coeffs) - 1
        acc = [ZERO] * n
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(o.coeffs):
                if b.is_zero:
                    continue
                acc[i + j] = acc[i + j] + a * b
        return RhoScalar(acc)

    __rmul__ = __mul__

    def bar(self) -> "RhoScalar":
        return RhoScalar(tuple(c.bar() for c in self.coeffs))

    def substitute(self, q: Fraction, rho: Fraction) -> Fraction:
        """Evaluate at exact rational q and rho."""
        rho = Fraction(rho)
        total = Fraction(0)
        for p, c in enumerate(self.coeffs):
            total += c.substitute(q) * rho ** p
        return total

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for p in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[p]
            if c.is_zero:
                continue
            if p == 0:
                parts.append(f"({c})")
            elif p == 1:
                parts.append(f"({c})*rho")
            else:
                parts.append(f"({c})*rho^{p}")
        return " + ".join(parts)

    def __repr__(self):
        return f"RhoScalar({str(self)!r})"


RHO_ZERO = RhoScalar(())
RHO_ONE = RhoScalar((ONE,))
RHO = RhoScalar((ZERO, ONE))


def laurent_lcm(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    """Least common multiple of two nonzero Laurent polynomials.

    Defined up to a unit +-q^k; the representative returned has lowest
    exponent 0 and positive leading coefficient.
    """
    if not (a.is_polynomial and b.is_polynomial):
        raise ValueError("laurent_lcm expects Laurent polynomials")
    if a.is_zero or b.is_zero:
        raise ZeroDivisionError("laurent_lcm of zero")
    g = LaurentScalar(_pgcd(_pshift(a.num, -_pval(a.num)), _pshift(b.num, -_pval(b.num))))
    m = exact_div(a * b, g)
    out = _pshift(m.num, -_pval(m.num))
    if out[_pdeg(out)] < 0:
        out = _pneg(out)
    return LaurentScalar._raw(out, dict(_ONE_POLY))
