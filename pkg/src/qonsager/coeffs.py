"""The coefficient tables c[r,p,k] by four independent pipelines.

A table at rank r holds one Laurent polynomial per admissible cell (p, k),
0 <= p <= (r+1)//2 and 0 <= k <= r - 2p + 1.  The four routes to the same
table are deliberately independent so they can cross-check each other:

* ``c_recursive``   -- the even/odd recursion family driven by the eta and M
                       auxiliary tables, seeded from the rank-1 relation;
* ``c_closed``      -- the closed double-sum formula over index families;
* ``c_from_polynomial`` -- expansion of the factorized two-variable
                       generating polynomial;
* ``c_solve``       -- treating all entries as unknowns, reducing the
                       candidate relation with the rewriting engine and
                       solving the resulting linear system exactly.

Exact agreement of all pipelines is the core evidence this package produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .freealg import NCPolynomial, Word, monomial
from .qcoeff import (
    ONE,
    ZERO,
    LaurentScalar,
    RhoScalar,
    exact_div,
    parse_laurent,
    q_binomial,
    q_int,
)
from .reducer import reduce

PIPELINE_NAMES = ("recursive", "closed", "polynomial", "solve")


class CoefficientSystemError(Exception):
    """The linear system for a table is inconsistent or under-determined.

    Raised by c_solve; an occurrence at any rank would falsify the existence
    of the higher-order relation there, so it is surfaced loudly.
    """


class ShapeError(Exception):
    """The expanded generating polynomial stepped outside the expected shape."""


def cells(r: int) -> Iterator[tuple[int, int]]:
    """Admissible (p, k) index pairs of the rank-r table."""
    if r < 1:
        raise ValueError("rank must be >= 1")
    for p in range(0, (r + 1) // 2 + 1):
        for k in range(0, r - 2 * p + 2):
            yield (p, k)


class CoeffTable:
    """The triangular coefficient array for one rank.

    Equality compares rank and entries only; the pipeline tag is provenance
    metadata so that tables from different routes can be compared directly.
    """

    __slots__ = ("r", "entries", "pipeline")

    def __init__(self, r: int, entries: dict[tuple[int, int], LaurentScalar],
                 pipeline: str = "unknown"):
        expected = set(cells(r))
        got = set(entries)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise ValueError(
                f"rank-{r} table cells mismatch: missing {missing}, extra {extra}"
            )
        self.r = r
        self.entries = dict(entries)
        self.pipeline = pipeline

    def entry(self, p: int, k: int) -> LaurentScalar:
        return self.entries[(p, k)]

    def get(self, p: int, k: int) -> LaurentScalar:
        """Entry value with out-of-range cells read as zero."""
        return self.entries.get((p, k), ZERO)

    def __eq__(self, other):
        return (
            isinstance(other, CoeffTable)
            and self.r == other.r
            and self.entries == other.entries
        )

    __hash__ = None

    def __repr__(self):
        return f"CoeffTable(r={self.r}, pipeline={self.pipeline!r})"

    # -- structural invariants -------------------------------------------

    def binomial_row_ok(self) -> bool:
        """c[r,0,k] equals the q-binomial (r+1 choose k)_q for all k."""
        return all(
            self.entry(0, k) == q_binomial(self.r + 1, k) for k in range(self.r + 2)
        )

    def palindromic_ok(self) -> bool:
        """c[r,p,k] == c[r,p,r-2p+1-k] for every cell."""
        return all(
            self.entry(p, k) == self.entry(p, self.r - 2 * p + 1 - k)
            for (p, k) in cells(self.r)
        )

    def bar_invariant_ok(self) -> bool:
        """Every entry is invariant under q -> q^-1."""
        return all(v.bar() == v for v in self.entries.values())

    def polynomial_ok(self) -> bool:
        """Every entry is a Laurent polynomial (no residual denominator)."""
        return all(v.is_polynomial for v in self.entries.values())

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "r": self.r,
            "pipeline": self.pipeline,
            "entries": [
                {"p": p, "k": k, "value": str(self.entries[(p, k)])}
                for (p, k) in sorted(self.entries)
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CoeffTable":
        entries = {
            (item["p"], item["k"]): parse_laurent(item["value"])
            for item in obj["entries"]
        }
        return cls(obj["r"], entries, obj.get("pipeline", "unknown"))

    def to_csv_rows(self) -> list[str]:
        rows = ["r,p,k,value"]
        for (p, k) in sorted(self.entries):
            rows.append(f"{self.r},{p},{k},{self.entries[(p, k)]}")
        return rows


# ---------------------------------------------------------------------------
# eta recursion tables and their reducer cross-check
# ---------------------------------------------------------------------------


def eta_table(m_max: int) -> dict[tuple[int, int, int], LaurentScalar]:
    """The eta coefficients for 2 <= m <= m_max, keyed (m, p, j).

    eta[m, p, j] is the coefficient of rho^p on the j-th normal shape in the
    expansion of I^m J: j = 0 selects the words I J I^..., j = 1 the words
    J I^....  Built strictly from the initial values at m = 2 and the eight
    recursion steps; the reducer provides the independent cross-check.
    """
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    two = q_int(2)
    eta: dict[tuple[int, int, int], LaurentScalar] = {
        (2, 0, 0): two,
        (2, 0, 1): -ONE,
    }
    for m in range(3, m_max + 1):
        if m % 2:  # m = 2n + 1
            n = (m - 1) // 2
            for p in range(0, n):
                eta[(m, p, 0)] = two * eta[(m - 1, p, 0)] + eta[(m - 1, p, 1)]
            eta[(m, n, 0)] = ONE
            for p in range(1, n):
                eta[(m, p, 1)] = -eta[(m - 1, p, 0)] + eta[(m - 1, p - 1, 0)]
            eta[(m, 0, 1)] = -eta[(m - 1, 0, 0)]
            if n >= 1:
                eta[(m, n, 1)] = eta[(m - 1, n - 1, 0)]
        else:  # m = 2n + 2
            n = (m - 2) // 2
            for p in range(0, n + 1):
                eta[(m, p, 0)] = two * eta[(m - 1, p, 0)] + eta[(m - 1, p, 1)]
            for p in range(1, n + 1):
                eta[(m, p, 1)] = eta[(m - 1, p - 1, 0)] - eta[(m - 1, p, 0)]
            eta[(m, 0, 1)] = -eta[(m - 1, 0, 0)]
    return eta


def eta_expansion(m: int, eta: dict | None = None) -> NCPolynomial:
    """The claimed normal form of I^m J assembled from the eta table."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if eta is None:
        eta = eta_table(m)
    out = NCPolynomial.zero()
    if m % 2:  # m = 2n + 1
        n = (m - 1) // 2
        for p in range(0, n + 1):
            out = out + monomial(1, 1, 2 * n - 2 * p) * RhoScalar.rho_power(p, eta[(m, p, 0)])
            out = out + monomial(0, 1, 2 * n - 2 * p + 1) * RhoScalar.rho_power(p, eta[(m, p, 1)])
    else:  # m = 2n + 2
        n = (m - 2) // 2
        for p in range(0, n + 1):
            out = out + monomial(1, 1, 2 * n + 1 - 2 * p) * RhoScalar.rho_power(p, eta[(m, p, 0)])
            out = out + monomial(0, 1, 2 * n + 2 - 2 * p) * RhoScalar.rho_power(p, eta[(m, p, 1)])
        out = out + monomial(0, 1, 0) * RhoScalar.rho_power(n + 1, ONE)
    return out


@dataclass
class EtaReport:
    """Outcome of checking the eta expansions against the reducer."""

    n_max: int
    checked: list[int] = field(default_factory=list)
    ok: bool = True
    first_mismatch: tuple[int, str, str] | None = None

    def to_json_obj(self) -> dict:
        return {
            "n_max": self.n_max,
            "checked_m": self.checked,
            "ok": self.ok,
            "first_mismatch": (
                None
                if self.first_mismatch is None
                else {
                    "m": self.first_mismatch[0],
                    "expected": self.first_mismatch[1],
                    "actual": self.first_mismatch[2],
                }
            ),
        }


def verify_eta_against_reducer(n_max: int) -> EtaReport:
    """Check reduce(I^m J) against the eta expansion for every m <= 2n_max+2.

    A mismatch is a reported outcome, not an exception: the report carries
    the first offending m with both sides rendered.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    report = EtaReport(n_max=n_max)
    m_top = 2 * n_max + 2
    eta = eta_table(m_top)
    for m in range(2, m_top + 1):
        expected = eta_expansion(m, eta)
        actual = reduce(monomial(m, 1, 0))
        report.checked.append(m)
        if expected != actual:
            report.ok = False
            report.first_mismatch = (m, str(expected), str(actual))
            break
    return report


# ---------------------------------------------------------------------------
# M tables
# ---------------------------------------------------------------------------


def m_table(base: CoeffTable) -> dict[tuple[int, int, int], LaurentScalar]:
    """The M coefficients built from one rank's table, keyed (r, p, k).

    All six printed variants (even/odd rank, boundary k) collapse to the one
    formula M[r,p,k] = c[r,p,k] - c[r,0,1]*c[r,p,k-1] with out-of-range c
    read as zero; the boundary cases are asserted against this form in the
    test suite.  Indices run 0 <= k <= r + 2 - 2p.
    """
    r = base.r
    c1 = base.entry(0, 1)
    em: dict[tuple[int, int, int], LaurentScalar] = {}
    for p in range(0, (r + 1) // 2 + 1):
        for k in range(0, r + 3 - 2 * p):
            em[(r, p, k)] = base.get(p, k) - c1 * base.get(p, k - 1)
    return em


@dataclass(frozen=True)
class RecursionTables:
    """Bundle of the two auxiliary tables used by the recursive pipeline."""

    eta: dict[tuple[int, int, int], LaurentScalar]
    em: dict[tuple[int, int, int], LaurentScalar]


# ---------------------------------------------------------------------------
# pipeline 1: recursion family
# ---------------------------------------------------------------------------


def _rank_one_table() -> dict[tuple[int, int], LaurentScalar]:
    return {
        (0, 0): ONE,
        (0, 1): q_int(2),
        (0, 2): ONE,
        (1, 0): ONE,
    }


def _next_table(r: int, prev: CoeffTable) -> dict[tuple[int, int], LaurentScalar]:
    """One induction step: the rank-r entries from the rank-(r-1) table."""
    eta = eta_table(r + 2)
    em = m_table(prev)
    src = r - 1

    def M(p: int, k: int) -> LaurentScalar:
        return em[(src, p, k)]

    def E1(m: int, p: int) -> LaurentScalar:
        return eta[(m, p, 1)]

    sign = lambda n: ONE if n % 2 == 0 else -ONE  # noqa: E731

    c: dict[tuple[int, int], LaurentScalar] = {}
    c[(0, 0)] = ONE
    c[(0, 1)] = q_int(r + 1)
    c1 = c[(0, 1)]

    if r % 2:  # target rank odd: r = 2t + 1, source even 2t
        t = (r - 1) // 2
        c[(0, 2)] = M(0, 2) * E1(2, 0)
        for h in range(2, t + 2):
            c[(0, 2 * h)] = M(0, 2 * h) * E1(2 * h, 0) + c1 * prev.get(0, 2 * h - 1) * E1(2 * h - 1, 0)
        for h in range(1, t + 1):
            c[(0, 2 * h + 1)] = M(0, 2 * h + 1) * E1(2 * h + 1, 0) + c1 * prev.get(0, 2 * h) * E1(2 * h, 0)

        acc = ZERO
        for p in range(0, t + 1):
            acc = acc + sign(p + t + 1) * M(p, 2 * (t + 1 - p))
        c[(t + 1, 0)] = acc

        c[(1, 0)] = -M(0, 2) + M(1, 0)
        for h in range(2, t + 1):
            acc = ZERO
            for p in range(0, h + 1):
                acc = acc + sign(p + h) * M(p, 2 * (h - p))
            c[(h, 0)] = acc

        if (1, 1) in set(cells(r)):
            c[(1, 1)] = -(M(0, 3) * E1(3, 1) - c1 * (-prev.get(0, 2) + prev.get(1, 0)))
        for h in range(2, t + 1):
            acc = ZERO
            for p in range(0, h):
                acc = acc + sign(p + h) * M(p, 2 * (h - p) + 1) * E1(2 * (h - p) + 1, h - p)
            acc2 = ZERO
            for p in range(0, h + 1):
                acc2 = acc2 + sign(p + h) * prev.get(p, 2 * (h - p))
            c[(h, 1)] = acc + c1 * acc2

        if (1, 2) in set(cells(r)):
            c[(1, 2)] = -M(0, 4) * E1(4, 1) + M(1, 2) * E1(2, 0) - c1 * prev.get(0, 3) * E1(3, 1)
        for h in range(2, t + 1):
            for l in range(1, h):
                acc = ZERO
                for p in range(0, l + 1):
                    acc = acc + sign(p + l) * M(p, 2 * (h - p) + 1) * E1(2 * (h - p) + 1, l - p)
                acc2 = ZERO
                for p in range(0, l + 1):
                    acc2 = acc2 + sign(p + l) * prev.get(p, 2 * (h - p)) * E1(2 * (h - p), l - p)
                c[(l, 2 * h - 2 * l + 1)] = acc + c1 * acc2
        for h in range(3, t + 2):
            for l in range(1, h):
                acc = ZERO
                for p in range(0, l + 1):
                    acc = acc + sign(p + l) * M(p, 2 * (h - p)) * E1(2 * (h - p), l - p)
                acc2 = ZERO
                for p in range(0, min(l, h - 2) + 1):
                    acc2 = acc2 + sign(p + l) * prev.get(p, 2 * (h - p) - 1) * E1(2 * (h - p) - 1, l - p)
                c[(l, 2 * h - 2 * l)] = acc + c1 * acc2

    else:  # target rank even: r = 2t + 2, source odd 2t + 1
        t = (r - 2) // 2
        c[(0, 2)] = M(0, 2) * E1(2, 0)
        for h in range(1, t + 2):
            c[(0, 2 * h + 1)] = M(0, 2 * h + 1) * E1(2 * h + 1, 0) + c1 * prev.get(0, 2 * h) * E1(2 * h, 0)
        for h in range(2, t + 2):
            c[(0, 2 * h)] = M(0, 2 * h) * E1(2 * h, 0) + c1 * prev.get(0, 2 * h - 1) * E1(2 * h - 1, 0)

        c[(1, 0)] = -M(0, 2) + M(1, 0)
        for h in range(2, t + 2):
            acc = ZERO
            for p in range(0, h + 1):
                acc = acc + sign(p + h) * M(p, 2 * (h - p))
            c[(h, 0)] = acc

        c[(1, 1)] = -M(0, 3) * E1(3, 1) + c1 * (-prev.get(0, 2) + prev.get(1, 0))
        for h in range(2, t + 2):
            acc = ZERO
            for p in range(0, h):
                acc = acc + sign(p + h) * M(p, 2 * (h - p) + 1) * E1(2 * (h - p) + 1, h - p)
            acc2 = ZERO
            for p in range(0, h + 1):
                acc2 = acc2 + sign(p + h) * prev.get(p, 2 * (h - p))
            c[(h, 1)] = acc + c1 * acc2

        if (1, 2) in set(cells(r)):
            c[(1, 2)] = -M(0, 4) * E1(4, 1) + M(1, 2) * E1(2, 0) - c1 * prev.get(0, 3) * E1(3, 1)
        for h in range(3, t + 2):
            for l in range(1, h):
                acc = ZERO
                for p in range(0, l + 1):
                    acc = acc + sign(p + l) * M(p, 2 * (h - p)) * E1(2 * (h - p), l - p)
                acc2 = ZERO
                for p in range(0, min(l, h - 2) + 1):
                    acc2 = acc2 + sign(p + l) * prev.get(p, 2 * (h - p) - 1) * E1(2 * (h - p) - 1, l - p)
                c[(l, 2 * h - 2 * l)] = acc + c1 * acc2
        for h in range(2, t + 2):
            for l in range(1, h):
                acc = ZERO
                for p in range(0, l + 1):
                    acc = acc + sign(p + l) * M(p, 2 * (h - p) + 1) * E1(2 * (h - p) + 1, l - p)
                acc2 = ZERO
                for p in range(0, l + 1):
                    acc2 = acc2 + sign(p + l) * prev.get(p, 2 * (h - p)) * E1(2 * (h - p), l - p)
                c[(l, 2 * h - 2 * l + 1)] = acc + c1 * acc2

    return c


def c_recursive(r: int) -> CoeffTable:
    """The rank-r table built strictly bottom-up from the rank-1 seed."""
    if r < 1:
        raise ValueError("rank must be >= 1")
    table = CoeffTable(1, _rank_one_table(), "recursive")
    for target in range(2, r + 1):
        table = CoeffTable(target, _next_table(target, table), "recursive")
    return table


# ---------------------------------------------------------------------------
# pipeline 2: closed formula
# ---------------------------------------------------------------------------


def _support(r: int) -> list[int]:
    """The index set the closed formula draws from: {r-2*floor((r-1)/2), ..., r-2, r}."""
    return list(range(r - 2 * ((r - 1) // 2), r + 1, 2))


def c_closed(r: int) -> CoeffTable:
    """The rank-r table from the closed double-sum formula.

    The outer binomial factor is an ordinary integer binomial, read as zero
    whenever its arguments leave 0 <= m <= n (the factorial form is undefined
    there, and only that reading reproduces the expansion shape).
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    alpha = 2 if r % 2 else 1
    half = (r + 1) // 2
    support = _support(r)
    ratio = {s: exact_div(q_int(2 * s), q_int(s)) for s in support}
    square = {s: q_int(s) * q_int(s) for s in support}

    entries: dict[tuple[int, int], LaurentScalar] = {}
    for (p, k) in cells(r):
        total = ZERO
        for l in range(0, k // alpha + 1):
            n_bin = half - k + alpha * l - p
            m_bin = (alpha * l) // 2
            if not (0 <= m_bin <= n_bin):
                continue
            weight = math.comb(n_bin, m_bin)
            picks = k - alpha * l
            inner = ZERO
            for rho_part in combinations(support, p):
                rest = [s for s in support if s not in rho_part]
                if picks > len(rest):
                    continue
                base = ONE
                for s in rho_part:
                    base = base * square[s]
                for ratio_part in combinations(rest, picks):
                    term = base
                    for s in ratio_part:
                        term = term * ratio[s]
                    inner = inner + term
            total = total + weight * inner
        entries[(p, k)] = total
    return CoeffTable(r, entries, "closed")


# ---------------------------------------------------------------------------
# pipeline 3: generating polynomial expansion
# ---------------------------------------------------------------------------


class BivariatePolynomial:
    """Polynomial in commuting x, y over RhoScalar, terms keyed (x_deg, y_deg)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], RhoScalar] | None = None):
        cleaned = {}
        for key, c in (terms or {}).items():
            if not isinstance(c, RhoScalar):
                c = RhoScalar((c if isinstance(c, LaurentScalar) else LaurentScalar(c),))
            if not c.is_zero:
                cleaned[key] = c
        self.terms = cleaned

    @classmethod
    def one(cls) -> "BivariatePolynomial":
        return cls({(0, 0): RhoScalar((ONE,))})

    def __mul__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out: dict[tuple[int, int], RhoScalar] = {}
        for (xa, ya), ca in self.terms.items():
            for (xb, yb), cb in other.terms.items():
                key = (xa + xb, ya + yb)
                c = ca * cb
                n = out.get(key)
                n = c if n is None else n + c
                if n.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = n
        return BivariatePolynomial(out)

    def __eq__(self, other):
        return isinstance(other, BivariatePolynomial) and self.terms == other.terms

    __hash__ = None

    def swap_xy(self) -> "BivariatePolynomial":
        return BivariatePolynomial({(y, x): c for (x, y), c in self.terms.items()})

    def __neg__(self) -> "BivariatePolynomial":
        return BivariatePolynomial({k: -c for k, c in self.terms.items()})

    def total_degree_weighted(self) -> set[int]:
        """Distinct values of x_deg + y_deg + 2*rho_deg over all monomials."""
        out = set()
        for (x, y), c in self.terms.items():
            for p, ls in enumerate(c.coeffs):
                if not ls.is_zero:
                    out.add(x + y + 2 * p)
        return out


def generating_factors(r: int) -> list[tuple]:
    """Factor descriptors of the rank-r generating polynomial.

    ``("quad", s)`` stands for x^2 - (q^s + q^-s) xy + y^2 - rho [s]_q^2 and
    ``("diff",)`` for the x - y factor present at even rank.
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    if r % 2:
        return [("quad", s) for s in range(1, r + 1, 2)]
    return [("diff",)] + [("quad", s) for s in range(2, r + 1, 2)]


def _factor_poly(desc: tuple) -> BivariatePolynomial:
    if desc[0] == "diff":
        return BivariatePolynomial({(1, 0): RhoScalar((ONE,)), (0, 1): RhoScalar((-ONE,))})
    s = desc[1]
    mid = exact_div(q_int(2 * s), q_int(s))  # always q^s + q^-s, exactly
    return BivariatePolynomial(
        {
            (2, 0): RhoScalar((ONE,)),
            (1, 1): RhoScalar((-mid,)),
            (0, 2): RhoScalar((ONE,)),
            (0, 0): RhoScalar((ZERO, -(q_int(s) * q_int(s)))),
        }
    )


def expand_generating_polynomial(r: int) -> BivariatePolynomial:
    """Fully expanded rank-r generating polynomial."""
    out = BivariatePolynomial.one()
    for desc in generating_factors(r):
        out = out * _factor_poly(desc)
    return out


def c_from_polynomial(r: int) -> CoeffTable:
    """Read the table off the expanded generating polynomial.

    The expansion must consist exactly of monomials rho^p x^(r-2p+1-k) y^k
    carrying sign (-1)^(k+p); anything else raises ShapeError, since it would
    falsify the claimed expansion shape.
    """
    poly = expand_generating_polynomial(r)
    admissible = set(cells(r))
    entries: dict[tuple[int, int], LaurentScalar] = {}
    for (dx, dy), coeff in poly.terms.items():
        for p, ls in enumerate(coeff.coeffs):
            if ls.is_zero:
                continue
            k = dy
            if dx + dy + 2 * p != r + 1 or (p, k) not in admissible:
                raise ShapeError(
                    f"rank {r}: monomial rho^{p} x^{dx} y^{dy} outside the expansion shape"
                )
            value = ls if (k + p) % 2 == 0 else -ls
            entries[(p, k)] = value
    try:
        return CoeffTable(r, entries, "polynomial")
    except ValueError as exc:
        raise ShapeError(f"rank {r}: expansion missing cells ({exc})") from exc


# ---------------------------------------------------------------------------
# pipeline 4: linear-system solve over the rewriting engine
# ---------------------------------------------------------------------------


def delta_indices(r: int) -> list[tuple[int, int, int]]:
    """(p, k, sign) triples of the rank-r relation's double sum."""
    return [(p, k, (-1) ** (p + k)) for (p, k) in cells(r)]


def _row_normalize(row: list[LaurentScalar]) -> list[dict]:
    """Scale a row by a unit q^k so every entry is a plain poly dict."""
    vals = [v for v in row if not v.is_zero]
    if not vals:
        return [dict(v.num) for v in row]
    shift = -min(min(v.num) for v in vals)
    return [{e + shift: c for e, c in v.num.items()} for v in row]


def _solve_unique(
    rows: list[tuple[dict[int, LaurentScalar], LaurentScalar]], n_cols: int
) -> list[LaurentScalar]:
    """Solve an overdetermined exact linear system with a unique solution.

    Rows are (sparse coefficient map, right-hand side).  Elimination is
    fraction-free (division-deferred): each combination step stays in the
    polynomial ring and rows are reduced by their integer content to control
    swell; back-substitution divides exactly at the end.  Raises
    CoefficientSystemError when rank is deficient or any equation fails.
    """
    from .qcoeff import _padd, _pcontent, _pexact_div, _pmul, _pneg, _pscale, _psub  # local: internal helpers

    # Dense integer-exponent polynomial rows: columns 0..n_cols-1 then rhs.
    dense_rows = []
    for cols, rhs in rows:
        row = [cols.get(j, ZERO) for j in range(n_cols)] + [rhs]
        if all(v.is_zero for v in row):
            continue
        dense_rows.append(_row_normalize(row))
    # Short rows first keeps the elimination lean.
    dense_rows.sort(key=lambda row: (sum(1 for d in row if d), sum(len(d) for d in row)))

    pivots: list[tuple[int, list[dict]]] = []  # (pivot column, echelon row)
    for row in dense_rows:
        if len(pivots) == n_cols:
            break
        row = [dict(d) for d in row]
        for col, prow in pivots:
            if row[col]:
                lead = prow[col]
                mine = row[col]
                row = [
                    _psub(_pmul(d, lead), _pmul(prow[j], mine))
                    for j, d in enumerate(row)
                ]
                content = 0
                for d in row:
                    for c in d.values():
                        content = math.gcd(content, c)
                if content > 1:
                    row = [{e: c // content for e, c in d.items()} for d in row]
        col = next((j for j in range(n_cols) if row[j]), None)
        if col is None:
            if row[n_cols]:
                raise CoefficientSystemError("inconsistent system: 0 = nonzero row")
            continue
        pivots.append((col, row))
        pivots.sort(key=lambda t: t[0])

    if len(pivots) < n_cols:
        raise CoefficientSystemError(
            f"under-determined system: rank {len(pivots)} < {n_cols} unknowns"
        )

    # Back-substitution over the fraction field.
    solution: list[LaurentScalar | None] = [None] * n_cols
    for col, row in reversed(pivots):
        acc = LaurentScalar(row[n_cols])
        for j in range(col + 1, n_cols):
            if row[j]:
                acc = acc - LaurentScalar(row[j]) * solution[j]
        solution[col] = acc / LaurentScalar(row[col])

    # The unique solution must satisfy every row, including those never
    # touched by the elimination.
    for row in dense_rows:
        acc = -LaurentScalar(row[n_cols])
        for j in range(n_cols):
            if row[j]:
                acc = acc + LaurentScalar(row[j]) * solution[j]
        if not acc.is_zero:
            raise CoefficientSystemError("inconsistent system: solution fails an equation")
    return solution  # type: ignore[return-value]


def c_solve(r: int) -> CoeffTable:
    """The rank-r table as the unique solution of the cancellation system.

    Every entry is treated as an unknown (with c[r,0,0] normalized to 1),
    each monomial of the candidate relation is reduced to normal form, and
    the coefficient of every residual (word, rho-power) pair must vanish.
    Inconsistency or under-determinacy raises CoefficientSystemError, which
    would falsify the relation's existence at this rank.
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    unknowns = [cell for cell in cells(r) if cell != (0, 0)]
    col_of = {cell: i for i, cell in enumerate(unknowns)}

    # equations keyed by (normal word, total rho degree)
    equations: dict[tuple[int, int], tuple[dict[int, LaurentScalar], LaurentScalar]] = {}
    for (p, k, sign) in delta_indices(r):
        word = Word.from_exponents(r - 2 * p + 1 - k, r, k)
        normal_form = reduce(NCPolynomial.from_word(word))
        for w, coeff in normal_form.terms.items():
            for d, ls in enumerate(coeff.coeffs):
                if ls.is_zero:
                    continue
                key = (w.code, p + d)
                cols, rhs = equations.setdefault(key, ({}, ZERO))
                value = ls if sign > 0 else -ls
                if (p, k) == (0, 0):
                    equations[key] = (cols, rhs - value)
                else:
                    j = col_of[(p, k)]
                    cols[j] = cols.get(j, ZERO) + value

    rows = list(equations.values())
    # _solve_unique asserts uniqueness (full rank) and that the solution
    # satisfies every equation, so any failure mode surfaces as an exception.
    solution = _solve_unique(rows, len(unknowns))

    entries = {(0, 0): ONE}
    for cell, j in col_of.items():
        entries[cell] = solution[j]
    return CoeffTable(r, entries, "solve")


# ---------------------------------------------------------------------------
# pipeline registry and cross-checks
# ---------------------------------------------------------------------------

PIPELINES = {
    "recursive": c_recursive,
    "closed": c_closed,
    "polynomial": c_from_polynomial,
    "solve": c_solve,
}


@dataclass
class CrossCheckReport:
    """Per-rank agreement summary across pipelines."""

    max_r: int
    solve_max_r: int
    agreements: dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.agreements.values())

    def to_json_obj(self) -> dict:
        return {
            "max_r": self.max_r,
            "solve_max_r": self.solve_max_r,
            "ok": self.ok,
            "per_r": [{"r": r, "agree": v} for r, v in sorted(self.agreements.items())],
        }


def cross_check(max_r: int, solve_max_r: int = 0) -> CrossCheckReport:
    """Exact agreement of recursive/closed/polynomial (and solve up to solve_max_r)."""
    report = CrossCheckReport(max_r=max_r, solve_max_r=solve_max_r)
    for r in range(1, max_r + 1):
        tables = [c_recursive(r), c_closed(r), c_from_polynomial(r)]
        if r <= solve_max_r:
            tables.append(c_solve(r))
        report.agreements[r] = all(t == tables[0] for t in tables[1:])
    return report
