"""Builds the degree-(2r+1) higher-order relation and verifies it symbolically.

The candidate relation at rank r is the double sum

    sum over admissible (p, k) of (-1)^(k+p) rho^p c[r,p,k] A_i^(r-2p+1-k) A_j^r A_i^k

which must reduce to zero under the ordering prescription.  With rho set to
zero the same construction degenerates to the r-th higher-order q-Serre
relation of a linked pair (Cartan entry -1), verified with the truncated
rewrite rule.  Verification outcomes are certificates, not exceptions: a
nonzero residual is a reported falsification.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

from .coeffs import CoeffTable, PIPELINES, delta_indices
from .freealg import NCPolynomial, Word
from .qcoeff import RhoScalar
from .reducer import ReduceStats, reduce_with_stats


@dataclass
class RelationCertificate:
    """Outcome of one symbolic verification run."""

    r: int
    table_source: str
    reduced_form: NCPolynomial
    elapsed_ms: int
    term_count_peak: int
    rho_zero: bool = False

    @property
    def zero(self) -> bool:
        return self.reduced_form.is_zero

    @property
    def residual_terms(self) -> int:
        return len(self.reduced_form.terms)

    def to_json_obj(self) -> dict:
        return {
            "r": self.r,
            "pipeline": self.table_source,
            "zero": self.zero,
            "residual_terms": self.residual_terms,
            "peak_terms": self.term_count_peak,
            "ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def build_delta(r: int, table: CoeffTable, rho_zero: bool = False) -> NCPolynomial:
    """The exact double sum of the rank-r relation over the given table.

    With rho_zero set only the p = 0 part remains, whose coefficients are the
    q-binomials for any valid table.
    """
    if table.r != r:
        raise ValueError(f"table is for rank {table.r}, not {r}")
    terms: dict[Word, RhoScalar] = {}
    for (p, k, sign) in delta_indices(r):
        if rho_zero and p > 0:
            continue
        value = table.entry(p, k)
        if sign < 0:
            value = -value
        word = Word.from_exponents(r - 2 * p + 1 - k, r, k)
        terms[word] = RhoScalar.rho_power(0 if rho_zero else p, value)
    return NCPolynomial(terms)


def verify_relation(
    r: int,
    table: CoeffTable | None = None,
    rho_zero: bool = False,
    pipeline: str = "recursive",
) -> RelationCertificate:
    """Reduce the rank-r relation to normal form and certify the outcome.

    The certificate's reduced form is identically zero exactly when the
    relation holds; a nonzero residual is recorded, not raised.
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    if table is None:
        table = PIPELINES[pipeline](r)
    delta = build_delta(r, table, rho_zero=rho_zero)
    start = time.perf_counter()
    reduced, stats = reduce_with_stats(delta, rho_zero=rho_zero)
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    return RelationCertificate(
        r=r,
        table_source=table.pipeline,
        reduced_form=reduced,
        elapsed_ms=elapsed_ms,
        term_count_peak=stats.peak_terms,
        rho_zero=rho_zero,
    )


def verify_qserre(r: int, pipeline: str = "recursive") -> RelationCertificate:
    """The rho = 0 degeneration: reduce the higher-order q-Serre relation."""
    return verify_relation(r, rho_zero=True, pipeline=pipeline)


def perturbed_table(table: CoeffTable, p: int, k: int) -> CoeffTable:
    """A copy of the table with one entry multiplied by q.

    Mutation control: the relation built on a perturbed table must leave a
    nonzero residual, guarding against a reducer that maps everything to zero.
    """
    from .qcoeff import LaurentScalar

    entries = dict(table.entries)
    entries[(p, k)] = entries[(p, k)] * LaurentScalar.q_power(1)
    return CoeffTable(table.r, entries, f"{table.pipeline}+perturbed({p},{k})")


def unlinked_commutator_reduces(r: int) -> bool:
    """The unlinked-pair relation at rank r: [A_i, A_j^r] = 0 on a commuting pair.

    Unlinked generators commute, so monomials are classified by bidegree
    alone and the commutator collapses immediately; no rewriting engine is
    needed beyond this bookkeeping.
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    collapsed: dict[tuple[int, int], int] = {}
    for degree, coeff in (((1, r), 1), ((1, r), -1)):
        collapsed[degree] = collapsed.get(degree, 0) + coeff
    return all(v == 0 for v in collapsed.values())


__all__ = [
    "RelationCertificate",
    "ReduceStats",
    "build_delta",
    "verify_relation",
    "verify_qserre",
    "perturbed_table",
    "unlinked_commutator_reduces",
]
