"""The ordering prescription as a terminating, confluent rewriting system.

One rewrite rule: a factor IIJ is replaced by ``[2]_q IJI - JII + rho J``
(the rho term dropped in rho-zero mode, which verifies the plain q-Serre
family with the same engine).  The pattern has no self-overlap, so normal
forms are unique; every replacement word is strictly below IIJ in graded lex
with I > J, so the multiset of words strictly decreases and reduction
terminates on every input.

The hot loop lives in a kernel module selected at import time: the compiled
extension ``_kernel_cy`` when built, else the pure-Python twin ``_kernel_py``.
Set QONSAGER_KERNEL=python|cython to force a choice.  Both kernels work on
packed words and packed (rho, q)-exponent coefficient dicts; this driver
converts NCPolynomials in and out and clears denominators around the kernel
(reduction is linear, so scaling by a common denominator is sound).
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Callable

from . import _kernel_py
from .freealg import NCPolynomial, Word
from .qcoeff import ONE, ZERO, LaurentScalar, RhoScalar, exact_div, laurent_lcm, q_int

_choice = os.environ.get("QONSAGER_KERNEL", "auto")
if _choice == "python":
    _kernel = _kernel_py
elif _choice in ("auto", "cython"):
    try:
        from . import _kernel_cy as _kernel  # type: ignore[no-redef]
    except ImportError:
        if _choice == "cython":
            raise ImportError(
                "QONSAGER_KERNEL=cython but the compiled kernel is not built; "
                "run 'python setup.py build_ext --inplace' or reinstall"
            )
        _kernel = _kernel_py
else:
    raise ValueError(f"QONSAGER_KERNEL must be auto, python or cython, not {_choice!r}")

# Codes must fit the compiled kernel's fixed-width integers.
_MAX_COMPILED_LEN = 60

Q_OFFSET = _kernel_py.Q_OFFSET
RHO_SHIFT = _kernel_py.RHO_SHIFT
RHO_STEP = _kernel_py.RHO_STEP


def kernel_backend() -> str:
    """Name of the kernel selected at import ("python" or "cython")."""
    return _kernel.BACKEND


@dataclass(frozen=True)
class RewriteRule:
    """The single rule of the system: pattern IIJ and its replacement."""

    pattern: Word
    replacement: NCPolynomial


def rewrite_rule(rho_zero: bool = False) -> RewriteRule:
    """The ordering rule IIJ -> [2]_q IJI - JII + rho J (rho dropped if asked)."""
    terms = {
        Word.from_letters("IJI"): RhoScalar((q_int(2),)),
        Word.from_letters("JII"): RhoScalar((-ONE,)),
    }
    if not rho_zero:
        terms[Word.from_letters("J")] = RhoScalar((ZERO, ONE))
    return RewriteRule(Word.from_letters("IIJ"), NCPolynomial(terms))


@dataclass(frozen=True)
class ReduceStats:
    """Profile of one reduction run."""

    peak_terms: int
    steps: int
    passes: int
    backend: str


def redex_position(word: Word) -> int | None:
    """Index of the leftmost IIJ factor, or None for a normal word."""
    pos = _kernel_py.find_redex(word.code)
    return None if pos < 0 else pos


def redex_positions(word: Word) -> list[int]:
    """All positions where IIJ occurs in the word."""
    n = len(word)
    code = word.code
    return [i for i in range(n - 2) if (code >> (n - 3 - i)) & 7 == 0b110]


def rewrite_at(word: Word, pos: int, rho_zero: bool = False) -> NCPolynomial:
    """Apply the rule to the redex at the given position (one rewrite step)."""
    if pos not in redex_positions(word):
        raise ValueError(f"no IIJ factor at position {pos} of {word.letters!r}")
    w_iji, w_jii, w_j = _kernel_py.rewrite_codes(word.code, pos)
    terms = {
        Word(w_iji): RhoScalar((q_int(2),)),
        Word(w_jii): RhoScalar((-ONE,)),
    }
    if not rho_zero:
        terms[Word(w_j)] = RhoScalar((ZERO, ONE))
    return NCPolynomial(terms)


def rewrite_leftmost(word: Word, rho_zero: bool = False) -> NCPolynomial | None:
    """One step at the leftmost redex; None if the word is already normal."""
    pos = redex_position(word)
    if pos is None:
        return None
    return rewrite_at(word, pos, rho_zero)


def _denominator_lcm(x: NCPolynomial) -> LaurentScalar:
    lcm = ONE
    for coeff in x.terms.values():
        for ls in coeff.coeffs:
            if not ls.is_zero and not ls.is_polynomial:
                lcm = laurent_lcm(lcm, LaurentScalar(ls.den))
    return lcm


def _pack(x: NCPolynomial) -> dict:
    packed: dict = {}
    for word, coeff in x.terms.items():
        entry: dict = {}
        for p, ls in enumerate(coeff.coeffs):
            if ls.is_zero:
                continue
            base = (p << RHO_SHIFT) + Q_OFFSET
            for e, c in ls.num.items():
                entry[base + e] = c
        if entry:
            packed[word.code] = entry
    return packed


def _unpack(packed: dict) -> NCPolynomial:
    terms: dict[Word, RhoScalar] = {}
    for code, entry in packed.items():
        if not entry:
            continue
        by_rho: dict[int, dict] = {}
        for key, c in entry.items():
            p, e = divmod(key, RHO_STEP)
            by_rho.setdefault(p, {})[e - Q_OFFSET] = c
        top = max(by_rho)
        coeffs = [LaurentScalar(by_rho.get(p, {})) for p in range(top + 1)]
        terms[Word(code)] = RhoScalar(coeffs)
    return NCPolynomial(terms)


def reduce_with_stats(x: NCPolynomial, rho_zero: bool = False) -> tuple[NCPolynomial, ReduceStats]:
    """Normal form of x plus a profile of the run.

    The result contains no word with an IIJ factor and equals x modulo the
    two-sided ideal of the defining relation (its rho-zero truncation in
    rho-zero mode).
    """
    if x.is_zero:
        return x, ReduceStats(0, 0, 0, _kernel.BACKEND)
    scale = _denominator_lcm(x)
    if not scale.is_one:
        x = x * scale
    packed = _pack(x)
    kern = _kernel
    if kern.BACKEND != "python" and any(
        (code.bit_length() - 1) > _MAX_COMPILED_LEN for code in packed
    ):
        kern = _kernel_py
    out, peak, steps, passes = kern.reduce_packed(packed, rho_zero)
    result = _unpack(out)
    if not scale.is_one:
        result = result * exact_div(ONE, scale)
    return result, ReduceStats(peak, steps, passes, kern.BACKEND)


def reduce(x: NCPolynomial, rho_zero: bool = False) -> NCPolynomial:
    """Unique normal form of x under the ordering prescription."""
    return reduce_with_stats(x, rho_zero)[0]


def reduce_randomized(
    x: NCPolynomial,
    rng: random.Random,
    rho_zero: bool = False,
    on_step: Callable[[Word, list[Word]], None] | None = None,
) -> NCPolynomial:
    """Reduce with a randomized redex-selection order.

    Confluence makes the strategy semantically irrelevant; this engine exists
    so tests can compare arbitrary strategies against the kernel and inspect
    individual steps via ``on_step(redex_word, produced_words)``.  Works
    directly on RhoScalar coefficients (rational q-coefficients included).
    """
    terms = dict(x.terms)
    two_q = q_int(2)
    while True:
        reducible = sorted(
            (w for w in terms if _kernel_py.find_redex(w.code) >= 0),
            key=lambda w: w.code,
        )
        if not reducible:
            break
        word = rng.choice(reducible)
        pos = rng.choice(redex_positions(word))
        coeff = terms.pop(word)
        w_iji, w_jii, w_j = _kernel_py.rewrite_codes(word.code, pos)
        produced = []
        for target, factor in ((w_iji, two_q), (w_jii, -ONE)):
            tw = Word(target)
            produced.append(tw)
            n = terms.get(tw, RhoScalar(())) + coeff * factor
            if n.is_zero:
                terms.pop(tw, None)
            else:
                terms[tw] = n
        if not rho_zero:
            tw = Word(w_j)
            produced.append(tw)
            n = terms.get(tw, RhoScalar(())) + coeff * RhoScalar((ZERO, ONE))
            if n.is_zero:
                terms.pop(tw, None)
            else:
                terms[tw] = n
        if on_step is not None:
            on_step(word, produced)
    return NCPolynomial(terms)


def leading_word(x: NCPolynomial) -> Word:
    """Maximal word of a nonzero polynomial under graded lex with I > J."""
    if x.is_zero:
        raise ValueError("the zero polynomial has no leading word")
    return Word(max(w.code for w in x.terms))
