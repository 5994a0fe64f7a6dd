"""Pure-Python and compiled kernels must be indistinguishable."""

import importlib.util
import random

import pytest

from qonsager import _kernel_py
from qonsager.freealg import NCPolynomial, Word
from qonsager.qcoeff import RhoScalar, q_int
from qonsager.reducer import _pack, kernel_backend

HAVE_CY = importlib.util.find_spec("qonsager._kernel_cy") is not None

pytestmark = pytest.mark.skipif(
    not HAVE_CY, reason="compiled kernel not built (pure-Python fallback active)"
)


def _kernel_cy():
    from qonsager import _kernel_cy

    return _kernel_cy


def _random_packed(rng, words=3, max_len=11):
    terms = {}
    for _ in range(words):
        w = Word.from_letters("".join(rng.choice("IJ") for _ in range(rng.randint(1, max_len))))
        coeff = RhoScalar((q_int(rng.randint(1, 3)), q_int(rng.randint(0, 2))))
        terms[w] = terms.get(w, RhoScalar(())) + coeff
    return _pack(NCPolynomial(terms))


def test_backend_is_cython_when_built():
    assert kernel_backend() == "cython"


def test_constants_match():
    cy = _kernel_cy()
    assert cy.Q_OFFSET == _kernel_py.Q_OFFSET
    assert cy.RHO_SHIFT == _kernel_py.RHO_SHIFT
    assert cy.RHO_STEP == _kernel_py.RHO_STEP


def test_find_redex_and_rewrite_agree():
    cy = _kernel_cy()
    rng = random.Random(99)
    for _ in range(300):
        w = Word.from_letters("".join(rng.choice("IJ") for _ in range(rng.randint(0, 14))))
        pos_py = _kernel_py.find_redex(w.code)
        assert cy.find_redex(w.code) == pos_py
        if pos_py >= 0:
            assert tuple(cy.rewrite_codes(w.code, pos_py)) == tuple(
                _kernel_py.rewrite_codes(w.code, pos_py)
            )


@pytest.mark.parametrize("rho_zero", [False, True])
def test_reduce_packed_identical(rho_zero):
    cy = _kernel_cy()
    rng = random.Random(7)
    for _ in range(25):
        packed = _random_packed(rng)
        out_py = _kernel_py.reduce_packed({c: dict(t) for c, t in packed.items()}, rho_zero)
        out_cy = cy.reduce_packed({c: dict(t) for c, t in packed.items()}, rho_zero)
        assert out_py == out_cy  # terms, peak, steps, passes all equal
