"""Exact-arithmetic engine for higher-order relations of ADE-type
generalized q-Onsager algebras.

Subpackage map:

* ``qcoeff``   -- exact Laurent/rational arithmetic in q, rho-polynomials
* ``freealg``  -- free algebra on the two generators of one linked pair
* ``reducer``  -- ordering prescription as a confluent rewriting system
* ``coeffs``   -- the coefficient tables c[r,p,k] via four independent pipelines
* ``verify``   -- builds the degree-(2r+1) relation and reduces it to zero
* ``repcheck`` -- evaluation-representation and spectral evidence checks
* ``cli``      -- batch front end
"""

__version__ = "0.1.0"

from .qcoeff import (  # noqa: F401
    LaurentScalar,
    RhoScalar,
    exact_div,
    q_binomial,
    q_factorial,
    q_int,
)
