# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernel for the ordering prescription.

Twin of _kernel_py.py: identical algorithm and data layout, with the word
codes and coefficient keys handled as C integers.  Coefficient values stay
Python ints, so coefficients keep arbitrary precision.  The driver only
routes words of length <= 60 here (codes must fit 64 bits).
"""

BACKEND = "cython"

Q_OFFSET = 1 << 24
RHO_SHIFT = 26
RHO_STEP = 1 << RHO_SHIFT

cdef unsigned long long C_RHO_STEP = RHO_STEP


cdef inline int _find_redex_c(unsigned long long code) nogil:
    cdef int n = 0
    cdef unsigned long long tmp = code
    while tmp > 1:
        tmp >>= 1
        n += 1
    cdef int i
    for i in range(n - 2):
        if (code >> (n - 3 - i)) & 7 == 6:  # 0b110 = IIJ
            return i
    return -1


def find_redex(code):
    """Position of the leftmost IIJ factor, or -1 if the word is normal."""
    return _find_redex_c(code)


def rewrite_codes(code, pos):
    """Codes of the three replacement words for the redex at pos."""
    cdef unsigned long long ucode = code
    cdef int ipos = pos
    cdef int n = 0
    cdef unsigned long long tmp = ucode
    while tmp > 1:
        tmp >>= 1
        n += 1
    cdef int tail = n - 3 - ipos
    cdef unsigned long long bits = ucode ^ ((<unsigned long long> 1) << n)
    cdef unsigned long long suffix = bits & (((<unsigned long long> 1) << tail) - 1)
    cdef unsigned long long head = (bits >> (tail + 3)) | ((<unsigned long long> 1) << ipos)
    cdef unsigned long long w_iji = (((head << 3) | 5) << tail) | suffix
    cdef unsigned long long w_jii = (((head << 3) | 3) << tail) | suffix
    cdef unsigned long long w_j = ((head << 1) << tail) | suffix
    return w_iji, w_jii, w_j


cdef _merge(dict normal, dict nxt, unsigned long long code, list items):
    cdef dict tgt = <dict> normal.get(code)
    if tgt is None:
        tgt = <dict> nxt.get(code)
    if tgt is None:
        tgt = {}
        if _find_redex_c(code) >= 0:
            nxt[code] = tgt
        else:
            normal[code] = tgt
    cdef object k, v, n
    for k, v in items:
        n = tgt.get(k, 0) + v
        if n:
            tgt[k] = n
        else:
            del tgt[k]


def reduce_packed(terms, rho_zero):
    """Reduce a packed polynomial to normal form.

    Returns (normal_terms, peak_words, steps, passes); see the pure twin.
    """
    cdef bint drop_rho = bool(rho_zero)
    cdef dict normal = {}
    cdef dict active = {}
    cdef dict nxt, coeff, two
    cdef unsigned long long code, w_iji, w_jii, w_j
    cdef int pos
    cdef long long peak, live, steps = 0, passes = 0
    cdef object k, v, n

    for code, coeff in (<dict> terms).items():
        if coeff:
            if _find_redex_c(code) >= 0:
                active[code] = dict(coeff)
            else:
                normal[code] = dict(coeff)
    peak = len(normal) + len(active)

    while active:
        passes += 1
        nxt = {}
        for code, coeff in active.items():
            if not coeff:
                continue
            pos = _find_redex_c(code)
            w_iji, w_jii, w_j = rewrite_codes(code, pos)
            steps += 1
            two = {}
            for k, v in coeff.items():
                n = two.get(k + 1, 0) + v
                if n:
                    two[k + 1] = n
                else:
                    del two[k + 1]
                n = two.get(k - 1, 0) + v
                if n:
                    two[k - 1] = n
                else:
                    del two[k - 1]
            _merge(normal, nxt, w_iji, list(two.items()))
            _merge(normal, nxt, w_jii, [(k, -v) for k, v in coeff.items()])
            if not drop_rho:
                _merge(normal, nxt, w_j, [(k + C_RHO_STEP, v) for k, v in coeff.items()])
        active = {c: t for c, t in nxt.items() if t}
        normal = {c: t for c, t in normal.items() if t}
        live = len(normal) + len(active)
        if live > peak:
            peak = live
    return normal, peak, steps, passes
