import numpy as np
import numba

"""
    fast.py

    Numba kernels for arithmetic in F_{p^m}. An element is an int64 vector
    of its m coordinates in the power basis (low degree first); a polynomial
    over the field is an int64 array of shape (n, m), row i holding the
    coefficient of x^i.

    `red` is the reduction table of the field: row k holds the coordinates
    of y^k modulo the defining polynomial, for 0 <= k <= 2m - 2. With it a
    product is a convolution followed by a table lookup.

    All residues stay in [0, p) and every product is reduced before it is
    accumulated, so p must stay below 2**31.
"""


@numba.njit
def int_inv(a, p):
    """Inverse of a nonzero residue modulo the prime p."""
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@numba.njit
def _mul_into(a, b, p, red, conv, out):
    # `out` must not alias `a` or `b`
    m = a.shape[0]
    for k in range(2 * m - 1):
        conv[k] = 0
    for i in range(m):
        x = a[i]
        if x != 0:
            for j in range(m):
                conv[i + j] = (conv[i + j] + x * b[j]) % p
    for j in range(m):
        out[j] = 0
    for k in range(2 * m - 1):
        c = conv[k]
        if c != 0:
            for j in range(m):
                out[j] = (out[j] + c * red[k, j]) % p


@numba.njit
def ext_mul(a, b, p, red):
    """
    Product of two field elements.

    Parameters
    ----------
    a, b : np.ndarray
        int64 coordinate vectors of length m
    p : int
        Characteristic
    red : np.ndarray
        Reduction table of shape (2m - 1, m)

    Returns
    -------
    np.ndarray
        Coordinates of a * b
    """
    m = a.shape[0]
    conv = np.zeros(2 * m - 1, dtype=np.int64)
    out = np.zeros(m, dtype=np.int64)
    _mul_into(a, b, p, red, conv, out)
    return out


@numba.njit
def _degree(v):
    for i in range(v.shape[0] - 1, -1, -1):
        if v[i] != 0:
            return i
    return -1


@numba.njit
def ext_inv(a, modulus, p):
    """
    Inverse of a nonzero element by the extended Euclidean algorithm in
    F_p[y], carrying only the cofactor of `a`.

    Parameters
    ----------
    a : np.ndarray
        int64 coordinate vector of length m, not zero
    modulus : np.ndarray
        Defining polynomial, int64 vector of length m + 1, low degree first
    p : int
        Characteristic
    """
    m = a.shape[0]
    size = m + 1
    r0 = modulus.copy()
    r1 = np.zeros(size, dtype=np.int64)
    r1[:m] = a
    s0 = np.zeros(size, dtype=np.int64)
    s1 = np.zeros(size, dtype=np.int64)
    s1[0] = 1
    d0 = _degree(r0)
    d1 = _degree(r1)
    while d1 > 0:
        lead_inv = int_inv(r1[d1], p)
        while d0 >= d1:
            coef = (r0[d0] * lead_inv) % p
            shift = d0 - d1
            for i in range(d1 + 1):
                r0[i + shift] = (r0[i + shift] - coef * r1[i] % p + p) % p
            for i in range(size - shift):
                s0[i + shift] = (s0[i + shift] - coef * s1[i] % p + p) % p
            d0 = _degree(r0)
        r0, r1 = r1, r0
        s0, s1 = s1, s0
        d0, d1 = d1, d0
    c = int_inv(r1[0], p)
    out = np.zeros(m, dtype=np.int64)
    for i in range(m):
        out[i] = (s1[i] * c) % p
    return out


@numba.njit
def _reduce_rows(conv, p, red):
    rows = conv.shape[0]
    width = conv.shape[1]
    m = red.shape[1]
    out = np.zeros((rows, m), dtype=np.int64)
    for r in range(rows):
        for k in range(width):
            c = conv[r, k]
            if c != 0:
                for j in range(m):
                    out[r, j] = (out[r, j] + c * red[k, j]) % p
    return out


@numba.njit
def poly_mul(A, B, p, red):
    """
    Product of two polynomials over F_{p^m}, stored as (n, m) arrays.
    Coefficient products are accumulated unreduced in y and reduced once
    per output row.
    """
    n1 = A.shape[0]
    n2 = B.shape[0]
    m = red.shape[1]
    if n1 == 0 or n2 == 0:
        return np.zeros((0, m), dtype=np.int64)
    conv = np.zeros((n1 + n2 - 1, 2 * m - 1), dtype=np.int64)
    for i in range(n1):
        for a in range(m):
            x = A[i, a]
            if x == 0:
                continue
            for j in range(n2):
                for b in range(m):
                    y = B[j, b]
                    if y != 0:
                        conv[i + j, a + b] = (conv[i + j, a + b] + x * y) % p
    return _reduce_rows(conv, p, red)


@numba.njit
def poly_divmod(A, B, p, red, lead_inv):
    """
    Schoolbook division A = Q * B + R.

    Parameters
    ----------
    A, B : np.ndarray
        Dividend and divisor, (n, m) arrays without trailing zero rows
    lead_inv : np.ndarray
        Inverse of the leading coefficient of B

    Returns
    -------
    Q, R : np.ndarray
        Quotient and remainder; R has exactly deg B rows and may carry
        trailing zero rows.
    """
    nA = A.shape[0]
    nB = B.shape[0]
    m = red.shape[1]
    R = A.copy()
    if nA < nB:
        return np.zeros((0, m), dtype=np.int64), R
    Q = np.zeros((nA - nB + 1, m), dtype=np.int64)
    conv = np.zeros(2 * m - 1, dtype=np.int64)
    coef = np.zeros(m, dtype=np.int64)
    prod = np.zeros(m, dtype=np.int64)
    for k in range(nA - nB, -1, -1):
        top = R[k + nB - 1]
        if _degree(top) < 0:
            continue
        _mul_into(top, lead_inv, p, red, conv, coef)
        Q[k] = coef
        for i in range(nB):
            _mul_into(coef, B[i], p, red, conv, prod)
            for j in range(m):
                R[k + i, j] = (R[k + i, j] - prod[j] + p) % p
    return Q, R[: nB - 1].copy()


@numba.njit
def vec_horner(C, X, p, red):
    """
    Evaluate the polynomial with coefficient rows C at every element of
    the (N, m) table X.
    """
    N, m = X.shape
    n = C.shape[0]
    out = np.zeros((N, m), dtype=np.int64)
    if n == 0:
        return out
    conv = np.zeros(2 * m - 1, dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    tmp = np.zeros(m, dtype=np.int64)
    for r in range(N):
        for j in range(m):
            acc[j] = C[n - 1, j]
        for k in range(n - 2, -1, -1):
            _mul_into(acc, X[r], p, red, conv, tmp)
            for j in range(m):
                acc[j] = (tmp[j] + C[k, j]) % p
        out[r] = acc
    return out


@numba.njit
def vec_pow(X, e, p, red):
    """Raise every row of the (N, m) table X to the non-negative power e."""
    N, m = X.shape
    out = np.zeros((N, m), dtype=np.int64)
    conv = np.zeros(2 * m - 1, dtype=np.int64)
    base = np.zeros(m, dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    tmp = np.zeros(m, dtype=np.int64)
    for r in range(N):
        for j in range(m):
            base[j] = X[r, j]
            acc[j] = 0
        acc[0] = 1
        k = e
        while k > 0:
            if k & 1:
                _mul_into(acc, base, p, red, conv, tmp)
                for j in range(m):
                    acc[j] = tmp[j]
            _mul_into(base, base, p, red, conv, tmp)
            for j in range(m):
                base[j] = tmp[j]
            k >>= 1
        out[r] = acc
    return out


@numba.njit
def encode(X, p):
    """
    Integer keys of the rows of X in canonical order: the first coordinate
    is the most significant base-p digit.
    """
    N, m = X.shape
    out = np.zeros(N, dtype=np.int64)
    for r in range(N):
        key = 0
        for j in range(m):
            key = key * p + X[r, j]
        out[r] = key
    return out
