# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
# cdivision=False keeps Python floor semantics for // and % on C integers.
"""Compiled kernel for positive definite binary quadratic forms.

Same API as ``_forms_py``. Values are carried in 64-bit integers, which is
safe for |D| <= 10^7 (the cap enforced in ``quadratic.py``): reduced forms
have a <= sqrt(|D|/3) and every intermediate stays below 2^62.
"""

ctypedef long long i64


cdef inline void _reduce(i64 *a, i64 *b, i64 *c):
    cdef i64 r, t
    while True:
        if not (-a[0] < b[0] <= a[0]):
            r = (a[0] - b[0]) // (2 * a[0])
            c[0] = a[0] * r * r + b[0] * r + c[0]
            b[0] = b[0] + 2 * r * a[0]
        if a[0] > c[0]:
            t = a[0]
            a[0] = c[0]
            c[0] = t
            b[0] = -b[0]
            continue
        if a[0] == c[0] and b[0] < 0:
            b[0] = -b[0]
        return


cdef inline i64 _xgcd(i64 a, i64 b, i64 *x, i64 *y):
    cdef i64 x0 = 1, x1 = 0, y0 = 0, y1 = 1, q, r, t
    while b != 0:
        q = a // b
        r = a - q * b
        a = b
        b = r
        t = x0 - q * x1
        x0 = x1
        x1 = t
        t = y0 - q * y1
        y0 = y1
        y1 = t
    x[0] = x0
    y[0] = y0
    return a


cdef void _compose(i64 a1, i64 b1, i64 c1, i64 a2, i64 b2, i64 c2, i64 D,
                   i64 *ra, i64 *rb, i64 *rc):
    cdef i64 t, s, n, y1, d, u, v, y2, x2, d1, v1, v2, r, a3, b3, c3
    if a1 > a2:
        t = a1; a1 = a2; a2 = t
        t = b1; b1 = b2; b2 = t
        t = c1; c1 = c2; c2 = t
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        d = _xgcd(a2, a1, &u, &v)
        y1 = u
    if s % d == 0:
        y2 = -1
        x2 = 0
        d1 = d
    else:
        d1 = _xgcd(s, d, &x2, &v)
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (((y1 * y2) % v1) * (n % v1) - (x2 % v1) * (c2 % v1)) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    _reduce(&a3, &b3, &c3)
    ra[0] = a3
    rb[0] = b3
    rc[0] = c3


def reduce_form(a, b, c):
    cdef i64 A = a, B = b, C = c
    _reduce(&A, &B, &C)
    return (A, B, C)


def compose(f1, f2, D):
    cdef i64 a, b, c
    _compose(f1[0], f1[1], f1[2], f2[0], f2[1], f2[2], D, &a, &b, &c)
    return (a, b, c)


cdef void _identity(i64 D, i64 *a, i64 *b, i64 *c):
    cdef i64 k = D % 2
    a[0] = 1
    b[0] = k
    c[0] = (k - D) // 4
    _reduce(a, b, c)


def identity(D):
    cdef i64 a, b, c
    _identity(D, &a, &b, &c)
    return (a, b, c)


cdef void _power(i64 a, i64 b, i64 c, i64 n, i64 D, i64 *ra, i64 *rb, i64 *rc):
    cdef i64 xa, xb, xc
    _identity(D, &xa, &xb, &xc)
    while n:
        if n & 1:
            _compose(xa, xb, xc, a, b, c, D, &xa, &xb, &xc)
        n >>= 1
        if n:
            _compose(a, b, c, a, b, c, D, &a, &b, &c)
    ra[0] = xa
    rb[0] = xb
    rc[0] = xc


def form_power(f, n, D):
    cdef i64 a, b, c
    _power(f[0], f[1], f[2], n, D, &a, &b, &c)
    return (a, b, c)


def reduced_forms(D):
    cdef i64 d = D, a = 1, b, num, c
    out = []
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and c == a):
                continue
            out.append((a, b, c))
        a += 1
    return out


def element_orders(forms, D, h, primes):
    cdef i64 ea, eb, ec, fa, fb, fc, k, ell, pa, pb, pc
    cdef i64 d = D
    _identity(d, &ea, &eb, &ec)
    orders = []
    for f in forms:
        fa, fb, fc = f
        k = h
        for ell in primes:
            while k % ell == 0:
                _power(fa, fb, fc, k // ell, d, &pa, &pb, &pc)
                if pa == ea and pb == eb and pc == ec:
                    k = k // ell
                else:
                    break
        orders.append(k)
    return orders
