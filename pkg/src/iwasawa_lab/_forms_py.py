"""Pure-Python kernel for positive definite binary quadratic forms.

Mirrors ``_forms.pyx`` function for function; ``forms.py`` picks whichever
is available.
"""


def reduce_form(a, b, c):
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f1, f2, D):
    """Dirichlet composition followed by reduction (Cohen, Alg. 5.4.7)."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(a3, b3, c3)


def identity(D):
    k = D % 2
    return reduce_form(1, k, (k - D) // 4)


def form_power(f, n, D):
    result = identity(D)
    base = f
    while n:
        if n & 1:
            result = compose(result, base, D)
        n >>= 1
        if n:
            base = compose(base, base, D)
    return result


def reduced_forms(D):
    """All reduced forms (a, b, c) of discriminant D < 0, primitive or not."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and c == a):
                continue
            out.append((a, b, c))
        a += 1
    return out


def element_orders(forms, D, h, primes):
    """Order of each form, found by stripping primes from the exponent h."""
    e = identity(D)
    orders = []
    for f in forms:
        k = h
        for ell in primes:
            while k % ell == 0 and form_power(f, k // ell, D) == e:
                k //= ell
        orders.append(k)
    return orders
