"""Reference computations for the tests, written independently of the library.

They trade speed for obviousness: exact integer matrices with sympy,
brute-force enumeration, and textbook formulas.
"""

from functools import lru_cache
from math import gcd

from sympy import Matrix, Poly, ZZ, factorint, legendre_symbol, symbols
from sympy.matrices.normalforms import smith_normal_form

x = symbols("x")


# --- integers -----------------------------------------------------------------


def xgcd_inverse(a, m):
    """Inverse of a mod m by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = a % m, m, 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        return None
    return s0 % m


def vp(n, p):
    if n == 0:
        return float("inf")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def is_fundamental(D):
    if D % 4 == 1:
        return all(e == 1 for e in factorint(abs(D)).values())
    if D % 4 == 0:
        d = D // 4
        return d % 4 in (2, 3) and all(e == 1 for e in factorint(abs(d)).values())
    return False


def kronecker(D, n):
    """Kronecker symbol (D/n), n >= 1, by multiplicativity in n."""
    out = 1
    for q, e in factorint(n).items():
        if q == 2:
            s = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
        else:
            s = 0 if D % q == 0 else legendre_symbol(D % q, q)
        out *= s**e
    return out


def analytic_class_number(D):
    """Dirichlet's class number formula for D < 0."""
    w = {-3: 6, -4: 4}.get(D, 2)
    total = sum(kronecker(D, n) * n for n in range(1, -D))
    h = -w * total // (2 * -D)
    assert -w * total == h * 2 * -D
    return h


# --- Lambda-modules as integer matrices ------------------------------------------------


def companion(f):
    """Companion matrix of the monic integer polynomial with ascending coefficients f."""
    d = len(f) - 1
    C = [[0] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = 1
    for i in range(d):
        C[i][d - 1] = -f[i]
    return Matrix(C)


def poly_at_matrix(g, C):
    """g(C) for ascending integer coefficients g, by Horner's rule."""
    n = C.shape[0]
    R = Matrix.zeros(n, n)
    for c in reversed(g):
        R = R * C + c * Matrix.eye(n)
    return R


def snf_p_exponent(A, p):
    """log_p of the p-part of |coker A| via the Smith normal form over Z; None if infinite."""
    S = smith_normal_form(A, domain=ZZ)
    total = 0
    for i in range(min(S.shape)):
        d = int(S[i, i])
        if d == 0:
            return None
        total += vp(abs(d), p)
    return total


@lru_cache(maxsize=None)
def nu_coeffs(m, n, p):
    """nu_{m,n} = sum_{k < p^(m-n)} (1+T)^(k p^n), exactly over Z."""
    P = Poly(0, x)
    step = Poly((x + 1) ** (p**n), x)
    term = Poly(1, x)
    for _ in range(p ** (m - n)):
        P += term
        term *= step
    return tuple(int(c) for c in reversed(P.all_coeffs()))


def quotient_exponent_bruteforce(f, g, p):
    """log_p |Z_p[T]/(f, g)| for distinguished f, via Smith form of g(companion(f))."""
    return snf_p_exponent(poly_at_matrix(g, companion(f)), p)


# --- binary quadratic forms -------------------------------------------------------


def reduced_forms_bruteforce(D):
    """All reduced forms of discriminant D < 0 by scanning a box, primitive ones only."""
    out = []
    A = int((-D / 3) ** 0.5) + 1
    for a in range(1, A + 1):
        for b in range(-a, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if gcd(gcd(a, b), c) != 1:
                continue
            if abs(b) <= a <= c and not ((abs(b) == a or a == c) and b < 0):
                out.append((a, b, c))
    return sorted(out)


# --- the 2-adic tower --------------------------------------------------------------


def split_count_orbits(ell, n):
    """Number of orbits of multiplication by ell on (Z/2^(n+2))^x / {+-1}."""
    M = 2 ** (n + 2)
    classes = {min(u, M - u) for u in range(1, M, 2)}
    seen, orbits = set(), 0
    for c in sorted(classes):
        if c in seen:
            continue
        orbits += 1
        y = c
        while y not in seen:
            seen.add(y)
            y = y * ell % M
            y = min(y, M - y)
    return orbits


def real_cyclotomic_minpoly(n):
    """Minimal polynomial of 2 cos(2 pi / 2^(n+2)): psi_0 = x, psi_{k+1}(x) = psi_k(x^2 - 2)."""
    P = Poly(x, x)
    for _ in range(n):
        P = Poly(P.as_expr().subs(x, x**2 - 2), x)
    return P


def split_count_factoring(ell, n):
    """Number of distinct irreducible factors of psi_n mod ell (Dedekind-Kummer)."""
    P = Poly(real_cyclotomic_minpoly(n).as_expr(), x, modulus=ell)
    return len(P.factor_list()[1])


def residue_prime_data_orbits(q, n, D=None):
    """(number of primes, residue degree) above q in B_n or Q(sqrt D) B_n from Frobenius orbits."""
    M = 2 ** (n + 2)
    classes = sorted({min(u, M - u) for u in range(1, M, 2)})
    chi = 1 if D is None else kronecker(D, q)
    signs = (1,) if D is None else (1, -1)
    elems = [(c, s) for c in classes for s in signs]
    seen, orbits, size = set(), 0, None
    for e in elems:
        if e in seen:
            continue
        orbits += 1
        y, k = e, 0
        while y not in seen:
            seen.add(y)
            c = y[0] * q % M
            y = (min(c, M - c), y[1] * chi)
            k += 1
        size = k
    return orbits, size


# --- tower models ------------------------------------------------------------------


def lift(f):
    q = f.modulus
    return [c if c <= q // 2 else c - q for c in f.coeffs]


def poly_product(a, b):
    P = Poly(list(reversed(a)), x) * Poly(list(reversed(b)), x)
    return [int(c) for c in reversed(P.all_coeffs())]


def torsion_oracle(model, m):
    p, total = model.p, 0
    for _, beta in model.h_components:
        b = lift(beta)
        if len(b) == 1:
            total += vp(b[0], p) * (p**m - p**model.e1)
        elif m > model.e1:
            total += quotient_exponent_bruteforce(b, nu_coeffs(m, model.e1, p), p)
    return total


def gamma_oracle(model, N):
    g = poly_product(lift(model.gamma_scaling), nu_coeffs(N, 0, model.p) if N else [1])
    return sum(quotient_exponent_bruteforce(lift(w), g, model.p) for w in model.gamma_module.lambda_components)


def xinv_oracle(model):
    lam = mu = 0
    for alpha, beta in model.h_components:
        c = poly_product(lift(alpha), lift(beta))
        t = min(vp(v, model.p) for v in c if v)
        mu += t
        lam += next(i for i, v in enumerate(c) if v and vp(v, model.p) == t)
    return lam, mu
