"""Polynomial arithmetic in the Iwasawa algebra Z_p[[T]].

Power series are only ever handled through polynomial data: every object we
need is a quotient of Z_p[[T]] by polynomials, so a dense coefficient tuple
reduced modulo p^N is the working representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .errors import ConfigurationError, DomainError, PrecisionExhausted, ResourceError
from .padic import GUARD_DIGITS, INF, PadicInt, default_precision, vp

#: largest p^n for which omega/nu polynomials are materialised.
DEGREE_CAP = 2**12


def _strip(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class LambdaPoly:
    """A polynomial over Z_p modulo p^N, ascending coefficients.

    ``role`` records which variable the polynomial lives in ("H" for the
    variable T = h - 1, "Gamma" for S = gamma - 1). It is documentary and does
    not take part in equality.
    """

    p: int
    N: int
    coeffs: tuple[int, ...]
    role: str = field(default="H", compare=False)

    def __post_init__(self):
        q = self.p**self.N
        if any(not 0 <= c < q for c in self.coeffs):
            raise DomainError("coefficients must be reduced; use LambdaPoly.of()")
        if self.coeffs and self.coeffs[-1] == 0:
            raise DomainError("leading coefficient vanishes; use LambdaPoly.of()")

    @classmethod
    def of(cls, p: int, coeffs: Iterable[int], N: int | None = None, role: str = "H") -> "LambdaPoly":
        N = default_precision() if N is None else N
        q = p**N
        return cls(p, N, _strip([int(c) % q for c in coeffs]), role)

    @classmethod
    def one(cls, p: int, N: int | None = None, role: str = "H") -> "LambdaPoly":
        return cls.of(p, [1], N, role)

    @classmethod
    def T(cls, p: int, N: int | None = None, role: str = "H") -> "LambdaPoly":
        return cls.of(p, [0, 1], N, role)

    # --- basic queries -------------------------------------------------

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_distinguished(self) -> bool:
        return self.is_monic() and all(c % self.p == 0 for c in self.coeffs[:-1])

    def is_unit(self) -> bool:
        return bool(self.coeffs) and self.coeffs[0] % self.p != 0

    def coefficient(self, i: int) -> PadicInt:
        c = self.coeffs[i] if i < len(self.coeffs) else 0
        return PadicInt(self.p, self.N, c)

    @property
    def padic_coeffs(self) -> list[PadicInt]:
        return [PadicInt(self.p, self.N, c) for c in self.coeffs]

    def content_valuation(self) -> int:
        """Smallest coefficient valuation, i.e. the mu-part of the series."""
        if self.is_zero():
            raise PrecisionExhausted("polynomial vanishes at working precision")
        return min(vp(c, self.p) for c in self.coeffs if c)

    def weierstrass_degree(self) -> int:
        """Index of the first unit coefficient of f / p^t."""
        t = self.content_valuation()
        pt = self.p**t
        for i, c in enumerate(self.coeffs):
            if c and (c // pt) % self.p:
                return i
        raise AssertionError("unreachable: content valuation is attained")

    def __call__(self, x: int) -> int:
        q = self.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % q
        return acc

    # --- ring operations -----------------------------------------------

    def _check(self, other: "LambdaPoly") -> None:
        if other.p != self.p or other.N != self.N:
            raise ConfigurationError(
                f"mismatched contexts: (p={self.p}, N={self.N}) vs (p={other.p}, N={other.N})"
            )

    def _new(self, coeffs: list[int]) -> "LambdaPoly":
        q = self.modulus
        return LambdaPoly(self.p, self.N, _strip([c % q for c in coeffs]), self.role)

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return self._new([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> "LambdaPoly":
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def __mul__(self, other) -> "LambdaPoly":
        if isinstance(other, int):
            return self._new([c * other for c in self.coeffs])
        self._check(other)
        return self._new(poly_mul(self.coeffs, other.coeffs, self.modulus))

    __rmul__ = __mul__

    def divmod_monic(self, g: "LambdaPoly") -> tuple["LambdaPoly", "LambdaPoly"]:
        self._check(g)
        if not g.is_monic():
            raise DomainError("division is only defined by monic polynomials")
        quo, rem = poly_divmod_monic(self.coeffs, g.coeffs, self.modulus)
        return self._new(quo), self._new(rem)

    def __mod__(self, g: "LambdaPoly") -> "LambdaPoly":
        return self.divmod_monic(g)[1]

    def with_role(self, role: str) -> "LambdaPoly":
        return LambdaPoly(self.p, self.N, self.coeffs, role)

    # --- serialisation -------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "coeffs": [str(c) for c in self.coeffs], "role": self.role}

    @classmethod
    def from_json(cls, data: dict) -> "LambdaPoly":
        return cls.of(int(data["p"]), [int(c) for c in data["coeffs"]], int(data["N"]), data.get("role", "H"))

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        q = self.modulus
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            c = c - q if c > q // 2 else c
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if i and c == 1:
                terms.append(mono)
            elif i and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(reversed(terms)).replace("+ -", "- ")


# --- raw coefficient-list kernels --------------------------------------


def poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % q for c in out]


def poly_divmod_monic(a: Sequence[int], g: Sequence[int], q: int) -> tuple[list[int], list[int]]:
    d = len(g) - 1
    rem = [c % q for c in a]
    if len(rem) <= d:
        return [], rem
    quo = [0] * (len(rem) - d)
    for k in range(len(rem) - 1, d - 1, -1):
        c = rem[k] % q
        if c:
            quo[k - d] = c
            base = k - d
            for i in range(d):
                rem[base + i] -= c * g[i]
        rem[k] = 0
    return quo, [c % q for c in rem[:d]]


def poly_rem_monic(a: Sequence[int], g: Sequence[int], q: int) -> list[int]:
    return poly_divmod_monic(a, g, q)[1]


def poly_mulmod(a: Sequence[int], b: Sequence[int], g: Sequence[int], q: int) -> list[int]:
    return poly_rem_monic(poly_mul(a, b, q), g, q)


# --- cyclotomic elements -------------------------------------------------


def _check_level(p: int, n: int) -> None:
    if n < 0:
        raise DomainError(f"level must be non-negative, got {n}")
    if p**n > DEGREE_CAP:
        raise ResourceError(f"p^n = {p}^{n} exceeds the degree cap {DEGREE_CAP}")


@lru_cache(maxsize=256)
def _omega_coeffs(p: int, n: int, N: int) -> tuple[int, ...]:
    q = p**N
    e = p**n
    return tuple(comb(e, k) % q for k in range(1, e + 1))


def omega(n: int, p: int, N: int | None = None, role: str = "H") -> LambdaPoly:
    """(1+T)^{p^n} - 1."""
    N = default_precision() if N is None else N
    _check_level(p, n)
    return LambdaPoly(p, N, (0,) + _omega_coeffs(p, n, N), role)


@lru_cache(maxsize=256)
def _nu_coeffs(p: int, m: int, n: int, N: int) -> tuple[int, ...]:
    q = p**N
    num = (0,) + _omega_coeffs(p, m, N)
    den = (0,) + _omega_coeffs(p, n, N)
    if n == 0:
        return tuple(num[1:])
    quo, rem = poly_divmod_monic(num, den, q)
    assert not any(rem), "omega_n must divide omega_m"
    return tuple(quo)


def nu(m: int, n: int, p: int, N: int | None = None, role: str = "H") -> LambdaPoly:
    """omega_m / omega_n for m > n >= 0."""
    N = default_precision() if N is None else N
    if not m > n >= 0:
        raise DomainError(f"nu needs m > n >= 0, got m={m}, n={n}")
    _check_level(p, m)
    return LambdaPoly(p, N, _nu_coeffs(p, m, n, N), role)


def cyclotomic_factor(j: int, p: int, N: int | None = None, role: str = "H") -> LambdaPoly:
    """The irreducible factor of omega_j not dividing omega_{j-1} (T for j = 0)."""
    if j == 0:
        return LambdaPoly.T(p, N, role)
    return nu(j, j - 1, p, N, role)


def cyclotomic_levels(f: LambdaPoly) -> list[int]:
    """Levels j with Phi_{p^j}(1+T) dividing f (j = 0 meaning T | f)."""
    if not f.is_monic():
        raise DomainError("cyclotomic factor search expects a monic polynomial")
    hits = []
    j = 0
    while True:
        deg = 1 if j == 0 else (f.p - 1) * f.p ** (j - 1)
        if deg > f.degree:
            return hits
        phi = cyclotomic_factor(j, f.p, f.N, f.role)
        if (f % phi).is_zero():
            hits.append(j)
        j += 1


def nu_residue(f: LambdaPoly, n: int, e: int) -> list[int]:
    """Coefficients of nu_{n,e} reduced modulo the monic polynomial f.

    Works through the tower nu_{n,e} = prod_j sum_{k<p} (1+T)^{k p^j}, so the
    degree-(p^n - p^e) polynomial is never built.
    """
    if not f.is_monic():
        raise DomainError("nu_residue needs a monic modulus")
    if not n >= e >= 0:
        raise DomainError(f"need n >= e >= 0, got n={n}, e={e}")
    p, q, g = f.p, f.modulus, f.coeffs
    one = poly_rem_monic([1], g, q)
    x = poly_rem_monic([1, 1], g, q)
    for _ in range(e):
        x = _powmod(x, p, g, q)
    acc = one
    for _ in range(e, n):
        block = one
        power = one
        for _ in range(p - 1):
            power = poly_mulmod(power, x, g, q)
            block = _add(block, power, q)
        acc = poly_mulmod(acc, block, g, q)
        x = _powmod(x, p, g, q)
    return acc


def _add(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n)]


def _powmod(a: Sequence[int], k: int, g: Sequence[int], q: int) -> list[int]:
    result = poly_rem_monic([1], g, q)
    base = list(a)
    while k:
        if k & 1:
            result = poly_mulmod(result, base, g, q)
        k >>= 1
        if k:
            base = poly_mulmod(base, base, g, q)
    return result


# --- determinant valuation ----------------------------------------------


def det_valuation(matrix: Sequence[Sequence[int]], p: int, N: int, guard: int = GUARD_DIGITS) -> float:
    """v_p(det) of a square matrix over Z_p given modulo p^N.

    Gaussian elimination with a pivot of minimal valuation over the whole
    remaining block. Each pivot valuation is exact provided it stays below
    N - guard; a block that vanishes modulo p^N is reported as ``inf``.
    """
    q = p**N
    rows = [[x % q for x in r] for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("matrix must be square")
    total = 0
    for k in range(n):
        best_v, bi, bj = N, -1, -1
        for i in range(k, n):
            row = rows[i]
            for j in range(k, n):
                x = row[j]
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if v < best_v:
                        best_v, bi, bj = v, i, j
                        if v == 0:
                            break
            if best_v == 0:
                break
        if bi < 0:
            return INF
        if best_v >= N - guard:
            raise PrecisionExhausted(
                f"pivot valuation {best_v} within {guard} digits of precision {N}"
            )
        rows[k], rows[bi] = rows[bi], rows[k]
        if bj != k:
            for r in rows:
                r[k], r[bj] = r[bj], r[k]
        pv = p**best_v
        inv = pow(rows[k][k] // pv, -1, q)
        pivot_row = rows[k]
        for i in range(k + 1, n):
            x = rows[i][k]
            if x:
                factor = (x // pv) * inv % q
                r = rows[i]
                for j in range(k, n):
                    r[j] = (r[j] - factor * pivot_row[j]) % q
        total += best_v
    return total


def multiplication_matrix(g: Sequence[int], f: Sequence[int], q: int) -> list[list[int]]:
    """Matrix of multiplication by g on Z_p[T]/(f), f monic, basis 1..T^{d-1}."""
    d = len(f) - 1
    col = poly_rem_monic(g, f, q)
    cols = []
    for _ in range(d):
        col = col + [0] * (d - len(col))
        cols.append(col)
        col = poly_rem_monic([0] + col, f, q)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def sylvester_matrix(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - i - len(fr)))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - i - len(gr)))
    return rows


def resultant_valuation(f: LambdaPoly, g: LambdaPoly, guard: int = GUARD_DIGITS) -> float:
    """v_p(Res(f, g)); ``inf`` signals a common factor.

    When f is distinguished this is log_p |Lambda/(f, g)|.
    """
    f._check(g)
    if f.is_zero() or g.is_zero():
        raise DomainError("resultant of the zero polynomial")
    p, N, q = f.p, f.N, f.modulus
    if f.degree == 0 or g.degree == 0:
        c, other = (f, g) if f.degree == 0 else (g, f)
        if c.degree == 0 and other.degree == 0:
            return 0
        v = vp(c.coeffs[0], p)
        if v >= N - guard:
            raise PrecisionExhausted(f"constant of valuation {v} at precision {N}")
        return v * other.degree
    if f.is_monic():
        return det_valuation(multiplication_matrix(g.coeffs, f.coeffs, q), p, N, guard)
    if g.is_monic():
        return det_valuation(multiplication_matrix(f.coeffs, g.coeffs, q), p, N, guard)
    return det_valuation(sylvester_matrix(f.coeffs, g.coeffs), p, N, guard)


# --- Weierstrass preparation -------------------------------------------


@dataclass(frozen=True)
class WeierstrassDecomposition:
    """f = p^mu_part * unit_part * distinguished_part.

    The two polynomial parts are certified modulo p^precision, where
    precision = N - mu_part; multiplying back by p^mu_part recovers f
    modulo p^N.
    """

    mu_part: int
    distinguished_part: LambdaPoly
    unit_part: LambdaPoly

    @property
    def precision(self) -> int:
        return self.distinguished_part.N

    @property
    def lambda_part(self) -> int:
        return self.distinguished_part.degree

    def reconstruct(self, N: int) -> LambdaPoly:
        g, u = self.distinguished_part, self.unit_part
        prod = poly_mul(u.coeffs, g.coeffs, g.modulus)
        return LambdaPoly.of(g.p, [c * g.p**self.mu_part for c in prod], N, g.role)


def weierstrass_prepare(f: LambdaPoly) -> WeierstrassDecomposition:
    if f.is_zero():
        raise PrecisionExhausted("all coefficients vanish at the working precision")
    p = f.p
    t = f.content_valuation()
    N1 = f.N - t
    if N1 < 1:
        raise PrecisionExhausted("no precision left after removing the p-power")
    q = p**N1
    f1 = [(c // p**t) % q for c in f.coeffs]
    d = next(i for i, c in enumerate(f1) if c % p)
    if d == 0:
        return WeierstrassDecomposition(
            t, LambdaPoly(p, N1, (1,), f.role), LambdaPoly(p, N1, _strip(f1), f.role)
        )
    # s = (f1 / T^d)^{-1} mod (p, T^d): the Hensel correction factor.
    ubar = [c % p for c in f1[d:]]
    s = _series_inverse_mod_p(ubar, d, p)
    g = [0] * d + [1]
    for _ in range(N1 + 1):
        quo, rem = poly_divmod_monic(f1, g, q)
        if not any(rem):
            return WeierstrassDecomposition(
                t, LambdaPoly(p, N1, _strip(g), f.role), LambdaPoly(p, N1, _strip(quo), f.role)
            )
        delta = poly_rem_monic(poly_mul(s, rem, q), g, q)
        g = [(a + (delta[i] if i < len(delta) else 0)) % q for i, a in enumerate(g[:d])] + [1]
    raise AssertionError("Hensel lifting failed to converge")


def _series_inverse_mod_p(u: Sequence[int], d: int, p: int) -> list[int]:
    inv0 = pow(u[0], -1, p)
    out = [0] * d
    for k in range(d):
        acc = (1 if k == 0 else 0) - sum(u[i] * out[k - i] for i in range(1, min(k, len(u) - 1) + 1))
        out[k] = acc * inv0 % p
    return out


__all__ = [
    "DEGREE_CAP",
    "LambdaPoly",
    "WeierstrassDecomposition",
    "cyclotomic_factor",
    "cyclotomic_levels",
    "det_valuation",
    "multiplication_matrix",
    "nu",
    "nu_residue",
    "omega",
    "resultant_valuation",
    "sylvester_matrix",
    "weierstrass_prepare",
]
