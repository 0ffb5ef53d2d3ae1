"""Elements of Z_p known modulo a fixed power p^N."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import ConfigurationError, DomainError

INF = math.inf

#: p-adic digits carried by default; override with IWASAWA_LAB_PRECISION.
DEFAULT_PRECISION = 256
#: results whose valuation comes within this many digits of N are refused.
GUARD_DIGITS = 8


def default_precision() -> int:
    raw = os.environ.get("IWASAWA_LAB_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"IWASAWA_LAB_PRECISION={raw!r} is not an integer")
    if value <= GUARD_DIGITS:
        raise ConfigurationError(f"precision must exceed the guard band ({GUARD_DIGITS})")
    return value


def vp(x: int, p: int) -> float:
    """Exact p-adic valuation of an integer (``inf`` for 0)."""
    if x == 0:
        return INF
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise DomainError(f"{p} is not a prime")


@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p modulo p^N.

    ``exact_zero`` separates the genuine zero from a class that merely
    vanishes modulo p^N; only the former has infinite valuation.
    """

    p: int
    N: int
    residue: int
    exact_zero: bool = False

    def __post_init__(self):
        if self.p < 2:
            raise DomainError(f"prime must be >= 2, got {self.p}")
        if self.N < 1:
            raise DomainError(f"precision exponent must be positive, got {self.N}")
        if not 0 <= self.residue < self.p ** self.N:
            raise DomainError("residue out of range; use PadicInt.of()")
        if self.exact_zero and self.residue != 0:
            raise DomainError("exact zero must have residue 0")

    @classmethod
    def of(cls, p: int, N: int, value: int) -> "PadicInt":
        """Reduce an integer; the integer 0 becomes the exact zero."""
        return cls(p, N, value % p**N, exact_zero=(value == 0))

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def valuation(self) -> float:
        if self.exact_zero:
            return INF
        if self.residue == 0:
            return self.N
        return vp(self.residue, self.p)

    def is_unit(self) -> bool:
        return self.valuation == 0

    def _check(self, other: "PadicInt") -> None:
        if not isinstance(other, PadicInt):
            raise TypeError(f"expected PadicInt, got {type(other).__name__}")
        if other.p != self.p or other.N != self.N:
            raise ConfigurationError(
                f"mismatched p-adic contexts: (p={self.p}, N={self.N}) vs (p={other.p}, N={other.N})"
            )

    def __add__(self, other: "PadicInt") -> "PadicInt":
        self._check(other)
        return PadicInt(
            self.p, self.N, (self.residue + other.residue) % self.modulus,
            exact_zero=self.exact_zero and other.exact_zero,
        )

    def __sub__(self, other: "PadicInt") -> "PadicInt":
        self._check(other)
        return PadicInt(
            self.p, self.N, (self.residue - other.residue) % self.modulus,
            exact_zero=self.exact_zero and other.exact_zero,
        )

    def __mul__(self, other: "PadicInt") -> "PadicInt":
        self._check(other)
        return PadicInt(
            self.p, self.N, (self.residue * other.residue) % self.modulus,
            exact_zero=self.exact_zero or other.exact_zero,
        )

    def __neg__(self) -> "PadicInt":
        return PadicInt(self.p, self.N, (-self.residue) % self.modulus, self.exact_zero)

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise DomainError(f"{self.residue} is not a unit in Z_{self.p}")
        return PadicInt(self.p, self.N, pow(self.residue, -1, self.modulus))

    def __int__(self) -> int:
        return self.residue

    def __repr__(self) -> str:
        tag = "exact 0" if self.exact_zero else str(self.residue)
        return f"PadicInt({tag} mod {self.p}^{self.N})"


def padic_arith(x: PadicInt, y: PadicInt, op: str) -> PadicInt:
    """Dispatch ``op`` in {"add", "sub", "mul"}."""
    try:
        fn = {"add": PadicInt.__add__, "sub": PadicInt.__sub__, "mul": PadicInt.__mul__}[op]
    except KeyError:
        raise DomainError(f"unknown operation {op!r}") from None
    return fn(x, y)


def padic_inv(x: PadicInt) -> PadicInt:
    return x.inverse()
