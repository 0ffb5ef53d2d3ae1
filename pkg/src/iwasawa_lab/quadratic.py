"""Imaginary quadratic fields: class groups from forms, genus theory, and the p = 2 lambda formula."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from . import forms
from .arith import factorize, is_prime, is_squarefree, prime_divisors, v_int
from .errors import DomainError, ResourceError
from .provenance import (
    ASSERTED, FERRERO_KIDA, PASS, UNVERIFIED, AssertedInput, LedgerItem, check, pagani_lambda_zero,
)

CLASS_GROUP_CAP = 10**7


@dataclass(frozen=True)
class FundamentalDiscriminant:
    D: int

    def __post_init__(self):
        D = self.D
        if D in (0, 1) or D % 4 not in (0, 1):
            raise DomainError(f"{D} is not a discriminant")
        if D % 4 == 1:
            ok = is_squarefree(D)
        else:
            d = D // 4
            ok = d % 4 in (2, 3) and is_squarefree(d)
        if not ok:
            raise DomainError(f"{D} is not fundamental")

    @classmethod
    def of_field(cls, d: int) -> "FundamentalDiscriminant":
        """Discriminant of Q(sqrt(d)) for squarefree d != 0, 1."""
        if d in (0, 1) or not is_squarefree(d):
            raise DomainError(f"Q(sqrt({d})) needs squarefree d != 0, 1")
        return cls(d if d % 4 == 1 else 4 * d)

    @property
    def sign(self) -> int:
        return -1 if self.D < 0 else 1

    @property
    def radicand(self) -> int:
        """The squarefree d with K = Q(sqrt(d))."""
        return self.D if self.D % 4 == 1 else self.D // 4

    @property
    def odd_prime_divisors(self) -> tuple[int, ...]:
        return tuple(q for q in prime_divisors(self.D) if q != 2)

    @property
    def two_ramified(self) -> bool:
        return self.D % 2 == 0

    @property
    def prime_divisor_count(self) -> int:
        return len(self.odd_prime_divisors) + self.two_ramified

    def to_json(self) -> dict:
        return {"D": self.D, "sign": self.sign, "odd_prime_divisors": list(self.odd_prime_divisors),
                "two_ramified": self.two_ramified}


def _disc(D) -> FundamentalDiscriminant:
    return D if isinstance(D, FundamentalDiscriminant) else FundamentalDiscriminant(int(D))


@dataclass(frozen=True)
class FormClassGroup:
    D: int
    h: int
    invariants: tuple[int, ...]
    two_sylow: tuple[int, ...]

    @property
    def two_rank(self) -> int:
        return len(self.two_sylow)

    def sylow(self, ell: int) -> tuple[int, ...]:
        return tuple(ell ** v_int(d, ell) for d in self.invariants if d % ell == 0)

    def to_json(self) -> dict:
        return {"D": self.D, "class_number": self.h, "invariants": list(self.invariants),
                "two_sylow": list(self.two_sylow), "two_rank": self.two_rank}


def structure_from_orders(orders, h: int) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of an abelian group from its element orders.

    For each prime l | h, |G[l^k]| = l^{s_k} and s_k - s_{k-1} counts the cyclic
    l-factors of exponent >= k.
    """
    if len(orders) != h:
        raise DomainError("need the order of every element")
    cyclic: dict[int, list[int]] = {}
    for ell, e in (factorize(h) if h > 1 else ()):
        # exponents of the l-power orders present
        vals = Counter(v_int(o, ell) for o in orders if o > 1 and o == ell ** v_int(o, ell))
        at_least = []
        prev = 0
        size = 1  # the identity
        for k in range(1, e + 1):
            size += vals.get(k, 0)
            s_k = v_int(size, ell) if size > 1 else 0
            if ell**s_k != size:
                raise DomainError("element orders are not those of an abelian group")
            at_least.append(s_k - prev)
            prev = s_k
        if prev != e:
            raise DomainError("element orders do not account for the group order")
        at_least.append(0)
        cyclic[ell] = sorted((ell**k for k in range(1, e + 1)
                              for _ in range(at_least[k - 1] - at_least[k])), reverse=True)
    width = max((len(v) for v in cyclic.values()), default=0)
    factors = [1] * width
    for parts in cyclic.values():
        for i, q in enumerate(parts):
            factors[i] *= q
    return tuple(sorted(factors))


def class_group(D) -> FormClassGroup:
    """Class group of the imaginary quadratic order of fundamental discriminant D < 0."""
    disc = _disc(D)
    D = disc.D
    if D >= 0:
        raise DomainError("class groups are only computed for D < 0")
    if -D > CLASS_GROUP_CAP:
        raise ResourceError(f"|D| = {-D} exceeds the cap {CLASS_GROUP_CAP}")
    reps = forms.reduced_forms(D)
    h = len(reps)
    primes = [ell for ell, _ in factorize(h)] if h > 1 else []
    orders = forms.element_orders(reps, D, h, primes)
    inv = structure_from_orders(orders, h)
    two = tuple(2 ** v_int(d, 2) for d in inv if d % 2 == 0)
    return FormClassGroup(D, h, inv, two)


def class_number(D) -> int:
    return class_group(D).h


def genus_two_rank(D) -> int:
    """t - 1, t the number of primes dividing D."""
    return _disc(D).prime_divisor_count - 1


def torsion_free_flag(D) -> bool:
    """True when 2 is unramified in Q(sqrt(D)), which forces X(k_inf) to be Z_2-torsion free."""
    disc = _disc(D)
    if disc.D >= 0:
        raise DomainError("torsion_free_flag is for imaginary fields")
    return not disc.two_ramified


def ferrero_kida_lambda(D) -> int:
    """lambda of the cyclotomic Z_2-extension of Q(sqrt(D)), D < 0.

    For k = Q(sqrt(-d)) with d != 1, 2:
        lambda = -1 + sum over odd primes l | d of 2^(v_2(l^2 - 1) - 3).
    """
    disc = _disc(D)
    if disc.D > 0:
        raise DomainError("real quadratic lambda is out of scope (unsupported)")
    d = -disc.radicand
    if d in (1, 2):
        return 0
    return -1 + sum(2 ** (v_int(ell * ell - 1, 2) - 3) for ell in disc.odd_prime_divisors)


@dataclass(frozen=True)
class KidaRankResult:
    """rank X(K_1) = lambda(k) + lambda(Q(sqrt(-q))) + lambda(Q(sqrt(mq))), when all terms are known."""

    m: int
    q: int
    terms: tuple[int | None, int, int | None]
    ledger: tuple[LedgerItem, ...]

    @property
    def unverified(self) -> bool:
        return any(it.status == UNVERIFIED for it in self.ledger)

    @property
    def rank(self) -> int | None:
        if self.unverified:
            return None
        return sum(t for t in self.terms if t is not None)

    def to_json(self) -> dict:
        return {"m": self.m, "q": self.q, "terms": list(self.terms), "rank": self.rank,
                "unverified": self.unverified, "ledger": [it.to_json() for it in self.ledger]}


def kida_rank_identity(m: int, q: int, real_lambda: AssertedInput | None = None, *,
                       use_pagani: bool = True) -> KidaRankResult:
    """Three-term rank identity for K_1 = k_inf(sqrt(-q)), k = Q(sqrt(-m)).

    The real-quadratic term is never computed: it comes from ``real_lambda``,
    or from the Pagani table when ``use_pagani`` and mq < 10000.
    """
    if m < 1 or m % 2 == 0 or not is_squarefree(m):
        raise DomainError(f"m = {m} must be odd, positive and squarefree")
    if not is_prime(q):
        raise DomainError(f"q = {q} is not prime")
    if m % q == 0:
        raise DomainError(f"q = {q} divides m = {m}")
    if q % 8 != 3:
        raise DomainError(f"q = {q} is not 3 mod 8")
    lam_k = ferrero_kida_lambda(FundamentalDiscriminant.of_field(-m))
    lam_q = ferrero_kida_lambda(FundamentalDiscriminant.of_field(-q))
    ledger = [
        LedgerItem(f"lambda(Q(sqrt(-{m}))) = {lam_k}", PASS, "Ferrero-Kida formula", FERRERO_KIDA),
        check(f"lambda(Q(sqrt(-{q}))) = 0 (q = 3 mod 8)", lam_q == 0, f"formula gives {lam_q}"),
    ]
    if real_lambda is None and use_pagani:
        real_lambda = pagani_lambda_zero(m * q)
    if real_lambda is None:
        ledger.append(LedgerItem(f"lambda(Q(sqrt({m * q})))", UNVERIFIED,
                                 "no asserted value; mq is outside the table range"))
        lam_r = None
    else:
        lam_r = int(real_lambda.value)
        ledger.append(LedgerItem(f"lambda(Q(sqrt({m * q}))) = {lam_r}", ASSERTED, real_lambda.name,
                                 real_lambda.citation))
    return KidaRankResult(m, q, (lam_k, lam_q, lam_r), tuple(ledger))
