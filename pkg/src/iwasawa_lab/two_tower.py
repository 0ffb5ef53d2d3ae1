"""Arithmetic of the cyclotomic Z_2-tower B_inf/Q and hypothesis checkers for the worked examples.

Everything happens in (Z/2^{n+2})^x / <-1>, the Galois group of B_n/Q; no
number-field element is ever represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .arith import is_prime, is_squarefree, kronecker, lcm, order_mod_pm1, v_int
from .errors import DomainError, HypothesisNotMet
from .provenance import (
    ASSERTED, FAIL, IMO_11, IMO_14, I18_11, IWASAWA56, KIDA_TF, MO_1, NOT_APPLICABLE, PASS, UNVERIFIED,
    AssertedInput, LedgerItem, check, first_failure, from_assertion,
)
from .quadratic import FundamentalDiscriminant, class_group, ferrero_kida_lambda, torsion_free_flag

SPLIT_LEVEL_CAP = 20


# --- splitting in B_n ---------------------------------------------------------


def split_count(ell: int, n: int) -> int:
    """Number of primes of B_n above the odd prime ell."""
    return 2**n // order_mod_pm1(ell, n + 2)


@dataclass(frozen=True)
class SplittingProfile:
    ell: int
    counts: tuple[int, ...]
    orders: tuple[int, ...]
    r_inf: int | None
    stabilization_level: int | None

    @property
    def certified(self) -> bool:
        return self.r_inf is not None

    def to_json(self) -> dict:
        return {"ell": self.ell, "counts": list(self.counts), "orders": list(self.orders),
                "r_inf": self.r_inf, "stabilization_level": self.stabilization_level,
                "certified": self.certified}


def splitting_profile(ell: int, n_max: int = SPLIT_LEVEL_CAP) -> SplittingProfile:
    """Per-level splitting counts of ell in B_n, 0 <= n <= n_max.

    Let o_n be the order of ell mod 2^{n+2} up to sign. If o_{n+1} = 2 o_n then
    w = ell^{o_n} (up to sign) has v_2(w - 1) = n + 2 exactly, so every further
    squaring raises the valuation by one and o_{n+k} = 2^k o_n: the count
    2^n / o_n is constant from n on. That first n is the stabilization level.
    """
    if ell < 3 or not is_prime(ell):
        raise DomainError(f"ell = {ell} must be an odd prime")
    if not 0 <= n_max <= SPLIT_LEVEL_CAP:
        raise DomainError(f"n_max must lie in [0, {SPLIT_LEVEL_CAP}]")
    orders = [order_mod_pm1(ell, n + 2) for n in range(n_max + 2)]
    counts = tuple(2**n // orders[n] for n in range(n_max + 1))
    stab = next((n for n in range(n_max + 1) if orders[n + 1] == 2 * orders[n]), None)
    r_inf = counts[stab] if stab is not None else None
    return SplittingProfile(ell, counts, tuple(orders[: n_max + 1]), r_inf, stab)


def r_infinity(ell: int) -> int:
    prof = splitting_profile(ell)
    if prof.r_inf is None:
        raise DomainError(f"splitting of {ell} did not stabilize by level {SPLIT_LEVEL_CAP}")
    return prof.r_inf


# --- residue units ------------------------------------------------------------


@dataclass(frozen=True)
class ResidueUnitTwoPart:
    """2-part of (O_F/(q))^x for F = B_n or F = k B_n."""

    q: int
    level: int
    base: int | None  # None for Q, else the discriminant of k
    prime_count: int
    residue_degree: int
    structure: tuple[int, ...]

    @property
    def total_exponent(self) -> int:
        return sum(v_int(a, 2) for a in self.structure)

    def to_json(self) -> dict:
        return {"q": self.q, "level": self.level, "base": "Q" if self.base is None else self.base,
                "prime_count": self.prime_count, "residue_degree": self.residue_degree,
                "structure": list(self.structure)}


def residue_unit_two_part(q: int, n: int, base: int | None = None) -> ResidueUnitTwoPart:
    """One cyclic factor Z/2^{v_2(q^f - 1)} per prime above q.

    The Frobenius at q generates a subgroup of Gal(B_n/Q) x Gal(k/Q) of order
    f = lcm(order of q up to sign mod 2^{n+2}, 1 or 2 as q splits or stays inert in k).
    """
    if q < 3 or not is_prime(q):
        raise DomainError(f"q = {q} must be an odd prime")
    if n < 0 or n > SPLIT_LEVEL_CAP:
        raise DomainError(f"level must lie in [0, {SPLIT_LEVEL_CAP}]")
    degree = 2**n
    f = order_mod_pm1(q, n + 2)
    if base is not None:
        disc = FundamentalDiscriminant(base)
        if disc.D == 8:
            # Q(sqrt 2) = B_1 sits inside the tower
            raise DomainError("base field Q(sqrt 2) lies inside B_inf; use base Q")
        chi = kronecker(disc.D, q)
        if chi == 0:
            raise DomainError(f"q = {q} ramifies in Q(sqrt({disc.radicand}))")
        degree *= 2
        f = lcm(f, 1 if chi == 1 else 2)
    g = degree // f
    a = v_int(q**f - 1, 2)
    return ResidueUnitTwoPart(q, n, base, g, f, (2**a,) * g)


# --- hypothesis ledgers ------------------------------------------------------------


@dataclass(frozen=True)
class RankResult:
    scenario: str
    rank: int | None
    ledger: tuple[LedgerItem, ...]
    citation: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"scenario": self.scenario, "rank": self.rank, "citation": self.citation,
                "ledger": [it.to_json() for it in self.ledger], "details": self.details}


def _raise_on_failure(what: str, ledger: Sequence[LedgerItem]) -> None:
    bad = first_failure(ledger)
    if bad is not None:
        raise HypothesisNotMet(f"{what}: hypothesis failed: {bad.name} ({bad.detail})", list(ledger))


def _prime_item(x: int, label: str) -> LedgerItem:
    return check(f"{label} = {x} is prime", is_prime(x))


def _congruence_items(p: int, primes: Sequence[int]) -> list[LedgerItem]:
    items = []
    for q in primes:
        items.append(_prime_item(q, "q"))
        items.append(check(f"{q} = 1 mod {p}", q % p == 1, f"{q} mod {p} = {q % p}"))
        items.append(check(f"{q} != 1 mod {p * p}", q % (p * p) != 1, f"{q} mod {p * p} = {q % (p * p)}"))
    return items


def _distinct(primes: Sequence[int]) -> LedgerItem:
    return check("primes are distinct", len(set(primes)) == len(primes), str(list(primes)))


def _odd_prime_p(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise DomainError(f"this example needs an odd prime p, got {p}")


def xs_rank(scenario: str, **inputs) -> RankResult:
    """Z_p-rank of the tamely ramified module X_S for the three cited configurations.

    case_a_odd_p: p odd, primes q_1..q_r with q_i = 1 mod p, != 1 mod p^2; rank r - 1.
    prop_q:       p = 2, q_1 = q_2 = 7 mod 8 with equal splitting counts r; rank r.
    prop_imag:    p = 2, k = Q(sqrt(-m)), q = 3 mod 8; rank lambda_0 + 1.
    """
    if scenario == "case_a_odd_p":
        p = int(inputs["p"])
        primes = [int(q) for q in inputs["primes"]]
        _odd_prime_p(p)
        ledger = [_distinct(primes), check("at least two primes", len(primes) >= 2)]
        ledger += _congruence_items(p, primes)
        _raise_on_failure(scenario, ledger)
        return RankResult(scenario, len(primes) - 1, tuple(ledger), IMO_11, {"r": len(primes)})
    if scenario == "prop_q":
        q1, q2 = (int(q) for q in inputs["primes"])
        ledger = [_prime_item(q1, "q_1"), _prime_item(q2, "q_2"), _distinct([q1, q2])]
        ledger += [check(f"{q} = 7 mod 8", q % 8 == 7, f"{q} mod 8 = {q % 8}") for q in (q1, q2)]
        _raise_on_failure(scenario, ledger)
        r1, r2 = r_infinity(q1), r_infinity(q2)
        ledger.append(check("q_1 and q_2 have the same number of primes in B_inf", r1 == r2,
                            f"r({q1}) = {r1}, r({q2}) = {r2}"))
        _raise_on_failure(scenario, ledger)
        return RankResult(scenario, r1, tuple(ledger), f"{IMO_11}; {I18_11}", {"r": {str(q1): r1, str(q2): r2}})
    if scenario == "prop_imag":
        m, q = int(inputs["m"]), int(inputs["q"])
        ledger = _prop_imag_items(m, q)
        _raise_on_failure(scenario, ledger)
        lam0 = ferrero_kida_lambda(FundamentalDiscriminant.of_field(-m))
        return RankResult(scenario, lam0 + 1, tuple(ledger), IMO_14, {"lambda_0": lam0})
    raise DomainError(f"unknown scenario {scenario!r}")


def _prop_imag_items(m: int, q: int) -> list[LedgerItem]:
    ok_m = m >= 3 and m % 2 == 1 and is_squarefree(m)
    items = [check(f"m = {m} is odd, squarefree, > 1", ok_m), _prime_item(q, "q"),
             check(f"{q} = 3 mod 8", q % 8 == 3, f"{q} mod 8 = {q % 8}"),
             check(f"{q} does not divide {m}", m % q != 0)]
    if not ok_m:
        return items
    D = FundamentalDiscriminant.of_field(-m)
    lam0 = ferrero_kida_lambda(D)
    items.append(check("X(k_inf) is nontrivial (lambda_0 > 0)", lam0 > 0, f"lambda_0 = {lam0}"))
    tf = torsion_free_flag(D)
    items.append(LedgerItem("X(k_inf) is Z_2-torsion free (2 unramified in k)", PASS if tf else FAIL,
                            f"D = {D.D}", KIDA_TF))
    return items


# --- worked-example checkers -------------------------------------------------------


@dataclass(frozen=True)
class ExampleCheck:
    case: str
    ledger: tuple[LedgerItem, ...]
    conclusions: dict
    conditional: bool = False
    applicable: bool = True

    @property
    def unverified(self) -> bool:
        return any(it.status == UNVERIFIED for it in self.ledger)

    def to_json(self) -> dict:
        return {"case": self.case, "ledger": [it.to_json() for it in self.ledger],
                "conclusions": self.conclusions, "conditional": self.conditional,
                "applicable": self.applicable, "unverified": self.unverified}


def _imag_base_items(p: int, D: int) -> list[LedgerItem]:
    disc = FundamentalDiscriminant(D)
    items = [check(f"k = Q(sqrt({disc.radicand})) is imaginary", disc.D < 0)]
    if disc.D >= 0:
        return items
    chi = kronecker(disc.D, p)
    items.append(check(f"{p} does not split in k", chi != 1, f"Kronecker ({disc.D}/{p}) = {chi}"))
    h = class_group(disc.D).h
    items.append(check(f"class number of k is prime to {p}", h % p != 0, f"h = {h}"))
    return items


def check_ex_s_ram(case: str, p: int, primes: Sequence[int], D: int | None = None) -> ExampleCheck:
    """Single-ramification examples for odd p.

    (a) k = Q, two primes q = 1 mod p, != 1 mod p^2.
    (b) k imaginary quadratic, p not split, p prime to h(k); one prime q = 1 mod p,
        != 1 mod p^2, split in k.
    (c) as (b) but q = -1 mod p, q^2 != 1 mod p^2, q inert in k; X(K_inf) is trivial.
    """
    _odd_prime_p(p)
    primes = [int(q) for q in primes]
    if case == "a":
        ledger = [check("exactly two primes", len(primes) == 2), _distinct(primes)]
        ledger += _congruence_items(p, primes)
    elif case in ("b", "c"):
        if D is None:
            raise DomainError(f"case ({case}) needs an imaginary quadratic discriminant D")
        if len(primes) != 1:
            raise DomainError(f"case ({case}) takes exactly one prime q")
        q = primes[0]
        ledger = _imag_base_items(p, D) + [_prime_item(q, "q")]
        chi = kronecker(D, q)
        if case == "b":
            ledger += [check(f"{q} = 1 mod {p}", q % p == 1, f"{q} mod {p} = {q % p}"),
                       check(f"{q} != 1 mod {p * p}", q % (p * p) != 1),
                       check(f"{q} splits in k", chi == 1, f"Kronecker ({D}/{q}) = {chi}")]
        else:
            ledger += [check(f"{q} = -1 mod {p}", q % p == p - 1, f"{q} mod {p} = {q % p}"),
                       check(f"{q}^2 != 1 mod {p * p}", (q * q) % (p * p) != 1),
                       check(f"{q} is inert in k", chi == -1, f"Kronecker ({D}/{q}) = {chi}")]
    else:
        raise DomainError(f"unknown case {case!r}")
    why = "k = Q" if case == "a" else f"{p} does not split in k and is prime to h(k)"
    ledger.append(LedgerItem("X(k_inf) is trivial", ASSERTED, why, IWASAWA56))
    _raise_on_failure(f"example ({case})", ledger)
    if case == "c":
        conclusions = {"X_K_inf_trivial": True, "lambda1": 0, "mu1": 0, "lambda2": 0, "nu": 0}
    else:
        conclusions = {"X_K_inf_trivial": False}
    return ExampleCheck(case, tuple(ledger), conclusions, conditional=True)


def check_ex_mo(p: int, primes: Sequence[int], mo_hypotheses: AssertedInput | None) -> ExampleCheck:
    """Case (a) refined under the asserted hypotheses of the cited theorem."""
    base = check_ex_s_ram("a", p, primes)
    item = from_assertion(mo_hypotheses, "hypotheses of the cited finiteness theorem hold")
    ledger = base.ledger + (item,)
    if item.status == UNVERIFIED:
        return ExampleCheck("mo", ledger, {}, conditional=True)
    if item.status == FAIL:
        return ExampleCheck("mo", ledger[:-1] + (LedgerItem(item.name, NOT_APPLICABLE, item.detail,
                                                            item.citation or MO_1),),
                            {}, conditional=True, applicable=False)
    conclusions = {"lambda1": 0, "mu1": 0, "lambda2": 0, "nu_positive": True}
    return ExampleCheck("mo", ledger, conclusions, conditional=True)
