"""Citation-carrying inputs and hypothesis ledgers.

Every conclusion the library reports is either computed here or rests on an
asserted input that names its external source.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

PASS, FAIL, ASSERTED, UNVERIFIED, NOT_APPLICABLE = "pass", "fail", "asserted", "unverified", "not-applicable"


@dataclass(frozen=True)
class AssertedInput:
    """A fact taken from the literature rather than computed."""

    name: str
    value: Any
    citation: str

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "citation": self.citation}


@dataclass(frozen=True)
class LedgerItem:
    name: str
    status: str
    detail: str = ""
    citation: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.citation:
            out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class Quantity:
    """A reported number with its provenance tag."""

    value: Any
    provenance: str = "computed"
    citation: str | None = None

    def to_json(self) -> dict:
        out = {"value": self.value, "provenance": self.provenance}
        if self.citation:
            out["citation"] = self.citation
        return out


def computed(value) -> Quantity:
    return Quantity(value)


def asserted(value, citation: str) -> Quantity:
    return Quantity(value, "asserted", citation)


def check(name: str, ok: bool, detail: str = "") -> LedgerItem:
    return LedgerItem(name, PASS if ok else FAIL, detail)


def from_assertion(a: AssertedInput | None, name: str, want=True) -> LedgerItem:
    """Ledger entry for a hypothesis that can only be asserted."""
    if a is None:
        return LedgerItem(name, UNVERIFIED, "no asserted input supplied")
    if a.value != want:
        return LedgerItem(name, FAIL, f"asserted value {a.value!r}", a.citation)
    return LedgerItem(name, ASSERTED, f"{a.name} = {a.value!r}", a.citation)


def first_failure(ledger) -> LedgerItem | None:
    return next((it for it in ledger if it.status == FAIL), None)


def unverified_items(ledger) -> list[LedgerItem]:
    return [it for it in ledger if it.status == UNVERIFIED]


# Sources the scenarios lean on, kept in one place so reports cite them uniformly.
PAGANI = "[Pagani]: lambda = 0 for the cyclotomic Z_2-extension of Q(sqrt(n)), n < 10000"
IMO_11 = "[IMO, Theorem 1.1]"
IMO_14 = "[IMO, Theorem 1.4]"
I18_11 = "[I18, Theorem 1.1]"
MO_1 = "[MO, Theorem 1]"
MM_44 = "[MM, Theorem 4.4]"
MY_21 = "[MY, Theorem 2.1]; [Atsuta, Corollary 1.4]"
FERRERO_KIDA = "[Ferrero], [Kida]: lambda formula for imaginary quadratic fields, p = 2"
KIDA_TF = "[Kida, Theorem 1]: 2 unramified implies X(k_inf) is Z_2-torsion free"
IWASAWA56 = "[Iwasawa 1956]: X(k_inf) is trivial when one prime ramifies and p does not divide h(k)"
GC = "Greenberg's conjecture, assumed for every intermediate field"
SALLE_25 = "[Salle, Proposition 2.5]: X_S(B_n) is trivial for q = 3 mod 8"


def pagani_lambda_zero(n: int) -> AssertedInput | None:
    """The table fact for Q(sqrt(n)), or None outside its range."""
    if 1 < n < 10000:
        return AssertedInput(f"lambda(Q(sqrt({n})))", 0, PAGANI)
    return None
