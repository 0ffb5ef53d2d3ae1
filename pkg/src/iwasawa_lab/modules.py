"""Elementary torsion Lambda-modules and the orders of their finite quotients."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    DEGREE_CAP,
    LambdaPoly,
    cyclotomic_levels,
    det_valuation,
    multiplication_matrix,
    nu_residue,
    poly_mulmod,
    poly_rem_monic,
    resultant_valuation,
)
from .errors import ConfigurationError, DomainError, InfiniteQuotient, NoStabilization, ResourceError
from .padic import INF, default_precision

#: nu_{n,e} is never materialised on the residue path, so the cap is on n itself.
RESIDUE_LEVEL_CAP = 64


@dataclass(frozen=True)
class ElemTorsionModule:
    """sum_i Lambda/(p^{a_i}) + sum_j Lambda/(f_j) with every f_j distinguished.

    Powers f^k are stored already expanded.
    """

    p: int
    N: int
    mu_components: tuple[int, ...] = ()
    lambda_components: tuple[LambdaPoly, ...] = ()
    role: str = field(default="H", compare=False)

    def __post_init__(self):
        for a in self.mu_components:
            if a < 1:
                raise DomainError(f"p-power exponents must be >= 1, got {a}")
        for f in self.lambda_components:
            if (f.p, f.N) != (self.p, self.N):
                raise ConfigurationError("component built for a different (p, N)")
            if f.degree < 1 or not f.is_distinguished():
                raise DomainError(f"component {f!r} is not distinguished of degree >= 1")

    @classmethod
    def build(cls, p: int, mu: Sequence[int] = (), lam: Sequence[Sequence[int] | LambdaPoly] = (),
              N: int | None = None, role: str = "H") -> "ElemTorsionModule":
        """Convenience constructor taking integer coefficient lists."""
        N = default_precision() if N is None else N
        polys = tuple(f if isinstance(f, LambdaPoly) else LambdaPoly.of(p, f, N, role) for f in lam)
        return cls(p, N, tuple(mu), polys, role)

    @property
    def lam(self) -> int:
        return sum(f.degree for f in self.lambda_components)

    @property
    def mu(self) -> int:
        return sum(self.mu_components)

    def is_zero(self) -> bool:
        return not self.mu_components and not self.lambda_components

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "role": self.role,
            "mu_components": list(self.mu_components),
            "lambda_components": [[str(c) for c in f.coeffs] for f in self.lambda_components],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ElemTorsionModule":
        p, N, role = int(data["p"]), int(data["N"]), data.get("role", "H")
        lam = [LambdaPoly.of(p, [int(c) for c in cs], N, role) for cs in data.get("lambda_components", [])]
        return cls(p, N, tuple(int(a) for a in data.get("mu_components", [])), tuple(lam), role)


def lambda_mu(M: ElemTorsionModule) -> tuple[int, int]:
    return M.lam, M.mu


def direct_sum(M1: ElemTorsionModule, M2: ElemTorsionModule) -> ElemTorsionModule:
    if (M1.p, M1.N) != (M2.p, M2.N):
        raise ConfigurationError("direct sum of modules over different (p, N)")
    return ElemTorsionModule(
        M1.p, M1.N, M1.mu_components + M2.mu_components,
        M1.lambda_components + M2.lambda_components, M1.role,
    )


def quotient_order(M: ElemTorsionModule, g: LambdaPoly) -> int:
    """E with |M / gM| = p^E."""
    if (g.p, g.N) != (M.p, M.N):
        raise ConfigurationError("element and module over different (p, N)")
    total = 0
    if M.mu_components:
        if g.content_valuation() > 0:
            raise InfiniteQuotient("g is divisible by p, so Lambda/(p^a, g) is infinite", component="mu")
        deg = g.weierstrass_degree()
        total += sum(a * deg for a in M.mu_components)
    for j, f in enumerate(M.lambda_components):
        v = resultant_valuation(f, g)
        if v == INF:
            raise InfiniteQuotient(f"component {j} ({f!r}) shares a factor with g", component=j)
        total += v
    return total


def nu_quotient_order(M: ElemTorsionModule, n: int, e: int, scale: LambdaPoly | None = None) -> int:
    """log_p |M / (scale * nu_{n,e}) M| without materialising nu_{n,e}."""
    p = M.p
    if n > RESIDUE_LEVEL_CAP:
        raise ResourceError(f"level {n} exceeds the residue-path cap {RESIDUE_LEVEL_CAP}")
    if not n >= e >= 0:
        raise DomainError(f"need n >= e >= 0, got n={n}, e={e}")
    total = 0
    if M.mu_components:
        extra = 0
        if scale is not None:
            if scale.content_valuation() > 0:
                raise InfiniteQuotient("scaling element divisible by p", component="mu")
            extra = scale.weierstrass_degree()
        total += sum(a * (p**n - p**e + extra) for a in M.mu_components)
    for j, f in enumerate(M.lambda_components):
        q = f.modulus
        res = nu_residue(f, n, e)
        if scale is not None:
            res = poly_mulmod(res, poly_rem_monic(scale.coeffs, f.coeffs, q), f.coeffs, q)
        v = det_valuation(multiplication_matrix(res, f.coeffs, q), p, M.N)
        if v == INF:
            levels = [lv for lv in cyclotomic_levels(f) if e < lv <= n]
            what = f"cyclotomic factor(s) at level(s) {levels}" if levels else "a common factor"
            raise InfiniteQuotient(f"component {j} ({f!r}) shares {what} with nu_{{{n},{e}}}", component=j)
        total += v
    return total


# --- growth scans --------------------------------------------------------


@dataclass(frozen=True)
class GrowthFit:
    lam: int
    mu: int
    nu: int
    n_stab: int


def fit_growth(rows: Sequence[tuple[int, int]], p: int) -> GrowthFit | None:
    """Fit E(n) = lam*n + mu*p^n + nu from the last three rows.

    ``rows`` must be consecutive in n. Returns None when the last three rows
    admit no non-negative integral (lam, mu); otherwise n_stab is the least
    index from which every row obeys the fit.
    """
    if len(rows) < 3:
        return None
    (n0, e0), (n1, e1), (n2, e2) = rows[-3:]
    if not (n1 == n0 + 1 and n2 == n0 + 2):
        raise DomainError("growth rows must be consecutive")
    d2 = (e2 - e1) - (e1 - e0)
    denom = (p - 1) ** 2 * p**n0
    if d2 % denom:
        return None
    mu = d2 // denom
    lam = (e1 - e0) - mu * (p - 1) * p**n0
    if mu < 0 or lam < 0:
        return None
    nu = e0 - lam * n0 - mu * p**n0
    n_stab = n0
    for n, E in reversed(rows[:-3]):
        if E != lam * n + mu * p**n + nu:
            break
        n_stab = n
    return GrowthFit(lam, mu, nu, n_stab)


@dataclass(frozen=True)
class GrowthReport:
    """Certified Iwasawa-type formula for |M / nu_{n,e} M| = p^{lam n + mu p^n + nu}."""

    p: int
    base_level: int
    lam: int
    mu: int
    nu: int
    n_stab: int
    table: tuple[tuple[int, int], ...]

    def predicted(self, n: int) -> int:
        return self.lam * n + self.mu * self.p**n + self.nu

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "base_level": self.base_level,
            "lambda": self.lam,
            "mu": self.mu,
            "nu": self.nu,
            "n_stab": self.n_stab,
            "table": [{"n": n, "exponent": E} for n, E in self.table],
        }


def max_level(p: int) -> int:
    n = 0
    while p ** (n + 1) <= DEGREE_CAP:
        n += 1
    return n


def growth_scan(M: ElemTorsionModule, e: int = 0, n_max: int | None = None) -> GrowthReport:
    """Tabulate log_p |M / nu_{n,e} M| for e < n <= n_max and certify the fit."""
    n_max = max_level(M.p) if n_max is None else n_max
    if n_max - e < 3:
        raise DomainError(f"need at least three levels above e={e}, got n_max={n_max}")
    table: list[tuple[int, int]] = []
    undefined: list[str] = []
    for n in range(e + 1, n_max + 1):
        try:
            table.append((n, nu_quotient_order(M, n, e)))
        except InfiniteQuotient as exc:
            undefined.append(f"n={n}: {exc}")
    if undefined:
        raise InfiniteQuotient("quotient undefined at " + "; ".join(undefined))
    fit = fit_growth(table, M.p)
    if fit is None:
        raise NoStabilization(f"no Iwasawa-type fit up to n={n_max}", table)
    if (fit.lam, fit.mu) != (M.lam, M.mu):
        raise NoStabilization(
            f"fitted (lambda, mu) = ({fit.lam}, {fit.mu}) differs from structural ({M.lam}, {M.mu})",
            table,
        )
    return GrowthReport(M.p, e, fit.lam, fit.mu, fit.nu, fit.n_stab, tuple(table))


# --- random data ---------------------------------------------------------


def random_distinguished(rng: random.Random, p: int, degree: int, N: int, *,
                         coeff_bound: int = 3, role: str = "H") -> LambdaPoly:
    """A random distinguished polynomial free of cyclotomic factors Phi_{p^j}(1+T), j >= 1."""
    while True:
        lower = [p * rng.randint(-coeff_bound, coeff_bound) for _ in range(degree)]
        f = LambdaPoly.of(p, lower + [1], N, role)
        if not any(j >= 1 for j in cyclotomic_levels(f)):
            return f


def random_module(rng: random.Random, p: int, max_lambda: int, max_mu: int, N: int | None = None,
                  role: str = "H") -> ElemTorsionModule:
    N = default_precision() if N is None else N
    lam_total = rng.randint(0, max_lambda)
    mu_total = rng.randint(0, max_mu)
    lam_parts = _partition(rng, lam_total)
    mu_parts = _partition(rng, mu_total)
    polys = []
    for d in lam_parts:
        if d % 2 == 0 and rng.random() < 0.2:
            # occasionally a square, stored expanded
            h = random_distinguished(rng, p, d // 2, N, role=role)
            polys.append(h * h)
        else:
            polys.append(random_distinguished(rng, p, d, N, role=role))
    return ElemTorsionModule(p, N, tuple(mu_parts), tuple(polys), role)


def _partition(rng: random.Random, total: int) -> list[int]:
    parts = []
    while total > 0:
        k = rng.randint(1, total)
        parts.append(k)
        total -= k
    return parts
