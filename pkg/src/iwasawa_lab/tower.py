"""Synthetic two-tiered towers.

A :class:`TowerModel` stands in for X(K_inf) as a module over the H-direction
Iwasawa algebra, together with the Gamma-direction data that governs the
layers F_m k_n. Component i contributes Lambda/(alpha_i beta_i) to X(K_inf)
and alpha_i Lambda/(alpha_i beta_i) ~ Lambda/(beta_i) to the ramification
submodule Y. Because every alpha_i is distinguished or 1, X/Y is torsion
free over Z_p, so the torsion C_m of X(K_m) = X/nu_{m,e1} Y is exactly
Y/nu_{m,e1} Y and every identity below holds on the nose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Sequence

from .algebra import LambdaPoly, resultant_valuation, weierstrass_prepare
from .errors import ConditionTViolated, DomainError, FormulaViolation, NoStabilization
from .modules import (
    ElemTorsionModule,
    _partition,
    fit_growth,
    max_level,
    nu_quotient_order,
    random_distinguished,
)
from .padic import INF, default_precision, vp

TOWER_SCHEMA = "iwasawa-lab/tower-v1"


def _is_p_power(f: LambdaPoly) -> bool:
    return f.degree == 0 and f.coeffs[0] == f.p ** vp(f.coeffs[0], f.p)


@dataclass(frozen=True)
class TowerModel:
    p: int
    N: int
    e1: int
    h_components: tuple[tuple[LambdaPoly, LambdaPoly], ...] = ()
    r_free: int = 0
    gamma_module: ElemTorsionModule | None = None
    gamma_scaling: LambdaPoly | None = None
    e3: int = 0

    def __post_init__(self):
        if self.e1 < 0 or self.e3 < 0 or self.r_free < 0:
            raise DomainError("e1, e3 and r_free must be non-negative")
        W = self.gamma_module
        if W is None:
            W = ElemTorsionModule(self.p, self.N, role="Gamma")
            object.__setattr__(self, "gamma_module", W)
        if self.gamma_scaling is None:
            object.__setattr__(self, "gamma_scaling", LambdaPoly.one(self.p, self.N, "Gamma"))
        for alpha, beta in self.h_components:
            if (alpha.p, alpha.N, beta.p, beta.N) != (self.p, self.N, self.p, self.N):
                raise DomainError("component built for a different (p, N)")
            if not (alpha.is_distinguished() or alpha.coeffs == (1,)):
                raise DomainError(f"alpha = {alpha!r} must be distinguished or 1")
            if not (_is_p_power(beta) or (beta.degree >= 1 and beta.is_distinguished())):
                raise DomainError(f"beta = {beta!r} must be a p-power or distinguished")
        if (W.p, W.N) != (self.p, self.N):
            raise DomainError("gamma module built for a different (p, N)")
        if W.mu_components:
            raise DomainError("the Gamma-direction module must have mu = 0")
        if W.lam != self.lambda2:
            raise DomainError(f"lambda(W) = {W.lam} must equal lambda_2 = {self.lambda2}")
        delta = self.gamma_scaling
        if not (delta.coeffs == (1,) or delta.is_distinguished()):
            raise DomainError("gamma scaling must be distinguished or 1")
        for w in W.lambda_components:
            if resultant_valuation(w, delta) == INF:
                raise DomainError(f"gamma component {w!r} shares a factor with the scaling {delta!r}")

    # --- derived structure -------------------------------------------------

    @property
    def lambda2(self) -> int:
        return sum(alpha.degree for alpha, _ in self.h_components)

    @property
    def y_module(self) -> ElemTorsionModule:
        """Torsion part of the ramification submodule, sum Lambda/(beta_i)."""
        mu, lam = [], []
        for _, beta in self.h_components:
            if beta.degree == 0:
                a = vp(beta.coeffs[0], self.p)
                if a:
                    mu.append(a)
            else:
                lam.append(beta)
        return ElemTorsionModule(self.p, self.N, tuple(mu), tuple(lam))

    def x_invariants(self) -> tuple[int, int]:
        """(lambda, mu) of sum Lambda/(alpha_i beta_i), read off by Weierstrass preparation."""
        lam = mu = 0
        for alpha, beta in self.h_components:
            w = weierstrass_prepare(alpha * beta)
            lam += w.lambda_part
            mu += w.mu_part
        return lam, mu

    # --- serialisation -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": TOWER_SCHEMA,
            "p": self.p,
            "N": self.N,
            "e1": self.e1,
            "e3": self.e3,
            "r_free": self.r_free,
            "components": [
                {"alpha": [str(c) for c in a.coeffs], "beta": [str(c) for c in b.coeffs]}
                for a, b in self.h_components
            ],
            "gamma_module": self.gamma_module.to_json(),
            "gamma_scaling": [str(c) for c in self.gamma_scaling.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TowerModel":
        if data.get("schema", TOWER_SCHEMA) != TOWER_SCHEMA:
            raise DomainError(f"unsupported tower schema {data.get('schema')!r}")
        p, N = int(data["p"]), int(data["N"])
        comps = tuple(
            (LambdaPoly.of(p, map(int, c["alpha"]), N), LambdaPoly.of(p, map(int, c["beta"]), N))
            for c in data.get("components", [])
        )
        W = ElemTorsionModule.from_json(data["gamma_module"]) if "gamma_module" in data else None
        delta = data.get("gamma_scaling")
        return cls(
            p, N, int(data.get("e1", 0)), comps, int(data.get("r_free", 0)), W,
            LambdaPoly.of(p, map(int, delta), N, "Gamma") if delta else None, int(data.get("e3", 0)),
        )


@dataclass(frozen=True)
class LevelData:
    m: int
    torsion_exponent: int
    zp_rank: int


@dataclass(frozen=True)
class TowerInvariants:
    lambda1: int
    mu1: int
    nu1: int
    lambda2: int
    m0: int
    nu: int | None = None
    n0: int | None = None

    def to_json(self) -> dict:
        return {
            "lambda1": self.lambda1, "mu1": self.mu1, "nu1": self.nu1, "lambda2": self.lambda2,
            "m0": self.m0, "nu": self.nu, "n0": self.n0,
        }


def zp_rank(model: TowerModel, m: int) -> int:
    return model.lambda2 + model.r_free * (model.p**m - model.p**model.e1)


def derive_level(model: TowerModel, m: int) -> LevelData:
    if m < model.e1:
        raise DomainError(f"level m={m} lies below e1={model.e1}")
    torsion = nu_quotient_order(model.y_module, m, model.e1)
    return LevelData(m, torsion, zp_rank(model, m))


def _require_torsion(model: TowerModel) -> None:
    if model.r_free:
        raise ConditionTViolated(f"model has {model.r_free} free summand(s); X(K_inf) is not torsion")


def h_invariants(model: TowerModel, m_top: int | None = None) -> TowerInvariants:
    """lambda_1, mu_1, lambda_2 from the model; nu_1 and m_0 from a torsion scan."""
    _require_torsion(model)
    Y = model.y_module
    lam1, mu1, lam2 = Y.lam, Y.mu, model.lambda2
    lam_x, mu_x = model.x_invariants()
    if (lam1 + lam2, mu1) != (lam_x, mu_x):
        raise FormulaViolation(
            f"lambda1 + lambda2 = {lam1 + lam2}, mu1 = {mu1} but X has (lambda, mu) = ({lam_x}, {mu_x})"
        )
    m_top = max_level(model.p) if m_top is None else m_top
    if m_top - model.e1 < 2:
        raise DomainError("torsion scan needs at least three levels")
    rows = [(m, derive_level(model, m).torsion_exponent) for m in range(model.e1, m_top + 1)]
    fit = fit_growth(rows, model.p)
    if fit is None or (fit.lam, fit.mu) != (lam1, mu1):
        raise NoStabilization("torsion growth did not stabilise on (lambda1, mu1)", rows)
    return TowerInvariants(lam1, mu1, fit.nu, lam2, max(model.e1, fit.n_stab))


def gamma_quotient_exponent(model: TowerModel, N: int) -> int:
    """log_p |W / (delta nu_N) W|, the factor of |X(F_m k_{e3+N})| not seen by C_m."""
    return nu_quotient_order(model.gamma_module, N, 0, model.gamma_scaling)


def gamma_level_order(model: TowerModel, m: int, N: int) -> int:
    return derive_level(model, m).torsion_exponent + gamma_quotient_exponent(model, N)


@dataclass(frozen=True)
class TheoremCertificate:
    invariants: TowerInvariants
    m1: int
    N_max: int
    nu_prime: int
    nu_double_prime: int
    table: tuple[dict, ...] = field(repr=False)

    def to_json(self) -> dict:
        return {
            "invariants": self.invariants.to_json(),
            "m1": self.m1,
            "N_max": self.N_max,
            "nu_prime": self.nu_prime,
            "nu_double_prime": self.nu_double_prime,
            "table": list(self.table),
        }


def verify_theorem1(model: TowerModel, m1: int, N_max: int, *, perturb: dict | None = None) -> TheoremCertificate:
    """Certify |X(F_m k_{e3+N})| = p^{lam1 m + mu1 p^m + lam2 (e3+N) + nu} on a window.

    ``perturb`` maps (m, N) to an offset added to the computed exponent; it
    exists so tests can feed a deliberately broken model through the checker.
    """
    inv = h_invariants(model)
    p, lam1, mu1, lam2, m0 = model.p, inv.lambda1, inv.mu1, inv.lambda2, inv.m0
    if not m0 < m1:
        raise DomainError(f"need m0 < m1, got m0={m0}, m1={m1}")
    if N_max < 2:
        raise DomainError("N_max must be at least 2")
    perturb = perturb or {}
    gamma_rows = [(N, gamma_quotient_exponent(model, N)) for N in range(N_max + 1)]
    gfit = fit_growth(gamma_rows, p)
    if gfit is None or (gfit.lam, gfit.mu) != (lam2, 0):
        raise NoStabilization("Gamma-direction growth did not stabilise on lambda2", gamma_rows)
    torsion = {m: derive_level(model, m).torsion_exponent for m in range(m0, m1 + 1)}
    grid = {
        (m, N): torsion[m] + g + perturb.get((m, N), 0)
        for m in range(m0, m1 + 1)
        for N, g in gamma_rows
    }

    def base(m, N):
        return lam1 * m + mu1 * p**m + lam2 * (model.e3 + N)

    # nu' from the m0 row alone, nu'' = |C_{m0}|, nu = nu' - nu'' + nu1.
    row0 = [grid[(m0, N)] - lam2 * (model.e3 + N) for N in range(N_max + 1)]
    nu_prime = row0[-1]
    nu_pp = torsion[m0]
    nu_decomp = nu_prime - nu_pp + inv.nu1

    nu_direct = grid[(m1, N_max)] - base(m1, N_max)
    n0 = None
    for N0 in range(N_max, -1, -1):
        if all(grid[(m, N)] == base(m, N) + nu_direct for m in range(m0, m1 + 1) for N in range(N0, N_max + 1)):
            n0 = N0
        else:
            break
    table = tuple(
        {"m": m, "N": N, "exponent": grid[(m, N)], "predicted": base(m, N) + nu_direct, "certified": n0 is not None and N >= n0}
        for m in range(m0, m1 + 1)
        for N in range(N_max + 1)
    )
    if n0 is None:
        bad = next(r for r in table if r["N"] == N_max and r["exponent"] != r["predicted"])
        raise FormulaViolation("two-variable formula fails at the top of the window", bad)
    if nu_direct != nu_decomp:
        raise FormulaViolation(
            f"nu from the grid ({nu_direct}) differs from nu' - nu'' + nu1 = {nu_decomp}",
            {"nu_direct": nu_direct, "nu_prime": nu_prime, "nu_double_prime": nu_pp, "nu1": inv.nu1},
        )
    return TheoremCertificate(replace(inv, nu=nu_direct, n0=n0), m1, N_max, nu_prime, nu_pp, table)


@dataclass(frozen=True)
class LemmaBResult:
    satisfied: bool
    lhs: int
    rhs: int
    applicable: bool

    def to_json(self) -> dict:
        return {"satisfied": self.satisfied, "lhs": self.lhs, "rhs": self.rhs, "applicable": self.applicable}


def lemma_b_check(model: TowerModel, m: int, rank_k_inf: int) -> LemmaBResult:
    """rank X(K_m) - rank X(k_inf) < p^m - 1 forces the torsion condition when e1 = 0."""
    if m < 1:
        raise DomainError("Lemma B needs m >= 1")
    if rank_k_inf != model.lambda2:
        raise DomainError(f"rank X(k_inf) must equal sum deg alpha_i = {model.lambda2}")
    lhs = zp_rank(model, m) - rank_k_inf
    rhs = model.p**m - 1
    return LemmaBResult(lhs < rhs, lhs, rhs, model.e1 == 0)


@dataclass(frozen=True)
class LowerBoundResult:
    bound: int
    holds: bool
    lambda1: int
    rank_C: int
    rank_F: int

    def to_json(self) -> dict:
        return {"bound": self.bound, "holds": self.holds, "lambda1": self.lambda1,
                "rank_C": self.rank_C, "rank_F": self.rank_F}


def lower_bound_check(model: TowerModel, d: int, rank_k_inf: int) -> LowerBoundResult:
    """Check lambda_1 >= d - 1 - rank X(k_inf)."""
    if d < 1:
        raise DomainError("the tame module rank d must be at least 1")
    _require_torsion(model)
    if model.e1 != 0:
        raise DomainError("the lower bound needs total ramification from level 0 (e1 = 0)")
    lam1 = model.y_module.lam
    return LowerBoundResult(d - 1 - rank_k_inf, lam1 >= d - 1 - rank_k_inf, lam1,
                            lam1 + model.lambda2 - d + 1, d - 1)


# --- random models ---------------------------------------------------------


@dataclass(frozen=True)
class TowerBounds:
    primes: tuple[int, ...] = (2, 3, 5)
    max_lambda1: int = 3
    max_mu1: int = 1
    max_lambda2: int = 3
    max_e1: int = 1
    max_e3: int = 2
    r_free: int = 0
    max_delta_degree: int = 2
    N: int | None = None


def random_model(seed, bounds: TowerBounds = TowerBounds()) -> TowerModel:
    """Deterministic random model; the same (seed, bounds) gives the same model."""
    rng = random.Random(seed)
    p = rng.choice(bounds.primes)
    N = default_precision() if bounds.N is None else bounds.N
    e1 = rng.randint(0, bounds.max_e1)
    e3 = rng.randint(0, bounds.max_e3)
    one = LambdaPoly.one(p, N)
    betas = [random_distinguished(rng, p, d, N) for d in _partition(rng, rng.randint(0, bounds.max_lambda1))]
    betas += [LambdaPoly.of(p, [p**a], N) for a in _partition(rng, rng.randint(0, bounds.max_mu1))]
    alphas = [random_distinguished(rng, p, d, N) for d in _partition(rng, rng.randint(0, bounds.max_lambda2))]
    rng.shuffle(betas)
    k = max(len(betas), len(alphas))
    betas += [one] * (k - len(betas))
    alphas += [one] * (k - len(alphas))
    comps = tuple(zip(alphas, betas))
    lam2 = sum(a.degree for a in alphas)

    delta = LambdaPoly.one(p, N, "Gamma")
    if bounds.max_delta_degree and rng.random() < 0.5:
        delta = random_distinguished(rng, p, rng.randint(1, bounds.max_delta_degree), N, role="Gamma")
    ws = []
    for d in _partition(rng, lam2):
        while True:
            w = random_distinguished(rng, p, d, N, role="Gamma")
            if resultant_valuation(w, delta) != INF:
                ws.append(w)
                break
    W = ElemTorsionModule(p, N, (), tuple(ws), "Gamma")
    return TowerModel(p, N, e1, comps, bounds.r_free, W, delta, e3)


def example_model(p: int, alphas: Sequence[Sequence[int]], betas: Sequence[Sequence[int]], *,
                  gamma: Sequence[Sequence[int]] = (), delta: Sequence[int] = (1,), e1: int = 0,
                  e3: int = 0, r_free: int = 0, N: int | None = None) -> TowerModel:
    """Build a model from integer coefficient lists (ascending degree)."""
    N = default_precision() if N is None else N
    comps = tuple((LambdaPoly.of(p, a, N), LambdaPoly.of(p, b, N)) for a, b in zip(alphas, betas))
    W = ElemTorsionModule.build(p, lam=gamma, N=N, role="Gamma")
    return TowerModel(p, N, e1, comps, r_free, W, LambdaPoly.of(p, delta, N, "Gamma"), e3)


__all__ = [
    "LemmaBResult", "LevelData", "LowerBoundResult", "TheoremCertificate", "TowerBounds",
    "TowerInvariants", "TowerModel", "derive_level", "example_model", "gamma_level_order",
    "gamma_quotient_exponent", "h_invariants", "lemma_b_check", "lower_bound_check",
    "random_model", "verify_theorem1", "zp_rank",
]
