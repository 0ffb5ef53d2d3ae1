"""Exact certification of class-number growth in two-tiered Z_p-towers."""

from .algebra import (
    LambdaPoly, WeierstrassDecomposition, cyclotomic_factor, det_valuation, nu, omega,
    resultant_valuation, weierstrass_prepare,
)
from .errors import (
    ConditionTViolated, ConfigurationError, DomainError, FormulaViolation, HypothesisNotMet,
    InfiniteQuotient, IwasawaLabError, NoStabilization, PrecisionExhausted, ResourceError,
    UnverifiedHypothesis,
)
from .forms import BACKEND as FORMS_BACKEND
from .modules import (
    ElemTorsionModule, GrowthReport, direct_sum, growth_scan, lambda_mu, nu_quotient_order,
    quotient_order, random_module,
)
from .padic import INF, PadicInt, padic_arith, padic_inv
from .provenance import AssertedInput, LedgerItem, Quantity
from .quadratic import (
    FormClassGroup, FundamentalDiscriminant, class_group, ferrero_kida_lambda, genus_two_rank,
    kida_rank_identity, torsion_free_flag,
)
from .report import REPORT_SCHEMA, ScenarioReport, emit_report
from .scenarios import run_scenario, simulate
from .tower import (
    TowerBounds, TowerModel, example_model, h_invariants, lemma_b_check, lower_bound_check,
    random_model, verify_theorem1,
)
from .two_tower import (
    ResidueUnitTwoPart, SplittingProfile, check_ex_mo, check_ex_s_ram, r_infinity,
    residue_unit_two_part, splitting_profile, xs_rank,
)

__version__ = "0.1.0"
