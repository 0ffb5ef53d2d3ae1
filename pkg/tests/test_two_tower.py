import pytest
from hypothesis import given, strategies as st
from sympy import isprime, primerange

from iwasawa_lab import (
    AssertedInput, HypothesisNotMet, check_ex_mo, check_ex_s_ram, r_infinity, residue_unit_two_part,
    splitting_profile, xs_rank,
)
from iwasawa_lab.errors import DomainError
from iwasawa_lab.provenance import ASSERTED, FAIL, NOT_APPLICABLE, UNVERIFIED
from iwasawa_lab.two_tower import split_count

from oracles import residue_prime_data_orbits, split_count_factoring, split_count_orbits


def v2(n):
    return (n & -n).bit_length() - 1


@pytest.mark.parametrize("ell", list(primerange(3, 500)))
def test_split_counts_match_orbits(ell):
    assert [split_count(ell, n) for n in range(9)] == [split_count_orbits(ell, n) for n in range(9)]


@pytest.mark.parametrize("ell", [3, 5, 7, 17, 23, 31, 41, 47])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_split_counts_match_factorisation(ell, n):
    assert split_count(ell, n) == split_count_factoring(ell, n)


def test_closed_form_below_ten_thousand():
    for ell in primerange(3, 10**4):
        prof = splitting_profile(ell)
        assert prof.certified
        assert prof.r_inf == 2 ** max(v2(ell * ell - 1) - 3, 0)
        assert all(c == prof.r_inf for c in prof.counts[prof.stabilization_level:])


@pytest.mark.parametrize("ell,r", [(3, 1), (5, 1), (7, 2), (17, 4), (31, 8), (223, 8), (127, 32)])
def test_r_infinity_values(ell, r):
    assert r_infinity(ell) == r


def test_stabilization_level_is_first_constant_level():
    prof = splitting_profile(31)
    assert prof.counts[:6] == (1, 2, 4, 8, 8, 8)
    assert prof.stabilization_level == 3


@pytest.mark.parametrize("bad", [2, 9, 1, -7])
def test_splitting_domain(bad):
    with pytest.raises(DomainError):
        splitting_profile(bad)


def test_splitting_level_cap():
    with pytest.raises(DomainError):
        splitting_profile(7, 21)


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 17, 31])
@pytest.mark.parametrize("n", [0, 1, 2, 4])
@pytest.mark.parametrize("base", [None, -4, -7, -1463, -8])
def test_residue_units_match_frobenius_orbits(q, n, base):
    if base is not None and base % q == 0:
        with pytest.raises(DomainError):
            residue_unit_two_part(q, n, base)
        return
    res = residue_unit_two_part(q, n, base)
    g, f = residue_prime_data_orbits(q, n, base)
    assert (res.prime_count, res.residue_degree) == (g, f)
    assert res.structure == (2 ** v2(q**f - 1),) * g


def test_residue_units_small_cases():
    assert residue_unit_two_part(3, 1).structure == (8,)
    res = residue_unit_two_part(3, 2, -1463)
    assert res.prime_count == 2 and len(set(res.structure)) == 1
    with pytest.raises(DomainError):
        residue_unit_two_part(3, 1, 8)


@given(st.integers(3, 3000).filter(isprime), st.integers(0, 6))
def test_residue_unit_total_is_multiplicative_order(q, n):
    res = residue_unit_two_part(q, n)
    assert res.prime_count * res.residue_degree == 2**n
    assert res.total_exponent == res.prime_count * v2(q**res.residue_degree - 1)


def test_xs_rank_scenarios():
    a = xs_rank("case_a_odd_p", p=3, primes=[7, 13])
    assert a.rank == 1 and a.citation.startswith("[IMO")
    q = xs_rank("prop_q", primes=[31, 223])
    assert q.rank == 8
    im = xs_rank("prop_imag", m=1463, q=3)
    assert im.rank == 4 and im.details["lambda_0"] == 3


@pytest.mark.parametrize("scenario,inputs", [
    ("case_a_odd_p", {"p": 3, "primes": [7, 19]}),  # 19 = 1 mod 9
    ("case_a_odd_p", {"p": 3, "primes": [7]}),
    ("prop_q", {"primes": [31, 7]}),  # r = 8 vs 2
    ("prop_q", {"primes": [31, 29]}),
    ("prop_imag", {"m": 1463, "q": 11}),  # 11 divides 1463
    ("prop_imag", {"m": 21, "q": 11}),  # lambda_0 = 0
    ("prop_imag", {"m": 5, "q": 3}),  # 2 ramified
])
def test_xs_rank_hypothesis_failures(scenario, inputs):
    with pytest.raises(HypothesisNotMet) as info:
        xs_rank(scenario, **inputs)
    assert any(it.status == FAIL for it in info.value.ledger)


def test_xs_rank_needs_odd_p():
    with pytest.raises(DomainError):
        xs_rank("case_a_odd_p", p=2, primes=[3, 5])
    with pytest.raises(DomainError):
        xs_rank("unknown")


def test_ex_s_ram_cases():
    a = check_ex_s_ram("a", 3, [7, 13])
    assert a.conclusions == {"X_K_inf_trivial": False}
    assert any(it.status == ASSERTED for it in a.ledger)
    b = check_ex_s_ram("b", 3, [13], -4)
    assert not b.conclusions["X_K_inf_trivial"]
    c = check_ex_s_ram("c", 3, [11], -4)
    assert c.conclusions["lambda2"] == 0 and c.conclusions["X_K_inf_trivial"]


@pytest.mark.parametrize("case,primes,D", [
    ("c", [5], -4),  # 5 splits in Q(i)
    ("b", [7], -4),  # 7 is inert in Q(i)
    ("b", [13], -23),  # 3 | h(-23)
    ("b", [13], -8),  # 3 splits in Q(sqrt(-2))
])
def test_ex_s_ram_failures(case, primes, D):
    with pytest.raises(HypothesisNotMet):
        check_ex_s_ram(case, 3, primes, D)


def test_ex_s_ram_domain():
    with pytest.raises(DomainError):
        check_ex_s_ram("a", 2, [3, 5])
    with pytest.raises(DomainError):
        check_ex_s_ram("b", 3, [13])
    with pytest.raises(DomainError):
        check_ex_s_ram("z", 3, [7, 13])


def test_ex_mo_assertions():
    open_ = check_ex_mo(3, [7, 13], None)
    assert open_.unverified and open_.ledger[-1].status == UNVERIFIED
    yes = check_ex_mo(3, [7, 13], AssertedInput("mo", True, "[MO, Theorem 1]"))
    assert yes.applicable and yes.conclusions["lambda2"] == 0 and yes.conclusions["nu_positive"]
    no = check_ex_mo(3, [7, 13], AssertedInput("mo", False, "[MO, Theorem 1]"))
    assert not no.applicable and no.ledger[-1].status == NOT_APPLICABLE and no.conclusions == {}
