import importlib.util
import os
import random
import subprocess
import sys
from math import gcd, prod

import pytest
from hypothesis import given, strategies as st

from iwasawa_lab import FORMS_BACKEND, class_group
from iwasawa_lab import _forms_py
from iwasawa_lab import forms

from oracles import analytic_class_number, is_fundamental, reduced_forms_bruteforce

HAVE_C = importlib.util.find_spec("iwasawa_lab._forms") is not None
backends = [_forms_py]
if HAVE_C:
    from iwasawa_lab import _forms as _forms_c
    backends.append(_forms_c)


def neg_fundamental(lo=3, hi=20000):
    return st.integers(lo, hi).map(lambda n: -n).filter(is_fundamental)


@pytest.mark.parametrize("kernel", backends, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("D", [-3, -4, -23, -84, -420, -3299, -4027])
def test_reduced_forms_match_bruteforce(kernel, D):
    assert sorted(kernel.reduced_forms(D)) == reduced_forms_bruteforce(D)


@given(neg_fundamental())
def test_class_number_matches_analytic_formula(D):
    assert len(forms.reduced_forms(D)) == analytic_class_number(D)


@pytest.mark.skipif(not HAVE_C, reason="compiled kernel not built")
@given(neg_fundamental(hi=10**6), st.integers(0, 2**32))
def test_backends_agree(D, seed):
    reps = _forms_py.reduced_forms(D)
    assert _forms_c.reduced_forms(D) == reps
    rng = random.Random(seed)
    f, g = rng.choice(reps), rng.choice(reps)
    k = rng.randint(0, 50)
    assert _forms_c.compose(f, g, D) == _forms_py.compose(f, g, D)
    assert _forms_c.form_power(f, k, D) == _forms_py.form_power(f, k, D)
    assert _forms_c.reduce_form(*_forms_py.compose(f, g, D)) == _forms_py.compose(f, g, D)


@given(neg_fundamental(hi=50000), st.integers(0, 2**32))
def test_group_axioms(D, seed):
    reps = forms.reduced_forms(D)
    rng = random.Random(seed)
    f, g, h = (rng.choice(reps) for _ in range(3))
    e = forms.identity(D)
    assert forms.compose(f, e, D) == f
    assert forms.compose(f, forms.inverse(f), D) == e
    assert forms.compose(f, g, D) == forms.compose(g, f, D)
    assert forms.compose(forms.compose(f, g, D), h, D) == forms.compose(f, forms.compose(g, h, D), D)
    assert forms.form_power(f, len(reps), D) == e


def torsion_count(reps, D, k):
    e = forms.identity(D)
    return sum(forms.form_power(f, k, D) == e for f in reps)


@given(neg_fundamental(hi=6000))
def test_structure_matches_torsion_counts(D):
    """|G[k]| = prod gcd(k, d_i) for every k | exponent pins down the abelian group."""
    cg = class_group(D)
    assert prod(cg.invariants) == cg.h
    assert all(b % a == 0 for a, b in zip(cg.invariants, cg.invariants[1:]))
    reps = forms.reduced_forms(D)
    exponent = max(cg.invariants, default=1)
    for k in range(1, exponent + 1):
        if exponent % k == 0:
            assert torsion_count(reps, D, k) == prod(gcd(k, d) for d in cg.invariants)


@pytest.mark.parametrize("D,invariants", [(-23, (3,)), (-84, (2, 2)), (-3299, (3, 9)), (-4027, (3, 3)),
                                          (-1463, (2, 16)), (-3, ()), (-4, ())])
def test_frozen_class_groups(D, invariants):
    # values frozen from test_structure_matches_torsion_counts and the analytic formula
    assert class_group(D).invariants == invariants


def test_backend_selection_honours_pure_flag():
    env = dict(os.environ, IWASAWA_LAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import iwasawa_lab; print(iwasawa_lab.FORMS_BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    forced = os.environ.get("IWASAWA_LAB_PURE", "") in ("1", "true", "yes")
    assert FORMS_BACKEND == ("cython" if HAVE_C and not forced else "python")
