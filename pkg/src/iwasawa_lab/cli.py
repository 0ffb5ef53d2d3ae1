"""Command-line entry point: ``iwasawa-lab <verb> [flags]``.

Exit codes: 0 pass, 1 hard failure, 2 hypothesis not met, 3 unverified
assertion required, 4 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import IwasawaLabError
from .modules import ElemTorsionModule, growth_scan
from .padic import default_precision
from .provenance import asserted, computed
from .quadratic import FundamentalDiscriminant, class_group, ferrero_kida_lambda, genus_two_rank, torsion_free_flag
from .report import STATUS_EXIT, ScenarioReport, emit_report
from .scenarios import SCENARIOS, run_scenario
from .two_tower import residue_unit_two_part, splitting_profile, xs_rank


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--p", type=int, help="prime p, where the scenario lets it vary")
    c.add_argument("--precision", type=int, help="p-adic digits carried (default from IWASAWA_LAB_PRECISION or 256)")
    c.add_argument("--seed", type=int, help="seed for randomized drivers")
    c.add_argument("--out", help="write the report here instead of stdout")
    c.add_argument("--format", choices=("json", "text"), default="json")
    return c


def _int_list(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()]


def _bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes"):
        return True
    if s.lower() in ("0", "false", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {s!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="iwasawa-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", parents=[common], help="run a worked-example scenario")
    run.add_argument("scenario", choices=SCENARIOS)
    run.add_argument("--primes", type=_int_list, help="comma-separated primes (ex-s-ram-a, ex-mo, ex-gc, ex-q)")
    run.add_argument("--q", type=int, help="the prime q")
    run.add_argument("--D", type=int, help="fundamental discriminant of the imaginary base field")
    run.add_argument("--m", type=int, help="k = Q(sqrt(-m)) for ex-imag")
    run.add_argument("--ell", type=int, help="prime ell = 7 mod 8 for prop-imag2")
    run.add_argument("--ell-a", type=int, dest="ell_a")
    run.add_argument("--ell-b", type=int, dest="ell_b")
    run.add_argument("--assert-mo", type=_bool, dest="mo", help="assert the [MO, Theorem 1] hypotheses (true/false)")
    run.add_argument("--no-gc", action="store_false", dest="assume_gc", default=None,
                     help="do not assume Greenberg's conjecture in ex-gc")
    run.add_argument("--no-mm", action="store_false", dest="mm", default=None,
                     help="withhold the [MM] assertion in ex-imag-f")
    run.add_argument("--count", type=int)

    sim = sub.add_parser("simulate", parents=[common], help="certify random tower models")
    sim.add_argument("--count", type=int, default=100)
    sim.add_argument("--m1", type=int, default=4)
    sim.add_argument("--n-max", type=int, default=6, dest="N_max")

    vg = sub.add_parser("verify-growth", parents=[common], help="fit growth formulas of random or given modules")
    vg.add_argument("--count", type=int, default=200)
    vg.add_argument("--module", help="JSON file holding one elementary torsion module")
    vg.add_argument("--e", type=int, default=0, help="base level for --module")
    vg.add_argument("--n-max", type=int, dest="n_max")

    sp = sub.add_parser("split", parents=[common], help="splitting of an odd prime in B_n")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--n-max", type=int, default=20, dest="n_max")

    xr = sub.add_parser("xs-rank", parents=[common], help="rank of the tamely ramified module")
    xr.add_argument("--scenario", choices=("case_a_odd_p", "prop_q", "prop_imag"), required=True)
    xr.add_argument("--primes", type=_int_list)
    xr.add_argument("--m", type=int)
    xr.add_argument("--q", type=int)

    ru = sub.add_parser("residue-units", parents=[common], help="2-part of (O/(q))^x at level n")
    ru.add_argument("--q", type=int, required=True)
    ru.add_argument("--level", type=int, default=0)
    ru.add_argument("--base", type=int, help="discriminant of an imaginary quadratic base (default Q)")

    cg = sub.add_parser("class-group", parents=[common], help="class group of Q(sqrt(D)), D < 0")
    cg.add_argument("--D", type=int, required=True)

    lm = sub.add_parser("lambda", parents=[common], help="lambda of the cyclotomic Z_2-extension of Q(sqrt(D))")
    lm.add_argument("--D", type=int, required=True)
    return ap


def _query(verb: str, inputs: dict, precision: int, seed, fill) -> ScenarioReport:
    rep = ScenarioReport(verb, inputs, precision, seed)
    try:
        fill(rep)
    except IwasawaLabError as exc:
        rep.status = {2: "hypothesis-not-met", 3: "unverified", 4: "precision-exhausted"}.get(exc.exit_code, "fail")
        rep.message = f"{type(exc).__name__}: {exc}"
        ledger = getattr(exc, "ledger", None)
        if ledger:
            rep.ledger += ledger
    return rep.finalize()


def dispatch(ns: argparse.Namespace) -> ScenarioReport:
    precision = ns.precision if ns.precision is not None else default_precision()
    v = ns.verb
    if v == "run":
        keys = ("primes", "q", "D", "m", "ell", "ell_a", "ell_b", "count", "assume_gc", "mm")
        args = {k: getattr(ns, k) for k in keys if getattr(ns, k) is not None}
        if ns.mo is not None:
            args["mo"] = ns.mo
        if ns.p is not None:
            args["p"] = ns.p
        return run_scenario(ns.scenario, args, precision=precision, seed=ns.seed)
    if v == "simulate":
        return run_scenario("simulate", {"count": ns.count, "m1": ns.m1, "N_max": ns.N_max},
                            precision=precision, seed=ns.seed)
    if v == "verify-growth":
        if ns.module is None:
            return run_scenario("verify-growth", {"count": ns.count}, precision=precision, seed=ns.seed)
        with open(ns.module, encoding="utf-8") as fh:
            data = json.load(fh)

        def fill(rep):
            g = growth_scan(ElemTorsionModule.from_json(data), ns.e, ns.n_max)
            for k in ("lam", "mu", "nu", "n_stab"):
                rep.put({"lam": "lambda"}.get(k, k), computed(getattr(g, k)))
            rep.details["growth"] = g.to_json()
        return _query(v, {"module": data, "e": ns.e}, precision, ns.seed, fill)
    if v == "split":
        def fill(rep):
            prof = splitting_profile(ns.ell, ns.n_max)
            rep.put("r_inf", computed(prof.r_inf))
            rep.put("stabilization_level", computed(prof.stabilization_level))
            rep.details["profile"] = prof.to_json()
        return _query(v, {"ell": ns.ell, "n_max": ns.n_max}, precision, ns.seed, fill)
    if v == "xs-rank":
        inputs = {"p": ns.p if ns.p is not None else 3, "primes": ns.primes} if ns.scenario == "case_a_odd_p" \
            else {"primes": ns.primes} if ns.scenario == "prop_q" else {"m": ns.m, "q": ns.q}

        def fill(rep):
            res = xs_rank(ns.scenario, **inputs)
            rep.ledger += res.ledger
            rep.put("rank", asserted(res.rank, res.citation))
            rep.details.update(res.details)
        return _query(v, {"scenario": ns.scenario, **inputs}, precision, ns.seed, fill)
    if v == "residue-units":
        def fill(rep):
            res = residue_unit_two_part(ns.q, ns.level, ns.base)
            rep.put("structure", computed(list(res.structure)))
            rep.put("prime_count", computed(res.prime_count))
            rep.put("residue_degree", computed(res.residue_degree))
        return _query(v, {"q": ns.q, "level": ns.level, "base": ns.base}, precision, ns.seed, fill)
    if v == "class-group":
        def fill(rep):
            cg = class_group(ns.D)
            for k, val in cg.to_json().items():
                if k != "D":
                    rep.put(k, computed(val))
            rep.put("genus_two_rank", computed(genus_two_rank(ns.D)))
            rep.expect("2-rank = t - 1", genus_two_rank(ns.D), cg.two_rank)
        return _query(v, {"D": ns.D}, precision, ns.seed, fill)
    if v == "lambda":
        def fill(rep):
            disc = FundamentalDiscriminant(ns.D)
            rep.put("lambda", computed(ferrero_kida_lambda(disc)))
            rep.put("torsion_free", computed(torsion_free_flag(disc)))
            rep.put("genus_two_rank", computed(genus_two_rank(disc)))
        return _query(v, {"D": ns.D}, precision, ns.seed, fill)
    raise AssertionError(v)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        rep = dispatch(ns)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"iwasawa-lab: {exc}", file=sys.stderr)
        return STATUS_EXIT["fail"]
    text = emit_report(rep, ns.out, ns.format)
    if ns.out is None:
        sys.stdout.write(text)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
