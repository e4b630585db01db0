"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The criteria pin the behavior of the whole decision stack at scale:

1. Pure-state decider agrees with a brute-force tail-sum oracle on 1e5
   random 4x4 pairs in under 10 seconds.
2. The three independent two-qubit ensemble deciders (closed form,
   critical-mu set, exact-rational LP) agree on 1e4 random instances;
   boundary ties (|margin| < 1e-7) are logged and bounded below 0.5%.
3. The rational-mu grid (denominator 50) reproduces the critical-set
   decision on the same instances, up to truncation misses: violations
   confined strictly between adjacent grid points are invisible to any
   finite grid, so they are verified as genuine narrow windows, logged,
   and bounded by the same 0.5%.
4. The counterexample generator closes the loop on 1e3 random profile
   sets: every generated instance passes all profile inequalities with
   positive margin, is LP-infeasible, and is rejected by the mu = y
   witness.  (The rank-indicator profile attains exact equality by
   construction, so its margin is only required to be >= -1e-9.)
5. The block-diagonal mixed-state fixture reproduces its hand-computed
   values to 1e-9.
6. Every built-in profile family member satisfies the monotone axioms on
   1001-point grids; a convex profile is rejected.
7. Every certificate emitted along the way re-verifies under independent
   recomputation from the raw inputs.
"""

import time

import numpy as np
import pytest
from conftest import record_acceptance

from loccdecide.audit import recheck_report
from loccdecide.counterexamples import (
    Theorem1Instance,
    default_ek_evaluators,
    default_mu_grid,
    gen_prop1_instance,
    verify_prop1,
    verify_theorem1,
)
from loccdecide.harness import (
    instance_to_ensembles,
    prop1_instance_to_ensembles,
    random_instance,
    random_profile_set,
)
from loccdecide.locc import (
    closed_form_margin,
    critical_mu_set,
    dist_convert_closed_form,
    dist_convert_mu,
    nielsen_convertible,
    rational_mu_grid,
)
from loccdecide.lp import build_problem, lp_feasible
from loccdecide.monotones import (
    MonotoneProfile,
    check_lemma1,
    check_lemma2,
    e_mu_from_base,
    f_mu_profile,
    schmidt_profile,
    validate_profile,
)
from loccdecide.states import SchmidtVector

SEED = 20260826
N_NIELSEN = 100_000
N_PROP2 = 10_000
N_PROP1 = 1_000
TIE_MARGIN = 1e-7
TIE_BUDGET = 0.005


def _line(num, name, ok, extra=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({extra})" if extra else ""
    record_acceptance(f"criterion {num} [{name}]: {status}{suffix}")


# ---------------------------------------------------------------------------
# shared batches


@pytest.fixture(scope="module")
def nielsen_batch():
    rng = np.random.default_rng(SEED)
    lam1 = np.sort(rng.dirichlet(np.ones(4), size=N_NIELSEN), axis=1)[:, ::-1]
    lam2 = np.sort(rng.dirichlet(np.ones(4), size=N_NIELSEN), axis=1)[:, ::-1]
    t0 = time.perf_counter()
    reports = [
        nielsen_convertible(SchmidtVector(tuple(a)), SchmidtVector(tuple(b)))
        for a, b in zip(lam1, lam2)
    ]
    elapsed = time.perf_counter() - t0
    return lam1, lam2, reports, elapsed


@pytest.fixture(scope="module")
def prop2_batch():
    rng = np.random.default_rng(SEED + 1)
    rows = []
    for _ in range(N_PROP2):
        inst = random_instance(rng)
        rep_cf = dist_convert_closed_form(inst)
        rep_mu = dist_convert_mu(inst, critical_mu_set(inst))
        rep_lp = lp_feasible(build_problem(*instance_to_ensembles(inst)))
        rows.append((inst, rep_cf, rep_mu, rep_lp, closed_form_margin(inst)))
    return rows


@pytest.fixture(scope="module")
def rational_batch(prop2_batch):
    grid = rational_mu_grid(50)
    return grid, [dist_convert_mu(inst, grid) for inst, *_ in prop2_batch]


@pytest.fixture(scope="module")
def prop1_batch():
    rng = np.random.default_rng(SEED + 2)
    rows = []
    for _ in range(N_PROP1):
        profiles = random_profile_set(rng)
        inst = gen_prop1_instance(profiles)
        rep = verify_prop1(inst)
        rep_lp = lp_feasible(build_problem(*prop1_instance_to_ensembles(inst)))
        rows.append((inst, rep, rep_lp))
    return rows


@pytest.fixture(scope="module")
def theorem1_report():
    inst = Theorem1Instance(p1=0.9, lam=0.05, eta=0.4)
    return verify_theorem1(inst, default_ek_evaluators(), default_mu_grid(inst))


# ---------------------------------------------------------------------------
# criteria


def test_criterion_1_nielsen_oracle(nielsen_batch):
    lam1, lam2, reports, elapsed = nielsen_batch
    # Independent oracle: compare all tail sums directly on the raw spectra.
    tails1 = np.cumsum(lam1[:, ::-1], axis=1)[:, ::-1]
    tails2 = np.cumsum(lam2[:, ::-1], axis=1)[:, ::-1]
    oracle = np.all(tails1 >= tails2 - 1e-9, axis=1)
    verdicts = np.array([r.verdict for r in reports])
    disagreements = int(np.sum(verdicts != oracle))
    ok = disagreements == 0 and elapsed < 10.0
    _line(1, "nielsen oracle agreement", ok,
          f"{N_NIELSEN} pairs, {disagreements} disagreements, {elapsed:.1f}s")
    assert disagreements == 0
    assert elapsed < 10.0


def test_criterion_2_triple_agreement(prop2_batch):
    hard, ties = [], []
    for trial, (inst, rep_cf, rep_mu, rep_lp, margin) in enumerate(prop2_batch):
        verdicts = {rep_cf.verdict, rep_mu.verdict, rep_lp.verdict}
        if len(verdicts) == 1:
            continue
        entry = {"trial": trial, "instance": inst.to_dict(), "margin": margin,
                 "closed_form": rep_cf.verdict, "mu_critical": rep_mu.verdict,
                 "lp": rep_lp.verdict}
        (ties if abs(margin) < TIE_MARGIN else hard).append(entry)
    ok = not hard and len(ties) <= TIE_BUDGET * len(prop2_batch)
    _line(2, "closed form = critical mu = LP", ok,
          f"{len(prop2_batch)} instances, {len(hard)} hard disagreements, "
          f"{len(ties)} boundary ties")
    assert hard == []
    assert len(ties) <= TIE_BUDGET * len(prop2_batch), ties[:10]


def test_criterion_3_rational_grid(prop2_batch, rational_batch):
    grid, rational_reports = rational_batch
    grid_arr = np.asarray(grid)
    hard, misses = [], []
    for trial, ((inst, _, rep_mu, _, margin), rep_rat) in enumerate(
        zip(prop2_batch, rational_reports)
    ):
        if rep_rat.verdict == rep_mu.verdict:
            continue
        entry = {"trial": trial, "instance": inst.to_dict(), "margin": margin,
                 "rational": rep_rat.verdict, "critical": rep_mu.verdict}
        # The grid conditions are a subset of "all mu", so the only coherent
        # disagreement is rational-true / critical-false with the violation
        # window strictly between adjacent grid points.
        if rep_rat.verdict and not rep_mu.verdict:
            mu_star = rep_mu.certificate["mu"]
            confined = (
                not dist_convert_mu(inst, [mu_star]).verdict
                and not np.any(np.isclose(grid_arr, mu_star, atol=1e-12))
            )
            if confined:
                lo = float(grid_arr[grid_arr < mu_star].max())
                hi = float(grid_arr[grid_arr > mu_star].min())
                entry["window"] = [lo, hi]
                misses.append(entry)
                continue
        hard.append(entry)
    ok = not hard and len(misses) <= TIE_BUDGET * len(prop2_batch)
    _line(3, "rational mu grid vs critical set", ok,
          f"{len(prop2_batch)} instances, {len(hard)} disagreements, "
          f"{len(misses)} truncation misses")
    assert hard == []
    assert len(misses) <= TIE_BUDGET * len(prop2_batch), misses[:10]


def test_criterion_4_prop1_closure(prop1_batch):
    failures = []
    for trial, (inst, rep, rep_lp) in enumerate(prop1_batch):
        problems = []
        if not rep.verdict:
            problems.append("verifier rejected the generated instance")
        for ineq in rep.certificate["inequalities"]:
            if ineq["spec"]["kind"] == "schmidt":
                if ineq["margin"] < -1e-9:
                    problems.append(f"rank-indicator margin {ineq['margin']}")
            elif ineq["margin"] <= 1e-9:
                problems.append(f"{ineq['profile']} margin {ineq['margin']}")
        if rep_lp.verdict:
            problems.append("LP reports the transformation feasible")
        wit = rep.certificate["mu_witness"]
        if not wit["violated"] or abs(wit["mu"] - inst.y) > 1e-12:
            problems.append(f"mu witness {wit}")
        if problems:
            failures.append({"trial": trial, "instance": inst.to_dict(),
                             "problems": problems})
    _line(4, "counterexample generator closure", not failures,
          f"{len(prop1_batch)} profile sets, {len(failures)} failures")
    assert failures == [], failures[:5]


def test_criterion_5_block_mixture_fixture(theorem1_report):
    rep = theorem1_report
    cert = rep.certificate
    by_name = {row["evaluator"]: row for row in cert["finite_set"]}
    wit = cert["mu_witness"]
    branch = cert["branch_nielsen"]["certificate"]
    checks = [
        rep.verdict,
        abs(by_name["E_1"]["lhs"] - 0.455) < 1e-9,
        abs(by_name["E_1"]["rhs"] - 0.4) < 1e-9,
        abs(wit["mu"] - 8.0 / 15.0) < 1e-9,
        abs(wit["e_mu_rho"] - 0.9125) < 1e-9,
        abs(wit["e_mu_sigma"] - 1.0) < 1e-9,
        branch["k"] == 1,
        # x-parameters of the failing branch: 0.1 < 0.8.
        abs(2.0 * branch["lhs"] - 0.1) < 1e-9,
        abs(2.0 * branch["rhs"] - 0.8) < 1e-9,
    ]
    _line(5, "block-diagonal fixture", all(checks),
          f"E1 {by_name['E_1']['lhs']:.3f} >= {by_name['E_1']['rhs']:.3f}, "
          f"witness mu = {wit['mu']:.6f}")
    assert all(checks), checks


def test_criterion_6_monotone_axioms():
    failures = []

    def expect(name, report, want_ok=True):
        if report.ok != want_ok:
            failures.append((name, report.first_failure()))

    for mu in np.linspace(0.0, 1.0, 101):
        prof = f_mu_profile(float(mu))
        expect(f"validate f_mu[{mu:.2f}]", validate_profile(prof, 1001))
        expect(f"lemma1 f_mu[{mu:.2f}]", check_lemma1(prof, 1001))
        if mu < 1.0:
            x1 = mu + (1.0 - mu) / 3.0
            x2 = mu + 2.0 * (1.0 - mu) / 3.0
        else:
            x1, x2 = 0.3, 0.7
        expect(f"lemma2 f_mu[{mu:.2f}]", check_lemma2(prof, x1, x2))

    for mu in np.linspace(0.0, 1.0, 101):
        mu = float(mu)
        comp = MonotoneProfile(
            fn=lambda e, m=mu: e_mu_from_base(e, m),
            is_schmidt_like=(mu == 0.0),
            label=f"e_mu_from_base[mu={mu:.2f}]",
        )
        expect(comp.label, validate_profile(comp, 1001))
        expect(f"lemma1 {comp.label}", check_lemma1(comp, 1001))

    sp = schmidt_profile()
    expect("validate schmidt", validate_profile(sp, 1001))
    expect("lemma1 schmidt", check_lemma1(sp, 1001))
    expect("lemma2 schmidt", check_lemma2(sp, 0.3, 0.7))

    convex = MonotoneProfile(fn=lambda x: x * x, is_schmidt_like=False,
                             label="x^2")
    expect("convex rejected", validate_profile(convex, 1001), want_ok=False)

    _line(6, "monotone axioms", not failures,
          f"203 profiles + rank indicator, {len(failures)} failures")
    assert failures == [], failures[:5]


def test_criterion_7_certificate_audit(
    nielsen_batch, prop2_batch, rational_batch, prop1_batch, theorem1_report
):
    reports = list(nielsen_batch[2])
    for _, rep_cf, rep_mu, rep_lp, _ in prop2_batch:
        reports.extend((rep_cf, rep_mu, rep_lp))
    reports.extend(rational_batch[1])
    for _, rep, rep_lp in prop1_batch:
        reports.extend((rep, rep_lp))
    reports.append(theorem1_report)

    failures = []
    for idx, rep in enumerate(reports):
        ok, detail = recheck_report(rep)
        if not ok:
            failures.append({"index": idx, "method": rep.method,
                             "detail": detail})
    _line(7, "certificate auditability", not failures,
          f"{len(reports)} certificates rechecked, {len(failures)} failures")
    assert failures == [], failures[:5]
