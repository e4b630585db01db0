import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loccdecide import (
    Ensemble,
    SchmidtVector,
    TwoQubitDistInstance,
    ValidationError,
    critical_mu_set,
    dist_convert_closed_form,
    dist_convert_mu,
    from_schmidt,
    nielsen_convertible,
    pure_to_ensemble_convertible,
    rational_mu_grid,
)
from loccdecide.audit import recheck_report
from loccdecide.harness import instance_to_ensembles
from loccdecide.lp import build_problem, lp_feasible


def sv(*vals):
    return SchmidtVector(tuple(vals))


def two_qubit(x):
    return from_schmidt(SchmidtVector((1.0 - x / 2.0, x / 2.0)))


FIXTURE = TwoQubitDistInstance(0.5, 0.5, 1.0, 0.4, 0.7, 0.3, 0.8, 0.2)


class TestNielsen:
    def test_bell_converts_to_anything(self):
        assert nielsen_convertible(sv(0.5, 0.5), sv(0.7, 0.3)).verdict

    def test_cannot_increase_entanglement(self):
        report = nielsen_convertible(sv(0.7, 0.3), sv(0.5, 0.5))
        assert not report.verdict
        cert = report.certificate
        assert cert["k"] == 1
        assert cert["lhs"] == pytest.approx(0.3)
        assert cert["rhs"] == pytest.approx(0.5)

    def test_four_dim_pair_all_tail_sums_hold(self):
        # Brute-force tail-sum oracle confirms this pair converts.
        psi, phi = (0.4, 0.3, 0.2, 0.1), (0.5, 0.25, 0.2, 0.05)
        oracle = all(
            sum(psi[k:]) >= sum(phi[k:]) - 1e-9 for k in range(4)
        )
        assert oracle
        assert nielsen_convertible(sv(*psi), sv(*phi)).verdict

    def test_zero_padding(self):
        assert nielsen_convertible(sv(0.5, 0.5), sv(0.6, 0.3, 0.1)).verdict is False
        assert nielsen_convertible(sv(0.5, 0.3, 0.2), sv(0.6, 0.4)).verdict

    @given(
        st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6).map(
            lambda v: sv(*sorted((x / sum(v) for x in v), reverse=True))
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_reflexivity(self, vec):
        assert nielsen_convertible(vec, vec).verdict

    def test_transitivity_on_random_triples(self):
        # Majorization is a partial order; verdicts must chain.
        rng = np.random.default_rng(99)
        lams = np.sort(rng.dirichlet(np.ones(4), size=(10**4, 3)), axis=2)[:, :, ::-1]
        tails = np.cumsum(lams[:, :, ::-1], axis=2)[:, :, ::-1]
        ab = np.all(tails[:, 0, 1:] >= tails[:, 1, 1:] - 1e-9, axis=1)
        bc = np.all(tails[:, 1, 1:] >= tails[:, 2, 1:] - 1e-9, axis=1)
        ac = np.all(tails[:, 0, 1:] >= tails[:, 2, 1:] - 2e-9, axis=1)
        assert np.all(ac[ab & bc])


class TestPureToEnsemble:
    def test_single_outcome_reduces_to_nielsen(self):
        psi = sv(0.6, 0.4)
        ens = Ensemble(((1.0, two_qubit(0.9)),))
        got = pure_to_ensemble_convertible(psi, ens).verdict
        want = nielsen_convertible(psi, sv(0.55, 0.45)).verdict
        assert got == want

    def test_bell_source_always_converts(self):
        ens = Ensemble(((0.3, two_qubit(0.9)), (0.7, two_qubit(0.2))))
        assert pure_to_ensemble_convertible(sv(0.5, 0.5), ens).verdict

    def test_hand_arithmetic_example(self):
        ens = Ensemble(((0.5, two_qubit(1.0)), (0.5, two_qubit(0.0))))
        report = pure_to_ensemble_convertible(sv(0.7, 0.3), ens)
        assert report.verdict  # 0.3 >= 0.25
        # Cross-check with the LP oracle (single-branch source).
        d1 = Ensemble(((1.0, from_schmidt(sv(0.7, 0.3))),))
        assert lp_feasible(build_problem(d1, ens)).verdict


class TestClosedForm:
    def test_fixture_not_convertible(self):
        report = dist_convert_closed_form(FIXTURE)
        assert not report.verdict
        assert report.certificate["lhs"] == pytest.approx(2.0 / 3.0, abs=1e-9)
        d1, d2 = instance_to_ensembles(FIXTURE)
        assert not lp_feasible(build_problem(d1, d2)).verdict

    def test_relaxed_target_convertible_with_certificate(self):
        inst = TwoQubitDistInstance(0.5, 0.5, 1.0, 0.4, 0.6, 0.4, 0.8, 0.2)
        report = dist_convert_closed_form(inst)
        assert report.verdict
        q = report.certificate["q"]
        # Re-check the branch constraints of the explicit channel.
        for row, x in zip(q, (inst.x1, inst.x2)):
            assert x >= row[0] * inst.y1 + row[1] * inst.y2 - 1e-9
        assert inst.p1 * q[0][0] + inst.p2 * q[1][0] == pytest.approx(inst.q1)
        d1, d2 = instance_to_ensembles(inst)
        assert lp_feasible(build_problem(d1, d2)).verdict
        ok, detail = recheck_report(report)
        assert ok, detail

    def test_case_b_inequality(self):
        inst = TwoQubitDistInstance(0.5, 0.5, 0.9, 0.4, 0.7, 0.3, 0.8, 0.2)
        report = dist_convert_closed_form(inst)
        assert not report.verdict
        # Equivalent form: p1*y1 + p2*x2 >= q1*y1 + q2*y2 reads 0.6 >= 0.62.
        assert 0.5 * 0.8 + 0.5 * 0.4 == pytest.approx(0.6)
        assert 0.7 * 0.8 + 0.3 * 0.2 == pytest.approx(0.62)
        d1, d2 = instance_to_ensembles(inst)
        assert not lp_feasible(build_problem(d1, d2)).verdict

    def test_entanglement_deficit_case(self):
        inst = TwoQubitDistInstance(0.5, 0.5, 0.9, 0.1, 0.5, 0.5, 0.8, 0.3)
        report = dist_convert_closed_form(inst)
        assert not report.verdict
        assert report.certificate["kind"] == "violated_mu"
        assert report.certificate["mu"] == pytest.approx(0.3)

    def test_degenerate_target(self):
        inst = TwoQubitDistInstance(0.4, 0.6, 0.9, 0.5, 0.7, 0.3, 0.5, 0.5)
        report = dist_convert_closed_form(inst)
        assert report.verdict
        ok, detail = recheck_report(report)
        assert ok, detail

    def test_canonical_ordering(self):
        inst = TwoQubitDistInstance(0.3, 0.7, 0.2, 0.9, 0.3, 0.7, 0.1, 0.6)
        assert inst.x1 == pytest.approx(0.9) and inst.p1 == pytest.approx(0.7)
        assert inst.y1 == pytest.approx(0.6) and inst.q1 == pytest.approx(0.7)

    def test_invariant_violations(self):
        with pytest.raises(ValidationError):
            TwoQubitDistInstance(0.5, 0.6, 1.0, 0.4, 0.7, 0.3, 0.8, 0.2)
        with pytest.raises(ValidationError):
            TwoQubitDistInstance(0.5, 0.5, 1.2, 0.4, 0.7, 0.3, 0.8, 0.2)


class TestMuConditions:
    def test_identity_instance(self):
        inst = TwoQubitDistInstance(0.5, 0.5, 0.7, 0.7, 0.5, 0.5, 0.7, 0.7)
        assert dist_convert_mu(inst, np.linspace(0, 1, 101)).verdict

    def test_dense_grid_matches_closed_form(self):
        report = dist_convert_mu(FIXTURE, np.linspace(0.0, 1.0, 10001))
        assert not report.verdict
        assert 0.2 < report.certificate["mu"] <= 0.8 + 1e-12

    def test_critical_set_witness(self):
        report = dist_convert_mu(FIXTURE, critical_mu_set(FIXTURE))
        assert not report.verdict
        assert report.certificate["mu"] in (0.8, 1.0)
        assert report.certificate["lhs"] == pytest.approx(0.75)
        assert report.certificate["rhs"] == pytest.approx(0.775)


def test_critical_mu_set_dedup():
    assert critical_mu_set(
        TwoQubitDistInstance(0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 0.8, 0.2)
    ) == [0.0, 0.2, 0.8, 1.0]
    assert critical_mu_set(
        TwoQubitDistInstance(0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 0.5, 0.5)
    ) == [0.0, 0.5, 1.0]
    assert critical_mu_set(
        TwoQubitDistInstance(0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 1.0, 0.0)
    ) == [0.0, 1.0]


def test_rational_mu_grid():
    assert rational_mu_grid(1) == [0.0, 1.0]
    assert rational_mu_grid(2) == [0.0, 0.5, 1.0]
    assert rational_mu_grid(4) == pytest.approx(
        [0.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75, 1.0]
    )
    with pytest.raises(Exception):
        rational_mu_grid(0)
