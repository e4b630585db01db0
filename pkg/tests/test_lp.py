import numpy as np
import pytest

from loccdecide import (
    ConditioningError,
    Ensemble,
    SchmidtVector,
    from_schmidt,
    nielsen_convertible,
)
from loccdecide.audit import recheck_report
from loccdecide.harness import instance_to_ensembles, random_instance
from loccdecide.locc import dist_convert_closed_form
from loccdecide.lp import FeasibilityProblem, build_problem, lp_feasible


def ens(*entries):
    return Ensemble(tuple((p, from_schmidt(SchmidtVector(tuple(lams)))) for p, lams in entries))


def test_identity_transformation_feasible():
    d = ens((0.5, (0.7, 0.3)), (0.5, (0.6, 0.4)))
    report = lp_feasible(build_problem(d, d))
    assert report.verdict
    assert np.allclose(report.certificate["q"], np.eye(2), atol=1e-9)


def test_bell_source_always_feasible():
    d1 = ens((1.0, (0.5, 0.5)))
    d2 = ens((0.4, (0.9, 0.1)), (0.6, (0.7, 0.3)))
    assert lp_feasible(build_problem(d1, d2)).verdict


def test_single_branch_reduces_to_jonathan_plenio():
    # n1 = 1: feasibility is exactly the weighted tail-sum condition.
    from loccdecide.locc import pure_to_ensemble_convertible

    rng = np.random.default_rng(5)
    for _ in range(200):
        psi = SchmidtVector(tuple(np.sort(rng.dirichlet(np.ones(3)))[::-1]))
        targets = [
            SchmidtVector(tuple(np.sort(rng.dirichlet(np.ones(3)))[::-1]))
            for _ in range(2)
        ]
        p = rng.uniform(0.2, 0.8)
        d2 = Ensemble(
            ((p, from_schmidt(targets[0])), (1.0 - p, from_schmidt(targets[1])))
        )
        d1 = Ensemble(((1.0, from_schmidt(psi)),))
        want = pure_to_ensemble_convertible(psi, d2).verdict
        got = lp_feasible(build_problem(d1, d2)).verdict
        assert got == want


def test_deterministic_channel_reduces_to_nielsen():
    # n1 = n2 = 1: the single branch must satisfy the tail-sum condition.
    rng = np.random.default_rng(6)
    for _ in range(2000):
        a = SchmidtVector(tuple(np.sort(rng.dirichlet(np.ones(4)))[::-1]))
        b = SchmidtVector(tuple(np.sort(rng.dirichlet(np.ones(4)))[::-1]))
        d1 = Ensemble(((1.0, from_schmidt(a)),))
        d2 = Ensemble(((1.0, from_schmidt(b)),))
        assert lp_feasible(build_problem(d1, d2)).verdict == nielsen_convertible(a, b).verdict


def test_label_invariance():
    rng = np.random.default_rng(11)
    for _ in range(50):
        inst = random_instance(rng)
        d1, d2 = instance_to_ensembles(inst)
        d1_swapped = Ensemble((d1.entries[1], d1.entries[0]))
        d2_swapped = Ensemble((d2.entries[1], d2.entries[0]))
        assert (
            lp_feasible(build_problem(d1, d2)).verdict
            == lp_feasible(build_problem(d1_swapped, d2_swapped)).verdict
        )


def test_agreement_with_closed_form_sample():
    rng = np.random.default_rng(12)
    for _ in range(300):
        inst = random_instance(rng)
        d1, d2 = instance_to_ensembles(inst)
        assert (
            lp_feasible(build_problem(d1, d2)).verdict
            == dist_convert_closed_form(inst).verdict
        )


def test_certificates_recheck():
    rng = np.random.default_rng(13)
    for _ in range(100):
        inst = random_instance(rng)
        d1, d2 = instance_to_ensembles(inst)
        report = lp_feasible(build_problem(d1, d2))
        ok, detail = recheck_report(report)
        assert ok, detail


def test_rank_deficient_targets_are_not_degenerate():
    # All-zero tail-sum rows (product-state targets) are dropped, not errors.
    d1 = ens((1.0, (0.6, 0.4)))
    d2 = ens((0.5, (1.0, 0.0)), (0.5, (1.0, 0.0)))
    assert lp_feasible(build_problem(d1, d2)).verdict


def test_near_zero_row_raises_conditioning_error():
    prob = FeasibilityProblem(
        n1=1, n2=1, p=[1.0], q=[1.0],
        a_eq=[[1.0]], b_eq=[1.0], eq_labels=["row_stochastic[i=0]"],
        a_ub=[[1e-16]], b_ub=[-1.0], ub_labels=["tail_sum[i=0,k=1]"],
    )
    with pytest.raises(ConditioningError, match="tail_sum"):
        lp_feasible(prob)


def test_problem_dump_documents_variable_order():
    d1 = ens((1.0, (0.6, 0.4)))
    d2 = ens((1.0, (0.8, 0.2)))
    dump = build_problem(d1, d2).to_dict()
    assert "row-major" in dump["variable_order"]
    assert dump["n1"] == 1 and dump["n2"] == 1
