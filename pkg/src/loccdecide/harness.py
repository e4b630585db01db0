"""Randomized cross-validation of the deciders against each other.

Each suite derives per-trial RNG streams from a root seed, so results are
reproducible regardless of how trials are batched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counterexamples import gen_prop1_instance, verify_prop1
from .locc import (
    TwoQubitDistInstance,
    closed_form_margin,
    critical_mu_set,
    dist_convert_closed_form,
    dist_convert_mu,
    nielsen_convertible,
    rational_mu_grid,
)
from .lp import build_problem, lp_feasible
from .monotones import f_mu_profile, piecewise_linear_profile, schmidt_profile
from .states import Ensemble, SchmidtVector, from_schmidt
from .tolerances import DECISION_TOL, TIE_MARGIN

__all__ = [
    "SuiteSummary",
    "random_instance",
    "random_profile_set",
    "run_nielsen_agreement",
    "run_prop2_agreement",
    "run_rational_consistency",
    "run_prop1_closure",
    "run_all",
]

_MAX_LOGGED = 20


@dataclass
class SuiteSummary:
    name: str
    trials: int
    disagreements: list = field(default_factory=list)
    ties: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "hard_disagreements": len(self.disagreements),
            "boundary_ties": len(self.ties),
            "disagreement_examples": self.disagreements[:_MAX_LOGGED],
            "tie_examples": self.ties[:_MAX_LOGGED],
        }


def random_instance(rng: np.random.Generator) -> TwoQubitDistInstance:
    x1, x2, y1, y2 = rng.random(4)
    p1 = rng.uniform(0.01, 0.99)
    q1 = rng.uniform(0.01, 0.99)
    return TwoQubitDistInstance(p1, 1.0 - p1, x1, x2, q1, 1.0 - q1, y1, y2)


def _two_qubit_state(x: float):
    return from_schmidt(SchmidtVector((1.0 - x / 2.0, x / 2.0)))


def instance_to_ensembles(inst: TwoQubitDistInstance):
    d1 = Ensemble(((inst.p1, _two_qubit_state(inst.x1)),
                   (inst.p2, _two_qubit_state(inst.x2))))
    d2 = Ensemble(((inst.q1, _two_qubit_state(inst.y1)),
                   (inst.q2, _two_qubit_state(inst.y2))))
    return d1, d2


def _random_sorted_simplex(rng: np.random.Generator, d: int):
    return SchmidtVector(tuple(np.sort(rng.dirichlet(np.ones(d)))[::-1]))


def run_nielsen_agreement(trials: int, seed: int, d: int = 4) -> SuiteSummary:
    """Library decider vs a direct tail-sum recomputation on random pairs."""
    rng = np.random.default_rng(seed)
    summary = SuiteSummary("nielsen_vs_tail_sums", trials)
    for t in range(trials):
        psi = _random_sorted_simplex(rng, d)
        phi = _random_sorted_simplex(rng, d)
        verdict = nielsen_convertible(psi, phi).verdict
        # Independent recomputation: plain running sums from the tail.
        oracle = True
        for k in range(1, d):
            if sum(psi.lambdas[k:]) < sum(phi.lambdas[k:]) - DECISION_TOL:
                oracle = False
                break
        if verdict != oracle:
            summary.disagreements.append(
                {"trial": t, "psi": list(psi.lambdas), "phi": list(phi.lambdas),
                 "decider": verdict, "oracle": oracle}
            )
    return summary


def run_prop2_agreement(trials: int, seed: int, tol: float = DECISION_TOL) -> SuiteSummary:
    """Closed form vs critical-mu conditions vs the LP oracle."""
    rng = np.random.default_rng(seed)
    summary = SuiteSummary("closed_form_vs_mu_vs_lp", trials)
    for t in range(trials):
        inst = random_instance(rng)
        closed = dist_convert_closed_form(inst, tol=tol).verdict
        viamu = dist_convert_mu(inst, critical_mu_set(inst), tol=tol).verdict
        d1, d2 = instance_to_ensembles(inst)
        vialp = lp_feasible(build_problem(d1, d2)).verdict
        if closed == viamu == vialp:
            continue
        margin = closed_form_margin(inst, tol=tol)
        record = {
            "trial": t,
            "instance": inst.to_dict(),
            "closed_form": closed,
            "mu_critical": viamu,
            "lp": vialp,
            "margin": margin,
        }
        if abs(margin) < TIE_MARGIN:
            summary.ties.append(record)
        else:
            summary.disagreements.append(record)
    return summary


def run_rational_consistency(
    trials: int, seed: int, denominator_bound: int = 50, tol: float = DECISION_TOL
) -> SuiteSummary:
    """Rational mu grid vs the critical mu set on the same random instances."""
    rng = np.random.default_rng(seed)
    grid = rational_mu_grid(denominator_bound)
    summary = SuiteSummary("rational_grid_vs_critical_set", trials)
    for t in range(trials):
        inst = random_instance(rng)
        via_grid = dist_convert_mu(inst, grid, tol=tol).verdict
        via_crit = dist_convert_mu(inst, critical_mu_set(inst), tol=tol).verdict
        if via_grid == via_crit:
            continue
        margin = closed_form_margin(inst, tol=tol)
        record = {
            "trial": t,
            "instance": inst.to_dict(),
            "rational_grid": via_grid,
            "mu_critical": via_crit,
            "margin": margin,
        }
        if abs(margin) < TIE_MARGIN:
            summary.ties.append(record)
        else:
            summary.disagreements.append(record)
    return summary


def random_profile_set(rng: np.random.Generator, max_profiles: int = 4):
    """Random finite set of valid profiles for closure testing.

    Mixes flat-capped and random concave piecewise-linear profiles, plus the
    rank indicator with probability 1/2.
    """
    n = int(rng.integers(1, max_profiles + 1))
    profiles = []
    for _ in range(n):
        if rng.random() < 0.5:
            profiles.append(f_mu_profile(float(rng.uniform(0.05, 1.0))))
        else:
            segments = int(rng.integers(2, 6))
            increments = np.sort(rng.uniform(0.05, 1.0, size=segments))[::-1]
            ys = np.concatenate([[0.0], np.cumsum(increments)])
            ys /= ys[-1]
            xs = np.linspace(0.0, 1.0, segments + 1)
            profiles.append(piecewise_linear_profile(list(zip(xs, ys))))
    if rng.random() < 0.5:
        profiles.append(schmidt_profile())
    return profiles


def prop1_instance_to_ensembles(inst):
    d1 = Ensemble(((inst.p1, _two_qubit_state(inst.x1)),
                   (inst.p2, _two_qubit_state(inst.x2))))
    d2 = Ensemble(((1.0, _two_qubit_state(inst.y)),))
    return d1, d2


def run_prop1_closure(trials: int, seed: int, check_lp: bool = True) -> SuiteSummary:
    """Generator/verifier closure on random profile sets, with the LP oracle
    confirming infeasibility of every generated instance."""
    rng = np.random.default_rng(seed)
    summary = SuiteSummary("prop1_generator_verifier_closure", trials)
    for t in range(trials):
        profiles = random_profile_set(rng)
        inst = gen_prop1_instance(profiles)
        report = verify_prop1(inst)
        ok = report.verdict
        lp_ok = True
        if check_lp:
            d1, d2 = prop1_instance_to_ensembles(inst)
            lp_ok = not lp_feasible(build_problem(d1, d2)).verdict
        if not (ok and lp_ok):
            summary.disagreements.append(
                {"trial": t, "instance": inst.to_dict(),
                 "certified": ok, "lp_infeasible": lp_ok}
            )
    return summary


def run_all(trials: int, seed: int, tol: float = DECISION_TOL) -> list:
    """The cross-validation suites behind the CLI verify command."""
    child = np.random.SeedSequence(seed).spawn(4)

    def sub(i):
        return int(child[i].generate_state(1)[0])

    return [
        run_nielsen_agreement(trials, sub(0)),
        run_prop2_agreement(trials, sub(1), tol=tol),
        run_rational_consistency(max(trials // 10, 1), sub(2), tol=tol),
        run_prop1_closure(max(trials // 10, 1), sub(3)),
    ]
