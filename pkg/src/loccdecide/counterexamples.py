"""Constructive counterexamples: finitely many monotone conditions never
suffice to decide local convertibility.

Two generators are provided.  The distribution-level construction takes any
finite profile set and produces a two-qubit source distribution and pure
target for which every profile inequality holds yet the transformation is
impossible (the weaker branch would need its entanglement increased).  The
mixed-state construction builds a block-diagonal rank-2 state in d = 4 and a
pure target such that a given finite set of evaluators is satisfied while a
flat-capped witness monotone strictly separates the pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import CertificationError, DomainError, ValidationError
from .monotones import (
    MonotoneProfile,
    base_e,
    block_mixture_monotone,
    e_k,
    e_mu_from_base,
    f_mu,
)
from .locc import nielsen_convertible
from .reports import DecisionReport
from .states import PureState, SchmidtVector, from_schmidt, schmidt_decompose
from .tolerances import DECISION_TOL

__all__ = [
    "Prop1Instance",
    "Theorem1Instance",
    "Theorem1GenResult",
    "MonotoneEvaluator",
    "default_ek_evaluators",
    "gen_prop1_instance",
    "verify_prop1",
    "gen_theorem1_instance",
    "find_mu_witness",
    "verify_theorem1",
    "default_mu_grid",
]

# Halving search stops once every continuous profile is below this value at
# y; keeps all inequality margins >= (1 - threshold)/4, comfortably above the
# decision tolerance.
_SEARCH_THRESHOLD = 1.0 - 1e-6
_SEARCH_CAP = 60


@dataclass(frozen=True)
class Prop1Instance:
    """Distribution-level counterexample: source {(p1, x1=1), (p2, x2)} and
    pure target y with 0 < x2 < y."""

    p1: float
    x1: float
    x2: float
    y: float
    monotone_set: tuple

    def __post_init__(self):
        if abs(self.x1 - 1.0) > 1e-12:
            raise ValidationError(f"x1 must be 1, got {self.x1}")
        if not 0.0 < self.p1 < 1.0:
            raise ValidationError(f"p1 = {self.p1} not in (0, 1)")
        if not 0.0 < self.x2 < self.y <= 1.0:
            raise ValidationError(
                f"need 0 < x2 < y <= 1, got x2 = {self.x2}, y = {self.y}"
            )
        object.__setattr__(self, "monotone_set", tuple(self.monotone_set))

    @property
    def p2(self) -> float:
        return 1.0 - self.p1

    def to_dict(self) -> dict:
        return {
            "p1": self.p1,
            "x1": self.x1,
            "x2": self.x2,
            "y": self.y,
            "profiles": [pr.spec for pr in self.monotone_set],
        }


def gen_prop1_instance(monotone_set: Sequence[MonotoneProfile]) -> Prop1Instance:
    """Construct a counterexample instance for a finite profile set.

    Finds y by halving until every continuous profile drops below 1 at y,
    then sets p1 = max(max_k f_k(y), 1/2), x1 = 1, x2 = y/2.  There must be
    at least one continuous (non-rank-indicator) profile to anchor y.
    """
    profiles = list(monotone_set)
    if not profiles:
        raise ValidationError("profile set must be non-empty")
    continuous = [p for p in profiles if not p.is_schmidt_like]
    if not continuous:
        raise ValidationError(
            "construction needs at least one profile other than the rank "
            "indicator to anchor y"
        )
    y = None
    vals = None
    for t in range(1, _SEARCH_CAP + 1):
        cand = 2.0 ** (-t)
        vals = [pr(cand) for pr in continuous]
        if max(vals) < _SEARCH_THRESHOLD:
            y = cand
            break
    if y is None:
        stuck = max(zip(vals, continuous), key=lambda vp: vp[0])[1]
        raise ValidationError(
            f"profile {stuck.label} never drops below {_SEARCH_THRESHOLD} on "
            f"the halving sequence down to 2^-{_SEARCH_CAP}"
        )
    p1 = max(max(vals), 0.5)
    return Prop1Instance(p1=p1, x1=1.0, x2=y / 2.0, y=y, monotone_set=tuple(profiles))


def verify_prop1(inst: Prop1Instance) -> DecisionReport:
    """Certify a counterexample instance.

    Certified iff every profile inequality p1 f(x1) + p2 f(x2) >= f(y) holds,
    and impossibility is witnessed two ways: the weaker branch fails the
    tail-sum condition (x2 < y), and the flat-capped profile at mu = y is
    strictly violated.
    """
    tol = DECISION_TOL
    inequalities = []
    all_hold = True
    for pr in inst.monotone_set:
        lhs = inst.p1 * pr(inst.x1) + inst.p2 * pr(inst.x2)
        rhs = pr(inst.y)
        ok = lhs >= rhs - tol
        all_hold &= ok
        inequalities.append(
            {"profile": pr.label, "spec": pr.spec, "lhs": lhs, "rhs": rhs,
             "margin": lhs - rhs, "holds": ok}
        )
    branch_impossible = inst.x2 < inst.y - tol
    wit_lhs = inst.p1 * f_mu(inst.x1, inst.y) + inst.p2 * f_mu(inst.x2, inst.y)
    witness_violated = wit_lhs < 1.0 - tol
    certified = all_hold and branch_impossible and witness_violated
    return DecisionReport(
        verdict=certified,
        method="prop1",
        certificate={
            "kind": "prop1_certificate",
            "inequalities": inequalities,
            "branch_witness": {"x2": inst.x2, "y": inst.y,
                               "impossible": branch_impossible},
            "mu_witness": {"mu": inst.y, "lhs": wit_lhs, "rhs": 1.0,
                           "violated": witness_violated},
        },
        inputs=inst.to_dict(),
    )


@dataclass(frozen=True)
class MonotoneEvaluator:
    """A labelled monotone evaluator on Schmidt vectors."""

    label: str
    fn: Callable[[SchmidtVector], float]

    def __call__(self, sv: SchmidtVector) -> float:
        return float(self.fn(sv))


def default_ek_evaluators(d: int = 4) -> list:
    return [
        MonotoneEvaluator(label=f"E_{k}", fn=lambda sv, _k=k: e_k(sv, _k))
        for k in range(d)
    ]


@dataclass(frozen=True)
class Theorem1Instance:
    """Mixed-state counterexample family in d = 4.

    The source is the block-diagonal mixture of a Bell state on span{0,1}
    (weight p1) and sqrt(lam)|22> + sqrt(1-lam)|33> (weight p2); the target
    is the pure state sqrt(eta)|00> + sqrt(1-eta)|11>, with 0 < lam < eta < 1/2.
    """

    p1: float
    lam: float
    eta: float

    def __post_init__(self):
        if not 0.0 < self.p1 < 1.0:
            raise DomainError(f"p1 = {self.p1} not in (0, 1)")
        if not 0.0 < self.lam < self.eta < 0.5:
            raise DomainError(
                f"need 0 < lambda < eta < 1/2, got lambda = {self.lam}, "
                f"eta = {self.eta}"
            )

    @property
    def p2(self) -> float:
        return 1.0 - self.p1

    @property
    def psi1(self) -> PureState:
        c = np.zeros((4, 4), dtype=complex)
        c[0, 0] = c[1, 1] = np.sqrt(0.5)
        return PureState(4, c)

    @property
    def psi2(self) -> PureState:
        c = np.zeros((4, 4), dtype=complex)
        c[2, 2] = np.sqrt(self.lam)
        c[3, 3] = np.sqrt(1.0 - self.lam)
        return PureState(4, c)

    @property
    def sigma(self) -> PureState:
        c = np.zeros((4, 4), dtype=complex)
        c[0, 0] = np.sqrt(self.eta)
        c[1, 1] = np.sqrt(1.0 - self.eta)
        return PureState(4, c)

    def to_dict(self) -> dict:
        return {"p1": self.p1, "lambda": self.lam, "eta": self.eta}


@dataclass
class Theorem1GenResult:
    instance: Theorem1Instance | None
    failures: list

    @property
    def accepted(self) -> bool:
        return self.instance is not None


def gen_theorem1_instance(
    p1: float, lam: float, eta: float, finite_set: Sequence[MonotoneEvaluator]
) -> Theorem1GenResult:
    """Build the instance and check every evaluator inequality E(rho) >= E(sigma),
    with E(rho) taken as the block mixture of the two branch values."""
    inst = Theorem1Instance(p1=p1, lam=lam, eta=eta)
    sv1 = schmidt_decompose(inst.psi1)
    sv2 = schmidt_decompose(inst.psi2)
    svs = schmidt_decompose(inst.sigma)
    failures = []
    for ev in finite_set:
        lhs = block_mixture_monotone(p1, ev(sv1), ev(sv2))
        rhs = ev(svs)
        if lhs < rhs - DECISION_TOL:
            failures.append({"evaluator": ev.label, "lhs": lhs, "rhs": rhs})
    if failures:
        return Theorem1GenResult(instance=None, failures=failures)
    return Theorem1GenResult(instance=inst, failures=[])


def _critical_mus(inst: Theorem1Instance) -> list:
    return [
        base_e(schmidt_decompose(inst.sigma)),
        base_e(schmidt_decompose(inst.psi1)),
        base_e(schmidt_decompose(inst.psi2)),
    ]


def default_mu_grid(inst: Theorem1Instance, points: int = 10001) -> list:
    """Uniform mu grid unioned with the instance's critical base values."""
    grid = set(np.linspace(0.0, 1.0, points).tolist())
    grid.update(_critical_mus(inst))
    return sorted(grid)


def find_mu_witness(inst: Theorem1Instance, grid: Sequence[float]) -> DecisionReport:
    """Scan the mu grid for a flat-capped witness separating rho from sigma.

    The grid must contain the three critical base values; for every valid
    instance a witness exists at mu = base_e(sigma) unless p1 is so close to
    1 that the separation falls under tolerance, in which case the scan
    either finds another mu or certification fails loudly.  Critical values
    are tried before the rest of the grid, so the canonical witness
    mu = base_e(sigma) is returned whenever it separates.
    """
    grid = sorted(float(m) for m in grid)
    if any(m < -1e-12 or m > 1.0 + 1e-12 for m in grid):
        raise DomainError("mu grid must lie in [0, 1]")
    critical = _critical_mus(inst)
    for crit in critical:
        if not any(abs(g - crit) <= 1e-12 for g in grid):
            raise CertificationError(
                f"mu grid lacks critical value {crit!r}; witness scan refused"
            )
    b1 = base_e(schmidt_decompose(inst.psi1))
    b2 = base_e(schmidt_decompose(inst.psi2))
    bs = base_e(schmidt_decompose(inst.sigma))
    for mu in critical + [m for m in grid if m not in critical]:
        e_rho = block_mixture_monotone(
            inst.p1, e_mu_from_base(b1, mu), e_mu_from_base(b2, mu)
        )
        e_sig = e_mu_from_base(bs, mu)
        if e_rho < e_sig - DECISION_TOL:
            return DecisionReport(
                verdict=True,
                method="mu_witness",
                certificate={
                    "kind": "mu_witness",
                    "mu": mu,
                    "e_mu_rho": e_rho,
                    "e_mu_sigma": e_sig,
                },
                inputs=inst.to_dict(),
            )
    raise CertificationError(
        "no flat-capped witness found on the supplied grid; instance invalid "
        "or separation below tolerance"
    )


def verify_theorem1(
    inst: Theorem1Instance,
    finite_set: Sequence[MonotoneEvaluator],
    grid: Sequence[float] | None = None,
) -> DecisionReport:
    """Certify a mixed-state counterexample instance.

    Certified iff the finite evaluator inequalities all hold, a witness
    monotone separates the pair, and the weaker branch fails the tail-sum
    condition against the target.
    """
    if grid is None:
        grid = default_mu_grid(inst)
    gen = gen_theorem1_instance(inst.p1, inst.lam, inst.eta, finite_set)
    sv1 = schmidt_decompose(inst.psi1)
    sv2 = schmidt_decompose(inst.psi2)
    svs = schmidt_decompose(inst.sigma)
    finite_checks = [
        {
            "evaluator": ev.label,
            "lhs": block_mixture_monotone(inst.p1, ev(sv1), ev(sv2)),
            "rhs": ev(svs),
        }
        for ev in finite_set
    ]
    witness = None
    witness_error = None
    try:
        witness = find_mu_witness(inst, grid)
    except CertificationError as exc:
        witness_error = str(exc)
    branch = nielsen_convertible(sv2, svs)
    certified = gen.accepted and witness is not None and not branch.verdict
    certificate = {
        "kind": "theorem1_certificate",
        "finite_set": finite_checks,
        "finite_set_failures": gen.failures,
        "mu_witness": witness.certificate if witness else None,
        "mu_witness_error": witness_error,
        "branch_nielsen": branch.to_dict(),
    }
    return DecisionReport(
        verdict=certified,
        method="theorem1",
        certificate=certificate,
        inputs=inst.to_dict(),
    )
