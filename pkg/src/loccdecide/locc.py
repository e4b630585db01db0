"""Decision procedures for local convertibility.

Pure -> pure (tail-sum majorization), pure -> ensemble (weighted tail sums),
and two-qubit distribution -> distribution via two routes: a closed form over
channel capacities, and the flat-capped monotone conditions evaluated on a
supplied mu set.  The finite critical set {0, y2, y1, 1} is extracted from
the closed form's case analysis and is validated against it empirically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ValidationError
from .monotones import e_k, ensemble_ek, f_mu
from .reports import DecisionReport
from .states import Ensemble, SchmidtVector, schmidt_decompose
from .tolerances import DECISION_TOL, NORM_TOL

__all__ = [
    "TwoQubitDistInstance",
    "nielsen_convertible",
    "pure_to_ensemble_convertible",
    "dist_convert_closed_form",
    "closed_form_margin",
    "critical_mu_set",
    "dist_convert_mu",
    "rational_mu_grid",
]


@dataclass(frozen=True)
class TwoQubitDistInstance:
    """Two-state two-qubit distributions (p, x) -> (q, y) in canonical order
    x1 >= x2 and y1 >= y2 (the constructor sorts and permutes probabilities)."""

    p1: float
    p2: float
    x1: float
    x2: float
    q1: float
    q2: float
    y1: float
    y2: float

    def __post_init__(self):
        for name in ("p1", "p2", "x1", "x2", "q1", "q2", "y1", "y2"):
            v = float(getattr(self, name))
            if not (-1e-12 <= v <= 1.0 + 1e-12):
                raise ValidationError(f"{name} = {v!r} outside [0, 1]")
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))
        if abs(self.p1 + self.p2 - 1.0) > NORM_TOL:
            raise ValidationError(f"p1 + p2 = {self.p1 + self.p2!r}, must be 1")
        if abs(self.q1 + self.q2 - 1.0) > NORM_TOL:
            raise ValidationError(f"q1 + q2 = {self.q1 + self.q2!r}, must be 1")
        if self.x1 < self.x2:
            object.__setattr__(self, "x1", float(self.x2))
            object.__setattr__(self, "x2", float(self.x1))
            p1, p2 = self.p2, self.p1
            object.__setattr__(self, "p1", p1)
            object.__setattr__(self, "p2", p2)
        if self.y1 < self.y2:
            object.__setattr__(self, "y1", float(self.y2))
            object.__setattr__(self, "y2", float(self.y1))
            q1, q2 = self.q2, self.q1
            object.__setattr__(self, "q1", q1)
            object.__setattr__(self, "q2", q2)

    def to_dict(self) -> dict:
        return {
            "p": [self.p1, self.p2],
            "x": [self.x1, self.x2],
            "q": [self.q1, self.q2],
            "y": [self.y1, self.y2],
        }

    @classmethod
    def from_ensembles(cls, d1: Ensemble, d2: Ensemble) -> "TwoQubitDistInstance":
        """Build from two ensembles of at most two 2x2 states each."""
        from .states import x_param

        def unpack(ens: Ensemble, label: str):
            if ens.dim != 2:
                raise ValidationError(f"{label}: states must be 2x2, got d={ens.dim}")
            if len(ens.entries) == 1:
                p, s = ens.entries[0]
                x = x_param(s)
                return 0.5, 0.5, x, x
            if len(ens.entries) != 2:
                raise ValidationError(
                    f"{label}: closed form covers two states, got {len(ens.entries)}"
                )
            (pa, sa), (pb, sb) = ens.entries
            return pa, pb, x_param(sa), x_param(sb)

        p1, p2, x1, x2 = unpack(d1, "source distribution")
        q1, q2, y1, y2 = unpack(d2, "target distribution")
        return cls(p1, p2, x1, x2, q1, q2, y1, y2)


def _pad_pair(psi: SchmidtVector, phi: SchmidtVector):
    d = max(psi.dim, phi.dim)
    return psi.padded(d), phi.padded(d)


def nielsen_convertible(
    psi: SchmidtVector, phi: SchmidtVector, tol: float = DECISION_TOL
) -> DecisionReport:
    """Pure -> pure convertibility: every tail sum of psi dominates phi's."""
    psi, phi = _pad_pair(psi, phi)
    inputs = {"psi": list(psi.lambdas), "phi": list(phi.lambdas)}
    margins = []
    for k in range(psi.dim):
        lhs, rhs = e_k(psi, k), e_k(phi, k)
        if lhs < rhs - tol:
            return DecisionReport(
                verdict=False,
                method="nielsen",
                certificate={"kind": "violated_tail_sum", "k": k, "lhs": lhs, "rhs": rhs},
                inputs=inputs,
            )
        margins.append(lhs - rhs)
    return DecisionReport(
        verdict=True,
        method="nielsen",
        certificate={"kind": "tail_sum_margins", "margins": margins},
        inputs=inputs,
    )


def pure_to_ensemble_convertible(
    psi: SchmidtVector, D: Ensemble, tol: float = DECISION_TOL
) -> DecisionReport:
    """Pure -> distribution convertibility: tail sums dominate the ensemble
    averages."""
    schmidts = [(p, schmidt_decompose(s)) for p, s in D.entries]
    d = max([psi.dim] + [sv.dim for _, sv in schmidts])
    psi = psi.padded(d)
    schmidts = [(p, sv.padded(d)) for p, sv in schmidts]
    inputs = {
        "psi": list(psi.lambdas),
        "ensemble": [{"p": p, "schmidt": list(sv.lambdas)} for p, sv in schmidts],
    }
    margins = []
    for k in range(d):
        lhs = e_k(psi, k)
        rhs = sum(p * e_k(sv, k) for p, sv in schmidts)
        if lhs < rhs - tol:
            return DecisionReport(
                verdict=False,
                method="pure_to_ensemble",
                certificate={"kind": "violated_tail_sum", "k": k, "lhs": lhs, "rhs": rhs},
                inputs=inputs,
            )
        margins.append(lhs - rhs)
    return DecisionReport(
        verdict=True,
        method="pure_to_ensemble",
        certificate={"kind": "tail_sum_margins", "margins": margins},
        inputs=inputs,
    )


def closed_form_margin(inst: TwoQubitDistInstance, tol: float = DECISION_TOL) -> float:
    """Signed decision margin of the closed form (>= 0 means convertible).

    Used by the cross-validation harness to classify boundary ties.
    """
    entanglement_margin = inst.x2 - inst.y2
    if abs(inst.y1 - inst.y2) <= tol:
        return entanglement_margin
    gap = inst.y1 - inst.y2
    q1max = min(1.0, max(0.0, (inst.x1 - inst.y2) / gap))
    q2max = min(1.0, max(0.0, (inst.x2 - inst.y2) / gap))
    capacity_margin = inst.p1 * q1max + inst.p2 * q2max - inst.q1
    return min(entanglement_margin, capacity_margin)


def dist_convert_closed_form(
    inst: TwoQubitDistInstance, tol: float = DECISION_TOL
) -> DecisionReport:
    """Closed-form decider for two-qubit distribution transformations.

    Convertible iff x2 >= y2 and the mixture capacity
    p1*q1max + p2*q2max >= q1, where qi_max = min(1, (xi - y2)/(y1 - y2)).
    On success the certificate is an explicit conditional channel; on failure
    it names the violated inequality with both sides.
    """
    inputs = {"instance": inst.to_dict()}
    p1, p2, x1, x2 = inst.p1, inst.p2, inst.x1, inst.x2
    q1, q2, y1, y2 = inst.q1, inst.q2, inst.y1, inst.y2

    if x2 < y2 - tol:
        # Target's weaker state is strictly more entangled than the source's:
        # the flat-cap condition at mu = y2 is violated.
        lhs = p1 * f_mu(x1, y2) + p2 * f_mu(x2, y2)
        return DecisionReport(
            verdict=False,
            method="dist_closed_form",
            certificate={"kind": "violated_mu", "mu": y2, "lhs": lhs, "rhs": 1.0},
            inputs=inputs,
        )

    if abs(y1 - y2) <= tol:
        # Degenerate target: the branch constraints are q-independent.
        channel = [[q1, q2], [q1, q2]]
        return DecisionReport(
            verdict=True,
            method="dist_closed_form",
            certificate={
                "kind": "conditional_channel",
                "q": channel,
                "branch_constraints": _branch_constraints(channel, inst),
            },
            inputs=inputs,
        )

    gap = y1 - y2
    q1max = min(1.0, max(0.0, (x1 - y2) / gap))
    q2max = min(1.0, max(0.0, (x2 - y2) / gap))
    capacity = p1 * q1max + p2 * q2max
    if capacity < q1 - tol:
        return DecisionReport(
            verdict=False,
            method="dist_closed_form",
            certificate={
                "kind": "violated_capacity",
                "inequality": "p1*q1max + p2*q2max >= q1",
                "lhs": capacity,
                "rhs": q1,
                "q1_max": q1max,
                "q2_max": q2max,
            },
            inputs=inputs,
        )

    # Extremal channel: saturate branch 1 first, then route the remainder
    # through branch 2 (deterministic tie-breaking).
    if p2 > 0.0:
        q12 = min(q2max, max(0.0, (q1 - p1 * q1max) / p2))
    else:
        q12 = min(q2max, q1)
    if p1 > 0.0:
        q11 = min(q1max, max(0.0, (q1 - p2 * q12) / p1))
    else:
        q11 = min(q1max, q1)
    channel = [[q11, 1.0 - q11], [q12, 1.0 - q12]]
    return DecisionReport(
        verdict=True,
        method="dist_closed_form",
        certificate={
            "kind": "conditional_channel",
            "q": channel,
            "branch_constraints": _branch_constraints(channel, inst),
        },
        inputs=inputs,
    )


def _branch_constraints(channel, inst: TwoQubitDistInstance) -> list:
    rows = []
    for i, (xi, row) in enumerate(zip((inst.x1, inst.x2), channel)):
        rows.append(
            {"branch": i, "lhs": xi, "rhs": row[0] * inst.y1 + row[1] * inst.y2}
        )
    return rows


def critical_mu_set(inst: TwoQubitDistInstance) -> list:
    """The finite mu set {0, y2, y1, 1} that suffices for the decision."""
    return sorted({0.0, inst.y2, inst.y1, 1.0})


def dist_convert_mu(
    inst: TwoQubitDistInstance, mus, tol: float = DECISION_TOL
) -> DecisionReport:
    """Check the flat-capped monotone condition at every supplied mu."""
    mus = np.asarray(list(mus), dtype=float)
    if mus.size == 0:
        raise DomainError("mu set must be non-empty")
    if np.any(mus < -1e-12) or np.any(mus > 1.0 + 1e-12):
        raise DomainError("mu values must lie in [0, 1]")
    mus = np.clip(mus, 0.0, 1.0)

    def fvec(x: float) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(mus > 0.0, np.minimum(x / np.where(mus > 0.0, mus, 1.0), 1.0),
                           0.0 if x == 0.0 else 1.0)
        return out

    lhs = inst.p1 * fvec(inst.x1) + inst.p2 * fvec(inst.x2)
    rhs = inst.q1 * fvec(inst.y1) + inst.q2 * fvec(inst.y2)
    margins = lhs - rhs
    inputs = {"instance": inst.to_dict()}
    bad = np.where(margins < -tol)[0]
    if bad.size:
        i = int(bad[0])
        return DecisionReport(
            verdict=False,
            method="dist_mu",
            certificate={
                "kind": "violated_mu",
                "mu": float(mus[i]),
                "lhs": float(lhs[i]),
                "rhs": float(rhs[i]),
            },
            inputs=inputs,
        )
    i = int(np.argmin(margins))
    return DecisionReport(
        verdict=True,
        method="dist_mu",
        certificate={
            "kind": "mu_conditions_hold",
            "mu_count": int(mus.size),
            "min_margin": float(margins[i]),
            "argmin_mu": float(mus[i]),
        },
        inputs=inputs,
    )


def rational_mu_grid(denominator_bound: int) -> list:
    """All fractions a/b in [0, 1] with b <= bound, deduplicated and sorted."""
    if denominator_bound < 1:
        raise DomainError(f"denominator bound must be >= 1, got {denominator_bound}")
    fracs = {Fraction(0), Fraction(1)}
    for b in range(1, denominator_bound + 1):
        for a in range(b + 1):
            fracs.add(Fraction(a, b))
    return [float(f) for f in sorted(fracs)]
