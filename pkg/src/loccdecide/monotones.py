"""Entanglement-monotone families over Schmidt data and the two-qubit x.

Two-qubit monotones are profiles f on [0, 1] that must be monotone, concave,
and normalized (f(0) = 0, f(1) = 1).  The flat-capped family f_mu and the
rank indicator ("Schmidt function", 0 at x = 0 and 1 for x > 0) are the
built-ins; arbitrary concave piecewise-linear profiles are supported for
randomized testing and the CLI profile files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, ValidationError
from .states import Ensemble, SchmidtVector, schmidt_decompose, x_param
from .tolerances import DECISION_TOL

__all__ = [
    "MonotoneProfile",
    "ValidationReport",
    "e_k",
    "f_mu",
    "base_e",
    "e_mu_from_base",
    "ensemble_monotone",
    "ensemble_ek",
    "validate_profile",
    "check_lemma1",
    "check_lemma2",
    "block_mixture_monotone",
    "f_mu_profile",
    "schmidt_profile",
    "sqrt_profile",
    "piecewise_linear_profile",
    "profile_from_spec",
]

_UNIT_SLACK = 1e-12


def _require_unit(name: str, v: float) -> float:
    if not (-_UNIT_SLACK <= v <= 1.0 + _UNIT_SLACK):
        raise DomainError(f"{name} = {v!r} outside [0, 1]")
    return min(max(float(v), 0.0), 1.0)


@dataclass(frozen=True)
class MonotoneProfile:
    """Evaluable monotone profile on [0, 1].

    ``is_schmidt_like`` marks the discontinuous rank indicator, which is
    validated structurally instead of by grid sampling.  ``spec`` keeps the
    JSON-serializable construction recipe for certificates.
    """

    fn: Callable[[float], float]
    is_schmidt_like: bool
    label: str
    spec: dict | None = None

    def __call__(self, x: float) -> float:
        return float(self.fn(x))


@dataclass
class ValidationReport:
    ok: bool
    checks: int
    failures: list = field(default_factory=list)

    def first_failure(self):
        return self.failures[0] if self.failures else None


def e_k(lambdas: SchmidtVector, k: int) -> float:
    """Tail sum of Schmidt numbers from index k."""
    d = lambdas.dim
    if not 0 <= k <= d - 1:
        raise IndexError(f"k = {k} out of range [0, {d - 1}]")
    return float(sum(lambdas.lambdas[k:]))


def f_mu(x: float, mu: float) -> float:
    """Flat-capped linear profile: x/mu below mu, 1 above; mu = 0 is the
    rank indicator and mu = 1 the identity."""
    x = _require_unit("x", x)
    mu = _require_unit("mu", mu)
    if mu == 0.0:
        return 0.0 if x == 0.0 else 1.0
    return min(x / mu, 1.0)


def base_e(lambdas: SchmidtVector) -> float:
    """(4/3)(1 - lambda_max); equals 1 on the d = 4 maximally entangled state."""
    return (4.0 / 3.0) * (1.0 - lambdas.lambdas[0])


def e_mu_from_base(e_value: float, mu: float) -> float:
    """Flat-capped rescaling of a base monotone value: E/mu if E <= mu else 1.

    The boundary E = mu (within decision tolerance) takes the E <= mu branch.
    """
    if not (-_UNIT_SLACK <= e_value <= 1.0 + _UNIT_SLACK):
        raise DomainError(f"base value {e_value!r} outside [0, 1]")
    mu = _require_unit("mu", mu)
    e_value = min(max(float(e_value), 0.0), 1.0)
    if mu == 0.0:
        return 0.0 if e_value == 0.0 else 1.0
    if e_value <= mu + DECISION_TOL:
        return min(e_value / mu, 1.0)
    return 1.0


def ensemble_monotone(D: Ensemble, profile: MonotoneProfile) -> float:
    """Probability-weighted profile value over a 2x2 ensemble."""
    if D.dim != 2:
        raise DimensionError(f"profiles act on two-qubit states, got d = {D.dim}")
    return float(sum(p * profile(x_param(s)) for p, s in D.entries))


def ensemble_ek(D: Ensemble, k: int) -> float:
    """Probability-weighted tail sum over an ensemble."""
    return float(sum(p * e_k(schmidt_decompose(s), k) for p, s in D.entries))


def validate_profile(profile: MonotoneProfile, grid_size: int = 1001) -> ValidationReport:
    """Check monotonicity, midpoint concavity, and normalization on a grid.

    Schmidt-like profiles skip the sampled checks (no finite grid separates
    f(0+) = 1 from a steep continuous profile) and are checked structurally.
    """
    if grid_size < 3:
        raise DomainError(f"grid_size must be >= 3, got {grid_size}")
    tol = DECISION_TOL
    failures = []
    if profile.is_schmidt_like:
        checks = grid_size
        if abs(profile(0.0)) > tol:
            failures.append({"check": "schmidt_zero", "x": 0.0, "value": profile(0.0)})
        for x in np.linspace(0.0, 1.0, grid_size)[1:]:
            v = profile(float(x))
            if abs(v - 1.0) > tol:
                failures.append({"check": "schmidt_one", "x": float(x), "value": v})
                break
        return ValidationReport(not failures, checks, failures)

    xs = np.linspace(0.0, 1.0, grid_size)
    vals = [profile(float(x)) for x in xs]
    checks = 0
    if abs(vals[0]) > tol:
        failures.append({"check": "normalization", "x": 0.0, "value": vals[0]})
    if abs(vals[-1] - 1.0) > tol:
        failures.append({"check": "normalization", "x": 1.0, "value": vals[-1]})
    for i in range(grid_size - 1):
        checks += 1
        if vals[i + 1] < vals[i] - tol:
            failures.append(
                {"check": "monotonicity", "pair": (float(xs[i]), float(xs[i + 1])),
                 "values": (vals[i], vals[i + 1])}
            )
            break
    for i in range(grid_size - 2):
        checks += 1
        mid = profile(float((xs[i] + xs[i + 2]) / 2.0))
        if mid < (vals[i] + vals[i + 2]) / 2.0 - tol:
            failures.append(
                {"check": "concavity", "pair": (float(xs[i]), float(xs[i + 2])),
                 "midpoint_value": mid, "chord_value": (vals[i] + vals[i + 2]) / 2.0}
            )
            break
    return ValidationReport(not failures, checks, failures)


def check_lemma1(profile: MonotoneProfile, grid_size: int = 1001) -> ValidationReport:
    """Any valid profile dominates the identity: f(x) >= x on the grid."""
    if grid_size < 3:
        raise DomainError(f"grid_size must be >= 3, got {grid_size}")
    failures = []
    xs = np.linspace(0.0, 1.0, grid_size)
    for x in xs:
        v = profile(float(x))
        if v < float(x) - DECISION_TOL:
            failures.append({"check": "f_geq_x", "x": float(x), "value": v})
            break
    return ValidationReport(not failures, grid_size, failures)


def check_lemma2(profile: MonotoneProfile, x1: float, x2: float) -> ValidationReport:
    """If f takes equal values at two distinct points, both must be 1."""
    if x1 == x2:
        raise DomainError("lemma 2 needs two distinct points")
    v1, v2 = profile(x1), profile(x2)
    failures = []
    if abs(v1 - v2) <= DECISION_TOL:
        if abs(v1 - 1.0) > DECISION_TOL or abs(v2 - 1.0) > DECISION_TOL:
            failures.append(
                {"check": "equal_implies_one", "x": (x1, x2), "values": (v1, v2)}
            )
    return ValidationReport(not failures, 1, failures)


def block_mixture_monotone(p1: float, v1: float, v2: float) -> float:
    """p1*v1 + (1-p1)*v2.

    Valid as a mixed-state monotone value only for block-diagonal mixtures
    whose blocks are picked out by local projective measurement.
    """
    p1 = _require_unit("p1", p1)
    return p1 * v1 + (1.0 - p1) * v2


# ---------------------------------------------------------------------------
# Profile constructors
# ---------------------------------------------------------------------------


def f_mu_profile(mu: float) -> MonotoneProfile:
    mu = _require_unit("mu", mu)
    if mu == 0.0:
        return schmidt_profile()
    return MonotoneProfile(
        fn=lambda x, _mu=mu: f_mu(x, _mu),
        is_schmidt_like=False,
        label=f"f_mu[mu={mu:.12g}]",
        spec={"kind": "f_mu", "mu": mu},
    )


def schmidt_profile() -> MonotoneProfile:
    return MonotoneProfile(
        fn=lambda x: 0.0 if _require_unit("x", x) == 0.0 else 1.0,
        is_schmidt_like=True,
        label="schmidt",
        spec={"kind": "schmidt"},
    )


def sqrt_profile() -> MonotoneProfile:
    return MonotoneProfile(
        fn=lambda x: math.sqrt(_require_unit("x", x)),
        is_schmidt_like=False,
        label="sqrt",
        spec={"kind": "sqrt"},
    )


def piecewise_linear_profile(knots: Sequence[Sequence[float]]) -> MonotoneProfile:
    """Concave monotone normalized piecewise-linear profile from knot list.

    Knots must start at (0, 0), end at (1, 1), have strictly increasing x,
    non-decreasing y, and non-increasing segment slopes.
    """
    pts = [(float(x), float(y)) for x, y in knots]
    if len(pts) < 2:
        raise ValidationError("need at least two knots")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if abs(xs[0]) > 1e-12 or abs(xs[-1] - 1.0) > 1e-12:
        raise ValidationError("knot x-range must span [0, 1]")
    if abs(ys[0]) > 1e-12 or abs(ys[-1] - 1.0) > 1e-12:
        raise ValidationError("profile must be normalized: f(0)=0, f(1)=1")
    if np.any(np.diff(xs) <= 0):
        raise ValidationError("knot x-values must be strictly increasing")
    if np.any(np.diff(ys) < -1e-12):
        raise ValidationError("knots must be non-decreasing in y")
    slopes = np.diff(ys) / np.diff(xs)
    if np.any(np.diff(slopes) > 1e-9):
        raise ValidationError("knots must define a concave profile")
    label = f"piecewise_linear[{len(pts)} knots]"
    return MonotoneProfile(
        fn=lambda x: float(np.interp(_require_unit("x", x), xs, ys)),
        is_schmidt_like=False,
        label=label,
        spec={"kind": "piecewise_linear", "knots": [[x, y] for x, y in pts]},
    )


def profile_from_spec(obj: dict) -> MonotoneProfile:
    """Build a profile from its JSON spec; validates on load."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("profile spec must be an object with 'kind'")
    kind = obj["kind"]
    if kind == "f_mu":
        return f_mu_profile(float(obj["mu"]))
    if kind == "schmidt":
        return schmidt_profile()
    if kind == "sqrt":
        return sqrt_profile()
    if kind == "piecewise_linear":
        return piecewise_linear_profile(obj["knots"])
    raise ValidationError(f"unknown profile kind {kind!r}")
