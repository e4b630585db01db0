"""Independent feasibility oracle for distribution transformations.

Feasible points of the problem built here are exactly the conditional
channels q_{j|i} realizing D1 -> D2 locally under the per-branch model:
each branch i must satisfy every tail-sum inequality against its target
mixture, rows must be stochastic, and the channel must reproduce the target
probabilities.

The solver is a small phase-1 simplex with Bland's rule over exact rational
arithmetic (input floats are quantized to denominator 2**40, an error of
~5e-13, far below the 1e-8 feasibility tolerance).  It is deterministic and
emits either a feasible channel or a Farkas infeasibility vector; both are
re-checkable by :mod:`loccdecide.audit` without rerunning the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConditioningError, ValidationError
from .monotones import e_k
from .reports import DecisionReport
from .states import ConditionalChannel, Ensemble, schmidt_decompose
from .tolerances import FEASIBILITY_TOL

__all__ = ["FeasibilityProblem", "build_problem", "lp_feasible"]

_QDEN = 2 ** 40


def _quantize(v: float) -> Fraction:
    return Fraction(round(v * _QDEN), _QDEN)


def _quantize_dist(vals) -> list:
    """Quantize a probability vector so the fractions sum to exactly 1.

    Quantizing each entry independently can leave the two mixture vectors
    with exact sums differing by ~2**-40, which makes the quantized equality
    system infeasible even when the float problem is comfortably feasible.
    """
    head = [_quantize(v) for v in vals[:-1]]
    return head + [Fraction(1) - sum(head, Fraction(0))]


@dataclass
class FeasibilityProblem:
    """Linear feasibility data: A_eq x = b_eq, A_ub x <= b_ub, x >= 0.

    Variables are q_{j|i} in row-major order over i (index = i*n2 + j).
    """

    n1: int
    n2: int
    p: list
    q: list
    a_eq: list
    b_eq: list
    eq_labels: list
    a_ub: list
    b_ub: list
    ub_labels: list
    meta: dict = field(default_factory=dict)

    @property
    def n_vars(self) -> int:
        return self.n1 * self.n2

    def to_dict(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "p": self.p,
            "q": self.q,
            "variable_order": "q[j|i], row-major in i (index = i*n2 + j)",
            "a_eq": self.a_eq,
            "b_eq": self.b_eq,
            "eq_labels": self.eq_labels,
            "a_ub": self.a_ub,
            "b_ub": self.b_ub,
            "ub_labels": self.ub_labels,
        }


def build_problem(D1: Ensemble, D2: Ensemble) -> FeasibilityProblem:
    """Constraint system whose feasible points realize D1 -> D2 locally."""
    sv1 = [(p, schmidt_decompose(s)) for p, s in D1.entries]
    sv2 = [(q, schmidt_decompose(s)) for q, s in D2.entries]
    d = max([sv.dim for _, sv in sv1] + [sv.dim for _, sv in sv2])
    sv1 = [(p, sv.padded(d)) for p, sv in sv1]
    sv2 = [(q, sv.padded(d)) for q, sv in sv2]
    n1, n2 = len(sv1), len(sv2)
    nv = n1 * n2

    ek1 = [[e_k(sv, k) for k in range(d)] for _, sv in sv1]
    ek2 = [[e_k(sv, k) for k in range(d)] for _, sv in sv2]

    a_eq, b_eq, eq_labels = [], [], []
    for i in range(n1):
        row = [0.0] * nv
        for j in range(n2):
            row[i * n2 + j] = 1.0
        a_eq.append(row)
        b_eq.append(1.0)
        eq_labels.append(f"row_stochastic[i={i}]")
    for j in range(n2):
        row = [0.0] * nv
        for i in range(n1):
            row[i * n2 + j] = sv1[i][0]
        a_eq.append(row)
        b_eq.append(sv2[j][0])
        eq_labels.append(f"mixture[j={j}]")

    a_ub, b_ub, ub_labels = [], [], []
    for i in range(n1):
        for k in range(1, d):
            row = [0.0] * nv
            for j in range(n2):
                row[i * n2 + j] = ek2[j][k]
            rhs = ek1[i][k]
            # Rank-deficient targets produce all-zero rows that are trivially
            # satisfied (0 <= E_k >= 0); drop them rather than treat them as
            # degeneracy.
            if max(abs(c) for c in row) == 0.0 and rhs >= 0.0:
                continue
            a_ub.append(row)
            b_ub.append(rhs)
            ub_labels.append(f"tail_sum[i={i},k={k}]")

    return FeasibilityProblem(
        n1=n1,
        n2=n2,
        p=[p for p, _ in sv1],
        q=[q for q, _ in sv2],
        a_eq=a_eq,
        b_eq=b_eq,
        eq_labels=eq_labels,
        a_ub=a_ub,
        b_ub=b_ub,
        ub_labels=ub_labels,
        meta={
            "d1": [{"p": p, "schmidt": list(sv.lambdas)} for p, sv in sv1],
            "d2": [{"p": q, "schmidt": list(sv.lambdas)} for q, sv in sv2],
        },
    )


def _phase1_simplex(a_rows, b_vals, n_struct):
    """Phase-1 simplex over Fractions with a full artificial basis.

    ``a_rows`` is the equality-standard-form matrix (structural + slack
    columns), ``b_vals`` the right-hand sides (sign-normalized to >= 0 by the
    caller).  Returns (optimum, x, y) where x is the standard-form solution
    when optimum == 0 and y the simplex multipliers when optimum > 0.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    zero, one = Fraction(0), Fraction(1)

    # Tableau: columns = structural+slack | artificial | rhs.
    tab = [list(row) + [zero] * m + [b] for row, b in zip(a_rows, b_vals)]
    for i in range(m):
        tab[i][n + i] = one
    basis = list(range(n, n + m))

    # Objective row (reduced costs, minimizing sum of artificials):
    # start from c - sum of basic rows.
    obj = [zero] * (n + m + 1)
    for j in range(n + m):
        obj[j] = (one if j >= n else zero) - sum(tab[i][j] for i in range(m))
    obj[-1] = -sum(tab[i][-1] for i in range(m))

    while True:
        enter = next((j for j in range(n + m) if obj[j] < zero), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > zero:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise ConditioningError("phase-1 objective unbounded (malformed problem)")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != zero:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if obj[enter] != zero:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter

    optimum = -obj[-1]
    if optimum == zero:
        x = [zero] * n
        for i, bv in enumerate(basis):
            if bv < n:
                x[bv] = tab[i][-1]
        return optimum, x, None
    # Simplex multipliers from the artificial reduced costs: for artificial
    # column i, reduced cost = 1 - y_i.
    y = [one - obj[n + i] for i in range(m)]
    return optimum, None, y


def lp_feasible(prob: FeasibilityProblem) -> DecisionReport:
    """Decide feasibility and return an auditable certificate."""
    nv = prob.n_vars
    for label, row in zip(prob.eq_labels + prob.ub_labels, prob.a_eq + prob.a_ub):
        if max((abs(c) for c in row), default=0.0) < 1e-14:
            raise ConditioningError(f"constraint row {label} has near-zero norm")

    n_ub = len(prob.a_ub)
    n = nv + n_ub
    pq = _quantize_dist(prob.p)
    qq = _quantize_dist(prob.q)
    a_rows, b_vals, signs, b_orig = [], [], [], []
    for idx, (row, b) in enumerate(zip(prob.a_eq, prob.b_eq)):
        if idx < prob.n1:
            r = [_quantize(c) for c in row] + [Fraction(0)] * n_ub
            bq = _quantize(b)
        else:
            j = idx - prob.n1
            r = [Fraction(0)] * (nv + n_ub)
            for i in range(prob.n1):
                r[i * prob.n2 + j] = pq[i]
            bq = qq[j]
        b_orig.append(bq)
        s = 1
        if bq < 0:
            r, bq, s = [-c for c in r], -bq, -1
        a_rows.append(r)
        b_vals.append(bq)
        signs.append(s)
    for idx, (row, b) in enumerate(zip(prob.a_ub, prob.b_ub)):
        r = [_quantize(c) for c in row] + [Fraction(0)] * n_ub
        r[nv + idx] = Fraction(1)
        bq = _quantize(b)
        s = 1
        if bq < 0:
            r, bq, s = [-c for c in r], -bq, -1
        a_rows.append(r)
        b_vals.append(bq)
        signs.append(s)

    inputs = {"d1": prob.meta.get("d1"), "d2": prob.meta.get("d2")}
    optimum, x, y = _phase1_simplex(a_rows, b_vals, nv)

    if optimum == 0:
        qmat = np.array(
            [[float(x[i * prob.n2 + j]) for j in range(prob.n2)] for i in range(prob.n1)]
        )
        channel = ConditionalChannel(np.clip(qmat, 0.0, 1.0))
        _check_channel(prob, channel)
        return DecisionReport(
            verdict=True,
            method="lp_feasibility",
            certificate={
                "kind": "conditional_channel",
                "q": channel.q.tolist(),
            },
            inputs=inputs,
        )

    # Map multipliers back to the original row orientation and to the Farkas
    # convention u'A_eq + v'A_ub >= 0 (v >= 0), u'b_eq + v'b_ub < 0.
    n_eq = len(prob.a_eq)
    u = [-(y[i] * signs[i]) for i in range(n_eq)]
    v = [-(y[n_eq + r] * signs[n_eq + r]) for r in range(n_ub)]
    gap = sum(ui * b for ui, b in zip(u, b_orig)) + sum(
        vi * _quantize(b) for vi, b in zip(v, prob.b_ub)
    )
    certificate = {
        "kind": "farkas",
        "u_eq": [str(f) for f in u],
        "v_ub": [str(f) for f in v],
        "eq_labels": prob.eq_labels,
        "ub_labels": prob.ub_labels,
        "combination_value": float(gap),
        "quantization_denominator": _QDEN,
    }
    return DecisionReport(
        verdict=False,
        method="lp_feasibility",
        certificate=certificate,
        inputs=inputs,
    )


def _check_channel(prob: FeasibilityProblem, channel: ConditionalChannel) -> None:
    flat = channel.q.reshape(-1)
    for label, row, b in zip(prob.eq_labels, prob.a_eq, prob.b_eq):
        val = float(np.dot(row, flat))
        if abs(val - b) > FEASIBILITY_TOL:
            raise ValidationError(f"solver channel violates {label}: {val} != {b}")
    for label, row, b in zip(prob.ub_labels, prob.a_ub, prob.b_ub):
        val = float(np.dot(row, flat))
        if val > b + FEASIBILITY_TOL:
            raise ValidationError(f"solver channel violates {label}: {val} > {b}")
