"""Independent re-verification of decision certificates.

Every check here recomputes from the raw inputs embedded in the report,
deliberately avoiding the decider code paths: tail sums, flat-capped profile
values, and constraint rows are rebuilt inline.  This is the second half of
the dual route that makes verdicts auditable.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .reports import DecisionReport
from .tolerances import DECISION_TOL, FEASIBILITY_TOL

__all__ = ["recheck_report"]


def _tail(lams, k):
    return sum(lams[k:])


def _flat_cap(x: float, mu: float) -> float:
    if mu == 0.0:
        return 0.0 if x == 0.0 else 1.0
    return min(x / mu, 1.0)


def _eval_profile_spec(spec: dict, x: float) -> float:
    kind = spec["kind"]
    if kind == "f_mu":
        return _flat_cap(x, float(spec["mu"]))
    if kind == "schmidt":
        return 0.0 if x == 0.0 else 1.0
    if kind == "sqrt":
        return math.sqrt(x)
    if kind == "piecewise_linear":
        knots = spec["knots"]
        xs = [float(p[0]) for p in knots]
        ys = [float(p[1]) for p in knots]
        return float(np.interp(x, xs, ys))
    raise ValidationError(f"unknown profile kind {kind!r} in certificate")


def recheck_report(report: DecisionReport | dict, tol: float = DECISION_TOL):
    """Re-verify a report's certificate; returns (ok, detail)."""
    if isinstance(report, dict):
        report = DecisionReport.from_dict(report)
    handler = _HANDLERS.get(report.method)
    if handler is None:
        return False, f"no audit handler for method {report.method!r}"
    return handler(report, tol)


def _audit_tail_sum(report: DecisionReport, tol: float):
    inputs = report.inputs
    psi = inputs["psi"]
    if report.method == "nielsen":
        targets = [(1.0, inputs["phi"])]
    else:
        targets = [(e["p"], e["schmidt"]) for e in inputs["ensemble"]]
    cert = report.certificate
    if report.verdict:
        if cert.get("kind") != "tail_sum_margins":
            return False, "positive verdict without margin certificate"
        for k in range(len(psi)):
            lhs = _tail(psi, k)
            rhs = sum(p * _tail(lams, k) for p, lams in targets)
            if lhs < rhs - tol:
                return False, f"claimed convertible but tail sum k={k} fails"
        return True, "all tail sums re-verified"
    if cert.get("kind") != "violated_tail_sum":
        return False, "negative verdict without a violated tail sum"
    k = cert["k"]
    lhs = _tail(psi, k)
    rhs = sum(p * _tail(lams, k) for p, lams in targets)
    if abs(lhs - cert["lhs"]) > 1e-9 or abs(rhs - cert["rhs"]) > 1e-9:
        return False, f"certificate sides do not match recomputation at k={k}"
    if lhs >= rhs - tol:
        return False, f"claimed violation at k={k} does not re-verify"
    return True, f"violation at k={k} re-verified"


def _instance_fields(inputs: dict):
    inst = inputs["instance"]
    (p1, p2), (x1, x2) = inst["p"], inst["x"]
    (q1, q2), (y1, y2) = inst["q"], inst["y"]
    return p1, p2, x1, x2, q1, q2, y1, y2


def _mu_sides(inst_fields, mu: float):
    p1, p2, x1, x2, q1, q2, y1, y2 = inst_fields
    lhs = p1 * _flat_cap(x1, mu) + p2 * _flat_cap(x2, mu)
    rhs = q1 * _flat_cap(y1, mu) + q2 * _flat_cap(y2, mu)
    return lhs, rhs


def _audit_violated_mu(fields, cert, tol):
    lhs, rhs = _mu_sides(fields, cert["mu"])
    if abs(lhs - cert["lhs"]) > 1e-9 or abs(rhs - cert["rhs"]) > 1e-9:
        return False, "mu-witness sides do not match recomputation"
    if lhs >= rhs - tol:
        return False, f"claimed mu violation at mu={cert['mu']} does not re-verify"
    return True, f"mu violation at mu={cert['mu']} re-verified"


def _audit_dist_closed_form(report: DecisionReport, tol: float):
    fields = _instance_fields(report.inputs)
    p1, p2, x1, x2, q1, q2, y1, y2 = fields
    cert = report.certificate
    if report.verdict:
        if cert.get("kind") != "conditional_channel":
            return False, "positive verdict without channel certificate"
        q = cert["q"]
        for i, row in enumerate(q):
            if any(v < -1e-9 or v > 1.0 + 1e-9 for v in row):
                return False, f"channel row {i} outside [0, 1]"
            if abs(sum(row) - 1.0) > 1e-9:
                return False, f"channel row {i} not stochastic"
        mixed = p1 * q[0][0] + p2 * q[1][0]
        if abs(mixed - q1) > max(1e-9, tol * 10):
            return False, f"channel does not reproduce q1: {mixed} vs {q1}"
        for i, xi in enumerate((x1, x2)):
            need = q[i][0] * y1 + q[i][1] * y2
            if xi < need - max(1e-9, tol * 10):
                return False, f"branch {i} tail-sum constraint fails: {xi} < {need}"
        return True, "channel certificate re-verified"
    if cert.get("kind") == "violated_mu":
        return _audit_violated_mu(fields, cert, tol)
    if cert.get("kind") == "violated_capacity":
        gap = y1 - y2
        if gap <= 0:
            return False, "capacity certificate with degenerate target"
        q1max = min(1.0, max(0.0, (x1 - y2) / gap))
        q2max = min(1.0, max(0.0, (x2 - y2) / gap))
        cap = p1 * q1max + p2 * q2max
        if abs(cap - cert["lhs"]) > 1e-9 or abs(q1 - cert["rhs"]) > 1e-9:
            return False, "capacity certificate sides do not match"
        if cap >= q1 - tol:
            return False, "claimed capacity violation does not re-verify"
        return True, "capacity violation re-verified"
    return False, f"unknown certificate kind {cert.get('kind')!r}"


def _audit_dist_mu(report: DecisionReport, tol: float):
    fields = _instance_fields(report.inputs)
    cert = report.certificate
    if report.verdict:
        if cert.get("kind") != "mu_conditions_hold":
            return False, "positive verdict without mu-conditions certificate"
        lhs, rhs = _mu_sides(fields, cert["argmin_mu"])
        if abs((lhs - rhs) - cert["min_margin"]) > 1e-9:
            return False, "reported minimal margin does not match recomputation"
        if lhs < rhs - tol:
            return False, "claimed satisfied mu condition is in fact violated"
        return True, "minimal-margin mu condition re-verified"
    if cert.get("kind") != "violated_mu":
        return False, "negative verdict without mu witness"
    return _audit_violated_mu(fields, cert, tol)


def _rebuild_lp_rows(inputs: dict):
    d1 = [(e["p"], e["schmidt"]) for e in inputs["d1"]]
    d2 = [(e["p"], e["schmidt"]) for e in inputs["d2"]]
    n1, n2 = len(d1), len(d2)
    d = len(d1[0][1])
    nv = n1 * n2
    a_eq, b_eq = [], []
    for i in range(n1):
        row = [0.0] * nv
        for j in range(n2):
            row[i * n2 + j] = 1.0
        a_eq.append(row)
        b_eq.append(1.0)
    for j in range(n2):
        row = [0.0] * nv
        for i in range(n1):
            row[i * n2 + j] = d1[i][0]
        a_eq.append(row)
        b_eq.append(d2[j][0])
    a_ub, b_ub = [], []
    for i in range(n1):
        for k in range(1, d):
            row = [0.0] * nv
            for j in range(n2):
                row[i * n2 + j] = _tail(d2[j][1], k)
            rhs = _tail(d1[i][1], k)
            if max(abs(c) for c in row) == 0.0 and rhs >= 0.0:
                continue
            a_ub.append(row)
            b_ub.append(rhs)
    return n1, n2, a_eq, b_eq, a_ub, b_ub


def _audit_lp(report: DecisionReport, tol: float):
    n1, n2, a_eq, b_eq, a_ub, b_ub = _rebuild_lp_rows(report.inputs)
    cert = report.certificate
    if report.verdict:
        if cert.get("kind") != "conditional_channel":
            return False, "feasible verdict without channel certificate"
        q = np.asarray(cert["q"], dtype=float)
        if q.shape != (n1, n2):
            return False, f"channel shape {q.shape} does not match ({n1}, {n2})"
        flat = q.reshape(-1)
        if np.any(flat < -FEASIBILITY_TOL):
            return False, "channel has negative entries"
        for row, b in zip(a_eq, b_eq):
            if abs(float(np.dot(row, flat)) - b) > FEASIBILITY_TOL:
                return False, "channel violates an equality row"
        for row, b in zip(a_ub, b_ub):
            if float(np.dot(row, flat)) > b + FEASIBILITY_TOL:
                return False, "channel violates a tail-sum row"
        return True, "feasible channel re-verified against rebuilt constraints"
    if cert.get("kind") != "farkas":
        return False, "infeasible verdict without Farkas certificate"
    den = int(cert["quantization_denominator"])

    def quant(v):
        return Fraction(round(v * den), den)

    def quant_dist(vals):
        # Same convention as the solver: the last entry absorbs the rounding
        # so each probability vector sums to exactly 1.
        head = [quant(v) for v in vals[:-1]]
        return head + [Fraction(1) - sum(head, Fraction(0))]

    u = [Fraction(s) for s in cert["u_eq"]]
    v = [Fraction(s) for s in cert["v_ub"]]
    if len(u) != len(a_eq) or len(v) != len(a_ub):
        return False, "Farkas vector lengths do not match rebuilt rows"
    if any(vi < 0 for vi in v):
        return False, "Farkas inequality multipliers must be nonnegative"
    nv = n1 * n2
    pq = quant_dist([e["p"] for e in report.inputs["d1"]])
    qq = quant_dist([e["p"] for e in report.inputs["d2"]])
    a_eq_q, b_eq_q = [], []
    for idx, (row, b) in enumerate(zip(a_eq, b_eq)):
        if idx < n1:
            a_eq_q.append([quant(c) for c in row])
            b_eq_q.append(quant(b))
        else:
            j = idx - n1
            r = [Fraction(0)] * nv
            for i in range(n1):
                r[i * n2 + j] = pq[i]
            a_eq_q.append(r)
            b_eq_q.append(qq[j])
    for j in range(nv):
        comb = sum(ui * row[j] for ui, row in zip(u, a_eq_q)) + sum(
            vi * quant(row[j]) for vi, row in zip(v, a_ub)
        )
        if comb < 0:
            return False, f"Farkas combination negative at variable {j}"
    total = sum(ui * b for ui, b in zip(u, b_eq_q)) + sum(
        vi * quant(b) for vi, b in zip(v, b_ub)
    )
    if total >= 0:
        return False, "Farkas combination of right-hand sides is not negative"
    return True, "Farkas infeasibility certificate re-verified exactly"


def _audit_prop1(report: DecisionReport, tol: float):
    inputs = report.inputs
    p1, x1, x2, y = inputs["p1"], inputs["x1"], inputs["x2"], inputs["y"]
    p2 = 1.0 - p1
    cert = report.certificate
    for ineq in cert["inequalities"]:
        spec = ineq["spec"]
        lhs = p1 * _eval_profile_spec(spec, x1) + p2 * _eval_profile_spec(spec, x2)
        rhs = _eval_profile_spec(spec, y)
        if abs(lhs - ineq["lhs"]) > 1e-9 or abs(rhs - ineq["rhs"]) > 1e-9:
            return False, f"inequality sides for {ineq['profile']} do not match"
        if ineq["holds"] != (lhs >= rhs - tol):
            return False, f"inequality status for {ineq['profile']} wrong"
    bw = cert["branch_witness"]
    if bw["impossible"] != (x2 < y - tol):
        return False, "branch witness status does not re-verify"
    mw = cert["mu_witness"]
    lhs = p1 * _flat_cap(x1, y) + p2 * _flat_cap(x2, y)
    if abs(lhs - mw["lhs"]) > 1e-9:
        return False, "mu witness side does not match recomputation"
    if mw["violated"] != (lhs < 1.0 - tol):
        return False, "mu witness status does not re-verify"
    expect = (
        all(i["holds"] for i in cert["inequalities"])
        and bw["impossible"]
        and mw["violated"]
    )
    if report.verdict != expect:
        return False, "verdict inconsistent with re-verified components"
    return True, "distribution-level certificate re-verified"


def _audit_theorem1(report: DecisionReport, tol: float):
    inputs = report.inputs
    p1, lam, eta = inputs["p1"], inputs["lambda"], inputs["eta"]
    p2 = 1.0 - p1
    sv1 = [0.5, 0.5, 0.0, 0.0]
    sv2 = [1.0 - lam, lam, 0.0, 0.0]
    svs = [1.0 - eta, eta, 0.0, 0.0]
    cert = report.certificate
    for chk in cert["finite_set"]:
        label = chk["evaluator"]
        if label.startswith("E_"):
            k = int(label[2:])
            lhs = p1 * _tail(sv1, k) + p2 * _tail(sv2, k)
            rhs = _tail(svs, k)
            if abs(lhs - chk["lhs"]) > 1e-9 or abs(rhs - chk["rhs"]) > 1e-9:
                return False, f"finite-set sides for {label} do not match"
    finite_ok = all(
        chk["lhs"] >= chk["rhs"] - tol for chk in cert["finite_set"]
    )
    mw = cert.get("mu_witness")
    witness_ok = False
    if mw is not None:
        mu = mw["mu"]
        base1 = (4.0 / 3.0) * (1.0 - max(sv1))
        base2 = (4.0 / 3.0) * (1.0 - max(sv2))
        bases = (4.0 / 3.0) * (1.0 - max(svs))

        def cap(e, m):
            if m == 0.0:
                return 0.0 if e == 0.0 else 1.0
            return min(e / m, 1.0) if e <= m + tol else 1.0

        e_rho = p1 * cap(base1, mu) + p2 * cap(base2, mu)
        e_sig = cap(bases, mu)
        if abs(e_rho - mw["e_mu_rho"]) > 1e-9 or abs(e_sig - mw["e_mu_sigma"]) > 1e-9:
            return False, "mu witness values do not match recomputation"
        witness_ok = e_rho < e_sig - tol
    branch_ok = _tail(sv2, 1) < _tail(svs, 1) - tol
    expect = finite_ok and witness_ok and branch_ok
    if report.verdict != expect:
        return False, "verdict inconsistent with re-verified components"
    return True, "mixed-state certificate re-verified"


_HANDLERS = {
    "nielsen": _audit_tail_sum,
    "pure_to_ensemble": _audit_tail_sum,
    "dist_closed_form": _audit_dist_closed_form,
    "dist_mu": _audit_dist_mu,
    "lp_feasibility": _audit_lp,
    "prop1": _audit_prop1,
    "theorem1": _audit_theorem1,
}
