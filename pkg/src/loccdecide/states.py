"""Bipartite pure states, Schmidt data, ensembles, and their JSON forms."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .tolerances import CLIP_NEG, NORM_TOL

__all__ = [
    "PureState",
    "SchmidtVector",
    "Ensemble",
    "ConditionalChannel",
    "schmidt_decompose",
    "x_param",
    "from_schmidt",
    "sample_random_state",
    "state_from_json",
    "state_to_json",
    "ensemble_from_json",
    "ensemble_to_json",
    "load_state",
    "load_ensemble",
]


@dataclass(frozen=True)
class SchmidtVector:
    """Descending-sorted probability vector of Schmidt numbers."""

    lambdas: tuple

    def __post_init__(self):
        lams = [float(v) for v in self.lambdas]
        if len(lams) < 1:
            raise ValidationError("Schmidt vector must be non-empty")
        low = min(lams)
        if low < CLIP_NEG:
            raise ValidationError(
                f"Schmidt number {low} below clipping threshold {CLIP_NEG}"
            )
        lams = [0.0 if v < 0.0 else v for v in lams]
        for i in range(len(lams) - 1):
            if lams[i] < lams[i + 1] - 1e-15:
                raise ValidationError(
                    f"Schmidt numbers not sorted descending at index {i}: "
                    f"{lams[i]} < {lams[i + 1]}"
                )
        s = sum(lams)
        if abs(s - 1.0) > NORM_TOL:
            raise ValidationError(
                f"Schmidt numbers sum to {s!r}; defect {abs(s - 1.0):.3e} "
                f"exceeds {NORM_TOL}"
            )
        object.__setattr__(self, "lambdas", tuple(lams))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "SchmidtVector":
        """Build from unsorted values (stable descending sort)."""
        return cls(tuple(sorted((float(v) for v in values), reverse=True)))

    @property
    def dim(self) -> int:
        return len(self.lambdas)

    def padded(self, d: int) -> "SchmidtVector":
        """Zero-pad to dimension ``d`` (tail sums are unchanged)."""
        if d < self.dim:
            raise ValidationError(f"cannot pad dimension {self.dim} down to {d}")
        return SchmidtVector(self.lambdas + (0.0,) * (d - self.dim))


@dataclass(frozen=True)
class PureState:
    """Bipartite pure state given by its d x d coefficient matrix."""

    dim: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.dim < 2:
            raise DimensionError(f"local dimension must be >= 2, got {self.dim}")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.dim, self.dim):
            raise ValidationError(
                f"coefficient matrix has shape {c.shape}, expected "
                f"({self.dim}, {self.dim})"
            )
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(
                f"state not normalized: sum |c_ab|^2 = {norm2!r}, "
                f"defect {abs(norm2 - 1.0):.3e} exceeds {NORM_TOL}"
            )
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class Ensemble:
    """Probability distribution of pure states sharing one dimension."""

    entries: tuple

    def __post_init__(self):
        entries = tuple((float(p), s) for p, s in self.entries)
        if not entries:
            raise ValidationError("ensemble must have at least one entry")
        dims = {s.dim for _, s in entries}
        if len(dims) != 1:
            raise ValidationError(f"mixed state dimensions in ensemble: {sorted(dims)}")
        for i, (p, _) in enumerate(entries):
            if not (0.0 < p <= 1.0 + NORM_TOL):
                raise ValidationError(f"entry {i}: probability {p} not in (0, 1]")
        total = sum(p for p, _ in entries)
        if abs(total - 1.0) > NORM_TOL:
            raise ValidationError(
                f"ensemble probabilities sum to {total!r}, defect "
                f"{abs(total - 1.0):.3e} exceeds {NORM_TOL}"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries[0][1].dim


@dataclass(frozen=True)
class ConditionalChannel:
    """Matrix of conditional probabilities q[i][j] = q_{j|i}."""

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 2:
            raise ValidationError(f"channel must be a matrix, got ndim={q.ndim}")
        if np.any(q < -1e-12) or np.any(q > 1.0 + 1e-12):
            raise ValidationError("channel entries must lie in [0, 1]")
        q = np.clip(q, 0.0, 1.0)
        rows = q.sum(axis=1)
        bad = np.where(np.abs(rows - 1.0) > NORM_TOL)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"channel row {i} sums to {rows[i]!r}, defect exceeds {NORM_TOL}"
            )
        q.setflags(write=False)
        object.__setattr__(self, "q", q)


def schmidt_decompose(state: PureState) -> SchmidtVector:
    """Schmidt numbers of a pure state: squared singular values of coeffs.

    Sorted descending and renormalized; accurate to well below 1e-12 for the
    small dimensions handled here.
    """
    s = np.linalg.svd(state.coeffs, compute_uv=False)
    lams = s.astype(float) ** 2
    lams = np.sort(lams)[::-1]
    lams = np.clip(lams, 0.0, None)
    lams /= lams.sum()
    return SchmidtVector(tuple(lams))


def x_param(state: PureState) -> float:
    """Two-qubit entanglement parameter x = 2 min(lambda_0, lambda_1)."""
    if state.dim != 2:
        raise DimensionError(f"x parameter is defined for d = 2, got d = {state.dim}")
    lams = schmidt_decompose(state).lambdas
    return 2.0 * min(lams)


def from_schmidt(lambdas: SchmidtVector) -> PureState:
    """Canonical embedding: diagonal coefficient matrix sqrt(lambda_i)."""
    d = max(lambdas.dim, 2)
    lams = lambdas.padded(d)
    coeffs = np.diag(np.sqrt(np.asarray(lams.lambdas)))
    return PureState(d, coeffs.astype(complex))


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def sample_random_state(d: int, rng_seed: int) -> PureState:
    """Random state with a uniform-simplex Schmidt spectrum, rotated by
    random local unitaries.  Deterministic for a fixed seed."""
    if d < 2:
        raise DimensionError(f"local dimension must be >= 2, got {d}")
    rng = np.random.default_rng(rng_seed)
    lams = np.sort(rng.dirichlet(np.ones(d)))[::-1]
    core = np.diag(np.sqrt(lams)).astype(complex)
    u = _haar_unitary(d, rng)
    v = _haar_unitary(d, rng)
    coeffs = u @ core @ v
    coeffs /= np.sqrt(np.sum(np.abs(coeffs) ** 2))
    return PureState(d, coeffs)


# ---------------------------------------------------------------------------
# JSON forms
#
# State file: {"dim": d, "coeffs": [[[re, im], ...], ...]}
#          or {"schmidt": [l0, l1, ...]}
# Ensemble file: {"entries": [{"p": 0.5, "state": {...}}, ...]}
# ---------------------------------------------------------------------------


def state_from_json(obj, where: str = "state") -> PureState:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected a JSON object, got {type(obj).__name__}")
    if "schmidt" in obj:
        vals = obj["schmidt"]
        if not isinstance(vals, list) or not vals:
            raise ValidationError(f"{where}.schmidt: expected a non-empty list")
        return from_schmidt(SchmidtVector.from_values(vals))
    if "dim" not in obj or "coeffs" not in obj:
        raise ValidationError(f"{where}: needs either 'schmidt' or 'dim'+'coeffs'")
    d = obj["dim"]
    if not isinstance(d, int):
        raise ValidationError(f"{where}.dim: expected an integer, got {d!r}")
    rows = obj["coeffs"]
    if not isinstance(rows, list) or len(rows) != d:
        raise ValidationError(f"{where}.coeffs: expected {d} rows")
    coeffs = np.zeros((d, d), dtype=complex)
    for a, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ValidationError(f"{where}.coeffs[{a}]: expected {d} entries")
        for b, cell in enumerate(row):
            if not (isinstance(cell, list) and len(cell) == 2):
                raise ValidationError(
                    f"{where}.coeffs[{a}][{b}]: expected [re, im] pair"
                )
            coeffs[a, b] = complex(float(cell[0]), float(cell[1]))
    return PureState(d, coeffs)


def state_to_json(state: PureState) -> dict:
    return {
        "dim": state.dim,
        "coeffs": [
            [[float(c.real), float(c.imag)] for c in row] for row in state.coeffs
        ],
    }


def ensemble_from_json(obj, where: str = "ensemble") -> Ensemble:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValidationError(f"{where}: expected an object with 'entries'")
    raw = obj["entries"]
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"{where}.entries: expected a non-empty list")
    entries = []
    for i, e in enumerate(raw):
        if not isinstance(e, dict) or "p" not in e or "state" not in e:
            raise ValidationError(f"{where}.entries[{i}]: needs 'p' and 'state'")
        entries.append(
            (float(e["p"]), state_from_json(e["state"], f"{where}.entries[{i}].state"))
        )
    return Ensemble(tuple(entries))


def ensemble_to_json(ens: Ensemble) -> dict:
    return {
        "entries": [{"p": p, "state": state_to_json(s)} for p, s in ens.entries]
    }


def _load_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc


def load_state(path) -> PureState:
    return state_from_json(_load_json(path), where=str(path))


def load_ensemble(path) -> Ensemble:
    return ensemble_from_json(_load_json(path), where=str(path))
