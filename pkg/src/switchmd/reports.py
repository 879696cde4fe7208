"""Run traces, dual certificates and solver reports, with their CSV/JSON forms."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

TRACE_COLUMNS = ("iter", "step_kind", "M_k", "h_k", "f_val", "g_val", "active_index")


class Guarantee(str, enum.Enum):
    EPS_SOLUTION = "eps_solution"
    EPS_TILDE_SOLUTION = "eps_tilde_solution"
    NONE = "none"


@dataclass
class TraceRecord:
    k: int
    step_kind: str  # "productive" or "nonproductive"
    M_k: float
    h_k: float
    f_val: float
    g_val: float
    active_index: Optional[int] = None  # None on productive steps


@dataclass
class RunTrace:
    """Per-iteration records; ``points`` holds ``x^k`` when requested."""

    records: List[TraceRecord] = field(default_factory=list)
    points: List[np.ndarray] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def extend(self, other, offset):
        for r in other.records:
            self.records.append(TraceRecord(r.k + offset, r.step_kind, r.M_k, r.h_k,
                                            r.f_val, r.g_val, r.active_index))
        self.points.extend(other.points)

    def to_csv(self):
        """CSV text with fixed columns; floats use 17 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.records:
            w.writerow([
                r.k, r.step_kind, _fmt(r.M_k), _fmt(r.h_k), _fmt(r.f_val), _fmt(r.g_val),
                "" if r.active_index is None else r.active_index,
            ])
        return buf.getvalue()


def _fmt(v):
    return format(float(v), ".17g")


@dataclass
class DualCertificate:
    """Multipliers built from non-productive stepsizes.

    ``certified`` records whether ``theta0_sq`` bounds ``d`` on the whole
    (bounded) feasible set, which the duality-gap guarantee needs.
    """

    lambda_bar: np.ndarray
    phi_value: Optional[float] = None
    certified: bool = False


@dataclass
class StageRecord:
    """One outer stage of a restart scheme."""

    p: int
    epsilon: float
    r_prev_sq: float
    r_sq: float
    iterations: int
    dist_sq: Optional[float] = None  # ||x_p - x*||^2 when x* is known

    @property
    def contracted(self):
        return None if self.dist_sq is None else self.dist_sq <= self.r_sq


@dataclass
class SolveReport:
    x_bar: Optional[np.ndarray]
    f_bar: Optional[float]
    g_bar: Optional[float]
    iterations: int
    productive_count: int
    epsilon: float
    theoretical_bound: Optional[float] = None
    dual: Optional[DualCertificate] = None
    guarantee: Guarantee = Guarantee.NONE
    status: str = "converged"
    trace: Optional[RunTrace] = None
    eps_tilde: Optional[float] = None
    stages: List[StageRecord] = field(default_factory=list)
    audit_max_violation: Optional[float] = None

    @property
    def within_bound(self):
        if self.theoretical_bound is None:
            return None
        return self.iterations <= self.theoretical_bound

    @property
    def duality_gap(self):
        if self.dual is None or self.dual.phi_value is None or self.f_bar is None:
            return None
        return self.f_bar - self.dual.phi_value


@dataclass
class StochasticReport:
    """Result of a stochastic run.  ``x_bar`` is ``None`` exactly when no
    productive step was made (``empty_output``)."""

    x_bar: Optional[np.ndarray]
    iterations: int
    productive_count: int
    epsilon: float
    f_bar: Optional[float] = None
    g_bar: Optional[float] = None
    theoretical_bound: Optional[float] = None
    seed: Optional[int] = None
    trace: Optional[RunTrace] = None
    stages: List[StageRecord] = field(default_factory=list)

    @property
    def empty_output(self):
        return self.x_bar is None

    @property
    def within_bound(self):
        if self.theoretical_bound is None:
            return None
        return self.iterations <= self.theoretical_bound


def report_to_dict(report):
    """JSON-ready dict of a report's scalar fields and output point."""
    out = {
        "x_bar": None if report.x_bar is None else [float(v) for v in report.x_bar],
        "iterations": int(report.iterations),
        "productive_count": int(report.productive_count),
        "epsilon": float(report.epsilon),
        "f_bar": _opt_float(report.f_bar),
        "g_bar": _opt_float(report.g_bar),
        "theoretical_bound": _opt_float(report.theoretical_bound),
        "within_bound": report.within_bound,
    }
    if isinstance(report, SolveReport):
        out["guarantee"] = report.guarantee.value
        out["status"] = report.status
        out["eps_tilde"] = _opt_float(report.eps_tilde)
        if report.dual is not None:
            out["dual"] = {
                "lambda": [float(v) for v in report.dual.lambda_bar],
                "phi": _opt_float(report.dual.phi_value),
                "gap": _opt_float(report.duality_gap),
                "certified": report.dual.certified,
            }
        if report.audit_max_violation is not None:
            out["audit_max_violation"] = float(report.audit_max_violation)
    else:
        out["empty_output"] = report.empty_output
        out["seed"] = report.seed
    if report.stages:
        out["stages"] = [
            {"p": s.p, "epsilon": s.epsilon, "r_prev_sq": s.r_prev_sq, "r_sq": s.r_sq,
             "iterations": s.iterations, "dist_sq": s.dist_sq, "contracted": s.contracted}
            for s in report.stages
        ]
    return out


def _opt_float(v):
    return None if v is None else float(v)
