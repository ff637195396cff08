"""Suffix-sum feasibility criteria and instance classification.

Two nested families of per-index conditions are evaluated: the necessary
ones compare each suffix of capacities against the matching suffix demand
``d * (w_i + ... + w_n)``; the sufficient ones additionally require the
correction constant of the truncated weight profile as extra headroom, and
only certify feasibility once the multiplicity clears its threshold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import Instance, b_constant, d_threshold


class Feasibility(enum.Enum):
    INFEASIBLE = "infeasible"
    GUARANTEED_FEASIBLE = "guaranteed_feasible"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CriteriaReport:
    """Per-index slack data for one instance.

    All tuples are indexed by suffix start position minus one, i.e. entry 0
    describes the full profiles. ``sufficient_slack[i] + b_values[i] ==
    necessary_slack[i]`` holds at every index.
    """

    suffix_capacity: tuple[int, ...]
    suffix_demand: tuple[int, ...]
    b_values: tuple[int, ...]
    necessary_slack: tuple[int, ...]
    sufficient_slack: tuple[int, ...]
    threshold: int
    meets_threshold: bool

    @property
    def n(self) -> int:
        return len(self.suffix_capacity)

    def first_necessary_violation(self) -> int | None:
        """1-based index of the first violated necessary condition, if any."""
        for i, slack in enumerate(self.necessary_slack, start=1):
            if slack < 0:
                return i
        return None

    def first_sufficient_violation(self) -> int | None:
        for i, slack in enumerate(self.sufficient_slack, start=1):
            if slack < 0:
                return i
        return None


@dataclass(frozen=True)
class Verdict:
    kind: Feasibility
    index: int | None = None

    @property
    def is_infeasible(self) -> bool:
        return self.kind is Feasibility.INFEASIBLE

    @property
    def is_guaranteed_feasible(self) -> bool:
        return self.kind is Feasibility.GUARANTEED_FEASIBLE


def _build_report(inst: Instance) -> CriteriaReport:
    w = inst.weights
    C = inst.capacities
    n = w.n
    suffix_cap = []
    suffix_dem = []
    cap_acc = 0
    dem_acc = 0
    for i in range(n, 0, -1):
        cap_acc += C[i - 1]
        dem_acc += inst.d * w[i - 1]
        suffix_cap.append(cap_acc)
        suffix_dem.append(dem_acc)
    suffix_cap.reverse()
    suffix_dem.reverse()
    b_vals = tuple(b_constant(w.truncate(i)) for i in range(1, n + 1))
    necessary = tuple(c - dm for c, dm in zip(suffix_cap, suffix_dem))
    sufficient = tuple(s - b for s, b in zip(necessary, b_vals))
    thr = d_threshold(w)
    return CriteriaReport(
        suffix_capacity=tuple(suffix_cap),
        suffix_demand=tuple(suffix_dem),
        b_values=b_vals,
        necessary_slack=necessary,
        sufficient_slack=sufficient,
        threshold=thr,
        meets_threshold=inst.d >= thr,
    )


def necessary_conditions(inst: Instance) -> CriteriaReport:
    """Evaluate the suffix dominance conditions; negative slack proves infeasibility."""
    return _build_report(inst)


def sufficient_conditions(inst: Instance) -> CriteriaReport:
    """Evaluate the corrected suffix conditions; all-non-negative slack plus a
    large enough multiplicity guarantees feasibility."""
    return _build_report(inst)


def classify(inst: Instance) -> Verdict:
    """Classify an instance without searching.

    Constant weight profiles are decided outright for any multiplicity: every
    bin must receive exactly ``d`` equal balls, so feasibility is equivalent
    to the smallest capacity covering ``d * w``.
    """
    report = _build_report(inst)
    w = inst.weights
    if w.is_constant():
        need = inst.d * w.entries[0]
        if inst.capacities[w.n - 1] >= need:
            return Verdict(Feasibility.GUARANTEED_FEASIBLE)
        return Verdict(Feasibility.INFEASIBLE, index=w.n)
    bad = report.first_necessary_violation()
    if bad is not None:
        return Verdict(Feasibility.INFEASIBLE, index=bad)
    if report.meets_threshold and report.first_sufficient_violation() is None:
        return Verdict(Feasibility.GUARANTEED_FEASIBLE)
    return Verdict(Feasibility.INDETERMINATE, index=report.first_sufficient_violation())
