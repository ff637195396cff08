"""Exact decision of k-feasibility by exhaustive search.

This is the ground truth for desk-scale instances: an exhaustive search over
per-bin class count vectors with suffix-dominance pruning and memoization of
dead states. Above the node budget it refuses with :class:`BudgetExceeded`
rather than guessing.

Two interchangeable kernels back the search: a compiled extension built from
``_search_fast.pyx`` and the pure Python module ``_search``. The compiled one
is preferred when importable and its integer range suffices; every call can
force a specific kernel via ``kernel=``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import _search as _pure
from .core import Assignment, Instance, ProfileError, is_k_feasible

try:  # pragma: no cover - exercised only when the extension is built
    from . import _search_fast as _fast
except ImportError:  # pragma: no cover
    _fast = None

DEFAULT_NODE_BUDGET = 10_000_000

# The compiled kernel computes in C int64; stay far from the edge.
_FAST_MAX_MAGNITUDE = 2**40
_FAST_MAX_COUNT = 2**31 - 1


class BudgetExceeded(RuntimeError):
    """The search hit its node budget before reaching a decision."""


class OracleError(ValueError):
    """Misuse of the oracle (e.g. minimum load of a non-1-feasible instance)."""


def kernel_name() -> str:
    """Name of the kernel used by default: ``compiled`` or ``pure``."""
    return "compiled" if _fast is not None else "pure"


def _pick_kernel(inst: Instance, kernel: str):
    if kernel == "pure":
        return _pure
    if kernel == "compiled":
        if _fast is None:
            raise OracleError("compiled search kernel is not available")
        return _fast
    if kernel != "auto":
        raise OracleError(f"unknown kernel {kernel!r}")
    if _fast is None:
        return _pure
    big = max(
        abs(inst.capacities.total),
        inst.d * max(1, inst.weights.entries[0]) * inst.n,
    )
    if big >= _FAST_MAX_MAGNITUDE or inst.d * inst.n >= _FAST_MAX_COUNT:
        return _pure
    return _fast


@dataclass
class OracleResult:
    feasible: bool
    witness: Assignment | None
    nodes_explored: int
    elapsed: float


def _class_data(inst: Instance):
    values = inst.weights.distinct_values()
    index = {v: c for c, v in enumerate(values)}
    supply = [0] * len(values)
    for v in inst.weights.entries:
        supply[index[v]] += inst.d
    return values, supply


def _build_witness(inst: Instance, values, supply, chosen, k) -> Assignment:
    m = len(values)
    counts = [[0] * inst.n for _ in range(m)]
    residual = list(supply)
    for j, vec in chosen.items():
        for c in range(m):
            counts[c][j] = vec[c]
            residual[c] -= vec[c]
    # Free bins absorb the leftovers, heaviest classes first.
    c = 0
    for j in range(k):
        need = inst.d
        while need > 0:
            while residual[c] == 0:
                c += 1
            take = min(residual[c], need)
            counts[c][j] += take
            residual[c] -= take
            need -= take
    return Assignment(inst.d, values, tuple(supply), counts)


def decide(
    inst: Instance,
    k: int = 0,
    node_budget: int = DEFAULT_NODE_BUDGET,
    kernel: str = "auto",
) -> OracleResult:
    """Exact k-feasibility decision with a feasible witness when one exists.

    Intended for desk scale; the search refuses with :class:`BudgetExceeded`
    once ``node_budget`` states have been expanded.
    """
    if not 0 <= k <= inst.n:
        raise ProfileError(f"k={k} out of range 0..{inst.n}")
    mod = _pick_kernel(inst, kernel)
    values, supply = _class_data(inst)
    start = time.perf_counter()
    status, chosen, nodes = mod.search_feasible(
        values, supply, inst.capacities.entries, inst.d, k, node_budget
    )
    elapsed = time.perf_counter() - start
    if status == _pure.STATUS_BUDGET:
        raise BudgetExceeded(
            f"undecided: node budget {node_budget} exhausted after {nodes} nodes"
        )
    if status == _pure.STATUS_FEASIBLE:
        witness = _build_witness(inst, values, supply, chosen, k)
        assert is_k_feasible(witness, inst.capacities, k)
        return OracleResult(True, witness, nodes, elapsed)
    return OracleResult(False, None, nodes, elapsed)


def min_bin1_weight(
    inst: Instance,
    node_budget: int = DEFAULT_NODE_BUDGET,
    kernel: str = "auto",
) -> int:
    """Minimum achievable load of bin 1 over all 1-feasible assignments.

    Computed as total supply weight minus the maximum weight packable into
    the capacity-constrained bins 2..n. Raises :class:`OracleError` when the
    instance is not 1-feasible at all.
    """
    mod = _pick_kernel(inst, kernel)
    values, supply = _class_data(inst)
    status, best, nodes = mod.search_max_packed(
        values, supply, inst.capacities.entries, inst.d, node_budget
    )
    if status == _pure.STATUS_BUDGET:
        raise BudgetExceeded(
            f"undecided: node budget {node_budget} exhausted after {nodes} nodes"
        )
    if status == _pure.STATUS_INFEASIBLE:
        raise OracleError("instance is not 1-feasible; minimum bin-1 load undefined")
    total = inst.d * inst.weights.total
    return total - best
