"""Exact integer domain types for equal-cardinality weighted bin packing.

The basic objects are a non-increasing weight profile ``w``, a non-increasing
capacity profile ``C``, and a multiplicity ``d``: the instance asks whether
``d`` balls of every weight can be spread over the ``n`` bins so that each bin
receives exactly ``d`` balls without exceeding its capacity.

Everything here is plain integer arithmetic on tuples; all types except
:class:`Assignment` are immutable and safe to share. Assignments are count
matrices over distinct weight values, never per-ball lists, so multiplicities
in the tens of thousands cost nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ProfileError(ValueError):
    """Raised for malformed weight/capacity profiles or invalid queries."""


def _check_non_increasing(entries: tuple[int, ...], label: str) -> None:
    for pos in range(1, len(entries)):
        if entries[pos] > entries[pos - 1]:
            raise ProfileError(f"{label} not non-increasing at position {pos + 1}")


@dataclass(frozen=True)
class WeightProfile:
    """Non-increasing tuple of ball weights; trailing zeros are significant."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(v) for v in self.entries))
        if len(self.entries) < 1:
            raise ProfileError("weight profile must have at least one entry")
        if any(v < 0 for v in self.entries):
            raise ProfileError("weights must be non-negative")
        _check_non_increasing(self.entries, "w")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    def truncate(self, i: int) -> "WeightProfile":
        """Suffix starting at position ``i`` (1-based)."""
        if not 1 <= i <= self.n:
            raise ProfileError(f"truncation index {i} out of range 1..{self.n}")
        return WeightProfile(self.entries[i - 1 :])

    def distinct_values(self) -> tuple[int, ...]:
        """Distinct weight values in decreasing order."""
        seen: list[int] = []
        for v in self.entries:
            if not seen or seen[-1] != v:
                seen.append(v)
        return tuple(seen)

    def is_constant(self) -> bool:
        return self.entries[0] == self.entries[-1]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, idx):
        return self.entries[idx]


@dataclass(frozen=True)
class CapacityProfile:
    """Non-increasing tuple of bin capacities; entries may be negative."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(v) for v in self.entries))
        if len(self.entries) < 1:
            raise ProfileError("capacity profile must have at least one entry")
        _check_non_increasing(self.entries, "C")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    def truncate(self, i: int) -> "CapacityProfile":
        """Suffix starting at position ``i`` (1-based)."""
        if not 1 <= i <= self.n:
            raise ProfileError(f"truncation index {i} out of range 1..{self.n}")
        return CapacityProfile(self.entries[i - 1 :])

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, idx):
        return self.entries[idx]


@dataclass(frozen=True)
class Instance:
    """A packing instance: multiplicity ``d`` plus paired weight/capacity profiles."""

    d: int
    weights: WeightProfile
    capacities: CapacityProfile

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ProfileError("d must be a positive integer")
        if self.weights.n != self.capacities.n:
            raise ProfileError(
                f"profile lengths differ: {self.weights.n} weights vs "
                f"{self.capacities.n} capacities"
            )

    @property
    def n(self) -> int:
        return self.weights.n

    def truncate(self, i: int) -> "Instance":
        return Instance(self.d, self.weights.truncate(i), self.capacities.truncate(i))


def make_instance(d: int, w, C) -> Instance:
    """Convenience constructor from raw sequences."""
    return Instance(d, WeightProfile(tuple(w)), CapacityProfile(tuple(C)))


@dataclass(frozen=True)
class ConjugateProfile:
    """Run-length form of a conjugate (transposed) partition.

    ``rows`` is the declared number of parts (trailing zeros included), ``a0``
    counts full-height columns, and ``runs`` lists the remaining column
    heights with their multiplicities, heights strictly decreasing.
    """

    rows: int
    a0: int
    runs: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.runs)

    def expand(self) -> tuple[int, ...]:
        """The conjugate partition as an explicit tuple of column heights."""
        out = [self.rows] * self.a0
        for height, length in self.runs:
            out.extend([height] * length)
        return tuple(out)


def conjugate(w: WeightProfile, rows: int) -> ConjugateProfile:
    """Conjugate the Young diagram of ``w`` padded/declared to ``rows`` parts.

    Column ``j`` of the diagram has height ``#{i <= rows : w_i >= j}``. The
    result is sensitive to ``rows`` (trailing zeros change the run-length
    form), so the caller states it explicitly.
    """
    nonzero = sum(1 for v in w.entries if v > 0)
    if rows < nonzero:
        raise ProfileError(f"rows={rows} smaller than {nonzero} nonzero parts")
    top = w.entries[0]
    heights = []
    for j in range(1, top + 1):
        heights.append(sum(1 for v in w.entries if v >= j))
    a0 = 0
    while a0 < len(heights) and heights[a0] == rows:
        a0 += 1
    runs: list[tuple[int, int]] = []
    for h in heights[a0:]:
        if runs and runs[-1][0] == h:
            runs[-1] = (h, runs[-1][1] + 1)
        else:
            runs.append((h, 1))
    return ConjugateProfile(rows=rows, a0=a0, runs=tuple(runs))


def b_constant(w: WeightProfile) -> int:
    """Correction constant of a weight profile.

    Zero when all entries are equal; otherwise computed from the run-length
    form of the conjugate diagram as a weighted sum of run overshoots. This is
    the exact amount by which suffix-capacity bounds must exceed suffix demand
    to become sufficient for large multiplicities.
    """
    conj = conjugate(w, w.n)
    if conj.k == 0:
        return 0
    total = 0
    prev_h = w.n
    for h, a in conj.runs:
        total += (prev_h - h) * (a - 1)
        prev_h = h
    last_h, last_a = conj.runs[-1]
    total += (last_h - 1) * (last_a - 1)
    return total


@dataclass(frozen=True)
class WeightGapProfile:
    """Jump structure of a weight profile with at least two distinct values.

    ``gaps[i]`` (stored for positions 2..n, 0-indexed from position 2) is the
    distance from ``w_i`` to the next strictly larger value; entries of the
    top block measure the drop to the second-largest value instead.
    """

    gaps: tuple[int, ...]
    second_largest: int
    predecessor_of: dict[int, int] = field(repr=False)
    successor_of: dict[int, int] = field(repr=False)

    def gap_at(self, i: int) -> int:
        """Gap for weight position ``i`` (1-based, 2 <= i <= n)."""
        return self.gaps[i - 2]


def weight_gap_profile(w: WeightProfile) -> WeightGapProfile:
    """Build the gap sequence of ``w``; rejects constant profiles."""
    values = w.distinct_values()
    if len(values) < 2:
        raise ProfileError("gap sequence undefined for constant weight profiles")
    predecessor = {values[t]: values[t - 1] for t in range(1, len(values))}
    successor = {values[t]: values[t + 1] for t in range(len(values) - 1)}
    top = values[0]
    second = values[1]
    gaps = []
    for i in range(2, w.n + 1):
        v = w.entries[i - 1]
        gaps.append(top - second if v == top else predecessor[v] - v)
    return WeightGapProfile(
        gaps=tuple(gaps),
        second_largest=second,
        predecessor_of=predecessor,
        successor_of=successor,
    )


class Assignment:
    """Count matrix of balls per distinct weight value per bin.

    ``counts[c][j]`` is the number of balls of value ``class_values[c]``
    placed in bin ``j`` (bins 0-indexed here; reports print them 1-based).
    Every column sums to ``d`` and row ``c`` sums to ``class_supply[c]``.
    Mutation happens only through :meth:`apply`, which moves balanced groups
    of ball transfers, so the sums are preserved at every exposed state.
    """

    __slots__ = ("d", "class_values", "class_supply", "counts", "_bin_weights")

    def __init__(self, d: int, class_values, class_supply, counts):
        self.d = d
        self.class_values = tuple(class_values)
        self.class_supply = tuple(class_supply)
        self.counts = [list(row) for row in counts]
        self._bin_weights = [
            sum(self.class_values[c] * self.counts[c][j] for c in range(self.m))
            for j in range(self.n)
        ]
        self.validate()

    @classmethod
    def from_bins(cls, weights: WeightProfile, d: int, bins) -> "Assignment":
        """Build from per-bin ``{value: count}`` mappings (one per bin)."""
        values = weights.distinct_values()
        index = {v: c for c, v in enumerate(values)}
        mult = [0] * len(values)
        for v in weights.entries:
            mult[index[v]] += 1
        counts = [[0] * len(bins) for _ in values]
        for j, content in enumerate(bins):
            for v, q in content.items():
                if v not in index:
                    raise ProfileError(f"bin {j + 1} holds unknown weight value {v}")
                counts[index[v]][j] += q
        supply = tuple(d * m for m in mult)
        return cls(d, values, supply, counts)

    @classmethod
    def diagonal(cls, weights: WeightProfile, d: int) -> "Assignment":
        """The assignment placing ``d`` balls of ``w_j`` in bin ``j``."""
        return cls.from_bins(weights, d, [{v: d} for v in weights.entries])

    @property
    def m(self) -> int:
        return len(self.class_values)

    @property
    def n(self) -> int:
        return len(self.counts[0]) if self.counts else 0

    def class_index(self, value: int) -> int:
        try:
            return self.class_values.index(value)
        except ValueError:
            raise ProfileError(f"no weight class with value {value}") from None

    def count_of(self, value: int, j: int) -> int:
        """Number of balls of the given weight value in bin ``j`` (0-based)."""
        return self.counts[self.class_index(value)][j]

    def bin_weight(self, j: int) -> int:
        return self._bin_weights[j]

    def bin_size(self, j: int) -> int:
        return sum(self.counts[c][j] for c in range(self.m))

    def apply(self, transfers) -> None:
        """Apply a balanced group of transfers ``(value, count, src, dst)``.

        The group must preserve every bin's cardinality; anything else is a
        programming error in the caller and raises immediately.
        """
        delta = [0] * self.n
        for value, q, src, dst in transfers:
            if q < 0:
                raise ProfileError("transfer count must be non-negative")
            if q == 0:
                continue
            c = self.class_index(value)
            if self.counts[c][src] < q:
                raise ProfileError(
                    f"bin {src + 1} holds {self.counts[c][src]} balls of value "
                    f"{value}, cannot move {q}"
                )
            self.counts[c][src] -= q
            self.counts[c][dst] += q
            self._bin_weights[src] -= value * q
            self._bin_weights[dst] += value * q
            delta[src] -= q
            delta[dst] += q
        if any(delta):
            raise ProfileError(f"unbalanced transfer group: bin deltas {delta}")

    def copy(self) -> "Assignment":
        return Assignment(self.d, self.class_values, self.class_supply, self.counts)

    def validate(self) -> None:
        """Check row/column sum invariants from scratch."""
        for c in range(self.m):
            if any(q < 0 for q in self.counts[c]):
                raise ProfileError(f"negative count in class {c}")
            row = sum(self.counts[c])
            if row != self.class_supply[c]:
                raise ProfileError(
                    f"class {self.class_values[c]} holds {row} balls, "
                    f"supply is {self.class_supply[c]}"
                )
        for j in range(self.n):
            col = self.bin_size(j)
            if col != self.d:
                raise ProfileError(f"bin {j + 1} holds {col} balls, expected {self.d}")

    def bin_notation(self, j: int) -> str:
        """Render bin ``j`` in ``value^count`` notation, e.g. ``5^2 3^1``."""
        parts = [
            f"{self.class_values[c]}^{self.counts[c][j]}"
            for c in range(self.m)
            if self.counts[c][j] > 0
        ]
        return " ".join(parts) if parts else "(empty)"

    def bins_as_dicts(self) -> list[dict[int, int]]:
        return [
            {
                self.class_values[c]: self.counts[c][j]
                for c in range(self.m)
                if self.counts[c][j] > 0
            }
            for j in range(self.n)
        ]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return (
            self.d == other.d
            and self.class_values == other.class_values
            and self.counts == other.counts
        )

    def __repr__(self) -> str:
        bins = " | ".join(self.bin_notation(j) for j in range(self.n))
        return f"Assignment(d={self.d}, [{bins}])"


@dataclass(frozen=True)
class GapVector:
    """Per-bin slack ``C_j - w(B_j)``; negative entries mark overfull bins."""

    gaps: tuple[int, ...]

    def total(self) -> int:
        return sum(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    def __getitem__(self, idx):
        return self.gaps[idx]

    def __len__(self) -> int:
        return len(self.gaps)


def gap_vector(assignment: Assignment, capacities: CapacityProfile) -> GapVector:
    """Slack of every bin under the given capacities."""
    if assignment.n != capacities.n:
        raise ProfileError(
            f"assignment has {assignment.n} bins, capacities have {capacities.n}"
        )
    return GapVector(
        tuple(capacities[j] - assignment.bin_weight(j) for j in range(assignment.n))
    )


def is_k_feasible(assignment: Assignment, capacities: CapacityProfile, k: int) -> bool:
    """True iff bins beyond the first ``k`` all stay within capacity."""
    if not 0 <= k <= capacities.n:
        raise ProfileError(f"k={k} out of range 0..{capacities.n}")
    gv = gap_vector(assignment, capacities)
    return all(gv[j] >= 0 for j in range(k, capacities.n))


def d_threshold(w: WeightProfile) -> int:
    """Multiplicity above which the sufficient suffix conditions kick in."""
    n = w.n
    w1 = w.entries[0]
    return n**3 * w1 * (2 * n + w1)


def normalize(inst: Instance) -> Instance:
    """Shift the smallest weight to zero; feasibility is unchanged.

    Replaces ``w_i`` by ``w_i - w_n`` and ``C_i`` by ``C_i - d*w_n``.
    """
    wn = inst.weights.entries[-1]
    if wn == 0:
        return inst
    return Instance(
        inst.d,
        WeightProfile(tuple(v - wn for v in inst.weights.entries)),
        CapacityProfile(tuple(c - inst.d * wn for c in inst.capacities.entries)),
    )
