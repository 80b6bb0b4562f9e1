"""Finite-state rough set algebra.

A rough set is a pair of crisp approximations (lower, upper) over a finite
state space: the lower approximation collects states certainly in the
represented concept, the upper approximation collects states possibly in it.
This module builds rough sets from indiscernibility partitions, classifies
their (lack of) definability, maps them to a three-way sign tone, tests
faithfulness of candidate representations, and exhaustively verifies two
structural claims on small spaces:

    1. a set without a sharp boundary can still be informative, and
    2. no crisp set can faithfully represent a proper rough set, while
       another rough set can.

State spaces are explicitly enumerated and sets are immutable bitmask-backed
values, so all operations are pure, exact, and safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Callable, Iterable, Iterator

__all__ = [
    "StateSpace",
    "CrispSet",
    "Partition",
    "RoughSet",
    "DefinabilityClass",
    "ToneClass",
    "WitnessReport",
    "SpaceMismatchError",
    "EnumerationCapError",
    "approximate",
    "boundary",
    "classify_definability",
    "is_informative",
    "tone_classify",
    "faithful_crisp",
    "faithful_rough",
    "enumerate_crisp_sets",
    "enumerate_rough_sets",
    "verify_informative_rough_sets",
    "verify_faithful_representation",
    "space_to_dict",
    "space_from_dict",
    "rough_set_to_dict",
    "rough_set_from_dict",
]

DEFAULT_ENUMERATION_CAP = 8


class SpaceMismatchError(ValueError):
    """Raised when an operation mixes sets over different state spaces."""


class EnumerationCapError(ValueError):
    """Raised when an exhaustive check would exceed the enumeration cap."""


@dataclass(frozen=True)
class StateSpace:
    """Ordered finite collection of distinct state labels with numeric payoffs.

    Ordering only canonicalizes output; all set operations are
    order-independent.
    """

    labels: tuple[str, ...]
    payoffs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "payoffs", tuple(float(x) for x in self.payoffs))
        if len(self.labels) == 0:
            raise ValueError("state space must contain at least one state")
        if len(self.labels) != len(self.payoffs):
            raise ValueError("labels and payoffs must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("state labels must be unique")
        if not all(math.isfinite(p) for p in self.payoffs):
            raise ValueError("payoffs must be finite")

    @classmethod
    def from_payoffs(cls, payoffs: Iterable[float]) -> "StateSpace":
        """Build a space with auto-generated labels from payoff values."""
        payoffs = tuple(float(p) for p in payoffs)
        return cls(tuple(f"s{i}" for i in range(len(payoffs))), payoffs)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def payoff_mask(self, predicate: Callable[[float], bool]) -> int:
        mask = 0
        for i, p in enumerate(self.payoffs):
            if predicate(p):
                mask |= 1 << i
        return mask

    @property
    def positive_mask(self) -> int:
        """States with strictly positive payoff; zero belongs to neither sign."""
        return self.payoff_mask(lambda p: p > 0.0)

    @property
    def negative_mask(self) -> int:
        return self.payoff_mask(lambda p: p < 0.0)


@dataclass(frozen=True)
class CrispSet:
    """Subset of a state space with a well-defined membership boundary."""

    space: StateSpace
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.space.full_mask:
            raise ValueError("membership mask outside the state space")

    @classmethod
    def from_labels(cls, space: StateSpace, labels: Iterable[str]) -> "CrispSet":
        mask = 0
        for label in labels:
            mask |= 1 << space.index(label)
        return cls(space, mask)

    @classmethod
    def from_indices(cls, space: StateSpace, indices: Iterable[int]) -> "CrispSet":
        mask = 0
        for i in indices:
            if not 0 <= i < space.size:
                raise ValueError(f"state index {i} outside the state space")
            mask |= 1 << i
        return cls(space, mask)

    @classmethod
    def from_payoff(
        cls, space: StateSpace, predicate: Callable[[float], bool]
    ) -> "CrispSet":
        return cls(space, space.payoff_mask(predicate))

    @classmethod
    def empty(cls, space: StateSpace) -> "CrispSet":
        return cls(space, 0)

    @classmethod
    def full(cls, space: StateSpace) -> "CrispSet":
        return cls(space, space.full_mask)

    def _check(self, other: "CrispSet") -> None:
        if self.space != other.space:
            raise SpaceMismatchError("sets belong to different state spaces")

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(
            lab for i, lab in enumerate(self.space.labels) if self.mask >> i & 1
        )

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.space.index(label) & 1)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_full(self) -> bool:
        return self.mask == self.space.full_mask

    def union(self, other: "CrispSet") -> "CrispSet":
        self._check(other)
        return CrispSet(self.space, self.mask | other.mask)

    def intersection(self, other: "CrispSet") -> "CrispSet":
        self._check(other)
        return CrispSet(self.space, self.mask & other.mask)

    def difference(self, other: "CrispSet") -> "CrispSet":
        self._check(other)
        return CrispSet(self.space, self.mask & ~other.mask)

    def complement(self) -> "CrispSet":
        return CrispSet(self.space, self.space.full_mask & ~self.mask)

    def issubset(self, other: "CrispSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __repr__(self) -> str:
        return "{" + ", ".join(self.members) + "}"


@dataclass(frozen=True)
class Partition:
    """Indiscernibility classes: disjoint non-empty blocks covering the space."""

    space: StateSpace
    blocks: tuple[CrispSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        seen = 0
        for block in self.blocks:
            if block.space != self.space:
                raise SpaceMismatchError("partition block over a different space")
            if block.is_empty:
                raise ValueError("partition blocks must be non-empty")
            if seen & block.mask:
                raise ValueError("partition blocks must be pairwise disjoint")
            seen |= block.mask
        if seen != self.space.full_mask:
            raise ValueError("partition blocks must cover the state space")

    @classmethod
    def from_blocks(
        cls, space: StateSpace, blocks: Iterable[Iterable[str]]
    ) -> "Partition":
        return cls(space, tuple(CrispSet.from_labels(space, b) for b in blocks))

    @classmethod
    def from_assignment(cls, space: StateSpace, assignment: Iterable[int]) -> "Partition":
        """Group states by an integer block id per state, in id order."""
        assignment = tuple(assignment)
        if len(assignment) != space.size:
            raise ValueError("assignment length must equal the space size")
        masks: dict[int, int] = {}
        for i, g in enumerate(assignment):
            masks[g] = masks.get(g, 0) | 1 << i
        return cls(space, tuple(CrispSet(space, masks[g]) for g in sorted(masks)))

    @classmethod
    def singletons(cls, space: StateSpace) -> "Partition":
        return cls(space, tuple(CrispSet(space, 1 << i) for i in range(space.size)))


@dataclass(frozen=True)
class RoughSet:
    """Pair of crisp approximations; proper when the boundary is non-empty.

    Equal approximations embed a crisp set and are flagged via ``is_crisp``
    so crisp sets can flow through rough-set APIs.
    """

    lower: CrispSet
    upper: CrispSet

    def __post_init__(self) -> None:
        if self.lower.space != self.upper.space:
            raise SpaceMismatchError("approximations over different state spaces")
        if not self.lower.issubset(self.upper):
            raise ValueError("lower approximation must be contained in the upper")

    @property
    def space(self) -> StateSpace:
        return self.lower.space

    @property
    def is_crisp(self) -> bool:
        return self.lower.mask == self.upper.mask

    @property
    def is_proper(self) -> bool:
        return not self.is_crisp

    @classmethod
    def crisp(cls, members: CrispSet) -> "RoughSet":
        """Embed a crisp set as the degenerate rough set with equal bounds."""
        return cls(members, members)

    def __repr__(self) -> str:
        return f"<{self.lower!r}, {self.upper!r}>"


class DefinabilityClass(Enum):
    """Fourfold taxonomy of how a rough set fails to be crisp."""

    ROUGHLY_DEFINABLE = "roughly_definable"
    EXTERNALLY_UNDEFINABLE = "externally_undefinable"
    INTERNALLY_UNDEFINABLE = "internally_undefinable"
    TOTALLY_UNDEFINABLE = "totally_undefinable"


class ToneClass(IntEnum):
    POSITIVE = 1
    NEUTRAL = 0
    NEGATIVE = -1


def _check_space(rs: RoughSet, space: StateSpace | None) -> StateSpace:
    if space is not None and rs.space != space:
        raise SpaceMismatchError("rough set is not over the given state space")
    return rs.space


def approximate(partition: Partition, target: CrispSet) -> RoughSet:
    """Approximate a target set by the blocks of an indiscernibility partition.

    The lower approximation unions the blocks fully inside the target, the
    upper approximation unions the blocks meeting it, so
    lower <= target <= upper always holds.
    """
    if partition.space != target.space:
        raise SpaceMismatchError("partition and target over different state spaces")
    lower = 0
    upper = 0
    for block in partition.blocks:
        if block.mask & ~target.mask == 0:
            lower |= block.mask
        if block.mask & target.mask:
            upper |= block.mask
    space = partition.space
    return RoughSet(CrispSet(space, lower), CrispSet(space, upper))


def boundary(rs: RoughSet) -> CrispSet:
    """Upper minus lower approximation; empty exactly for crisp embeddings."""
    return CrispSet(rs.space, rs.upper.mask & ~rs.lower.mask)


def classify_definability(
    rs: RoughSet, space: StateSpace | None = None
) -> DefinabilityClass:
    space = _check_space(rs, space)
    lower_empty = rs.lower.is_empty
    upper_full = rs.upper.is_full
    if not lower_empty and not upper_full:
        return DefinabilityClass.ROUGHLY_DEFINABLE
    if not lower_empty and upper_full:
        return DefinabilityClass.EXTERNALLY_UNDEFINABLE
    if lower_empty and not upper_full:
        return DefinabilityClass.INTERNALLY_UNDEFINABLE
    return DefinabilityClass.TOTALLY_UNDEFINABLE


def is_informative(rs: RoughSet, space: StateSpace | None = None) -> bool:
    """Whether the set carries content beyond the whole state space.

    Totally undefinable sets (empty lower, full upper) exclude nothing and
    pin down nothing; the full space embedded as a crisp set likewise says
    nothing. Everything else distinguishes a proper subset of the states.
    Sets with a full upper but non-empty lower count as informative: their
    content lives entirely in the lower approximation, which witness reports
    surface separately.
    """
    space = _check_space(rs, space)
    totally_undefinable = rs.lower.is_empty and rs.upper.is_full
    crisp_full = rs.lower.is_full
    return not totally_undefinable and not crisp_full


def tone_classify(rs: RoughSet, space: StateSpace | None = None) -> ToneClass:
    """Classify a rough set against the zero payoff line.

    Positive when the certain states are all positive (or, lacking any
    certain state, the possible states are all positive); negative by
    symmetry; neutral otherwise. Rows are checked in that order.
    """
    space = _check_space(rs, space)
    pos = space.positive_mask
    neg = space.negative_mask
    lower = rs.lower.mask
    upper = rs.upper.mask
    if (lower and lower & ~pos == 0) or (lower == 0 and upper & ~pos == 0):
        return ToneClass.POSITIVE
    if (lower and lower & ~neg == 0) or (lower == 0 and upper & ~neg == 0):
        return ToneClass.NEGATIVE
    return ToneClass.NEUTRAL


def faithful_crisp(candidate: CrispSet, rs: RoughSet) -> bool:
    """Whether a crisp candidate includes every possible state and excludes
    every non-certain one; impossible for any proper rough set."""
    if candidate.space != rs.space:
        raise SpaceMismatchError("candidate over a different state space")
    return rs.upper.issubset(candidate) and candidate.issubset(rs.lower)


def faithful_rough(candidate: RoughSet, rs: RoughSet) -> bool:
    """Whether a rough candidate preserves possible states in its upper bound
    and asserts no certainty beyond the represented set's lower bound."""
    if candidate.space != rs.space:
        raise SpaceMismatchError("candidate over a different state space")
    return rs.upper.issubset(candidate.upper) and candidate.lower.issubset(rs.lower)


def enumerate_crisp_sets(space: StateSpace) -> Iterator[CrispSet]:
    for mask in range(space.full_mask + 1):
        yield CrispSet(space, mask)


def enumerate_rough_sets(
    space: StateSpace, proper_only: bool = False
) -> Iterator[RoughSet]:
    """All (lower, upper) pairs with lower contained in upper.

    For each upper mask the submask trick walks its subsets, so the total
    count is 3**n. Crisp embeddings are skipped when ``proper_only``.
    """
    for upper in range(space.full_mask + 1):
        sub = upper
        while True:
            if not (proper_only and sub == upper):
                yield RoughSet(CrispSet(space, sub), CrispSet(space, upper))
            if sub == 0:
                break
            sub = (sub - 1) & upper


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of one exhaustive verification over a small state space."""

    claim: str
    space: StateSpace
    holds: bool
    vacuous: bool
    total_pairs: int
    proper_count: int
    witnesses: tuple[RoughSet, ...] = ()
    informative_proper_count: int = 0
    lower_only_informative_count: int = 0
    full_lower_informative_count: int = 0
    totally_undefinable_count: int = 0
    crisp_faithful_pairs: int = 0
    crisp_candidates_checked: int = 0
    rough_faithful_missing: int = 0
    notes: tuple[str, ...] = ()

    def summary(self) -> str:
        lines = [
            f"claim: {self.claim}",
            f"space size: {self.space.size}",
            f"holds: {self.holds}" + (" (vacuous)" if self.vacuous else ""),
            f"rough-set pairs enumerated: {self.total_pairs}"
            f" (proper: {self.proper_count})",
        ]
        for note in self.notes:
            lines.append(f"note: {note}")
        for w in self.witnesses[:5]:
            lines.append(f"witness: {w!r}")
        return "\n".join(lines)


def _cap_check(space: StateSpace, cap: int) -> None:
    if space.size > cap:
        raise EnumerationCapError(
            f"space size {space.size} exceeds enumeration cap {cap}; "
            "pass a larger cap explicitly to override"
        )


def verify_informative_rough_sets(
    space: StateSpace, cap: int = DEFAULT_ENUMERATION_CAP
) -> WitnessReport:
    """Exhaustively confirm that some proper rough set is informative.

    Also asserts, over every enumerated pair, that no informative set has a
    full lower approximation. The single proper pair with empty lower and
    full upper is set aside (it is uninformative by definition), so a
    one-state space is reported as vacuous rather than failing: it admits
    no proper rough set worth considering.
    """
    _cap_check(space, cap)
    total = 0
    proper = 0
    totally_undefinable = 0
    informative_proper: list[RoughSet] = []
    lower_only = 0
    full_lower_informative = 0
    for rs in enumerate_rough_sets(space):
        total += 1
        informative = is_informative(rs)
        if informative and rs.lower.is_full:
            full_lower_informative += 1
        if not rs.is_proper:
            continue
        if rs.lower.is_empty and rs.upper.is_full:
            totally_undefinable += 1
            continue
        proper += 1
        if informative:
            informative_proper.append(rs)
            if rs.upper.is_full:
                lower_only += 1
    vacuous = proper == 0
    holds = (vacuous or len(informative_proper) > 0) and full_lower_informative == 0
    notes = []
    if vacuous:
        notes.append("vacuous: no proper rough set to consider on this space")
    if lower_only:
        notes.append(
            f"{lower_only} informative set(s) have a full upper approximation; "
            "their content lives only in the lower approximation"
        )
    if totally_undefinable:
        notes.append(
            f"{totally_undefinable} proper pair(s) with empty lower and full "
            "upper set aside as uninformative by definition"
        )
    return WitnessReport(
        claim="a well-defined boundary is not necessary for informativeness",
        space=space,
        holds=holds,
        vacuous=vacuous,
        total_pairs=total,
        proper_count=proper,
        witnesses=tuple(informative_proper[:8]),
        informative_proper_count=len(informative_proper),
        lower_only_informative_count=lower_only,
        full_lower_informative_count=full_lower_informative,
        totally_undefinable_count=totally_undefinable,
        notes=tuple(notes),
    )


def verify_faithful_representation(
    space: StateSpace, cap: int = DEFAULT_ENUMERATION_CAP
) -> WitnessReport:
    """Exhaustively confirm the faithfulness gap between crisp and rough.

    For every proper rough set, no crisp candidate passes ``faithful_crisp``
    while at least one rough candidate (itself, among others) passes
    ``faithful_rough``.
    """
    _cap_check(space, cap)
    total = 0
    proper = 0
    crisp_faithful = 0
    candidates_checked = 0
    missing_rough = 0
    sample: list[RoughSet] = []
    crisp_candidates = list(enumerate_crisp_sets(space))
    for rs in enumerate_rough_sets(space):
        total += 1
        if not rs.is_proper:
            continue
        proper += 1
        for candidate in crisp_candidates:
            candidates_checked += 1
            if faithful_crisp(candidate, rs):
                crisp_faithful += 1
        if not faithful_rough(rs, rs):
            missing_rough += 1
        elif len(sample) < 8:
            sample.append(rs)
    vacuous = proper == 0
    holds = crisp_faithful == 0 and missing_rough == 0
    notes = []
    if vacuous:
        notes.append("vacuous: no proper rough set exists on this space")
    else:
        notes.append(
            f"{crisp_faithful} crisp-faithful representations found across "
            f"{candidates_checked} candidate checks"
        )
    return WitnessReport(
        claim="no crisp set faithfully represents a proper rough set; "
        "a rough set can",
        space=space,
        holds=holds,
        vacuous=vacuous,
        total_pairs=total,
        proper_count=proper,
        witnesses=tuple(sample),
        crisp_faithful_pairs=crisp_faithful,
        crisp_candidates_checked=candidates_checked,
        rough_faithful_missing=missing_rough,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# JSON round-trip (schema documented in the README)

def space_to_dict(space: StateSpace) -> dict:
    return {
        "states": [
            {"label": lab, "payoff": pay}
            for lab, pay in zip(space.labels, space.payoffs)
        ]
    }


def space_from_dict(data: dict) -> StateSpace:
    states = data["states"]
    return StateSpace(
        tuple(s["label"] for s in states),
        tuple(float(s["payoff"]) for s in states),
    )


def rough_set_to_dict(rs: RoughSet) -> dict:
    n = rs.space.size
    return {
        "space": space_to_dict(rs.space),
        "lower_mask": [bool(rs.lower.mask >> i & 1) for i in range(n)],
        "upper_mask": [bool(rs.upper.mask >> i & 1) for i in range(n)],
    }


def rough_set_from_dict(data: dict) -> RoughSet:
    space = space_from_dict(data["space"])
    lower = sum(1 << i for i, b in enumerate(data["lower_mask"]) if b)
    upper = sum(1 << i for i, b in enumerate(data["upper_mask"]) if b)
    return RoughSet(CrispSet(space, lower), CrispSet(space, upper))


def space_to_json(space: StateSpace) -> str:
    return json.dumps(space_to_dict(space), indent=2)


def space_from_json(text: str) -> StateSpace:
    return space_from_dict(json.loads(text))


def rough_set_to_json(rs: RoughSet) -> str:
    return json.dumps(rough_set_to_dict(rs), indent=2)


def rough_set_from_json(text: str) -> RoughSet:
    return rough_set_from_dict(json.loads(text))
