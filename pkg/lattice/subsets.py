"""
Index sets, evaluation points and subset enumeration over a fixed ground set
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Sequence, Tuple

import numpy as np

import settings
from errors import DomainError, StructuralError


@dataclass(frozen=True)
class IndexSet:
    """Order-free set of integer labels"""
    members: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(label) for label in self.members))

    @classmethod
    def of(cls, *labels: int) -> "IndexSet":
        return cls(frozenset(labels))

    @property
    def labels(self) -> Tuple[int, ...]:
        """Members in ascending order; this order fixes the bit positions of a ground set"""
        return tuple(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.members

    def __or__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.members | other.members)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.members & other.members)

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.members - other.members)

    def __le__(self, other: "IndexSet") -> bool:
        return self.members <= other.members

    def isdisjoint(self, other: "IndexSet") -> bool:
        return self.members.isdisjoint(other.members)

    def is_empty(self) -> bool:
        return not self.members

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Enumeration order: ascending cardinality, then lexicographic labels"""
        return len(self.members), self.labels

    def label(self) -> str:
        """CSV label, e.g. "1+5"; the empty set renders as an empty string"""
        return settings.LABEL_JOINER.join(str(label) for label in self.labels)

    def __str__(self) -> str:
        return "{" + ",".join(str(label) for label in self.labels) + "}"

    def mask(self, ground: "IndexSet") -> int:
        """Bitmask of this set relative to the ascending label order of ground"""
        if not self.members <= ground.members:
            raise StructuralError(f"{self} is not a subset of the ground set {ground}")
        positions = _positions(ground)
        mask = 0
        for label in self.members:
            mask |= 1 << positions[label]
        return mask

    @classmethod
    def from_mask(cls, mask: int, ground: "IndexSet") -> "IndexSet":
        labels = ground.labels
        if mask < 0 or mask >> len(labels):
            raise StructuralError(f"mask {mask} does not fit the ground set {ground}")
        return cls(frozenset(labels[j] for j in range(len(labels)) if mask >> j & 1))


def _positions(ground: IndexSet) -> Dict[int, int]:
    return {label: position for position, label in enumerate(ground.labels)}


def parse_index_set(text: str) -> IndexSet:
    """Parse "1+2", "1,2" or "1" into an IndexSet"""
    tokens = [token for token in text.replace(settings.LABEL_JOINER, ",").split(",") if token.strip()]
    try:
        return IndexSet(frozenset(int(token) for token in tokens))
    except ValueError:
        raise DomainError(f"invalid index set '{text}': labels must be integers")


def bit_positions(mask: int) -> List[int]:
    positions = []
    position = 0
    while mask:
        if mask & 1:
            positions.append(position)
        mask >>= 1
        position += 1
    return positions


def subset_masks(size: int) -> List[int]:
    """Non-empty masks of a size-bit ground set in enumeration order"""
    if size < 1:
        raise DomainError("empty ground set")
    return sorted(range(1, 1 << size), key=lambda mask: (bin(mask).count("1"), bit_positions(mask)))


def enumerate_subsets(ground: IndexSet) -> List[IndexSet]:
    """
    All non-empty subsets of ground, each exactly once.

    Order is ascending by cardinality, then lexicographic by sorted labels, so
    {1,2} yields [{1}, {2}, {1,2}].
    """
    if ground.is_empty():
        raise DomainError("empty ground set")
    return [IndexSet.from_mask(mask, ground) for mask in subset_masks(len(ground))]


def popcounts(size: int) -> np.ndarray:
    """Cardinality of every mask in range(2**size)"""
    masks = np.arange(1 << size)
    counts = np.zeros(1 << size, dtype=np.int64)
    for position in range(size):
        counts += (masks >> position) & 1
    return counts


class EvaluationPoint:
    """A point x in (0, inf)^I stored in the ascending label order of its ground set"""

    def __init__(self, ground: IndexSet, coords: Sequence[float]):
        coords = np.asarray(coords, dtype=float).copy()
        if ground.is_empty():
            raise DomainError("empty ground set")
        if coords.shape != (len(ground),):
            raise StructuralError(f"point has {coords.size} coordinates, ground set {ground} needs {len(ground)}")
        if not np.all(np.isfinite(coords)) or np.any(coords <= 0):
            raise DomainError(f"coordinates must be strictly positive and finite, got {coords.tolist()}")
        coords.setflags(write=False)
        self.ground = ground
        self.coords = coords

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "EvaluationPoint":
        ground = IndexSet(frozenset(mapping))
        return cls(ground, [mapping[label] for label in ground.labels])

    @classmethod
    def constant(cls, ground: IndexSet, value: float = 1.0) -> "EvaluationPoint":
        return cls(ground, np.full(len(ground), value))

    def __getitem__(self, label: int) -> float:
        return float(self.coords[self.ground.labels.index(label)])

    def __repr__(self) -> str:
        pairs = ", ".join(f"{label}: {value:g}" for label, value in zip(self.ground.labels, self.coords))
        return f"EvaluationPoint({{{pairs}}})"

    def scaled(self, factor: float) -> "EvaluationPoint":
        return EvaluationPoint(self.ground, self.coords * factor)

    def restrict(self, subset: IndexSet) -> "EvaluationPoint":
        """Coordinates of x_S as a point on the ground set S"""
        positions = _positions(self.ground)
        if not subset.members <= self.ground.members:
            raise StructuralError(f"{subset} is not a subset of the ground set {self.ground}")
        return EvaluationPoint(subset, [self.coords[positions[label]] for label in subset.labels])

    def key(self) -> bytes:
        """Hashable identity used for memoization"""
        return self.coords.tobytes()


def parse_point(text: str, ground: IndexSet) -> EvaluationPoint:
    """Parse "x1,...,xd" given in the ascending label order of ground"""
    try:
        values = [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise DomainError(f"invalid point '{text}': coordinates must be numbers")
    return EvaluationPoint(ground, values)


def disjoint_pairs(ground: IndexSet) -> List[Tuple[IndexSet, IndexSet]]:
    """Every unordered pair of disjoint non-empty subsets, first set earlier in enumeration order"""
    subsets = enumerate_subsets(ground)
    return [
        (first, second)
        for position, first in enumerate(subsets)
        for second in subsets[position + 1:]
        if first.isdisjoint(second)
    ]


def require_disjoint(first: IndexSet, second: IndexSet) -> None:
    if first.is_empty() or second.is_empty():
        raise DomainError("index sets must be non-empty")
    if not first.isdisjoint(second):
        raise StructuralError(f"index sets {first} and {second} overlap")


def union_all(sets: Iterable[IndexSet]) -> IndexSet:
    members = frozenset()
    for index_set in sets:
        members |= index_set.members
    return IndexSet(members)
