"""
Set partitions via restricted growth strings
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Tuple

import settings
from errors import DomainError, StructuralError
from .subsets import IndexSet, bit_positions, union_all


@dataclass(frozen=True)
class SetPartition:
    """Pairwise-disjoint non-empty blocks covering a set"""
    blocks: Tuple[IndexSet, ...]

    def __post_init__(self):
        seen = frozenset()
        for block in self.blocks:
            if block.is_empty():
                raise StructuralError("partition blocks must be non-empty")
            if not seen.isdisjoint(block.members):
                raise StructuralError(f"partition block {block} overlaps an earlier block")
            seen |= block.members

    @property
    def ground(self) -> IndexSet:
        return union_all(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[IndexSet]:
        return iter(self.blocks)

    def __str__(self) -> str:
        return "{" + ", ".join(str(block) for block in self.blocks) + "}"


def restricted_growth_strings(size: int) -> Iterator[Tuple[int, ...]]:
    """
    Restricted growth strings a_1..a_n (a_1 = 0, a_{k+1} <= 1 + max(a_1..a_k))
    in lexicographic order. Each string is one partition: position k goes to
    block a_k.
    """
    if size == 0:
        yield ()
        return

    prefix = [0]

    def extend(highest: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for block in range(highest + 2):
            prefix.append(block)
            yield from extend(max(highest, block))
            prefix.pop()

    yield from extend(0)


def enumerate_partitions(subset: IndexSet) -> List[SetPartition]:
    """
    Every partition of subset exactly once, in restricted-growth-string order.

    {1,2} yields [{{1,2}}, {{1},{2}}]; the count is Bell(|subset|).
    """
    if subset.is_empty():
        raise DomainError("cannot partition the empty set")
    if len(subset) > settings.MAX_PARTITION_SIZE:
        raise DomainError(f"partitions limited to {settings.MAX_PARTITION_SIZE} elements, got {len(subset)}")

    labels = subset.labels
    partitions = []
    for string in restricted_growth_strings(len(labels)):
        blocks = [set() for _ in range(max(string) + 1)]
        for label, block in zip(labels, string):
            blocks[block].add(label)
        partitions.append(SetPartition(tuple(IndexSet(frozenset(block)) for block in blocks)))
    return partitions


@lru_cache(maxsize=4096)
def partition_masks(mask: int) -> Tuple[Tuple[int, ...], ...]:
    """Partitions of the bits of mask as tuples of block masks, same order as enumerate_partitions"""
    if mask == 0:
        return ((),)
    positions = bit_positions(mask)
    if len(positions) > settings.MAX_PARTITION_SIZE:
        raise DomainError(f"partitions limited to {settings.MAX_PARTITION_SIZE} elements, got {len(positions)}")

    result = []
    for string in restricted_growth_strings(len(positions)):
        blocks = [0] * (max(string) + 1)
        for position, block in zip(positions, string):
            blocks[block] |= 1 << position
        result.append(tuple(blocks))
    return tuple(result)


def bell_number(size: int) -> int:
    """Bell number via the Bell triangle"""
    if size < 0:
        raise DomainError("Bell numbers need a non-negative size")
    row = [1]
    for _ in range(size):
        next_row = [row[-1]]
        for value in row:
            next_row.append(next_row[-1] + value)
        row = next_row
    return row[0]
