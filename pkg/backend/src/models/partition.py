"""Pydantic models for non-crossing partitions of types A and B."""

from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


def blocks_cross(first: Sequence[int], second: Sequence[int]) -> bool:
    """True when two blocks of positions interleave as p1 < q1 < p2 < q2.

    Merging both blocks and collapsing runs of the same owner leaves a
    pattern of length ≥ 4 exactly when they cross.
    """
    merged = sorted([(p, 0) for p in first] + [(q, 1) for q in second])
    runs = 0
    last = None
    for _, owner in merged:
        if owner != last:
            runs += 1
            last = owner
    return runs >= 4


def _is_non_crossing(blocks: Sequence[Sequence[int]]) -> bool:
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            if blocks_cross(blocks[i], blocks[j]):
                return False
    return True


class NCPartitionA(BaseModel):
    """Non-crossing partition of [n] = {1..n}.

    Blocks are stored sorted, and ordered by their minimum element.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    blocks: Tuple[Tuple[int, ...], ...] = Field(..., description="Disjoint blocks covering 1..n")

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data):
        if isinstance(data, dict) and "blocks" in data:
            blocks = [tuple(sorted(int(x) for x in block)) for block in data["blocks"]]
            data = dict(data, blocks=tuple(sorted(blocks)))
        return data

    @model_validator(mode="after")
    def validate_partition(self) -> "NCPartitionA":
        elements = sorted(x for block in self.blocks for x in block)
        if elements != list(range(1, self.n + 1)):
            raise ValueError(f"blocks do not partition 1..{self.n}")
        if any(len(block) == 0 for block in self.blocks):
            raise ValueError("blocks must be nonempty")
        if not _is_non_crossing(self.blocks):
            raise ValueError("partition is crossing")
        return self

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> List[int]:
        return [len(block) for block in self.blocks]


def position_b(label: int, n: int) -> int:
    """0-based position of a signed label under -1 < -2 < ... < -n < 1 < ... < n."""
    if label < 0:
        return -label - 1
    return n + label - 1


def label_b(position: int, n: int) -> int:
    """Inverse of position_b."""
    if position < n:
        return -(position + 1)
    return position - n + 1


class NCPartitionB(BaseModel):
    """Negation-closed non-crossing partition of {±1..±n}.

    Elements within a block, and blocks themselves, follow the order
    -1 < -2 < ... < -n < 1 < ... < n.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    blocks: Tuple[Tuple[int, ...], ...] = Field(..., description="Blocks of signed labels")

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data):
        if isinstance(data, dict) and "blocks" in data and "n" in data:
            n = int(data["n"])
            key = lambda x: position_b(x, n)  # noqa: E731
            blocks = [tuple(sorted((int(x) for x in block), key=key)) for block in data["blocks"]]
            blocks.sort(key=lambda block: key(block[0]) if block else -1)
            data = dict(data, blocks=tuple(blocks))
        return data

    @model_validator(mode="after")
    def validate_partition(self) -> "NCPartitionB":
        n = self.n
        expected = sorted(list(range(-n, 0)) + list(range(1, n + 1)))
        if sorted(x for block in self.blocks for x in block) != expected:
            raise ValueError(f"blocks do not partition ±1..±{n}")
        block_sets = {frozenset(block) for block in self.blocks}
        for block in self.blocks:
            if frozenset(-x for x in block) not in block_sets:
                raise ValueError(f"block {block} has no negated partner")
        positions = [[position_b(x, n) for x in block] for block in self.blocks]
        if not _is_non_crossing(positions):
            raise ValueError("partition is crossing")
        if sum(1 for block in self.blocks if frozenset(block) == frozenset(-x for x in block)) > 1:
            raise ValueError("at most one zero block is allowed")
        return self

    def zero_block(self) -> Optional[Tuple[int, ...]]:
        """The block B with B = -B, if any."""
        for block in self.blocks:
            if set(block) == {-x for x in block}:
                return block
        return None

    def nonzero_block_count(self) -> int:
        return len(self.blocks) - (1 if self.zero_block() is not None else 0)
