"""
Swap-operator encoding of permutations.

A swap operator MO(i, j) exchanges the cities at 1-based positions i and j
of a tour; a swap sequence is an ordered list of operators. `subtract(A, B)`
returns the sequence that turns B into A, so `apply_sequence(B, A - B) == A`.
"""

from dataclasses import dataclass
from typing import Hashable, List, Sequence, Tuple

from src.exceptions import InstanceMismatchError, SwapIndexError

Tour = Tuple[Hashable, ...]


@dataclass(frozen=True)
class SwapOperator:
    """MO(i, j) with 1-based positions"""
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1:
            raise SwapIndexError(f"swap positions are 1-based, got MO({self.i},{self.j})")
        if self.i == self.j:
            raise SwapIndexError(f"swap positions must differ, got MO({self.i},{self.j})")

    def __repr__(self) -> str:
        return f"MO({self.i},{self.j})"


SwapSequence = List[SwapOperator]


def _check_operator(length: int, op: SwapOperator) -> None:
    if op.i > length or op.j > length:
        raise SwapIndexError(f"{op!r} is outside a tour of length {length}")


def apply(tour: Sequence[Hashable], op: SwapOperator) -> Tour:
    """tour (+) MO(i, j)"""
    _check_operator(len(tour), op)
    order = list(tour)
    a, b = op.i - 1, op.j - 1
    order[a], order[b] = order[b], order[a]
    return tuple(order)


def apply_sequence(tour: Sequence[Hashable], ops: Sequence[SwapOperator]) -> Tour:
    """Apply operators left to right"""
    order = list(tour)
    length = len(order)
    for op in ops:
        _check_operator(length, op)
        a, b = op.i - 1, op.j - 1
        order[a], order[b] = order[b], order[a]
    return tuple(order)


def subtract(target: Sequence[Hashable], source: Sequence[Hashable]) -> SwapSequence:
    """
    target - source: scan positions left to right and, where they differ,
    swap the wanted city into place, recording MO(k, m).
    """
    if len(target) != len(source) or set(target) != set(source):
        raise InstanceMismatchError("tours range over different city sets")
    if len(set(target)) != len(target):
        raise InstanceMismatchError("tours must not repeat cities")

    work = list(source)
    position = {city: k for k, city in enumerate(work)}
    ops: SwapSequence = []
    for k, wanted in enumerate(target):
        if work[k] == wanted:
            continue
        m = position[wanted]
        ops.append(SwapOperator(k + 1, m + 1))
        displaced = work[k]
        work[k], work[m] = wanted, displaced
        position[wanted], position[displaced] = k, m
    return ops


def swap_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Length of a - b"""
    return len(subtract(a, b))
