"""Local reversible operations (LRO): relabelings of inputs and outputs.

An op acts in two steps.  First each party ``q`` relabels locally::

    P'(.., a, ..| .., x, ..) = P(.., a ^ flip[q][x], ..| .., x ^ swap[q], ..)

(the output flip is keyed by the *new* input ``x``).  Then parties are
permuted: new party ``p`` is old party ``perm[p]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .box import Behavior

PERMUTATIONS = tuple(itertools.permutations(range(3)))


@dataclass(frozen=True)
class LocalReversibleOp:
    input_swap: tuple[int, int, int] = (0, 0, 0)
    output_flip: tuple[tuple[int, int], tuple[int, int], tuple[int, int]] = ((0, 0), (0, 0), (0, 0))
    perm: tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        swap = tuple(int(s) & 1 for s in self.input_swap)
        flip = tuple(tuple(int(f) & 1 for f in pair) for pair in self.output_flip)
        perm = tuple(int(p) for p in self.perm)
        if len(swap) != 3 or len(flip) != 3 or any(len(f) != 2 for f in flip):
            raise ValueError("an op needs 3 swap bits and 3x2 flip bits")
        if sorted(perm) != [0, 1, 2]:
            raise ValueError(f"not a permutation of the parties: {perm}")
        object.__setattr__(self, "input_swap", swap)
        object.__setattr__(self, "output_flip", flip)
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls) -> "LocalReversibleOp":
        return cls()

    @classmethod
    def permutation(cls, perm) -> "LocalReversibleOp":
        return cls(perm=tuple(perm))

    def then(self, other: "LocalReversibleOp") -> "LocalReversibleOp":
        """The op equal to applying ``self`` first and ``other`` second."""
        s1, f1, p1 = self.input_swap, self.output_flip, self.perm
        s2, f2, p2 = other.input_swap, other.output_flip, other.perm
        inv1 = [p1.index(q) for q in range(3)]
        swap, flip = [], []
        for q in range(3):
            u = inv1[q]
            swap.append(s1[q] ^ s2[u])
            flip.append(tuple(f1[q][x ^ s2[u]] ^ f2[u][x] for x in (0, 1)))
        perm = tuple(p1[p2[r]] for r in range(3))
        return LocalReversibleOp(tuple(swap), tuple(flip), perm)

    def inverse(self) -> "LocalReversibleOp":
        s, f, p = self.input_swap, self.output_flip, self.perm
        inv = tuple(p.index(r) for r in range(3))
        swap = tuple(s[p[u]] for u in range(3))
        flip = tuple(tuple(f[p[u]][x ^ s[p[u]]] for x in (0, 1)) for u in range(3))
        return LocalReversibleOp(swap, flip, inv)

    def apply(self, b: Behavior) -> Behavior:
        return apply_lro(b, self)


def _local_index_maps(op: LocalReversibleOp) -> tuple[np.ndarray, ...]:
    # source index along each axis, as a function of the full new index
    grids = np.indices((2,) * 6)
    src = []
    for q in range(3):
        x = grids[q]
        src.append(x ^ op.input_swap[q])
    flips = np.array(op.output_flip)
    for q in range(3):
        x = grids[q]
        src.append(grids[3 + q] ^ flips[q][x])
    return tuple(src)


def apply_lro(b: Behavior, op: LocalReversibleOp) -> Behavior:
    table = b.probs[_local_index_maps(op)]
    p = op.perm
    table = table.transpose(p[0], p[1], p[2], 3 + p[0], 3 + p[1], 3 + p[2])
    return Behavior(table, validate=False)


def permute_parties(b: Behavior, perm) -> Behavior:
    """New party ``p`` is old party ``perm[p]``."""
    return apply_lro(b, LocalReversibleOp.permutation(perm))


def all_local_ops() -> Iterator[LocalReversibleOp]:
    """The 512 ops without a party permutation."""
    for swap in itertools.product((0, 1), repeat=3):
        for bits in itertools.product((0, 1), repeat=6):
            flip = (bits[0:2], bits[2:4], bits[4:6])
            yield LocalReversibleOp(swap, flip)


def all_ops() -> Iterator[LocalReversibleOp]:
    """The full group of 3072 ops."""
    for perm in PERMUTATIONS:
        for op in all_local_ops():
            yield LocalReversibleOp(op.input_swap, op.output_flip, perm)


def random_op(rng: np.random.Generator, with_permutation: bool = True) -> LocalReversibleOp:
    swap = tuple(int(v) for v in rng.integers(0, 2, 3))
    bits = [int(v) for v in rng.integers(0, 2, 6)]
    perm = PERMUTATIONS[int(rng.integers(0, 6))] if with_permutation else (0, 1, 2)
    return LocalReversibleOp(swap, (tuple(bits[0:2]), tuple(bits[2:4]), tuple(bits[4:6])), perm)


def find_lro(source: Behavior, target: Behavior, atol: float = 1e-9,
             local_only: bool = False) -> Optional[LocalReversibleOp]:
    """Some op mapping ``source`` onto ``target`` within ``atol``, or None."""
    ops = all_local_ops() if local_only else all_ops()
    for op in ops:
        if apply_lro(source, op).allclose(target, atol):
            return op
    return None
