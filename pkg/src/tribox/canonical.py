"""Canonical extremal boxes and the two families of Mermin boxes.

Labels (used by the CLI and ``vertex_from_label``)::

    det:αβγεζη      deterministic, m=αi⊕β, n=γj⊕ε, o=ζk⊕η
    pr12:αβγε[η]    PR box on a pair, third party deterministic
    sv:αβγε         Svetlichny box
    mm:N            Mermin box with maximally mixed marginals, N in 0..15
    nmm:N           Mermin box with a non-maximally mixed marginal, N in 0..191
    class8          the class-8 extremal box
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .box import SHAPE, Behavior, CorrelatorVector, from_correlators
from .exceptions import ConstructionFailure, UnknownVariant
from .symmetry import LocalReversibleOp, PERMUTATIONS, all_local_ops, apply_lro

PAIRINGS = (12, 13, 23)
N_MM = 16
N_NMM = 192


def _bits(*values) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if any(v not in (0, 1) for v in out):
        raise ValueError(f"expected bits, got {values}")
    return out


def _grid() -> tuple[np.ndarray, ...]:
    return tuple(np.indices(SHAPE))


def deterministic_box(alpha, beta, gamma, eps, zeta, eta) -> Behavior:
    a, b, g, e, z, h = _bits(alpha, beta, gamma, eps, zeta, eta)
    i, j, k, m, n, o = _grid()
    table = (m == (a * i) ^ b) & (n == (g * j) ^ e) & (o == (z * k) ^ h)
    return Behavior(table.astype(float))


def pr_box(pairing: int, alpha, beta, gamma, eps, eta=0) -> Behavior:
    """Bipartite PR box shared by the two parties of ``pairing``.

    For pairing 12: ``m⊕n = ij⊕αi⊕βj⊕γ`` and ``o = εk⊕η``; the other pairings
    are the same rule on their own pair of parties.
    """
    if pairing not in PAIRINGS:
        raise ValueError(f"pairing must be one of {PAIRINGS}, got {pairing}")
    a, b, g, e, h = _bits(alpha, beta, gamma, eps, eta)
    grid = _grid()
    ins, outs = grid[:3], grid[3:]
    p, q = pairing // 10 - 1, pairing % 10 - 1
    r = 3 - p - q
    x, y, z = ins[p], ins[q], ins[r]
    pr = (outs[p] ^ outs[q]) == (x * y) ^ (a * x) ^ (b * y) ^ g
    local = outs[r] == (e * z) ^ h
    return Behavior(0.5 * (pr & local))


def svetlichny_box(alpha, beta, gamma, eps) -> Behavior:
    a, b, g, e = _bits(alpha, beta, gamma, eps)
    i, j, k, m, n, o = _grid()
    parity = (i * j) ^ (i * k) ^ (j * k) ^ (a * i) ^ (b * j) ^ (g * k) ^ e
    return Behavior(0.25 * ((m ^ n ^ o) == parity))


def mm_pair(variant: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two Svetlichny labels whose uniform mixture is ``mermin_box_mm(variant)``."""
    if not 0 <= int(variant) < N_MM:
        raise UnknownVariant(f"Mermin box variant {variant} not in 0..{N_MM - 1}")
    v = int(variant)
    h, b, g, e = (v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1
    first = (0, b, g, e)
    second = (1, b ^ 1, g ^ 1, e ^ h)
    return first, second


def mermin_box_mm(variant: int = 0) -> Behavior:
    """Mermin box with maximally mixed marginals.

    Variant ``8h + 4β + 2γ + ε`` mixes the Svetlichny boxes ``0βγε`` and
    ``(0βγε) ⊕ (1,1,1,h)``.  Variant 0 is the GHZ-paradox box.
    """
    first, second = mm_pair(variant)
    table = 0.5 * (svetlichny_box(*first).probs + svetlichny_box(*second).probs)
    return Behavior(table)


# Alice's deterministic response times a PR box between Bob and Charlie
_NMM_FIRST = (pr_box(23, 1, 1, 0, 0, 0), pr_box(23, 1, 1, 1, 0, 1))   # m=0, m=1
_NMM_SECOND = (pr_box(23, 0, 0, 1, 1, 1), pr_box(23, 0, 0, 0, 1, 0))  # m=i⊕1, m=i
# split s puts party s alone; perm maps new party -> old party
_SPLIT_PERMS = ((0, 1, 2), (1, 0, 2), (1, 2, 0))


def nmm_parts(variant: int) -> tuple[int, int, int]:
    """Decode ``variant`` as (mm variant, split, pair)."""
    if not 0 <= int(variant) < N_NMM:
        raise UnknownVariant(f"non-maximally-mixed Mermin box variant {variant} not in 0..{N_NMM - 1}")
    v = int(variant)
    return v // 12, (v % 12) // 4, v % 4


@lru_cache(maxsize=None)
def _mm_relabeling(variant: int) -> LocalReversibleOp:
    target = mermin_box_mm(variant)
    source = mermin_box_mm(0)
    for op in all_local_ops():
        if apply_lro(source, op) == target:
            return op
    raise ConstructionFailure(f"no local relabeling maps Mermin box 0 onto variant {variant}")


def mermin_box_nmm(variant: int = 0) -> Behavior:
    """Mermin box with a non-maximally mixed marginal, a uniform mixture of two PR vertices.

    ``variant = 12*mm + 4*split + pair``.  Split 0 isolates Alice, 1 Bob,
    2 Charlie.  Pair ``2a + b`` selects the lone party's responses
    ``(0, 1)[a]`` and ``(x⊕1, x)[b]``.  The result has the same three-party
    correlators as ``mermin_box_mm(mm)``.
    """
    mm, split, pair = nmm_parts(variant)
    a, b = pair >> 1, pair & 1
    base = Behavior(0.5 * (_NMM_FIRST[a].probs + _NMM_SECOND[b].probs))
    perm = _SPLIT_PERMS[split]
    op = LocalReversibleOp(perm=perm).then(_mm_relabeling(mm)) if mm else LocalReversibleOp(perm=perm)
    return apply_lro(base, op)


def class8_box() -> Behavior:
    """Class-8 extremal box, rebuilt from its nonzero correlators."""
    corr = CorrelatorVector.from_dict({
        "A0B0": 1, "A0B1": 1, "A0C0": 1, "B0C0": 1, "B1C0": 1,
        "A1B0C1": 1, "A1B1C1": -1,
    })
    try:
        return from_correlators(corr)
    except ValueError as exc:
        raise ConstructionFailure(f"class-8 correlators do not give a valid box: {exc}") from exc


@dataclass(frozen=True)
class CanonicalVertex:
    """Tagged identity of a canonical box; ``kind`` is one of
    ``det``, ``pr``, ``sv``, ``mm``, ``nmm``, ``class8``."""

    kind: str
    params: tuple[int, ...] = ()
    pairing: Optional[int] = None

    def box(self) -> Behavior:
        if self.kind == "det":
            return deterministic_box(*self.params)
        if self.kind == "pr":
            return pr_box(self.pairing, *self.params)
        if self.kind == "sv":
            return svetlichny_box(*self.params)
        if self.kind == "mm":
            return mermin_box_mm(*self.params)
        if self.kind == "nmm":
            return mermin_box_nmm(*self.params)
        if self.kind == "class8":
            return class8_box()
        raise UnknownVariant(f"unknown vertex kind {self.kind!r}")

    @property
    def label(self) -> str:
        bits = "".join(str(b) for b in self.params)
        if self.kind == "pr":
            return f"pr{self.pairing}:{bits}"
        if self.kind in ("mm", "nmm"):
            return f"{self.kind}:{self.params[0]}"
        if self.kind == "class8":
            return "class8"
        return f"{self.kind}:{bits}"

    def __str__(self):
        return self.label


_LABEL = re.compile(r"^(det|sv|pr12|pr13|pr23|mm|nmm|class8)(?::(\w+))?$")


def parse_label(label: str) -> CanonicalVertex:
    match = _LABEL.match(label.strip().lower())
    if not match:
        raise UnknownVariant(f"cannot parse vertex label {label!r}")
    kind, arg = match.groups()
    if kind == "class8":
        return CanonicalVertex("class8")
    if arg is None:
        raise UnknownVariant(f"label {label!r} needs parameters")
    if kind in ("mm", "nmm"):
        if not arg.isdigit():
            raise UnknownVariant(f"variant must be an integer in {label!r}")
        n = int(arg)
        limit = N_MM if kind == "mm" else N_NMM
        if n >= limit:
            raise UnknownVariant(f"variant {n} out of range for {kind}")
        return CanonicalVertex(kind, (n,))
    if set(arg) - {"0", "1"}:
        raise UnknownVariant(f"parameters must be bits in {label!r}")
    params = tuple(int(c) for c in arg)
    expected = {"det": (6,), "sv": (4,)}.get(kind, (4, 5))
    if len(params) not in expected:
        raise UnknownVariant(f"{kind} takes {expected[0]} bits, got {len(params)}")
    if kind.startswith("pr"):
        return CanonicalVertex("pr", params, int(kind[2:]))
    return CanonicalVertex(kind, params)


def vertex_from_label(label: str) -> Behavior:
    return parse_label(label).box()


def deterministic_vertices() -> list[CanonicalVertex]:
    return [CanonicalVertex("det", t) for t in itertools.product((0, 1), repeat=6)]


def pr_vertices(with_offset: bool = True) -> list[CanonicalVertex]:
    """PR vertices; ``with_offset`` also varies the third party's constant bit (96 vs 48)."""
    etas = (0, 1) if with_offset else (0,)
    return [
        CanonicalVertex("pr", t + (h,), pairing)
        for pairing in PAIRINGS
        for t in itertools.product((0, 1), repeat=4)
        for h in etas
    ]


def svetlichny_vertices() -> list[CanonicalVertex]:
    return [CanonicalVertex("sv", t) for t in itertools.product((0, 1), repeat=4)]


def mermin_inequality_of(variant: int) -> tuple[int, int, int, int]:
    """The (α,β,γ,ε) of the single Mermin inequality that ``mermin_box_mm(variant)`` saturates."""
    from .measures import mermin_value

    b = mermin_box_mm(variant)
    hits = [t for t in itertools.product((0, 1), repeat=4) if abs(mermin_value(b, *t) - 4) < 1e-9]
    if len(hits) != 1:
        raise ConstructionFailure(f"variant {variant} saturates {len(hits)} Mermin inequalities")
    return hits[0]


__all__ = [
    "PAIRINGS", "N_MM", "N_NMM", "PERMUTATIONS", "CanonicalVertex",
    "deterministic_box", "pr_box", "svetlichny_box", "mermin_box_mm", "mermin_box_nmm",
    "mm_pair", "nmm_parts", "class8_box", "parse_label", "vertex_from_label",
    "deterministic_vertices", "pr_vertices", "svetlichny_vertices", "mermin_inequality_of",
    "isotropic_svetlichny", "isotropic_mermin",
]


def isotropic_svetlichny(p: float, label=(0, 0, 0, 0)) -> Behavior:
    """``p * P_Sv + (1 - p) * P_N``."""
    return Behavior(p * svetlichny_box(*label).probs + (1 - p) / 8)


def isotropic_mermin(p: float, variant: int = 0) -> Behavior:
    return Behavior(p * mermin_box_mm(variant).probs + (1 - p) / 8)
