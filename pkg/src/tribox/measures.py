"""Linear functionals on boxes and the two discord measures G and Q.

Everything here works on the three-party correlators ``<A_i B_j C_k>``,
flattened as ``4i + 2j + k``.  Labels ``(α, β, γ)`` are flattened the same
way, ``4α + 2β + γ``.  The ``*_batch`` functions take arrays of shape
``(..., 64)`` (probabilities) or ``(..., 8)`` (triples) and broadcast.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .box import Behavior, probs_to_correlators

BITS = (0, 1)
LABELS = tuple(itertools.product(BITS, repeat=3))
MONOGAMY_TOL = 1e-9


def _svetlichny_signs() -> np.ndarray:
    s = np.empty((8, 8))
    for (a, b, g), (i, j, k) in itertools.product(LABELS, LABELS):
        parity = (i * j) ^ (i * k) ^ (j * k) ^ (a * i) ^ (b * j) ^ (g * k)
        s[4 * a + 2 * b + g, 4 * i + 2 * j + k] = -1 if parity else 1
    return s


def _mermin_signs() -> np.ndarray:
    # rows are M_{αβγ0}; M+ for even α⊕β⊕γ, M- for odd
    s = np.zeros((8, 8))
    for a, b, g in LABELS:
        row = s[4 * a + 2 * b + g]
        if (a ^ b ^ g) == 0:
            row[0b001] = (-1) ** g
            row[0b010] = (-1) ** b
            row[0b100] = (-1) ** a
            row[0b111] = (-1) ** (a ^ b ^ g ^ 1)
        else:
            row[0b110] = (-1) ** (a ^ b ^ 1)
            row[0b101] = (-1) ** (a ^ g ^ 1)
            row[0b011] = (-1) ** (b ^ g ^ 1)
            row[0b000] = 1
    return s


SVETLICHNY_SIGNS = _svetlichny_signs()
MERMIN_SIGNS = _mermin_signs()

BoxLike = Union[Behavior, np.ndarray]


def _triples(b: BoxLike) -> np.ndarray:
    if isinstance(b, Behavior):
        return b.correlators.values[18:]
    arr = np.asarray(b, dtype=float)
    if arr.shape[-1] == 8:
        return arr
    if arr.shape[-6:] == (2,) * 6:
        arr = arr.reshape(arr.shape[:-6] + (64,))
    return probs_to_correlators(arr)[..., 18:]


def svetlichny_value(b: Behavior, alpha: int, beta: int, gamma: int, eps: int) -> float:
    """Signed Svetlichny functional ``S_{αβγε}``; its bound is 4 for two-way local boxes."""
    row = SVETLICHNY_SIGNS[4 * alpha + 2 * beta + gamma]
    return float((-1) ** eps * row @ _triples(b))


def svetlichny_values(b: BoxLike) -> np.ndarray:
    """All 16 signed values, indexed ``8α + 4β + 2γ + ε``."""
    s = _triples(b) @ SVETLICHNY_SIGNS.T
    return np.stack([s, -s], axis=-1).reshape(s.shape[:-1] + (16,))


def svetlichny_moduli(b: BoxLike) -> np.ndarray:
    """``|S_{αβγ}|`` for the 8 labels, indexed ``4α + 2β + γ``."""
    return np.abs(_triples(b) @ SVETLICHNY_SIGNS.T)


def mermin_value(b: Behavior, alpha: int, beta: int, gamma: int, eps: int) -> float:
    row = MERMIN_SIGNS[4 * alpha + 2 * beta + gamma]
    return float((-1) ** eps * row @ _triples(b))


def mermin_values(b: BoxLike) -> np.ndarray:
    """All 16 signed Mermin values, indexed ``8α + 4β + 2γ + ε``."""
    m = _triples(b) @ MERMIN_SIGNS.T
    return np.stack([m, -m], axis=-1).reshape(m.shape[:-1] + (16,))


def mermin_moduli(b: BoxLike) -> np.ndarray:
    return np.abs(_triples(b) @ MERMIN_SIGNS.T)


_PAIR_SLICES = {12: (0, 1, slice(6, 10)), 13: (0, 2, slice(10, 14)), 23: (1, 2, slice(14, 18))}


def chsh_values(b: Behavior, pair: int) -> np.ndarray:
    """CHSH functionals ``B_{αβγ}`` on the marginal of ``pair``; shape (2, 2, 2)."""
    if pair not in _PAIR_SLICES:
        raise ValueError(f"pair must be one of {tuple(_PAIR_SLICES)}, got {pair}")
    e = b.correlators.values[_PAIR_SLICES[pair][2]].reshape(2, 2)
    out = np.empty((2, 2, 2))
    for a, bb, g in LABELS:
        out[a, bb, g] = (
            (-1) ** g * e[0, 0] + (-1) ** (bb ^ g) * e[0, 1]
            + (-1) ** (a ^ g) * e[1, 0] + (-1) ** (a ^ bb ^ g ^ 1) * e[1, 1]
        )
    return out


def class99_value(b: Behavior) -> float:
    """Representative class-99 facet functional of the two-way local polytope (bound 3)."""
    c = b.correlators
    return c["A0B0"] + c["A0C0"] + c["B1C0"] + c["A1B0C1"] - c["A1B1C1"]


@dataclass(frozen=True)
class PairingStructure:
    """One of the nine nested-difference patterns over the eight moduli.

    ``inner_axis`` (0=α, 1=β, 2=γ) is differenced first.  The four remaining
    classes are paired by XOR with ``matching`` (a mask over (α, β, γ) that
    is zero on the inner axis); the outer difference is then fixed.
    """

    index: int
    inner_axis: int
    matching: tuple[int, int, int]
    order: tuple[int, ...] = field(repr=False)

    @property
    def name(self) -> str:
        axes = "αβγ"
        flipped = "".join(axes[n] for n in range(3) if self.matching[n])
        return f"inner-{axes[self.inner_axis]}/flip-{flipped}"

    def value(self, moduli: np.ndarray) -> np.ndarray:
        v = np.asarray(moduli)[..., list(self.order)]
        d = np.abs(v[..., 0::2] - v[..., 1::2])
        e = np.abs(d[..., 0::2] - d[..., 1::2])
        return np.abs(e[..., 0] - e[..., 1])


def _structures() -> tuple[PairingStructure, ...]:
    out = []
    for ax in (2, 1, 0):
        u, v = [n for n in range(3) if n != ax]
        for tu, tv in ((0, 1), (1, 0), (1, 1)):
            mask = [0, 0, 0]
            mask[u], mask[v] = tu, tv
            classes, seen = [], set()
            for pu, pv in itertools.product(BITS, BITS):
                if (pu, pv) in seen:
                    continue
                partner = (pu ^ tu, pv ^ tv)
                seen |= {(pu, pv), partner}
                classes.append(((pu, pv), partner))
            order = []
            for pair in classes:
                for pu, pv in pair:
                    for w in BITS:
                        lab = [0, 0, 0]
                        lab[u], lab[v], lab[ax] = pu, pv, w
                        order.append(4 * lab[0] + 2 * lab[1] + lab[2])
            out.append(PairingStructure(len(out), ax, tuple(mask), tuple(order)))
    return tuple(out)


STRUCTURES = _structures()
_ORDER = np.array([s.order for s in STRUCTURES])  # (9, 8)


def nested_values(moduli: np.ndarray) -> np.ndarray:
    """The nine candidate values for moduli of shape ``(..., 8)``; returns ``(..., 9)``."""
    v = np.asarray(moduli)[..., _ORDER]
    d = np.abs(v[..., 0::2] - v[..., 1::2])
    e = np.abs(d[..., 0::2] - d[..., 1::2])
    return np.abs(e[..., 0] - e[..., 1])


def svetlichny_discord_batch(x: np.ndarray) -> np.ndarray:
    return nested_values(svetlichny_moduli(x)).min(axis=-1)


def mermin_discord_batch(x: np.ndarray) -> np.ndarray:
    return nested_values(mermin_moduli(x)).min(axis=-1)


def svetlichny_discord(b: Behavior) -> float:
    return float(nested_values(svetlichny_moduli(b)).min())


def mermin_discord(b: Behavior) -> float:
    return float(nested_values(mermin_moduli(b)).min())


@dataclass(frozen=True)
class DiscordReport:
    G: float
    Q: float
    g_values: tuple[float, ...]
    q_values: tuple[float, ...]
    argmin_g: PairingStructure
    argmin_q: PairingStructure

    def to_dict(self) -> dict:
        return {
            "G": self.G,
            "Q": self.Q,
            "g_values": list(self.g_values),
            "q_values": list(self.q_values),
            "argmin_g": {"index": self.argmin_g.index, "name": self.argmin_g.name},
            "argmin_q": {"index": self.argmin_q.index, "name": self.argmin_q.name},
        }


def discord_report(b: Behavior) -> DiscordReport:
    g = nested_values(svetlichny_moduli(b))
    q = nested_values(mermin_moduli(b))
    # np.argmin returns the first minimum, i.e. the lowest structure index
    ig, iq = int(np.argmin(g)), int(np.argmin(q))
    return DiscordReport(
        float(g[ig]), float(q[iq]),
        tuple(float(v) for v in g), tuple(float(v) for v in q),
        STRUCTURES[ig], STRUCTURES[iq],
    )


def monogamy_check(b: Behavior) -> tuple[float, bool]:
    """``(G + 2Q, G + 2Q <= 8)``; meaningful for boxes inside R."""
    lhs = svetlichny_discord(b) + 2 * mermin_discord(b)
    return lhs, lhs <= 8 + MONOGAMY_TOL
