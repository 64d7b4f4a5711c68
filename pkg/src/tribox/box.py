"""Tripartite two-input/two-output boxes.

A box is the table ``P(a_m, b_n, c_o | A_i, B_j, C_k)`` stored as a read-only
array of shape ``(2, 2, 2, 2, 2, 2)`` indexed ``[i, j, k, m, n, o]``; the flat
order is ``i*32 + j*16 + k*8 + m*4 + n*2 + o``.  Output bit ``m`` stands for the
measurement outcome ``(-1)**m``.

Correlators (6 single-party, 12 two-party, 8 three-party) are derived on demand
and cached.  For a nonsignaling box the map between the 64 probabilities and
``(1, 26 correlators)`` is an exact linear bijection.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import BadWeights, NegativeProbability, NotNormalized, SignalingDetected

SHAPE = (2, 2, 2, 2, 2, 2)
TOL_EXACT = 1e-12
TOL_QUANTUM = 1e-9

PARTIES = ("A", "B", "C")
BITS = (0, 1)


def _correlator_keys() -> tuple[str, ...]:
    keys = [f"{p}{x}" for p in PARTIES for x in BITS]
    for p, q in (("A", "B"), ("A", "C"), ("B", "C")):
        keys += [f"{p}{x}{q}{y}" for x in BITS for y in BITS]
    keys += [f"A{i}B{j}C{k}" for i, j, k in itertools.product(BITS, repeat=3)]
    return tuple(keys)


CORRELATOR_KEYS = _correlator_keys()


def _build_transforms() -> tuple[np.ndarray, np.ndarray]:
    # to_probs: (64, 27) acting on (1, correlators); to_corr: (26, 64)
    to_probs = np.zeros((64, 27))
    to_corr = np.zeros((26, 64))
    col = {key: 1 + n for n, key in enumerate(CORRELATOR_KEYS)}
    for i, j, k, m, n, o in itertools.product(BITS, repeat=6):
        row = i * 32 + j * 16 + k * 8 + m * 4 + n * 2 + o
        terms = {
            f"A{i}": m, f"B{j}": n, f"C{k}": o,
            f"A{i}B{j}": m ^ n, f"A{i}C{k}": m ^ o, f"B{j}C{k}": n ^ o,
            f"A{i}B{j}C{k}": m ^ n ^ o,
        }
        to_probs[row, 0] = 1 / 8
        for key, parity in terms.items():
            sign = -1.0 if parity else 1.0
            to_probs[row, col[key]] = sign / 8
            # averaging over the inputs the correlator does not depend on
            free = 3 - (len(key) // 2)
            to_corr[col[key] - 1, row] = sign / 2**free
    return to_probs, to_corr


_TO_PROBS, _TO_CORR = _build_transforms()


def probs_to_correlators(flat: np.ndarray) -> np.ndarray:
    """Map ``(..., 64)`` probability tables to ``(..., 26)`` correlators."""
    return np.asarray(flat, dtype=float) @ _TO_CORR.T


def correlators_to_probs(corr: np.ndarray) -> np.ndarray:
    """Map ``(..., 26)`` correlators to ``(..., 64)`` probabilities."""
    corr = np.asarray(corr, dtype=float)
    ones = np.ones(corr.shape[:-1] + (1,))
    return np.concatenate([ones, corr], axis=-1) @ _TO_PROBS.T


@dataclass(frozen=True)
class CorrelatorVector:
    """The 26 expectation values of a box, ordered as ``CORRELATOR_KEYS``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(26)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def singles(self) -> np.ndarray:
        """Shape (3, 2): ``[party, input]``."""
        return self.values[:6].reshape(3, 2)

    @property
    def pairs(self) -> dict[str, np.ndarray]:
        return {
            "AB": self.values[6:10].reshape(2, 2),
            "AC": self.values[10:14].reshape(2, 2),
            "BC": self.values[14:18].reshape(2, 2),
        }

    @property
    def triples(self) -> np.ndarray:
        """Shape (2, 2, 2): ``<A_i B_j C_k>``."""
        return self.values[18:].reshape(2, 2, 2)

    def __getitem__(self, key: str) -> float:
        return float(self.values[CORRELATOR_KEYS.index(key)])

    def as_dict(self) -> dict[str, float]:
        return {key: float(v) for key, v in zip(CORRELATOR_KEYS, self.values)}

    @classmethod
    def from_dict(cls, mapping: Mapping[str, float]) -> "CorrelatorVector":
        """Missing keys default to zero; unknown keys are rejected."""
        unknown = set(mapping) - set(CORRELATOR_KEYS)
        if unknown:
            raise KeyError(f"unknown correlator keys: {sorted(unknown)}")
        return cls(np.array([float(mapping.get(key, 0.0)) for key in CORRELATOR_KEYS]))


def _cell(flat_index: int) -> str:
    i, j, k, m, n, o = np.unravel_index(flat_index, SHAPE)
    return f"P(a{m},b{n},c{o}|A{i},B{j},C{k})"


def check_table(probs: np.ndarray, tol: float = TOL_EXACT) -> None:
    """Raise if ``probs`` is not a nonsignaling box within ``tol``."""
    probs = np.asarray(probs, dtype=float).reshape(SHAPE)
    flat = probs.reshape(64)
    bad = np.flatnonzero(flat < -tol)
    if bad.size:
        cells = ", ".join(_cell(b) for b in bad[:4])
        raise NegativeProbability(f"negative entries at {cells} (min {flat.min():.3e})")

    sums = probs.sum(axis=(3, 4, 5))
    off = np.argwhere(np.abs(sums - 1) > tol)
    if off.size:
        i, j, k = off[0]
        raise NotNormalized(
            f"outcomes for inputs (A{i},B{j},C{k}) sum to {sums[i, j, k]:.15g}"
        )

    # marginal of the other two parties must not depend on this party's input
    for party in range(3):
        marg = probs.sum(axis=3 + party)
        diff = np.abs(np.take(marg, 0, axis=party) - np.take(marg, 1, axis=party))
        if diff.max() > tol:
            idx = np.unravel_index(int(diff.argmax()), diff.shape)
            others = [p for p in range(3) if p != party]
            ins = ",".join(f"{PARTIES[p]}{idx[n]}" for n, p in enumerate(others))
            outs = ",".join(f"{PARTIES[p].lower()}{idx[2 + n]}" for n, p in enumerate(others))
            raise SignalingDetected(
                f"marginal P({outs}|{ins}) depends on {PARTIES[party]}'s input "
                f"(difference {diff.max():.3e})"
            )


class Behavior:
    """Immutable validated nonsignaling box."""

    __slots__ = ("_probs", "_corr")

    def __init__(self, probs, *, tol: float = TOL_EXACT, validate: bool = True):
        arr = np.array(probs, dtype=float)
        if arr.size != 64:
            raise ValueError(f"a box has 64 probabilities, got {arr.size}")
        arr = arr.reshape(SHAPE)
        if validate:
            check_table(arr, tol)
        arr.setflags(write=False)
        self._probs = arr
        self._corr = None

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def flat(self) -> np.ndarray:
        return self._probs.reshape(64)

    @property
    def correlators(self) -> CorrelatorVector:
        if self._corr is None:
            self._corr = CorrelatorVector(probs_to_correlators(self.flat))
        return self._corr

    def allclose(self, other: "Behavior", atol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self._probs - other._probs)) <= atol)

    def distance(self, other: "Behavior") -> float:
        """Largest absolute difference between corresponding probabilities."""
        return float(np.max(np.abs(self._probs - other._probs)))

    def __eq__(self, other):
        if not isinstance(other, Behavior):
            return NotImplemented
        return bool(np.array_equal(self._probs, other._probs))

    def __hash__(self):
        return hash(self._probs.tobytes())

    def __repr__(self):
        nz = int(np.count_nonzero(self.flat))
        return f"Behavior(<{nz} nonzero cells>)"


def from_probabilities(table: Sequence[float] | np.ndarray, tol: float = TOL_EXACT) -> Behavior:
    return Behavior(table, tol=tol)


def to_correlators(b: Behavior) -> CorrelatorVector:
    return b.correlators


def from_correlators(v: CorrelatorVector | Mapping[str, float] | Sequence[float],
                     tol: float = TOL_EXACT) -> Behavior:
    if isinstance(v, Mapping):
        v = CorrelatorVector.from_dict(v)
    elif not isinstance(v, CorrelatorVector):
        v = CorrelatorVector(np.asarray(v, dtype=float))
    return Behavior(correlators_to_probs(v.values), tol=tol)


def white_noise() -> Behavior:
    return Behavior(np.full(SHAPE, 1 / 8))


def mix(terms: Iterable[tuple[float, Behavior]], tol: float = TOL_EXACT) -> Behavior:
    """Convex combination ``sum w * b`` of boxes."""
    terms = list(terms)
    if not terms:
        raise BadWeights("empty mixture")
    weights = np.array([float(w) for w, _ in terms])
    if np.any(weights < -tol):
        raise BadWeights(f"negative weight {weights.min():.3e}")
    if abs(weights.sum() - 1) > tol:
        raise BadWeights(f"weights sum to {weights.sum():.15g}")
    table = sum(w * b.probs for w, b in terms)
    # the convex hull of nonsignaling boxes is nonsignaling; only rounding to check
    return Behavior(table, tol=max(tol, 1e-12))
