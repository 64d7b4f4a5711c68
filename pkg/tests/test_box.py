import itertools

import numpy as np
import pytest

import oracles
from tribox.box import (
    CORRELATOR_KEYS, Behavior, CorrelatorVector, correlators_to_probs, from_correlators, mix,
    probs_to_correlators, white_noise,
)
from tribox.canonical import pr_box, svetlichny_box
from tribox.exceptions import NegativeProbability, NotNormalized, SignalingDetected


def test_correlators_match_brute_force(rng):
    P = np.einsum("k,kabcdef->abcdef", rng.dirichlet(np.ones(3)),
                  np.array([oracles.svetlichny_box(0, 1, 0, 1), oracles.pr12(1, 0, 1, 1),
                            oracles.det_box(1, 0, 1, 1, 0, 1)]))
    c = Behavior(P).correlators
    assert c["A1"] == pytest.approx(oracles.correlator(P, (0,), (1,)))
    assert c["B0C1"] == pytest.approx(oracles.correlator(P, (1, 2), (0, 1)))
    for i, j, k in itertools.product((0, 1), repeat=3):
        assert c[f"A{i}B{j}C{k}"] == pytest.approx(oracles.triple(P, i, j, k), abs=1e-14)


def test_keys_layout():
    assert len(CORRELATOR_KEYS) == 26
    assert CORRELATOR_KEYS[18:] == tuple(f"A{i}B{j}C{k}" for i in (0, 1) for j in (0, 1) for k in (0, 1))


def test_round_trip(rng):
    p = Behavior(oracles.svetlichny_box(1, 1, 0, 0)).flat
    assert np.allclose(correlators_to_probs(probs_to_correlators(p)), p, atol=1e-15)
    b = from_correlators(CorrelatorVector(np.zeros(26)))
    assert b == white_noise()


def test_rejections():
    P = np.full((2,) * 6, 1 / 8)
    P[0, 0, 0, 0, 0, 0] += 0.1
    with pytest.raises(NotNormalized):
        Behavior(P)
    P = np.full((2,) * 6, 1 / 8)
    P[0, 0, 0, 0, 0, 0], P[0, 0, 0, 0, 0, 1] = -0.01, 1 / 8 + 0.01
    with pytest.raises(NegativeProbability):
        Behavior(P)
    # Alice's input steers Bob: B copies A's input
    sig = oracles.table(lambda i, j, k, m, n, o: n == i and m == 0 and o == 0, 1.0)
    with pytest.raises(SignalingDetected, match="A's input"):
        Behavior(sig)
    with pytest.raises(ValueError):
        Behavior(np.zeros(10))


def test_immutable_and_equality():
    b = svetlichny_box(0, 0, 0, 0)
    with pytest.raises(ValueError):
        b.probs[0, 0, 0, 0, 0, 0] = 1
    assert b == svetlichny_box(0, 0, 0, 0) and hash(b) == hash(svetlichny_box(0, 0, 0, 0))
    assert b != svetlichny_box(0, 0, 0, 1)


def test_mix():
    b = mix([(0.5, pr_box(12, 0, 0, 0, 0)), (0.5, white_noise())])
    assert b.correlators["A0B0"] == pytest.approx(0.5)
    with pytest.raises(ValueError):
        mix([(0.7, white_noise()), (0.7, white_noise())])
