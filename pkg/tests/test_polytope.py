import numpy as np
import pytest

import oracles
from tribox.box import Behavior, white_noise
from tribox.canonical import class8_box, isotropic_mermin, mermin_box_mm, pr_box, svetlichny_box
from tribox.exceptions import NotInR
from tribox.polytope import (
    Region, classify_region, membership, three_decomposition, verify_decomposition, vertex_set,
)


def test_vertex_set_sizes():
    assert [len(vertex_set(n)) for n in ("L", "L2", "R")] == [64, 160, 176]
    assert [len(vertex_set(n, False)) for n in ("L", "L2", "R")] == [64, 112, 128]
    with pytest.raises(ValueError):
        vertex_set("Q")


def test_inside_with_weights(rng):
    vs = vertex_set("L2")
    w = rng.dirichlet(np.ones(len(vs)) * 0.2)
    b = Behavior(w @ vs.probs)
    res = membership(b, vs)
    assert res.inside and res.reconstruction_error < 1e-8
    assert np.allclose(res.weights @ vs.probs, b.flat, atol=1e-8)
    assert sum(w for _, w in res.support()) == pytest.approx(1)


def test_outside_with_separating_functional():
    res = membership(svetlichny_box(0, 0, 0, 0), "L2")
    assert not res.inside
    assert res.witness.name == "svetlichny:0000" and res.witness.value == pytest.approx(8)
    coeffs = res.separating
    from tribox.box import CORRELATOR_KEYS

    def value(b):
        c = b.correlators
        return sum(coeffs.get(k, 0.0) * c[k] for k in CORRELATOR_KEYS)

    on_vertices = max(value(v) for v in vertex_set("L2").vertices)
    assert on_vertices <= res.separating_bound + 1e-9
    assert value(svetlichny_box(0, 0, 0, 0)) > res.separating_bound + 1e-6


def test_agrees_with_scipy(rng):
    for name in ("L", "L2", "R"):
        vs = vertex_set(name)
        for p in (0.3, 0.6, 0.95):
            b = Behavior(p * class8_box().probs + (1 - p) * white_noise().probs)
            assert membership(b, vs).inside == oracles.scipy_feasible(vs.probs, b.flat)


def test_exact_mode():
    res = membership(mermin_box_mm(0), "L2", exact=True)
    assert res.inside
    assert not membership(mermin_box_mm(0), "L", exact=True).inside


def test_mermin_box_needs_offset_pr_vertices():
    assert membership(mermin_box_mm(0), vertex_set("L2")).inside
    assert not membership(mermin_box_mm(0), vertex_set("L2", pr_offsets=False)).inside


def test_regions():
    assert classify_region(white_noise()) is Region.BELL_LOCAL
    assert classify_region(pr_box(23, 1, 0, 1, 0)) is Region.TWO_WAY_NONLOCAL
    assert classify_region(svetlichny_box(1, 1, 1, 1)) is Region.THREE_WAY_NONLOCAL_IN_R
    assert classify_region(class8_box()) is Region.OUTSIDE_R


def test_three_decomposition_isotropic():
    d = three_decomposition(Behavior(0.4 * svetlichny_box(0, 1, 0, 0).probs + 0.6 * white_noise().probs))
    assert d.mu == pytest.approx(0.4) and d.nu == 0 and d.svet_tag == (0, 1, 0, 0)
    assert np.allclose(d.residual.probs, 1 / 8)
    d = three_decomposition(isotropic_mermin(0.6, 5))
    assert d.mu == 0 and d.nu == pytest.approx(0.6) and d.mermin_variant == 5
    assert d.residual_regions == {"L": True, "L2": True}


def test_three_decomposition_overlapping_mixture():
    # the Svetlichny box shares moduli with the Mermin box pair, so μ is not the mixing weight
    b = Behavior(0.25 * svetlichny_box(0, 0, 1, 0).probs + 0.5 * isotropic_mermin(0.6, 0).probs
                 + 0.25 * white_noise().probs)
    d = three_decomposition(b)
    assert d.mu == pytest.approx(0.05) and d.nu == pytest.approx(0.2)
    assert d.residual_G > 0
    assert verify_decomposition(b, d.terms()) and d.reconstruction_error < 1e-12
    with pytest.raises(NotInR):
        three_decomposition(class8_box())
