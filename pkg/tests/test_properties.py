import numpy as np
from hypothesis import given, settings, strategies as st

from tribox.box import Behavior, correlators_to_probs, probs_to_correlators
from tribox.io import box_from_dict, box_to_dict
from tribox.measures import mermin_discord, svetlichny_discord
from tribox.polytope import membership, vertex_set
from tribox.symmetry import LocalReversibleOp, PERMUTATIONS, apply_lro

bit = st.integers(0, 1)
ops = st.builds(
    LocalReversibleOp,
    st.tuples(bit, bit, bit),
    st.tuples(*[st.tuples(bit, bit)] * 3),
    st.sampled_from(PERMUTATIONS),
)


@st.composite
def r_boxes(draw):
    probs = vertex_set("R").probs
    idx = draw(st.lists(st.integers(0, len(probs) - 1), min_size=1, max_size=6))
    w = np.array(draw(st.lists(st.floats(0.01, 1), min_size=len(idx), max_size=len(idx))))
    w /= w.sum()
    return Behavior(w @ probs[idx], tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(r_boxes(), ops)
def test_discord_is_lro_invariant(b, op):
    c = apply_lro(b, op)
    assert abs(svetlichny_discord(c) - svetlichny_discord(b)) <= 1e-9
    assert abs(mermin_discord(c) - mermin_discord(b)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(r_boxes())
def test_ranges_and_monogamy(b):
    g, q = svetlichny_discord(b), mermin_discord(b)
    assert -1e-12 <= g <= 8 + 1e-12 and -1e-12 <= q <= 4 + 1e-12
    assert g + 2 * q <= 8 + 1e-9


@settings(max_examples=25, deadline=None)
@given(r_boxes())
def test_mixtures_of_r_vertices_are_in_r(b):
    res = membership(b, "R")
    assert res.inside and res.reconstruction_error < 1e-8


@settings(max_examples=60, deadline=None)
@given(r_boxes())
def test_serialization_and_correlator_round_trip(b):
    assert box_from_dict(box_to_dict(b)) == b
    assert np.allclose(correlators_to_probs(probs_to_correlators(b.flat)), b.flat, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(ops, ops, r_boxes())
def test_composition(f, g, b):
    assert apply_lro(b, f.then(g)) == apply_lro(apply_lro(b, f), g)
    assert apply_lro(apply_lro(b, f), f.inverse()) == b
