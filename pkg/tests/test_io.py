import json

import numpy as np
import pytest

from tribox.box import Behavior
from tribox.canonical import class8_box, mermin_box_nmm
from tribox.io import box_from_dict, box_to_dict, dumps, read_box, write_box
from tribox.quantum import born_box, gghz, settings_sd_xy


@pytest.mark.parametrize("b", [mermin_box_nmm(17), class8_box(), born_box(gghz(0.37), settings_sd_xy())])
def test_round_trip_is_bit_exact(tmp_path, b):
    path = tmp_path / "box.json"
    write_box(b, path)
    assert read_box(path) == b
    assert json.loads(path.read_text())["format"] == "tribox-v1"


def test_correlator_only_and_mismatch():
    b = class8_box()
    d = box_to_dict(b)
    assert box_from_dict({"format": "tribox-v1", "correlators": d["correlators"]}) == b
    d["correlators"]["A0B0"] = 0.5
    with pytest.raises(ValueError, match="A0B0"):
        box_from_dict(d)
    with pytest.raises(ValueError):
        box_from_dict({"format": "other", "probs": list(b.flat)})
    with pytest.raises(ValueError):
        box_from_dict({"format": "tribox-v1", "probs": [0.1] * 10})


def test_dumps_is_deterministic():
    b = born_box(gghz(0.2), settings_sd_xy())
    assert dumps(box_to_dict(b)) == dumps(box_to_dict(Behavior(b.probs)))
    assert "-0," not in dumps({"x": [-0.0, 1e-300]}).replace(" ", "")
