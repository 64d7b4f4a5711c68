import numpy as np
import pytest
from sklearn.base import clone

from tribox.box import white_noise
from tribox.canonical import class8_box, isotropic_mermin, isotropic_svetlichny, pr_box
from tribox.estimators import CorrelatorTransformer, DiscordTransformer, RegionClassifier, ThreeDecomposer


def _X():
    return np.array([b.flat for b in (white_noise(), isotropic_svetlichny(0.75), isotropic_mermin(0.75),
                                      pr_box(13, 0, 1, 0, 1), class8_box())])


def test_transformers():
    X = _X()
    C = CorrelatorTransformer().fit_transform(X)
    assert C.shape == (5, 26)
    assert np.allclose(CorrelatorTransformer().fit(X).inverse_transform(C), X)
    D = DiscordTransformer().fit_transform(X)
    assert np.allclose(D[:3], [[0, 0], [6, 0], [0, 3]])
    assert DiscordTransformer(candidates=True).fit_transform(X).shape == (5, 18)
    assert np.allclose(ThreeDecomposer().fit_transform(X)[1:3], [[0.75, 0], [0, 0.75]])


def test_classifier():
    clf = RegionClassifier().fit(_X())
    pred = clf.predict(_X())
    assert list(pred) == ["BellLocal", "ThreeWayNonlocalInR", "TwoWayNonlocal", "TwoWayNonlocal", "OutsideR"]
    assert clf.score(_X(), pred) == 1.0
    assert clone(clf).get_params() == {"pr_offsets": True, "tol": 1e-9}


def test_validation():
    with pytest.raises(ValueError):
        DiscordTransformer().fit(np.ones((2, 64)))
    with pytest.raises(Exception):
        DiscordTransformer().transform(_X())
