"""Input checks shared by the estimators."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .box import SHAPE, TOL_QUANTUM, Behavior, check_table


def check_behaviors(X, tol: float = TOL_QUANTUM, validate: bool = True) -> np.ndarray:
    """Coerce boxes to a float array of shape ``(n_samples, 64)``.

    Accepts a sequence of ``Behavior``, an ``(n, 64)`` array or an
    ``(n, 2, 2, 2, 2, 2, 2)`` array.  With ``validate`` every row must be a
    nonsignaling box within ``tol``.
    """
    if isinstance(X, Behavior):
        X = [X]
    if len(X) and isinstance(X[0], Behavior):
        arr = np.array([b.flat for b in X])
        validate = False
    else:
        arr = np.asarray(X, dtype=float)
        if arr.ndim == 7 and arr.shape[1:] == SHAPE:
            arr = arr.reshape(len(arr), 64)
        arr = check_array(arr, dtype=float)
        if arr.shape[1] != 64:
            raise ValueError(f"expected 64 probabilities per row, got {arr.shape[1]}")
    if validate:
        for n, row in enumerate(arr):
            try:
                check_table(row, tol)
            except ValueError as exc:
                raise type(exc)(f"row {n}: {exc}") from exc
    return arr


def check_correlators(X) -> np.ndarray:
    arr = check_array(X, dtype=float)
    if arr.shape[1] != 26:
        raise ValueError(f"expected 26 correlators per row, got {arr.shape[1]}")
    return arr
