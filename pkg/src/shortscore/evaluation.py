"""Quadratic Weighted Kappa between human and model grade lists.

The weight matrix penalizes disagreement quadratically in grade distance:
``W[i][j] = (i - j)^2 / (N - 1)^2`` for ``N`` possible ratings. Observed
counts ``O`` pair human rating i with model rating j; the expected matrix
``E`` is the outer product of the two marginal histograms, scaled so that
``sum(E) == sum(O)``. Then ``kappa = 1 - sum(W*O) / sum(W*E)``.

A zero expected-disagreement denominator (both raters constant with the
same single value) raises :class:`DegenerateRatingsError` instead of
returning NaN.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DegenerateRatingsError(ValueError):
    """Both raters constant and identical: chance disagreement is zero."""


@dataclass
class QwkMatrices:
    n_ratings: int
    weight: np.ndarray
    observed: np.ndarray
    expected: np.ndarray
    kappa: float


def weight_matrix(n_ratings: int) -> np.ndarray:
    if n_ratings < 2:
        raise ValueError(f"need at least 2 possible ratings, got {n_ratings}")
    idx = np.arange(n_ratings, dtype=np.float64)
    return (idx[:, None] - idx[None, :]) ** 2 / (n_ratings - 1) ** 2


def qwk(human: Sequence[int], model: Sequence[int],
        grade_min: int, grade_max: int) -> QwkMatrices:
    human = np.asarray(human, dtype=np.int64)
    model = np.asarray(model, dtype=np.int64)
    if human.shape != model.shape or human.ndim != 1:
        raise ValueError("human and model grade lists must be equal-length 1-D")
    if len(human) == 0:
        raise ValueError("cannot compute agreement over zero items")
    if grade_min >= grade_max:
        raise ValueError("grade_min must be < grade_max")
    for name, grades in (("human", human), ("model", model)):
        if grades.min() < grade_min or grades.max() > grade_max:
            raise ValueError(f"{name} grades fall outside [{grade_min}, {grade_max}]")

    n = grade_max - grade_min + 1
    w = weight_matrix(n)
    h = human - grade_min
    m = model - grade_min
    observed = np.zeros((n, n), dtype=np.float64)
    np.add.at(observed, (h, m), 1.0)
    hist_h = np.bincount(h, minlength=n).astype(np.float64)
    hist_m = np.bincount(m, minlength=n).astype(np.float64)
    expected = np.outer(hist_h, hist_m) / len(human)

    denom = float((w * expected).sum())
    if denom == 0.0:
        raise DegenerateRatingsError(
            "both raters gave one identical constant rating; "
            "chance-corrected agreement is undefined")
    numer = float((w * observed).sum())
    kappa = 1.0 - numer / denom
    return QwkMatrices(n_ratings=n, weight=w, observed=observed,
                       expected=expected, kappa=kappa)


def qwk_value(human, model, grade_min: int, grade_max: int) -> float:
    return qwk(human, model, grade_min, grade_max).kappa
