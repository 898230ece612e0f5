"""Sigmoid calibration: frozen arithmetic, gradient checks, recovery."""

import math

import numpy as np
import pytest

from textcat.calibration import (
    fit_sigmoid,
    negative_log_likelihood,
    nll_gradient,
    sigmoid_probability,
    smoothed_targets,
)
from textcat.errors import CalibrationError


def test_smoothed_targets_arithmetic():
    labels = np.array([1, 1, 1, -1, -1])
    targets = smoothed_targets(labels)
    # n_pos = 3 -> (3+1)/(3+2); n_neg = 2 -> 1/(2+2).
    assert np.allclose(targets[:3], 4.0 / 5.0, atol=1e-15)
    assert np.allclose(targets[3:], 1.0 / 4.0, atol=1e-15)


def test_initial_point_frozen_by_hand():
    # Two symmetric scores: t = (2/3, 1/3), start at a=0, b=ln(2/2)=0,
    # so every P is 1/2: NLL = 2 ln 2, grad_a = 1/3, grad_b = 0.
    scores = np.array([1.0, -1.0])
    targets = smoothed_targets(np.array([1, -1]))
    assert abs(negative_log_likelihood(0.0, 0.0, scores, targets) - 2 * math.log(2)) < 1e-14
    grad_a, grad_b = nll_gradient(0.0, 0.0, scores, targets)
    assert abs(grad_a - 1.0 / 3.0) < 1e-14
    assert abs(grad_b) < 1e-14


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(31)
    scores = rng.normal(size=200)
    labels = np.where(rng.random(200) < 0.5, 1, -1)
    labels[0], labels[1] = 1, -1
    targets = smoothed_targets(labels)
    h = 1e-6
    for a, b in [(0.0, 0.0), (-1.5, 0.3), (2.0, -1.0), (-0.2, 0.9)]:
        grad_a, grad_b = nll_gradient(a, b, scores, targets)
        fd_a = (
            negative_log_likelihood(a + h, b, scores, targets)
            - negative_log_likelihood(a - h, b, scores, targets)
        ) / (2 * h)
        fd_b = (
            negative_log_likelihood(a, b + h, scores, targets)
            - negative_log_likelihood(a, b - h, scores, targets)
        ) / (2 * h)
        assert abs(grad_a - fd_a) <= 1e-5 * max(1.0, abs(fd_a))
        assert abs(grad_b - fd_b) <= 1e-5 * max(1.0, abs(fd_b))


def test_recovers_known_sigmoid():
    rng = np.random.default_rng(8)
    scores = rng.uniform(-3.0, 3.0, size=4000)
    p_true = 1.0 / (1.0 + np.exp(-2.0 * scores))
    labels = np.where(rng.random(4000) < p_true, 1, -1)
    fit = fit_sigmoid(scores, labels)
    assert abs(fit.a - (-2.0)) < 0.15
    assert abs(fit.b) < 0.15
    assert fit.grad_norm <= 1e-8


def test_probability_orientation_after_fit():
    # Positives score high, so the fitted slope must be negative and
    # P must increase with the score.
    scores = np.concatenate([np.linspace(0.5, 2.0, 20), np.linspace(-2.0, -0.5, 20)])
    labels = np.array([1] * 20 + [-1] * 20)
    fit = fit_sigmoid(scores, labels)
    assert fit.a < 0.0
    probs = fit.probability(np.array([-2.0, 0.0, 2.0]))
    assert probs[0] < probs[1] < probs[2]


def test_newton_descends_from_the_start():
    rng = np.random.default_rng(5)
    scores = rng.normal(size=300)
    labels = np.where(scores + rng.normal(scale=0.7, size=300) > 0, 1, -1)
    if len(set(labels.tolist())) < 2:
        pytest.skip("degenerate draw")
    targets = smoothed_targets(labels)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = labels.size - n_pos
    initial = negative_log_likelihood(
        0.0, math.log((n_neg + 1.0) / (n_pos + 1.0)), scores, targets
    )
    fit = fit_sigmoid(scores, labels)
    assert fit.nll <= initial + 1e-12


def test_extreme_scores_stay_finite():
    scores = np.array([-1e8, -1.0, 1.0, 1e8])
    labels = np.array([-1, -1, 1, 1])
    fit = fit_sigmoid(scores, labels)
    assert np.isfinite(fit.nll)
    probs = fit.probability(scores)
    assert np.all(np.isfinite(probs))
    assert np.all((probs >= 0.0) & (probs <= 1.0))
    assert np.isfinite(sigmoid_probability(-2.0, 0.0, 1e9))


def test_single_class_is_an_error():
    with pytest.raises(CalibrationError):
        fit_sigmoid(np.array([1.0, 2.0]), np.array([1, 1]))
    with pytest.raises(CalibrationError):
        fit_sigmoid(np.array([1.0]), np.array([0]))


def test_fit_is_deterministic():
    rng = np.random.default_rng(77)
    scores = rng.normal(size=500)
    labels = np.where(scores > 0.2, 1, -1)
    first = fit_sigmoid(scores, labels)
    second = fit_sigmoid(scores, labels)
    assert (first.a, first.b) == (second.a, second.b)
