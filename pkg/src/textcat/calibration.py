"""Map raw decision values to probabilities with a fitted sigmoid.

P(positive | f) = 1 / (1 + exp(a f + b)), with (a, b) chosen to
minimize the negative log likelihood of smoothed targets on held-out
scores. Smoothing pulls targets off 0 and 1 so the likelihood stays
bounded: t+ = (n_pos + 1) / (n_pos + 2), t- = 1 / (n_neg + 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError


@dataclass(frozen=True)
class SigmoidFit:
    """Fitted slope/offset plus convergence diagnostics."""

    a: float
    b: float
    iterations: int
    grad_norm: float
    nll: float

    def probability(self, scores):
        return sigmoid_probability(self.a, self.b, scores)


def sigmoid_probability(a: float, b: float, scores):
    """P = 1 / (1 + exp(a f + b)), computed without overflow."""
    z = a * np.asarray(scores, dtype=np.float64) + b
    out = np.empty_like(z)
    neg = z < 0.0
    out[neg] = 1.0 / (1.0 + np.exp(z[neg]))
    ez = np.exp(-z[~neg])
    out[~neg] = ez / (1.0 + ez)
    if out.ndim == 0:
        return float(out)
    return out


def smoothed_targets(labels: np.ndarray) -> np.ndarray:
    """Per-sample regression targets with add-one smoothing."""
    labels = np.asarray(labels)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = int(np.count_nonzero(labels == -1))
    if n_pos + n_neg != labels.size:
        raise CalibrationError("labels must be +1 or -1")
    if n_pos == 0 or n_neg == 0:
        raise CalibrationError("calibration needs scores from both classes")
    t_pos = (n_pos + 1.0) / (n_pos + 2.0)
    t_neg = 1.0 / (n_neg + 2.0)
    return np.where(labels == 1, t_pos, t_neg)


def negative_log_likelihood(a: float, b: float, scores, targets) -> float:
    """Cross entropy of the sigmoid against (possibly smoothed) targets."""
    z = a * np.asarray(scores, dtype=np.float64) + b
    # ln P = -logaddexp(0, z); ln(1 - P) = z - logaddexp(0, z).
    lse = np.logaddexp(0.0, z)
    return float(np.sum(lse - (1.0 - targets) * z))


def nll_gradient(a: float, b: float, scores, targets) -> tuple[float, float]:
    scores = np.asarray(scores, dtype=np.float64)
    residual = targets - sigmoid_probability(a, b, scores)
    return float(scores @ residual), float(np.sum(residual))


def fit_sigmoid(
    scores,
    labels,
    max_iter: int = 100,
    grad_tol: float = 1e-10,
) -> SigmoidFit:
    """Damped Newton fit of the sigmoid parameters.

    Deterministic; raises CalibrationError when one class is absent.
    Convergence is declared on the gradient max-norm.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise CalibrationError("scores and labels must be equal-length 1-d arrays")
    if not np.all(np.isfinite(scores)):
        raise CalibrationError("scores must be finite")
    targets = smoothed_targets(labels)

    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = int(np.count_nonzero(labels == -1))
    a = 0.0
    b = float(np.log((n_neg + 1.0) / (n_pos + 1.0)))
    nll = negative_log_likelihood(a, b, scores, targets)

    iterations = 0
    for iterations in range(1, max_iter + 1):
        grad_a, grad_b = nll_gradient(a, b, scores, targets)
        grad_norm = max(abs(grad_a), abs(grad_b))
        if grad_norm <= grad_tol:
            iterations -= 1
            break
        p = sigmoid_probability(a, b, scores)
        d = p * (1.0 - p)
        h_aa = float(scores @ (d * scores)) + 1e-12
        h_ab = float(scores @ d)
        h_bb = float(np.sum(d)) + 1e-12
        det = h_aa * h_bb - h_ab * h_ab
        if det <= 0.0:
            raise CalibrationError("singular curvature; cannot fit sigmoid")
        # Newton step on the convex objective, halved until it descends.
        step_a = (h_bb * grad_a - h_ab * grad_b) / det
        step_b = (h_aa * grad_b - h_ab * grad_a) / det
        scale = 1.0
        for _ in range(40):
            new_a = a - scale * step_a
            new_b = b - scale * step_b
            new_nll = negative_log_likelihood(new_a, new_b, scores, targets)
            if new_nll <= nll + 1e-12:
                break
            scale *= 0.5
        else:
            break  # no descent direction left at float precision
        a, b, nll = new_a, new_b, new_nll

    grad_a, grad_b = nll_gradient(a, b, scores, targets)
    return SigmoidFit(
        a=a,
        b=b,
        iterations=iterations,
        grad_norm=max(abs(grad_a), abs(grad_b)),
        nll=nll,
    )
