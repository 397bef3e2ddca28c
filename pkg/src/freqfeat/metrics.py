"""Segmentation losses and evaluation metrics.

Losses take soft predictions (probabilities in [0,1]) against binary
ground truth: a soft IoU loss, a clamped BCE loss, their per-level sum,
and the deep-supervision total over three prediction scales (each
bilinearly resized to the ground-truth shape first).

Evaluation metrics binarize the prediction at 0.5 for IoU and Dice; MAE
is computed on the raw probabilities.  All ratio metrics use an epsilon
of 1e-8 so empty-mask cases are defined (empty vs empty scores 1.0).
"""

import math

import numpy as np

from .errors import ParameterError

EPS = 1e-8
BCE_CLAMP = 1e-7


def _as_prob(a, name="pred") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 3 and a.shape[0] == 1:
        a = a[0]
    if a.ndim != 2:
        raise ParameterError(f"{name} must be a 2-D map, got shape {a.shape}")
    if a.min(initial=0.0) < 0.0 or a.max(initial=0.0) > 1.0:
        raise ParameterError(f"{name} values must lie in [0, 1]")
    return a


def _as_binary(a, name="gt") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 3 and a.shape[0] == 1:
        a = a[0]
    if a.ndim != 2:
        raise ParameterError(f"{name} must be a 2-D map, got shape {a.shape}")
    if not np.all((a == 0.0) | (a == 1.0)):
        raise ParameterError(f"{name} values must be exactly 0 or 1")
    return a


def _check_pair(pred, gt, weight=None):
    pred = _as_prob(pred)
    gt = _as_binary(gt)
    if pred.shape != gt.shape:
        raise ParameterError(f"shape mismatch: pred {pred.shape} vs gt {gt.shape}")
    if weight is None:
        w = np.ones_like(pred)
    else:
        w = np.asarray(weight, dtype=np.float64)
        if w.shape != pred.shape:
            raise ParameterError(f"weight shape {w.shape} must match pred {pred.shape}")
        if w.min(initial=0.0) < 0.0:
            raise ParameterError("weights must be nonnegative")
    return pred, gt, w


def loss_iou(pred, gt, weight=None) -> float:
    """Soft weighted IoU loss: 1 - sum(w*p*g) / sum(w*(p + g - p*g)).

    The weight map defaults to all ones.  Epsilon smoothing makes the
    all-empty case a perfect score (loss 0).
    """
    pred, gt, w = _check_pair(pred, gt, weight)
    inter = float(np.sum(w * pred * gt))
    union = float(np.sum(w * (pred + gt - pred * gt)))
    return 1.0 - (inter + EPS) / (union + EPS)


def loss_bce(pred, gt, weight=None) -> float:
    """Weighted mean binary cross-entropy with probabilities clamped to
    [1e-7, 1 - 1e-7]."""
    pred, gt, w = _check_pair(pred, gt, weight)
    p = np.clip(pred, BCE_CLAMP, 1.0 - BCE_CLAMP)
    terms = -(gt * np.log(p) + (1.0 - gt) * np.log(1.0 - p))
    return float(np.sum(w * terms) / np.sum(w))


def loss_level(pred, gt, weight=None) -> float:
    """Single-scale loss: IoU loss plus BCE loss."""
    return loss_iou(pred, gt, weight) + loss_bce(pred, gt, weight)


def upsample_bilinear(a, shape) -> np.ndarray:
    """Resize a 2-D map with bilinear interpolation (half-pixel-center
    convention); output values stay within the input's range."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ParameterError(f"upsample_bilinear needs a 2-D map, got {a.shape}")
    out_h, out_w = shape
    in_h, in_w = a.shape
    if (in_h, in_w) == (out_h, out_w):
        return a.copy()

    def axis_coords(n_out, n_in):
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = np.clip(src, 0.0, n_in - 1.0)
        lo = np.floor(src).astype(np.int64)
        hi = np.minimum(lo + 1, n_in - 1)
        frac = src - lo
        return lo, hi, frac

    ry_lo, ry_hi, fy = axis_coords(out_h, in_h)
    rx_lo, rx_hi, fx = axis_coords(out_w, in_w)
    top = a[ry_lo][:, rx_lo] * (1 - fx) + a[ry_lo][:, rx_hi] * fx
    bot = a[ry_hi][:, rx_lo] * (1 - fx) + a[ry_hi][:, rx_hi] * fx
    return top * (1 - fy[:, np.newaxis]) + bot * fy[:, np.newaxis]


def loss_total(preds, gt) -> float:
    """Deep-supervision loss: each of the three predictions is resized to
    the ground-truth shape and the per-level losses are summed."""
    preds = list(preds)
    if len(preds) != 3:
        raise ParameterError(f"deep supervision expects 3 predictions, got {len(preds)}")
    gt = _as_binary(gt)
    total = 0.0
    for pred in preds:
        p = _as_prob(pred)
        p = np.clip(upsample_bilinear(p, gt.shape), 0.0, 1.0)
        total += loss_level(p, gt)
    return total


# ---------------------------------------------------------------------------
# evaluation metrics
# ---------------------------------------------------------------------------

def _binarize(pred) -> np.ndarray:
    return (_as_prob(pred) >= 0.5).astype(np.float64)


def _inter_union(pred, gt):
    p = _binarize(pred)
    g = _as_binary(gt)
    if p.shape != g.shape:
        raise ParameterError(f"shape mismatch: pred {p.shape} vs gt {g.shape}")
    inter = float(np.sum(p * g))
    union = float(np.sum(p) + np.sum(g)) - inter
    return inter, union


def metric_iou(pred, gt) -> float:
    """Intersection over union of the binarized prediction."""
    inter, union = _inter_union(pred, gt)
    return (inter + EPS) / (union + EPS)


def metric_dice(pred, gt) -> float:
    """Dice overlap; algebraically 2*IoU / (1 + IoU), and computed in the
    smoothed form that keeps that identity exact."""
    inter, union = _inter_union(pred, gt)
    return 2.0 * (inter + EPS) / (union + inter + 2.0 * EPS)


def metric_mae(pred, gt) -> float:
    """Mean absolute error of the raw probabilities against ground truth."""
    p = _as_prob(pred)
    g = _as_binary(gt)
    if p.shape != g.shape:
        raise ParameterError(f"shape mismatch: pred {p.shape} vs gt {g.shape}")
    return float(np.mean(np.abs(p - g)))


def mean_scores(rows):
    """Order-independent means over (iou, dice, mae) triples; uses exact
    compensated summation so chunked and serial reductions agree."""
    rows = list(rows)
    if not rows:
        raise ParameterError("no rows to average")
    n = len(rows)
    return tuple(math.fsum(r[i] for r in rows) / n for i in range(3))
