"""Text/non-text band classification and text zone assembly.

Each candidate band is summarized by ten statistics (five over the HSV
value channel, five over the Sobel edge picture) and scored by a small
10-3-1 feed-forward network with logistic activations. Accepted row bands
crossed with accepted column bands yield rectangular text zones.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .raster import rgb_to_gray, rgb_to_hsv, sobel_magnitude

INPUT_DIM = 10
HIDDEN_DIM = 3

CI_FACTOR = 1.96  # 95% normal confidence interval


@dataclass
class Band:
    axis: str  # "row" or "col"
    start: int  # inclusive
    end: int  # inclusive


@dataclass
class TextBox:
    x: int
    y: int
    width: int
    height: int
    score: float = 1.0


@dataclass
class MlpModel:
    w1: np.ndarray  # (10, 3)
    b1: np.ndarray  # (3,)
    w2: np.ndarray  # (3,)
    b2: float
    feat_mean: np.ndarray  # (10,)
    feat_std: np.ndarray  # (10,)
    epoch_losses: list = field(default_factory=list, repr=False)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _stats5(values):
    """mean, 2nd and 3rd central moments, 95% CI bounds of the mean."""
    v = np.asarray(values, dtype=np.float64).ravel()
    n = v.size
    mu = v.mean()
    m2 = ((v - mu) ** 2).mean()
    m3 = ((v - mu) ** 3).mean()
    sd = np.sqrt(m2)
    if n == 1 or sd == 0.0:
        return np.array([mu, 0.0, 0.0, mu, mu])
    half = CI_FACTOR * sd / np.sqrt(n)
    return np.array([mu, m2, m3, mu - half, mu + half])


def band_features(frame, band):
    """10-vector for one band: HSV value-channel stats then edge stats."""
    v_img = rgb_to_hsv(frame)[..., 2]
    e_img = sobel_magnitude(rgb_to_gray(frame)).astype(np.float64)
    return band_features_from_maps(v_img, e_img, band)


def band_features_from_maps(v_img, e_img, band):
    """Same as band_features but over precomputed value/edge maps."""
    h, w = v_img.shape
    limit = h if band.axis == "row" else w
    if band.start > band.end or band.start < 0 or band.end >= limit:
        raise ValueError(f"band {band} empty or out of bounds for {h}x{w}")
    if band.axis == "row":
        sel = (slice(band.start, band.end + 1), slice(None))
    else:
        sel = (slice(None), slice(band.start, band.end + 1))
    return np.concatenate([_stats5(v_img[sel]), _stats5(e_img[sel])])


def mlp_forward(model, features):
    """Network score in (0, 1). Inputs are standardized with the model's stats."""
    x = np.asarray(features, dtype=np.float64)
    if x.shape != (INPUT_DIM,):
        raise ValueError(f"expected {INPUT_DIM} features, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite feature input")
    z = (x - model.feat_mean) / model.feat_std
    hidden = _sigmoid(z @ model.w1 + model.b1)
    return float(_sigmoid(hidden @ model.w2 + model.b2))


def sample_loss_and_grads(w1, b1, w2, b2, x, target):
    """Squared-error loss (o - t)^2 for one sample and its weight gradients."""
    z1 = x @ w1 + b1
    h = _sigmoid(z1)
    z2 = h @ w2 + b2
    o = _sigmoid(z2)
    loss = (o - target) ** 2
    d_o = 2.0 * (o - target) * o * (1.0 - o)
    g_w2 = d_o * h
    g_b2 = d_o
    d_h = d_o * w2 * h * (1.0 - h)
    g_w1 = np.outer(x, d_h)
    g_b1 = d_h
    return loss, g_w1, g_b1, g_w2, g_b2


def mlp_train(features, labels, epochs=500, learning_rate=0.1, seed=0):
    """Train the 10-3-1 network with per-sample SGD on squared error.

    Weights start uniform in [-0.5, 0.5] from a seeded generator and samples
    are shuffled each epoch with the same generator, so results are
    reproducible bit for bit. Per-feature standardization (mean/std over the
    training set) is stored on the returned model.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != INPUT_DIM or x.shape[0] == 0:
        raise ValueError(f"expected non-empty (n, {INPUT_DIM}) feature array, got {x.shape}")
    if y.shape != (x.shape[0],):
        raise ValueError("labels must pair with feature rows")
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    xs = (x - mean) / std

    rng = np.random.default_rng(seed)
    w1 = rng.uniform(-0.5, 0.5, size=(INPUT_DIM, HIDDEN_DIM))
    b1 = rng.uniform(-0.5, 0.5, size=HIDDEN_DIM)
    w2 = rng.uniform(-0.5, 0.5, size=HIDDEN_DIM)
    b2 = rng.uniform(-0.5, 0.5)

    losses = []
    n = xs.shape[0]
    for _ in range(epochs):
        for i in rng.permutation(n):
            _, g_w1, g_b1, g_w2, g_b2 = sample_loss_and_grads(w1, b1, w2, b2, xs[i], y[i])
            w1 -= learning_rate * g_w1
            b1 -= learning_rate * g_b1
            w2 -= learning_rate * g_w2
            b2 -= learning_rate * g_b2
        o = _sigmoid(_sigmoid(xs @ w1 + b1) @ w2 + b2)
        losses.append(float(((o - y) ** 2).mean()))
    return MlpModel(w1, b1, w2, float(b2), mean, std, losses)


def mlp_accuracy(model, features, labels):
    preds = [mlp_forward(model, f) >= 0.5 for f in np.asarray(features, dtype=np.float64)]
    return float(np.mean(np.asarray(preds) == (np.asarray(labels) >= 0.5)))


def localize_text_boxes(frame, bands, model, threshold=0.5,
                        min_zone_width=8, min_zone_height=8):
    """Score candidate bands and intersect accepted rows with accepted columns.

    Every intersection rectangle becomes a TextBox scored min(row, col);
    boxes smaller than the minimum zone size are discarded.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    v_img = rgb_to_hsv(frame)[..., 2]
    e_img = sobel_magnitude(rgb_to_gray(frame)).astype(np.float64)

    def accepted(axis, spans):
        keep = []
        for start, end in spans:
            score = mlp_forward(model, band_features_from_maps(v_img, e_img, Band(axis, start, end)))
            if score >= threshold:
                keep.append((start, end, score))
        return keep

    rows = accepted("row", bands.row_bands)
    cols = accepted("col", bands.col_bands)
    boxes = []
    for r0, r1, rs in rows:
        for c0, c1, cs in cols:
            w = c1 - c0 + 1
            h = r1 - r0 + 1
            if w >= min_zone_width and h >= min_zone_height:
                boxes.append(TextBox(c0, r0, w, h, min(rs, cs)))
    return boxes


def save_localizer_model(model, path):
    doc = {
        "version": 1,
        "standardization": {"mean": model.feat_mean.tolist(), "std": model.feat_std.tolist()},
        "w1": model.w1.tolist(),
        "b1": model.b1.tolist(),
        "w2": model.w2.tolist(),
        "b2": model.b2,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")


def load_localizer_model(path):
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("version") != 1:
        raise ValueError(f"unsupported localizer model version: {doc.get('version')}")
    w1 = np.asarray(doc["w1"], dtype=np.float64)
    b1 = np.asarray(doc["b1"], dtype=np.float64)
    w2 = np.asarray(doc["w2"], dtype=np.float64)
    mean = np.asarray(doc["standardization"]["mean"], dtype=np.float64)
    std = np.asarray(doc["standardization"]["std"], dtype=np.float64)
    if (w1.shape != (INPUT_DIM, HIDDEN_DIM) or b1.shape != (HIDDEN_DIM,)
            or w2.shape != (HIDDEN_DIM,) or mean.shape != (INPUT_DIM,) or std.shape != (INPUT_DIM,)):
        raise ValueError("localizer model has wrong layer dimensions")
    return MlpModel(w1, b1, w2, float(doc["b2"]), mean, std)


def load_band_csv(path):
    """Labeled band dataset: 10 feature columns then a 0/1 label column."""
    feats, labels = [], []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != INPUT_DIM + 1:
                raise ValueError(f"{path}:{lineno}: expected {INPUT_DIM + 1} columns, got {len(parts)}")
            try:
                feats.append([float(p) for p in parts[:INPUT_DIM]])
                labels.append(float(parts[INPUT_DIM]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not feats:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(feats), np.asarray(labels)
