"""Text/background pixel segmentation via fuzzy C-means.

Every pixel of a gray region is described by the standard deviation and the
Shannon entropy of its 3x3 neighborhood; the two-cluster FCM then separates
high-variation stroke pixels from smooth background. Both features are
polarity-symmetric, so dark-on-light and light-on-dark text binarize the
same way.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import window_stats_3x3


class DegenerateInput(ValueError):
    """Raised when clustering input has too few distinct points."""


@dataclass
class FcmResult:
    centroids: np.ndarray  # (c, d)
    memberships: np.ndarray  # (n, c), rows sum to 1
    iterations_used: int
    objective: float
    objective_history: list


def pixel_features(img):
    """(H, W, 2) float array of [3x3 std, 3x3 entropy in bits] per pixel."""
    img = np.asarray(img)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError(f"pixel_features needs at least 3x3, got {img.shape}")
    std, entropy = window_stats_3x3(np.ascontiguousarray(img, dtype=np.float64))
    return np.stack([std, entropy], axis=-1)


def _memberships(points, centroids, m):
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    u = np.zeros_like(d2)
    zero = d2 <= 0.0
    any_zero = zero.any(axis=1)
    if any_zero.any():
        z = zero[any_zero]
        u[any_zero] = z / z.sum(axis=1, keepdims=True)
    rest = ~any_zero
    if rest.any():
        w = d2[rest] ** (-1.0 / (m - 1.0))
        u[rest] = w / w.sum(axis=1, keepdims=True)
    return u, d2


def fcm(points, c=2, m=2.0, epsilon=1e-4, max_iter=100, seed=0):
    """Bezdek fuzzy C-means on a point set.

    Alternates membership and centroid updates until the largest centroid
    displacement falls below epsilon. Centroids start at c pairwise-distinct
    data points drawn from a seeded permutation. Points coincident with a
    centroid get full membership there.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"expected (n, d) points, got shape {pts.shape}")
    if m <= 1.0:
        raise ValueError("fuzzifier m must be > 1")
    rng = np.random.default_rng(seed)
    centroids = []
    for i in rng.permutation(pts.shape[0]):
        p = pts[i]
        if all(np.any(p != q) for q in centroids):
            centroids.append(p.copy())
        if len(centroids) == c:
            break
    if len(centroids) < c:
        raise DegenerateInput(f"need at least {c} distinct points, found {len(centroids)}")
    centroids = np.asarray(centroids)

    history = []
    iterations = 0
    for iterations in range(1, max_iter + 1):
        u, d2 = _memberships(pts, centroids, m)
        um = u ** m
        history.append(float((um * d2).sum()))
        weights = um.sum(axis=0)
        new = centroids.copy()
        nz = weights > 0.0
        new[nz] = (um.T @ pts)[nz] / weights[nz, None]
        shift = np.sqrt(((new - centroids) ** 2).sum(axis=1)).max()
        centroids = new
        if shift < epsilon:
            break
    u, d2 = _memberships(pts, centroids, m)
    objective = float(((u ** m) * d2).sum())
    return FcmResult(centroids, u, iterations, objective, history)


def otsu_threshold(gray):
    """Otsu's threshold over an 8-bit histogram; None for constant input."""
    g = np.asarray(gray, dtype=np.uint8)
    hist = np.bincount(g.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    omega = np.cumsum(hist) / total
    mu = np.cumsum(hist * np.arange(256)) / total
    mu_t = mu[-1]
    denom = omega * (1.0 - omega)
    with np.errstate(invalid="ignore", divide="ignore"):
        sigma_b = (mu_t * omega - mu) ** 2 / denom
    sigma_b[denom == 0.0] = -1.0
    best = int(np.argmax(sigma_b))
    if sigma_b[best] <= 0.0:
        return None
    return best


def binarize_region(region, m=2.0, epsilon=1e-4, max_iter=100, seed=0):
    """Binarize a gray text region; True marks text pixels.

    Pixel features are z-scored before clustering. The text cluster is the
    one whose centroid carries the larger entropy coordinate (tie: the
    cluster covering fewer pixels). Regions too flat to cluster fall back to
    a global Otsu threshold with the darker side as text.
    """
    region = np.asarray(region)
    feats = pixel_features(region).reshape(-1, 2)
    mean = feats.mean(axis=0)
    std = feats.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    normed = (feats - mean) / std
    try:
        result = fcm(normed, c=2, m=m, epsilon=epsilon, max_iter=max_iter, seed=seed)
    except DegenerateInput:
        return _threshold_fallback(region)
    assign = result.memberships.argmax(axis=1)
    sizes = np.bincount(assign, minlength=2)
    ent = result.centroids[:, 1]
    if ent[0] == ent[1]:
        text_cluster = int(np.argmin(sizes))
    else:
        text_cluster = int(np.argmax(ent))
    return (assign == text_cluster).reshape(region.shape)


def _threshold_fallback(region):
    t = otsu_threshold(region)
    if t is None:
        return np.zeros(region.shape, dtype=bool)
    return np.asarray(region) <= t
