"""Raster primitives shared by the whole pipeline.

Images are numpy arrays addressed [row, column] with origin top-left,
x = column and y = row:

    RGB frame   uint8   (H, W, 3)
    gray image  uint8   (H, W)
    HSV image   float64 (H, W, 3), h in [0, 360), s and v in [0, 1]
    binary      bool    (H, W), True = text pixel

All functions are pure; none mutate their inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .kernels import correlate2d_replicate, label_components

DIRECTIONS = ("horizontal", "vertical", "diagonal", "anti_diagonal")

GRAY_WEIGHTS = (0.299, 0.587, 0.114)  # ITU-R BT.601

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)


def rgb_to_gray(frame):
    """Luma conversion, rounded half-up and clamped to [0, 255]."""
    frame = np.asarray(frame)
    r, g, b = GRAY_WEIGHTS
    gray = r * frame[..., 0] + g * frame[..., 1] + b * frame[..., 2]
    return np.clip(np.floor(gray + 0.5), 0, 255).astype(np.uint8)


def rgb_to_hsv(frame):
    """Hexcone RGB -> HSV; h in degrees [0, 360), s = 0 for achromatic pixels."""
    rgb = np.asarray(frame, dtype=np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    v = rgb.max(axis=-1)
    delta = v - rgb.min(axis=-1)
    s = np.where(v > 0, delta / np.where(v > 0, v, 1.0), 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        hr = (g - b) / delta
        hg = (b - r) / delta + 2.0
        hb = (r - g) / delta + 4.0
    h = np.where(v == r, hr, np.where(v == g, hg, hb))
    h = np.where(delta > 0, h, 0.0) * 60.0
    h = np.mod(h, 360.0)
    return np.stack([h, s, v], axis=-1)


def sobel_magnitude(img):
    """|Gx| + |Gy| with 3x3 Sobel kernels, edge-replicated, clamped to 8 bits."""
    img = np.asarray(img)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError(f"sobel_magnitude needs at least 3x3, got {img.shape}")
    f = img.astype(np.float64)
    gx = correlate2d_replicate(f, SOBEL_X)
    gy = correlate2d_replicate(f, SOBEL_Y)
    return np.clip(np.abs(gx) + np.abs(gy), 0, 255).astype(np.uint8)


def projection(img, direction):
    """Per-scanline true-pixel counts along the given direction.

    horizontal -> one entry per row; vertical -> per column; diagonal ->
    per value of (x - y + height - 1); anti_diagonal -> per value of (x + y).
    """
    b = np.asarray(img, dtype=bool)
    h, w = b.shape
    if direction == "horizontal":
        return b.sum(axis=1, dtype=np.int64)
    if direction == "vertical":
        return b.sum(axis=0, dtype=np.int64)
    ys, xs = np.nonzero(b)
    if direction == "diagonal":
        return np.bincount(xs - ys + h - 1, minlength=w + h - 1).astype(np.int64)
    if direction == "anti_diagonal":
        return np.bincount(xs + ys, minlength=w + h - 1).astype(np.int64)
    raise ValueError(f"unknown direction: {direction!r}")


def transitions(img, direction):
    """Per-scanline count of (false, true) adjacent pairs along the direction.

    Scanlines are indexed exactly like projection(). Pairs are scanned in
    increasing coordinate order; the first pixel of a line has no predecessor.
    """
    b = np.asarray(img, dtype=bool)
    h, w = b.shape
    if direction == "horizontal":
        return (b[:, 1:] & ~b[:, :-1]).sum(axis=1, dtype=np.int64)
    if direction == "vertical":
        return (b[1:, :] & ~b[:-1, :]).sum(axis=0, dtype=np.int64)
    if direction == "diagonal":
        rise = b[1:, 1:] & ~b[:-1, :-1]  # (y, x) true, (y-1, x-1) false
        ys, xs = np.nonzero(rise)
        return np.bincount((xs + 1) - (ys + 1) + h - 1, minlength=w + h - 1).astype(np.int64)
    if direction == "anti_diagonal":
        rise = b[:-1, 1:] & ~b[1:, :-1]  # (y, x) true, (y+1, x-1) false
        ys, xs = np.nonzero(rise)
        return np.bincount(ys + xs + 1, minlength=w + h - 1).astype(np.int64)
    raise ValueError(f"unknown direction: {direction!r}")


@dataclass
class ComponentLabeling:
    """Partition of the true pixels of a binary image into connected components."""

    labels: np.ndarray  # int32 (H, W), 0 = background
    component_count: int
    bounding_boxes: list  # (x, y, w, h) for label i+1 at index i
    pixel_counts: np.ndarray  # int64, per label
    _sorted_yx: np.ndarray = field(repr=False, default=None)
    _offsets: np.ndarray = field(repr=False, default=None)

    def pixels(self, label):
        """(ys, xs) arrays of the pixels carrying the given label, raster order."""
        if not 1 <= label <= self.component_count:
            raise ValueError(f"label {label} out of range 1..{self.component_count}")
        lo, hi = self._offsets[label - 1], self._offsets[label]
        return self._sorted_yx[lo:hi, 0], self._sorted_yx[lo:hi, 1]


def connected_components(img, connectivity=8):
    """Label connected true pixels (8-connected by default).

    Labels are 1..K assigned in raster order of each component's first pixel.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    b = np.ascontiguousarray(np.asarray(img, dtype=bool))
    labels = label_components(b, connectivity)
    count = int(labels.max(initial=0))
    if count == 0:
        return ComponentLabeling(labels, 0, [], np.zeros(0, dtype=np.int64),
                                 np.zeros((0, 2), dtype=np.int64), np.zeros(1, dtype=np.int64))
    ys, xs = np.nonzero(labels)
    vals = labels[ys, xs]
    order = np.argsort(vals, kind="stable")  # raster order preserved within label
    sorted_yx = np.stack([ys[order], xs[order]], axis=1)
    counts = np.bincount(vals, minlength=count + 1)[1:].astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    boxes = []
    for i in range(count):
        lo, hi = offsets[i], offsets[i + 1]
        cy = sorted_yx[lo:hi, 0]
        cx = sorted_yx[lo:hi, 1]
        x0, y0 = int(cx.min()), int(cy.min())
        boxes.append((x0, y0, int(cx.max()) - x0 + 1, int(cy.max()) - y0 + 1))
    return ComponentLabeling(labels, count, boxes, counts, sorted_yx, offsets)
