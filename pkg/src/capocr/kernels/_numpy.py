"""Pure-numpy implementations of the hot pixel kernels.

These are the fallback path selected by CAPOCR_NO_NUMBA=1 (or when numba is
not importable). Semantics are kept identical to capocr.kernels._numba; the
equivalence is pinned by tests/test_kernels.py and timed by
benchmarks/bench_kernels.py.
"""

import numpy as np

_SHIFTS4 = ((-1, 0), (1, 0), (0, -1), (0, 1))
_SHIFTS8 = _SHIFTS4 + ((-1, -1), (-1, 1), (1, -1), (1, 1))


def correlate2d_replicate(img, kernel):
    """Cross-correlate a 2-D image with an odd-sized kernel.

    Borders are handled by edge replication. Returns float64.
    """
    img = np.asarray(img, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    padded = np.pad(img, ((ry, ry), (rx, rx)), mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, (kh, kw))
    return np.einsum("ijkl,kl->ij", windows, kernel)


def window_stats_3x3(img):
    """Population std and Shannon entropy (bits) of every 3x3 neighborhood.

    Entropy uses the empirical distribution of the 9 window values with one
    bin per distinct value:  H = -sum_v (c_v/9) log2(c_v/9), which equals
    -(1/9) sum over samples of log2(c_sample/9). Borders are edge-replicated.
    """
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    padded = np.pad(img, 1, mode="edge")
    win = np.lib.stride_tricks.sliding_window_view(padded, (3, 3))
    win = win.reshape(h, w, 9)
    mean = win.mean(axis=2)
    var = ((win - mean[..., None]) ** 2).mean(axis=2)
    std = np.sqrt(np.maximum(var, 0.0))
    # counts[y, x, j] = how many of the 9 samples equal sample j
    counts = (win[..., :, None] == win[..., None, :]).sum(axis=3)
    entropy = -np.log2(counts / 9.0).mean(axis=2)
    return std, entropy


def median3x3(img):
    """3x3 median filter with edge replication; kills isolated specks."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    padded = np.pad(img, 1, mode="edge")
    win = np.lib.stride_tricks.sliding_window_view(padded, (3, 3)).reshape(h, w, 9)
    return np.partition(win, 4, axis=2)[:, :, 4]


def label_components(img, connectivity=8):
    """Label connected true pixels, 0 = background.

    Component labels are 1..K in raster order of each component's first
    pixel. Uses iterative minimum-label propagation with pointer jumping.
    """
    fg = np.asarray(img, dtype=bool)
    h, w = fg.shape
    if h == 0 or w == 0 or not fg.any():
        return np.zeros((h, w), dtype=np.int32)
    idx = np.arange(h * w, dtype=np.int64).reshape(h, w)
    lab = idx.copy()  # background pixels self-loop and are masked at the end
    shifts = _SHIFTS8 if connectivity == 8 else _SHIFTS4
    while True:
        prev = lab
        m = lab.copy()
        for dy, dx in shifts:
            ts = (slice(max(0, dy), h + min(0, dy)), slice(max(0, dx), w + min(0, dx)))
            ss = (slice(max(0, -dy), h + min(0, -dy)), slice(max(0, -dx), w + min(0, -dx)))
            both = fg[ts] & fg[ss]
            m[ts] = np.where(both, np.minimum(m[ts], lab[ss]), m[ts])
        flat = m.ravel()
        flat = np.minimum(flat, flat[flat])
        flat = np.minimum(flat, flat[flat])
        lab = np.where(fg, flat.reshape(h, w), idx)
        if np.array_equal(lab, prev):
            break
    roots = lab[fg]
    uniq = np.unique(roots)  # sorted == raster order of first pixels
    out = np.zeros((h, w), dtype=np.int32)
    out[fg] = np.searchsorted(uniq, roots) + 1
    return out


def resize_bilinear(img, out_h, out_w):
    """Bilinear resize of a 2-D float image, pixel-center aligned."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    ys = np.clip((np.arange(out_h) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    xs = np.clip((np.arange(out_w) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    y0 = ys.astype(np.int64)
    x0 = xs.astype(np.int64)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    top = img[np.ix_(y0, x0)] * (1.0 - fx) + img[np.ix_(y0, x1)] * fx
    bot = img[np.ix_(y1, x0)] * (1.0 - fx) + img[np.ix_(y1, x1)] * fx
    return top * (1.0 - fy) + bot * fy
