"""Numba-jitted implementations of the hot pixel kernels.

Default path; see capocr.kernels for the selection logic. Loops are written
against the same semantics as capocr.kernels._numpy.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def correlate2d_replicate(img, kernel):
    h, w = img.shape
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    out = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for j in range(kh):
                yy = y + j - ry
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                for i in range(kw):
                    xx = x + i - rx
                    if xx < 0:
                        xx = 0
                    elif xx >= w:
                        xx = w - 1
                    acc += img[yy, xx] * kernel[j, i]
            out[y, x] = acc
    return out


@njit(cache=True)
def window_stats_3x3(img):
    h, w = img.shape
    std = np.empty((h, w), dtype=np.float64)
    entropy = np.empty((h, w), dtype=np.float64)
    vals = np.empty(9, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            n = 0
            for dy in range(-1, 2):
                yy = min(max(y + dy, 0), h - 1)
                for dx in range(-1, 2):
                    xx = min(max(x + dx, 0), w - 1)
                    vals[n] = img[yy, xx]
                    n += 1
            mean = 0.0
            for i in range(9):
                mean += vals[i]
            mean /= 9.0
            var = 0.0
            for i in range(9):
                d = vals[i] - mean
                var += d * d
            var /= 9.0
            std[y, x] = np.sqrt(var) if var > 0.0 else 0.0
            ent = 0.0
            for i in range(9):
                c = 0
                for j in range(9):
                    if vals[j] == vals[i]:
                        c += 1
                ent -= np.log2(c / 9.0)
            entropy[y, x] = ent / 9.0
    return std, entropy


@njit(cache=True)
def median3x3(img):
    h, w = img.shape
    out = np.empty((h, w), dtype=np.float64)
    vals = np.empty(9, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            n = 0
            for dy in range(-1, 2):
                yy = min(max(y + dy, 0), h - 1)
                for dx in range(-1, 2):
                    xx = min(max(x + dx, 0), w - 1)
                    vals[n] = img[yy, xx]
                    n += 1
            out[y, x] = np.median(vals)
    return out


@njit(cache=True)
def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


@njit(cache=True)
def label_components(img, connectivity=8):
    """Two-pass union-find labeling; labels 1..K in raster order of first pixel."""
    h, w = img.shape
    labels = np.zeros((h, w), dtype=np.int32)
    parent = np.zeros(h * w // 2 + 2, dtype=np.int32)
    nxt = 0
    for y in range(h):
        for x in range(w):
            if not img[y, x]:
                continue
            best = -1
            # scanned neighbors: W, N (4-conn) plus NW, NE (8-conn)
            if x > 0 and img[y, x - 1]:
                best = _find(parent, labels[y, x - 1] - 1)
            if y > 0:
                if img[y - 1, x]:
                    r = _find(parent, labels[y - 1, x] - 1)
                    if best < 0 or r < best:
                        if best >= 0:
                            parent[max(r, best)] = min(r, best)
                        best = r
                    elif r != best:
                        parent[r] = best
                if connectivity == 8:
                    if x > 0 and img[y - 1, x - 1]:
                        r = _find(parent, labels[y - 1, x - 1] - 1)
                        b = _find(parent, best) if best >= 0 else -1
                        if b < 0 or r < b:
                            if b >= 0:
                                parent[max(r, b)] = min(r, b)
                            best = r
                        elif r != b:
                            parent[r] = b
                    if x + 1 < w and img[y - 1, x + 1]:
                        r = _find(parent, labels[y - 1, x + 1] - 1)
                        b = _find(parent, best) if best >= 0 else -1
                        if b < 0 or r < b:
                            if b >= 0:
                                parent[max(r, b)] = min(r, b)
                            best = r
                        elif r != b:
                            parent[r] = b
            if best < 0:
                parent[nxt] = nxt
                labels[y, x] = nxt + 1
                nxt += 1
            else:
                labels[y, x] = _find(parent, best) + 1
    # resolve and renumber by raster order of first occurrence
    remap = np.zeros(nxt, dtype=np.int32)
    count = 0
    for y in range(h):
        for x in range(w):
            if labels[y, x] == 0:
                continue
            root = _find(parent, labels[y, x] - 1)
            if remap[root] == 0:
                count += 1
                remap[root] = count
            labels[y, x] = remap[root]
    return labels


@njit(cache=True)
def resize_bilinear(img, out_h, out_w):
    h, w = img.shape
    out = np.empty((out_h, out_w), dtype=np.float64)
    sy = h / out_h
    sx = w / out_w
    for oy in range(out_h):
        yy = (oy + 0.5) * sy - 0.5
        if yy < 0.0:
            yy = 0.0
        elif yy > h - 1.0:
            yy = h - 1.0
        y0 = int(yy)
        y1 = min(y0 + 1, h - 1)
        fy = yy - y0
        for ox in range(out_w):
            xx = (ox + 0.5) * sx - 0.5
            if xx < 0.0:
                xx = 0.0
            elif xx > w - 1.0:
                xx = w - 1.0
            x0 = int(xx)
            x1 = min(x0 + 1, w - 1)
            fx = xx - x0
            top = img[y0, x0] * (1.0 - fx) + img[y0, x1] * fx
            bot = img[y1, x0] * (1.0 - fx) + img[y1, x1] * fx
            out[oy, ox] = top * (1.0 - fy) + bot * fy
    return out
