"""Multiple-frame integration and candidate text band extraction.

A window of consecutive frames is collapsed with a per-pixel temporal
median, which suppresses moving background while preserving static caption
overlays. Rows and columns whose edge density is too low relative to the
frame are then eliminated; what survives is grouped into candidate bands.
"""

from dataclasses import dataclass

import numpy as np

from .raster import rgb_to_gray, sobel_magnitude


@dataclass
class CandidateBands:
    row_bands: list  # (start_row, end_row) inclusive, sorted, disjoint
    col_bands: list  # (start_col, end_col) inclusive, sorted, disjoint


def integrate_frames(frames):
    """Per-pixel, per-channel temporal median of a frame window.

    Even-length windows take the lower median so output values stay within
    the 8-bit input value set. A single-frame window is returned unchanged.
    """
    if len(frames) == 0:
        raise ValueError("frame window is empty")
    first = np.asarray(frames[0])
    for f in frames[1:]:
        if np.asarray(f).shape != first.shape:
            raise ValueError("all frames in a window must share dimensions")
    if len(frames) == 1:
        return first.copy()
    stack = np.sort(np.stack([np.asarray(f) for f in frames], axis=0), axis=0)
    return stack[(len(frames) - 1) // 2]


def candidate_bands(integrated, edge_density_threshold=1.5, min_band_thickness=4):
    """Rows/columns that plausibly contain text, grouped into bands.

    A row (column) survives when its mean Sobel edge magnitude is at least
    edge_density_threshold times the global mean; runs of surviving lines
    thinner than min_band_thickness are dropped. A zero global mean means no
    edges anywhere, hence no bands.
    """
    if edge_density_threshold < 0 or min_band_thickness < 0:
        raise ValueError("thresholds must be non-negative")
    edges = sobel_magnitude(rgb_to_gray(integrated)).astype(np.float64)
    global_mean = edges.mean()
    if global_mean == 0:
        return CandidateBands([], [])
    cut = edge_density_threshold * global_mean
    rows = _runs(edges.mean(axis=1) >= cut, min_band_thickness)
    cols = _runs(edges.mean(axis=0) >= cut, min_band_thickness)
    return CandidateBands(rows, cols)


def _runs(mask, min_len):
    """Maximal runs of True in mask, as inclusive (start, end), length >= min_len."""
    out = []
    start = None
    for i, v in enumerate(mask):
        if v and start is None:
            start = i
        elif not v and start is not None:
            if i - start >= min_len:
                out.append((start, i - 1))
            start = None
    if start is not None and len(mask) - start >= min_len:
        out.append((start, len(mask) - 1))
    return out
