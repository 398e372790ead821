"""Fixed 160-dimensional glyph descriptor.

Layout: 4 directional projection profiles resampled to 18 bins (72), the
same for 0->1 transition profiles (72), 8 occlusion features describing
interior holes, and 8 diacritic features - in that order. The layout
identifier is stored in recognizer model files so prototypes and queries
always agree.
"""

import numpy as np

from .raster import DIRECTIONS, connected_components, projection, transitions

PROFILE_BINS = 18
FEATURE_DIM = 160
FEATURE_LAYOUT_ID = "proj18x4+trans18x4+occl8+diac8:v1"


def resample_profile(profile, bins=PROFILE_BINS):
    """Resample a profile to a fixed bin count, preserving total mass.

    Linear interpolation of the cumulative profile; bin k receives the mass
    between fractions k/bins and (k+1)/bins of the profile length.
    """
    prof = np.asarray(profile, dtype=np.float64)
    length = prof.size
    if length == 0:
        return np.zeros(bins)
    cum = np.concatenate([[0.0], np.cumsum(prof)])
    positions = np.linspace(0.0, length, bins + 1)
    return np.diff(np.interp(positions, np.arange(length + 1, dtype=np.float64), cum))


def _tight_crop(img):
    ys, xs = np.nonzero(img)
    if ys.size == 0:
        raise ValueError("empty glyph segment")
    y0, y1 = int(ys.min()), int(ys.max())
    x0, x1 = int(xs.min()), int(xs.max())
    return img[y0 : y1 + 1, x0 : x1 + 1], (x0, y0)


def projection_features(seg):
    """72 reals: per direction, the 18-bin resampled projection, sum 1."""
    crop, _ = _tight_crop(np.asarray(seg.image, dtype=bool))
    total = float(crop.sum())
    parts = [resample_profile(projection(crop, d)) / total for d in DIRECTIONS]
    return np.concatenate(parts)


def transition_features(seg):
    """72 reals: per direction, the 18-bin resampled 0->1 transition profile.

    The crop is padded with a one-pixel false border first, so a stroke that
    starts at the glyph boundary still yields a rising edge; each profile is
    normalized by its own sum (all-zero profiles stay zero).
    """
    crop, _ = _tight_crop(np.asarray(seg.image, dtype=bool))
    padded = np.pad(crop, 1, mode="constant", constant_values=False)
    parts = []
    for d in DIRECTIONS:
        prof = transitions(padded, d)
        trim = 1 if d in ("horizontal", "vertical") else 2
        prof = prof[trim:-trim].astype(np.float64)
        total = prof.sum()
        parts.append(resample_profile(prof) / total if total > 0 else np.zeros(PROFILE_BINS))
    return np.concatenate(parts)


def occlusion_features(seg):
    """8 reals describing interior holes (the stroke's internal contours).

    Holes are 4-connected background components of the tight crop that do
    not touch its border. Features: count; total hole area over crop area;
    largest hole centroid x, y (relative to the crop); largest hole relative
    width, height; second-largest hole area ratio; fraction of hole pixels
    above the baseline.
    """
    crop, (_, y_off) = _tight_crop(np.asarray(seg.image, dtype=bool))
    ch, cw = crop.shape
    labeling = connected_components(~crop, connectivity=4)
    holes = []
    for label in range(1, labeling.component_count + 1):
        ys, xs = labeling.pixels(label)
        if ys.min() == 0 or xs.min() == 0 or ys.max() == ch - 1 or xs.max() == cw - 1:
            continue
        holes.append((ys, xs))
    if not holes:
        return np.zeros(8)
    holes.sort(key=lambda h: -h[0].size)
    area = float(ch * cw)
    total_px = sum(h[0].size for h in holes)
    ys, xs = holes[0]
    feats = np.zeros(8)
    feats[0] = len(holes)
    feats[1] = total_px / area
    feats[2] = (float(xs.mean()) + 0.5) / cw
    feats[3] = (float(ys.mean()) + 0.5) / ch
    feats[4] = (xs.max() - xs.min() + 1) / cw
    feats[5] = (ys.max() - ys.min() + 1) / ch
    feats[6] = holes[1][0].size / area if len(holes) > 1 else 0.0
    baseline_local = seg.baseline_row - y_off
    above = sum(int((h[0] < baseline_local).sum()) for h in holes)
    feats[7] = above / total_px
    return feats


def diacritic_features(seg):
    """8 reals over the diacritics attached to the segment.

    Coordinates are relative to the segment's full-height column slice;
    areas are relative to the tight bounding box of the body pixels. All
    ratios are clipped into [0, 1].
    """
    diacritics = seg.attached_diacritics
    if not diacritics:
        return np.zeros(8)
    img = np.asarray(seg.image, dtype=bool)
    crop, _ = _tight_crop(img)
    bbox_area = float(crop.shape[0] * crop.shape[1])
    slice_h = img.shape[0]
    x0 = seg.column_span[0]
    slice_w = seg.column_span[1] - x0 + 1
    total = sum(d.ys.size for d in diacritics)
    cxs = [float(d.xs.mean()) - x0 + 0.5 for d in diacritics]
    cys = [float(d.ys.mean()) + 0.5 for d in diacritics]
    largest = max(diacritics, key=lambda d: d.ys.size)
    feats = np.zeros(8)
    feats[0] = sum(1 for d in diacritics if d.above)
    feats[1] = sum(1 for d in diacritics if not d.above)
    feats[2] = min(1.0, total / bbox_area)
    feats[3] = min(1.0, max(0.0, float(np.mean(cxs)) / slice_w))
    feats[4] = min(1.0, max(0.0, float(np.mean(cys)) / slice_h))
    feats[5] = min(1.0, largest.bbox[2] / slice_w)
    feats[6] = min(1.0, largest.bbox[3] / slice_h)
    feats[7] = 1.0
    return feats


def extract_features(seg):
    """The full 160-vector: [projections, transitions, occlusions, diacritics]."""
    vec = np.concatenate([
        projection_features(seg),
        transition_features(seg),
        occlusion_features(seg),
        diacritic_features(seg),
    ])
    if vec.shape != (FEATURE_DIM,):
        raise AssertionError(f"feature layout produced {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("non-finite glyph features")
    return vec
