"""Text line preparation: Gabor enhancement, height normalization, baseline
detection, diacritic separation and vertical-projection glyph segmentation.

The canonical order for a localized gray region is enhance -> binarize ->
normalize to 26 px -> baseline -> diacritics -> segments; line_from_region
runs the whole chain.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .binarizer import binarize_region, otsu_threshold
from .kernels import correlate2d_replicate, resize_bilinear
from .raster import connected_components, projection

TARGET_HEIGHT = 26

DEFAULT_ORIENTATIONS = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)
DEFAULT_GAMMA = 0.5
DEFAULT_SIGMA_PER_LAMBDA = 0.56
DEFAULT_LAMBDA_PER_STROKE = 2.0


@dataclass
class GaborParams:
    lam: float  # wavelength, pixels
    theta: float  # orientation, radians
    phi: float = 0.0  # phase offset, radians
    gamma: float = DEFAULT_GAMMA  # spatial aspect ratio
    sigma: float = 0.0  # Gaussian envelope std, pixels
    kernel_radius: int = 0


@dataclass
class Diacritic:
    ys: np.ndarray
    xs: np.ndarray
    bbox: tuple  # (x, y, w, h)
    above: bool


@dataclass
class TextLine:
    image: np.ndarray  # bool, height TARGET_HEIGHT
    baseline_row: int
    diacritics: list
    body: np.ndarray  # image minus diacritic pixels


@dataclass
class GlyphSegment:
    image: np.ndarray  # column slice of body, full line height
    column_span: tuple  # (start, end) inclusive, line coordinates
    baseline_row: int
    attached_diacritics: list = field(default_factory=list)


def gabor_kernel(params):
    """Sample the Gabor function on integer offsets in [-r, r]^2.

    G(x, y) = exp(-(x'^2 + gamma^2 y'^2) / (2 sigma^2)) * cos(2 pi x'/lam + phi)
    with x' = x cos(theta) + y sin(theta), y' = -x sin(theta) + y cos(theta).
    The center value is cos(phi).
    """
    if params.lam <= 0 or params.sigma <= 0 or params.gamma <= 0:
        raise ValueError(f"lambda, sigma and gamma must be positive: {params}")
    r = int(params.kernel_radius)
    if r < 1:
        raise ValueError("kernel_radius must be at least 1")
    ys, xs = np.mgrid[-r : r + 1, -r : r + 1].astype(np.float64)
    xp = xs * math.cos(params.theta) + ys * math.sin(params.theta)
    yp = -xs * math.sin(params.theta) + ys * math.cos(params.theta)
    envelope = np.exp(-(xp ** 2 + params.gamma ** 2 * yp ** 2) / (2.0 * params.sigma ** 2))
    return envelope * np.cos(2.0 * math.pi * xp / params.lam + params.phi)


def estimate_stroke_width(binary):
    """Mode of the horizontal run lengths of true pixels, at least 2."""
    b = np.asarray(binary, dtype=bool)
    runs = []
    for row in b:
        length = 0
        for v in row:
            if v:
                length += 1
            elif length:
                runs.append(length)
                length = 0
        if length:
            runs.append(length)
    if not runs:
        return 2
    counts = np.bincount(runs)
    return max(2, int(counts.argmax()))


def default_gabor_bank(stroke_width, orientations=DEFAULT_ORIENTATIONS, phi=0.0,
                       gamma=DEFAULT_GAMMA, sigma_per_lambda=DEFAULT_SIGMA_PER_LAMBDA,
                       lambda_per_stroke=DEFAULT_LAMBDA_PER_STROKE):
    lam = lambda_per_stroke * max(2, stroke_width)
    sigma = sigma_per_lambda * lam
    radius = max(1, math.ceil(2.0 * sigma))
    return [GaborParams(lam, theta, phi, gamma, sigma, radius) for theta in orientations]


def gabor_enhance(region, bank):
    """Max response over a Gabor bank, affinely rescaled to [0, 255].

    A constant response picture (degenerate rescale) maps to all zeros.
    """
    if not bank:
        raise ValueError("empty Gabor bank")
    f = np.ascontiguousarray(region, dtype=np.float64)
    response = None
    for params in bank:
        r = correlate2d_replicate(f, np.ascontiguousarray(gabor_kernel(params)))
        response = r if response is None else np.maximum(response, r)
    lo, hi = response.min(), response.max()
    if hi == lo:
        return np.zeros(f.shape, dtype=np.uint8)
    scaled = (response - lo) / (hi - lo) * 255.0
    return np.floor(scaled + 0.5).astype(np.uint8)


def normalize_height(img, target_height=TARGET_HEIGHT):
    """Rescale so the height becomes target_height, aspect preserved.

    Bilinear in gray space; boolean input is re-thresholded at 0.5.
    """
    img = np.asarray(img)
    h, w = img.shape
    if h < 1:
        raise ValueError("empty image")
    if h == target_height:
        return img.copy()
    out_w = max(1, int(math.floor(w * (target_height / h) + 0.5)))
    if img.dtype == bool:
        scaled = resize_bilinear(np.ascontiguousarray(img, dtype=np.float64), target_height, out_w)
        return scaled >= 0.5
    scaled = resize_bilinear(np.ascontiguousarray(img, dtype=np.float64), target_height, out_w)
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(img.dtype)


def detect_baseline(line_img):
    """Row with the maximum horizontal projection; ties go to the lower row."""
    prof = projection(line_img, "horizontal")
    if prof.sum() == 0:
        raise ValueError("no text pixels; baseline undefined")
    return int(len(prof) - 1 - np.argmax(prof[::-1]))


def split_diacritics(line_img, baseline_row, band_halfwidth=2):
    """Separate components that never touch the baseline band.

    A component is a diacritic when none of its pixels falls within
    band_halfwidth rows of the baseline; its above/below flag compares the
    component centroid row with the baseline.
    """
    b = np.asarray(line_img, dtype=bool)
    h = b.shape[0]
    if not 0 <= baseline_row < h:
        raise ValueError(f"baseline row {baseline_row} outside image of height {h}")
    labeling = connected_components(b, connectivity=8)
    body = b.copy()
    diacritics = []
    lo, hi = baseline_row - band_halfwidth, baseline_row + band_halfwidth
    for label in range(1, labeling.component_count + 1):
        ys, xs = labeling.pixels(label)
        if np.any((ys >= lo) & (ys <= hi)):
            continue
        body[ys, xs] = False
        diacritics.append(Diacritic(ys, xs, labeling.bounding_boxes[label - 1],
                                    above=float(ys.mean()) < baseline_row))
    return body, diacritics


def build_text_line(binary_region, target_height=TARGET_HEIGHT, band_halfwidth=2):
    """Normalize a binary region and split it into body and diacritics."""
    norm = normalize_height(np.asarray(binary_region, dtype=bool), target_height)
    baseline = detect_baseline(norm)
    body, diacritics = split_diacritics(norm, baseline, band_halfwidth)
    return TextLine(norm, baseline, diacritics, body)


def segment_glyphs(line, gap_threshold=0, min_segment_width=2, min_segment_area=3):
    """Cut the line body at vertical-projection gaps into glyph segments.

    Maximal runs of columns with projection above gap_threshold become
    segments; fragments below the width/area minima merge into their nearer
    neighbor (dropped when alone). Diacritics attach to the segment with the
    largest horizontal overlap (ties to the leftmost). Segments are returned
    right to left.
    """
    body = line.body
    prof = projection(body, "vertical")
    spans = []
    start = None
    for i, v in enumerate(prof):
        if v > gap_threshold and start is None:
            start = i
        elif v <= gap_threshold and start is not None:
            spans.append([start, i - 1])
            start = None
    if start is not None:
        spans.append([start, len(prof) - 1])

    def area(span):
        return int(prof[span[0] : span[1] + 1].sum())

    while spans:
        smalls = [i for i, s in enumerate(spans)
                  if (s[1] - s[0] + 1) < min_segment_width or area(s) < min_segment_area]
        if not smalls:
            break
        i = min(smalls, key=lambda j: (area(spans[j]), spans[j][1] - spans[j][0], spans[j][0]))
        if len(spans) == 1:
            spans.pop(i)
            break
        left_gap = spans[i][0] - spans[i - 1][1] if i > 0 else None
        right_gap = spans[i + 1][0] - spans[i][1] if i + 1 < len(spans) else None
        if right_gap is None or (left_gap is not None and left_gap <= right_gap):
            spans[i - 1][1] = spans[i][1]
            spans.pop(i)
        else:
            spans[i + 1][0] = spans[i][0]
            spans.pop(i)

    segments = [GlyphSegment(body[:, s : e + 1].copy(), (s, e), line.baseline_row)
                for s, e in spans]
    for d in line.diacritics:
        dx0, dx1 = d.bbox[0], d.bbox[0] + d.bbox[2] - 1
        best = None
        best_overlap = 0
        for seg in segments:
            s, e = seg.column_span
            overlap = min(e, dx1) - max(s, dx0) + 1
            if overlap > best_overlap:
                best, best_overlap = seg, overlap
        if best is None and segments:
            best = segments[0]  # zero overlap everywhere: leftmost
        if best is not None:
            best.attached_diacritics.append(d)
    segments.sort(key=lambda seg: seg.column_span[0], reverse=True)
    return segments


def preliminary_binarize(region):
    """Cheap Otsu split used only to estimate stroke width; the minority side
    is taken as strokes."""
    t = otsu_threshold(region)
    if t is None:
        return np.zeros(np.asarray(region).shape, dtype=bool)
    dark = np.asarray(region) <= t
    return dark if dark.sum() <= dark.size / 2 else ~dark


def drop_small_components(binary, min_pixels):
    """Remove connected components smaller than min_pixels (despeckling)."""
    if min_pixels <= 1:
        return np.asarray(binary, dtype=bool).copy()
    labeling = connected_components(binary, connectivity=8)
    out = np.asarray(binary, dtype=bool).copy()
    for label in range(1, labeling.component_count + 1):
        if labeling.pixel_counts[label - 1] < min_pixels:
            ys, xs = labeling.pixels(label)
            out[ys, xs] = False
    return out


def fill_stroke_cores(binary, gray):
    """Fill enclosed background that is text-colored in the gray region.

    The cluster binarizer responds to local variation, so strokes wider
    than about 3 px come out as hollow ribbons. A ribbon interior is filled
    with stroke-colored pixels, while a real letter hole shows background
    color; comparing each enclosed component's mean gray against the stroke
    and background means separates the two at any stroke width.
    """
    b = np.asarray(binary, dtype=bool)
    g = np.asarray(gray, dtype=np.float64)
    if not b.any() or b.all():
        return b.copy()
    stroke_mean = g[b].mean()
    bg_mean = g[~b].mean()
    labeling = connected_components(~b, connectivity=4)
    out = b.copy()
    h, w = b.shape
    for label in range(1, labeling.component_count + 1):
        x, y, bw, bh = labeling.bounding_boxes[label - 1]
        if x == 0 or y == 0 or x + bw == w or y + bh == h:
            continue  # touches the region border: outside background
        ys, xs = labeling.pixels(label)
        mean = g[ys, xs].mean()
        if abs(mean - stroke_mean) <= abs(mean - bg_mean):
            out[ys, xs] = True
    return out


def line_from_region(region, target_height=TARGET_HEIGHT, band_halfwidth=2,
                     orientations=DEFAULT_ORIENTATIONS, phi=0.0, gamma=DEFAULT_GAMMA,
                     sigma_per_lambda=DEFAULT_SIGMA_PER_LAMBDA,
                     lambda_per_stroke=DEFAULT_LAMBDA_PER_STROKE,
                     fcm_m=2.0, fcm_epsilon=1e-4, fcm_max_iter=100, fcm_seed=0,
                     min_component_px=4, median_prefilter=True):
    """Full preparation chain from a gray region to a TextLine.

    Steps: 3x3 median prefilter (impulse noise; the temporal median only
    protects the video path) -> cluster binarization on the gray region ->
    ribbon-hole filling -> Gabor smoothing of the binary strokes at the
    estimated stroke wavelength -> despeckle -> crop to content -> height
    normalization -> baseline and diacritics. Raises ValueError when no
    text pixels remain.
    """
    region = np.asarray(region)
    if median_prefilter and region.shape[0] >= 3 and region.shape[1] >= 3:
        from .kernels import median3x3
        region = np.clip(np.floor(median3x3(
            np.ascontiguousarray(region, dtype=np.float64)) + 0.5), 0, 255).astype(np.uint8)
    stroke = estimate_stroke_width(preliminary_binarize(region))
    binary = binarize_region(region, m=fcm_m, epsilon=fcm_epsilon,
                             max_iter=fcm_max_iter, seed=fcm_seed)
    binary = fill_stroke_cores(binary, region)
    if orientations:
        # additive smoothing: strong stroke-direction responses may bridge
        # breaks, but never erase existing text pixels
        bank = default_gabor_bank(stroke, orientations, phi, gamma,
                                  sigma_per_lambda, lambda_per_stroke)
        enhanced = gabor_enhance((binary * np.uint8(255)), bank)
        binary = binary | (enhanced >= 160)
        binary = fill_stroke_cores(binary, region)
    binary = drop_small_components(binary, min_component_px)
    ys, xs = np.nonzero(binary)
    if ys.size == 0:
        raise ValueError("no text pixels after binarization")
    content = binary[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]
    return build_text_line(content, target_height, band_halfwidth)
