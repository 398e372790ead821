"""Synthetic caption clip generation for desk-scale training and evaluation.

Clips are short frame sequences: a smooth gradient background, a few moving
flat-colored blobs, and a static white caption rendered from the packaged
glyph templates. Ground truth is emitted per connected text piece (a
maximal run of joined letters; isolated rendering makes every glyph its own
piece) at the detector's reporting cadence. Everything is deterministic
given the seed.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from . import glyphs
from .localizer import Band, band_features_from_maps
from .mfi import candidate_bands, integrate_frames
from .raster import rgb_to_gray, rgb_to_hsv, sobel_magnitude


# Letters that join on both sides: random captions default to these so a
# word renders as one connected unit the detector can resolve as one box.
JOINING_ALPHABET = "".join(c for c in glyphs.ALPHABET if c not in glyphs.NON_LEFT_JOINING)


@dataclass
class SyntheticSpec:
    width: int = 160
    height: int = 120
    caption_text: str = ""  # empty -> random word from alphabet
    caption_xy: tuple = None  # (x, y) top-left of line raster; None -> random
    alphabet: str = JOINING_ALPHABET
    joined: bool = True
    scale: int = 1  # integer upscale of the design-grid rendering
    letter_gap: int = 2  # design px between unjoined glyphs of one word
    word_gap: int = 8  # design px between words
    banner: bool = True  # full-width dark strap behind the caption
    banner_pad: int = 6  # strap rows above/below the caption raster
    frame_count: int = 5
    motion: float = 10.0  # blob speed, px/frame
    blob_count: int = 3
    noise_salt_pepper: float = 0.02
    noise_blur_sigma: float = 0.5
    window_length: int = 5  # ground-truth cadence, matches detector windows

    def validate(self):
        if not 0.0 <= self.noise_salt_pepper < 1.0:
            raise ValueError("noise_salt_pepper must lie in [0, 1)")
        if self.frame_count < 1 or self.scale < 1 or self.window_length < 1:
            raise ValueError("frame_count, scale and window_length must be >= 1")

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown synthetic spec keys: {sorted(unknown)}")
        spec = cls(**doc)
        if spec.caption_xy is not None:
            spec.caption_xy = tuple(spec.caption_xy)
        spec.validate()
        return spec


def representative_indices(frame_count, window_length):
    """Middle frame index of each non-overlapping window."""
    out = []
    start = 0
    while start < frame_count:
        size = min(window_length, frame_count - start)
        out.append(start + size // 2)
        start += size
    return out


def _gaussian_kernel(sigma):
    r = max(1, int(np.ceil(3.0 * sigma)))
    xs = np.arange(-r, r + 1, dtype=np.float64)
    k = np.exp(-(xs ** 2) / (2.0 * sigma ** 2))
    k /= k.sum()
    return np.outer(k, k)


def _blur(channel, kernel):
    from .kernels import correlate2d_replicate

    return correlate2d_replicate(np.ascontiguousarray(channel), np.ascontiguousarray(kernel))


class ClipRender:
    """Deterministic renderer for one clip."""

    def __init__(self, spec, seed):
        spec.validate()
        self.spec = spec
        self.rng = np.random.default_rng(seed)
        rng = self.rng
        w, h = spec.width, spec.height

        base = rng.uniform(70.0, 150.0)
        gx = rng.uniform(-0.3, 0.3, size=3)
        gy = rng.uniform(-0.3, 0.3, size=3)
        offs = rng.uniform(-12.0, 12.0, size=3)
        xs = np.arange(w)[None, :, None]
        ys = np.arange(h)[:, None, None]
        self.background = np.clip(base + offs + gx * xs + gy * ys, 0, 200)

        self.blobs = []
        for _ in range(spec.blob_count):
            bw = int(rng.integers(14, 31))
            bh = int(rng.integers(10, 26))
            color = np.clip(base + offs + rng.uniform(-60, 60, size=3) + np.sign(rng.standard_normal()) * 35, 0, 230)
            pos = np.array([rng.uniform(0, w - bw), rng.uniform(0, h - bh)])
            angle = rng.uniform(0, 2 * np.pi)
            vel = spec.motion * np.array([np.cos(angle), np.sin(angle)])
            self.blobs.append((bw, bh, color, pos, vel))

        text = spec.caption_text or self._random_word()
        raster, glyph_recs, piece_recs = glyphs.render_text(
            text, joined=spec.joined, letter_gap=spec.letter_gap, word_gap=spec.word_gap)
        self.caption = glyphs.scale_raster(raster, spec.scale)
        self.caption_text = text
        ch, cw = self.caption.shape
        margin = spec.banner_pad + 2 if spec.banner else 6
        if cw + 2 * margin >= w or ch + 2 * margin >= h:
            raise ValueError(f"caption {cw}x{ch} too large for {w}x{h} frame")
        if spec.caption_xy is not None:
            cx, cy = spec.caption_xy
        else:
            cx = int(rng.integers(margin, w - cw - margin))
            cy = int(rng.integers(margin, h - ch - margin))
        self.caption_xy = (cx, cy)
        self.banner_rows = None
        self.banner_value = None
        if spec.banner:
            self.banner_rows = (cy - spec.banner_pad, cy + ch + spec.banner_pad)
            self.banner_value = rng.uniform(15.0, 55.0)

        s = spec.scale

        def scaled_box(bbox):
            return {"x": cx + bbox[0] * s, "y": cy + bbox[1] * s,
                    "w": bbox[2] * s, "h": bbox[3] * s}

        self.pieces = [dict(text=p["text"], word=p["word"], **scaled_box(p["bbox"]))
                       for p in piece_recs]
        self.glyph_records = [dict(letter=g["letter"], form=g["form"], piece=g["piece"],
                                   word=g["word"], **scaled_box(g["bbox"]))
                              for g in glyph_recs]
        # ground truth: one box per word when joined (letter gaps inside a
        # word are below detector resolution), one per glyph-piece otherwise
        if spec.joined:
            words = {}
            for p in self.pieces:
                words.setdefault(p["word"], []).append(p)
            units = []
            for wi in sorted(words):
                group = words[wi]
                x0 = min(p["x"] for p in group)
                y0 = min(p["y"] for p in group)
                x1 = max(p["x"] + p["w"] for p in group)
                y1 = max(p["y"] + p["h"] for p in group)
                units.append({"text": text.split(" ")[wi], "word": wi,
                              "x": x0, "y": y0, "w": x1 - x0, "h": y1 - y0})
            self.truth_units = units
            self.unit_glyphs = [[g for g in self.glyph_records if g["word"] == u["word"]]
                                for u in units]
        else:
            self.truth_units = [dict(p) for p in self.pieces]
            self.unit_glyphs = [[g for g in self.glyph_records if g["piece"] == i]
                                for i in range(len(self.pieces))]
        self.kernel = _gaussian_kernel(spec.noise_blur_sigma) if spec.noise_blur_sigma > 0 else None

    def _random_word(self):
        rng = self.rng
        length = int(rng.integers(4, 7))
        letters = sorted(set(self.spec.alphabet))
        return "".join(letters[int(rng.integers(len(letters)))] for _ in range(length))

    def compose(self, t, noisy=True):
        """Frame t as uint8 RGB; noisy=False skips blur and salt-pepper."""
        spec = self.spec
        img = self.background.copy()
        for bw, bh, color, pos, vel in self.blobs:
            x = int(round(pos[0] + vel[0] * t))
            y = int(round(pos[1] + vel[1] * t))
            x0, x1 = max(0, x), min(spec.width, x + bw)
            y0, y1 = max(0, y), min(spec.height, y + bh)
            if x0 < x1 and y0 < y1:
                img[y0:y1, x0:x1] = color
        if self.banner_rows is not None:
            img[self.banner_rows[0] : self.banner_rows[1]] = self.banner_value
        cx, cy = self.caption_xy
        ch, cw = self.caption.shape
        region = img[cy : cy + ch, cx : cx + cw]
        region[self.caption] = 255.0
        if noisy:
            if spec.noise_salt_pepper > 0:
                u = self.rng.random(img.shape[:2])
                half = spec.noise_salt_pepper / 2.0
                img[u < half] = 0.0
                img[(u >= half) & (u < 2 * half)] = 255.0
            if self.kernel is not None:
                img = np.stack([_blur(img[..., c], self.kernel) for c in range(3)], axis=-1)
        return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)

    def clean_composite(self, t):
        """Blurred but noise-free frame, the reference for glyph prototypes."""
        img = self.compose(t, noisy=False).astype(np.float64)
        if self.kernel is not None:
            img = np.stack([_blur(img[..., c], self.kernel) for c in range(3)], axis=-1)
        return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def interval_iou(a, b):
    """IoU of two inclusive integer intervals (start, end)."""
    inter = min(a[1], b[1]) - max(a[0], b[0]) + 1
    if inter <= 0:
        return 0.0
    union = (a[1] - a[0] + 1) + (b[1] - b[0] + 1) - inter
    return inter / union


def band_training_rows(integrated, truth_units, rng, negatives=8,
                       edge_density_threshold=1.5, min_band_thickness=4):
    """Labeled 10-feature rows for localizer training from one clip window.

    Candidate bands are labeled by 1-D IoU >= 0.5 against the truth unit
    spans; the exact truth spans are injected as positives and random
    non-overlapping strips as extra negatives.
    """
    v_img = rgb_to_hsv(integrated)[..., 2]
    e_img = sobel_magnitude(rgb_to_gray(integrated)).astype(np.float64)
    h, w = v_img.shape
    row_truth = [(p["y"], p["y"] + p["h"] - 1) for p in truth_units]
    col_truth = [(p["x"], p["x"] + p["w"] - 1) for p in truth_units]
    rows = []

    def add(axis, span, label):
        band = Band(axis, span[0], span[1])
        rows.append((band_features_from_maps(v_img, e_img, band), label))

    bands = candidate_bands(integrated, edge_density_threshold, min_band_thickness)
    for span in bands.row_bands:
        add("row", span, float(any(interval_iou(span, t) >= 0.5 for t in row_truth)))
    for span in bands.col_bands:
        add("col", span, float(any(interval_iou(span, t) >= 0.5 for t in col_truth)))
    for span in row_truth:
        add("row", span, 1.0)
    for span in col_truth:
        add("col", span, 1.0)
    tries = 0
    added = 0
    while added < negatives and tries < negatives * 20:
        tries += 1
        axis = "row" if rng.random() < 0.5 else "col"
        limit = h if axis == "row" else w
        truth = row_truth if axis == "row" else col_truth
        thick = int(rng.integers(4, 25))
        if thick >= limit:
            continue
        start = int(rng.integers(0, limit - thick))
        span = (start, start + thick - 1)
        if any(interval_iou(span, t) >= 0.2 for t in truth):
            continue
        add(axis, span, 0.0)
        added += 1
    return rows


def generate_clip(spec, out_dir, seed, emit_bands_csv=False,
                  edge_density_threshold=1.5, min_band_thickness=4):
    """Write frames, truth JSONL and metadata for one clip; see module doc.

    Returns the ClipRender used, so callers can reuse the clean composite.
    """
    clip = ClipRender(spec, seed)
    frames_dir = os.path.join(out_dir, "frames")
    os.makedirs(frames_dir, exist_ok=True)
    from .imgio import write_image

    frames = []
    for t in range(spec.frame_count):
        frame = clip.compose(t)
        frames.append(frame)
        write_image(os.path.join(frames_dir, f"frame_{t + 1:06d}.png"), frame)

    reps = representative_indices(spec.frame_count, spec.window_length)
    with open(os.path.join(out_dir, "truth.jsonl"), "w", encoding="utf-8") as f:
        for t in reps:
            record = {"frame": f"frame_{t + 1:06d}.png",
                      "boxes": [dict(x=p["x"], y=p["y"], w=p["w"], h=p["h"], text=p["text"])
                                for p in clip.truth_units]}
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")

    if emit_bands_csv:
        lines = []
        start = 0
        while start < spec.frame_count:
            window = frames[start : start + spec.window_length]
            integrated = integrate_frames(window)
            for feats, label in band_training_rows(
                    integrated, clip.truth_units, clip.rng,
                    edge_density_threshold=edge_density_threshold,
                    min_band_thickness=min_band_thickness):
                lines.append(",".join(repr(float(v)) for v in feats) + f",{int(label)}")
            start += spec.window_length
        with open(os.path.join(out_dir, "bands.csv"), "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")

    meta = {"caption_text": clip.caption_text, "caption_xy": list(clip.caption_xy),
            "seed": seed, "truth_units": clip.truth_units, "glyphs": clip.glyph_records}
    with open(os.path.join(out_dir, "clip.json"), "w", encoding="utf-8") as f:
        json.dump(meta, f, ensure_ascii=False, sort_keys=True, indent=1)
    return clip
