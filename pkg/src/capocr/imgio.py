"""Raster file I/O: PNG via Pillow, binary PGM (P5) and PPM (P6) natively.

Gray images round-trip as single-channel 8-bit, RGB as 3-channel 8-bit.
Binary images are written with text pixels rendered black.
"""

import numpy as np
from PIL import Image


def read_image(path):
    """Read PNG/PGM/PPM into uint8 (H, W) or (H, W, 3)."""
    path = str(path)
    if path.lower().endswith((".pgm", ".ppm")):
        return _read_pnm(path)
    with Image.open(path) as im:
        if im.mode == "L":
            return np.asarray(im, dtype=np.uint8)
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def write_image(path, arr):
    """Write uint8 gray or RGB to PNG/PGM/PPM, chosen by extension."""
    path = str(path)
    arr = np.asarray(arr, dtype=np.uint8)
    if path.lower().endswith((".pgm", ".ppm")):
        _write_pnm(path, arr)
        return
    Image.fromarray(arr).save(path)


def binary_to_gray(bits):
    """Render a binary image as 8-bit gray, text pixels black."""
    return np.where(np.asarray(bits, dtype=bool), 0, 255).astype(np.uint8)


def _read_pnm(path):
    with open(path, "rb") as f:
        data = f.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    magic, w, h, maxval = fields[0], int(fields[1]), int(fields[2]), int(fields[3])
    pos += 1  # single whitespace after maxval
    if magic not in (b"P5", b"P6"):
        raise ValueError(f"unsupported PNM magic {magic!r} in {path}")
    if maxval != 255:
        raise ValueError(f"only 8-bit PNM supported, maxval={maxval} in {path}")
    channels = 1 if magic == b"P5" else 3
    raw = np.frombuffer(data, dtype=np.uint8, count=w * h * channels, offset=pos)
    if channels == 1:
        return raw.reshape(h, w).copy()
    return raw.reshape(h, w, 3).copy()


def _write_pnm(path, arr):
    if arr.ndim == 2:
        magic = b"P5"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot write array of shape {arr.shape} as PNM")
    h, w = arr.shape[:2]
    with open(path, "wb") as f:
        f.write(magic + b"\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(arr).tobytes())
