"""Caption text detection, binarization, segmentation and Arabic glyph
recognition for video frame sequences."""

__version__ = "0.1.0"
