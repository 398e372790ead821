"""Detection and recognition scoring against ground-truth annotations.

Detection uses greedy one-to-one IoU matching; recognition aligns predicted
and true strings with a Levenshtein traceback. Rates follow

    recall = found / (found + missed)        precision = found / (found + false)
    CR(WR) = correct chars (words) / total chars (words) * 100

with 0/0 reported as None (undefined), distinct from 0.
"""

from dataclasses import dataclass

from .align import matched_pairs


@dataclass
class DetectionTally:
    a_find: int = 0
    a_false: int = 0
    a_miss: int = 0

    def __add__(self, other):
        return DetectionTally(self.a_find + other.a_find,
                              self.a_false + other.a_false,
                              self.a_miss + other.a_miss)


@dataclass
class RecognitionTally:
    correct_chars: int = 0
    total_chars: int = 0
    correct_words: int = 0
    total_words: int = 0

    def __add__(self, other):
        return RecognitionTally(self.correct_chars + other.correct_chars,
                                self.total_chars + other.total_chars,
                                self.correct_words + other.correct_words,
                                self.total_words + other.total_words)


def _xywh(box):
    if hasattr(box, "x"):
        return float(box.x), float(box.y), float(box.width), float(box.height)
    x, y, w, h = box
    return float(x), float(y), float(w), float(h)


def iou(box_a, box_b):
    """Intersection over union of two (x, y, w, h) rectangles."""
    ax, ay, aw, ah = _xywh(box_a)
    bx, by, bw, bh = _xywh(box_b)
    ix = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    if inter == 0.0:
        return 0.0
    return inter / (aw * ah + bw * bh - inter)


def greedy_matches(detected, truth, iou_threshold=0.5):
    """One-to-one (detected, truth) index pairs, greedy in descending IoU."""
    pairs = []
    for di, d in enumerate(detected):
        for ti, t in enumerate(truth):
            v = iou(d, t)
            if v >= iou_threshold:
                pairs.append((v, di, ti))
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
    used_d, used_t = set(), set()
    matches = []
    for v, di, ti in pairs:
        if di in used_d or ti in used_t:
            continue
        used_d.add(di)
        used_t.add(ti)
        matches.append((di, ti))
    return matches


def match_detections(detected, truth, iou_threshold=0.5):
    """Tally greedy one-to-one matching in descending IoU order.

    Pairs at or above the threshold count as found; leftover truth boxes are
    misses and leftover detections are false alarms.
    """
    find = len(greedy_matches(detected, truth, iou_threshold))
    return DetectionTally(find, len(detected) - find, len(truth) - find)


def recall_precision(tally):
    """(recall, precision); None where the denominator is zero."""
    recall = tally.a_find / (tally.a_find + tally.a_miss) if tally.a_find + tally.a_miss else None
    precision = tally.a_find / (tally.a_find + tally.a_false) if tally.a_find + tally.a_false else None
    return recall, precision


def char_word_rates(tally):
    """(CR, WR) percentages; None where the denominator is zero."""
    cr = tally.correct_chars / tally.total_chars * 100.0 if tally.total_chars else None
    wr = tally.correct_words / tally.total_words * 100.0 if tally.total_words else None
    return cr, wr


def score_recognition(predicted, truth):
    """Character/word tallies for paired line strings.

    Characters align by Levenshtein traceback; a matched position is correct
    when the glyphs are identical. Words split on whitespace and align the
    same way; a word is correct only when its aligned partner is identical.
    Totals count the ground truth.
    """
    if len(predicted) != len(truth):
        raise ValueError(f"line count mismatch: {len(predicted)} vs {len(truth)}")
    tally = RecognitionTally()
    for pred, true in zip(predicted, truth):
        tally.total_chars += len(true)
        tally.correct_chars += sum(1 for i, j in matched_pairs(pred, true) if pred[i] == true[j])
        pw, tw = pred.split(), true.split()
        tally.total_words += len(tw)
        tally.correct_words += sum(1 for i, j in matched_pairs(pw, tw) if pw[i] == tw[j])
    return tally
