"""Packaged bitmap stroke templates for the 28 Arabic base letters.

Each letter has a body drawn on a 14-row body box plus a dot pattern.
Glyphs live on a 26-row design grid (matching the recognition height, so a
scale-1 line normalizes as identity): the body box occupies grid rows 7-20,
bottom strokes sit on grid rows 16-18 and joined letters connect through a
2-row stub at grid rows 16-17. Dot blocks are 2x2 with a 3-row clearance
from the body. Contextual forms (isolated/initial/medial/final) are derived
by adding connector stubs on the joining sides; the six right-joining-only
letters have no initial/medial forms.

Bodies follow one drawing rule that matters downstream: every non-empty
body column holds at least 3 pixels, while connector stubs hold exactly 2,
so a vertical-projection cut at threshold 2 separates joined letters
without cutting through letter bodies.
"""

import numpy as np

LINE_HEIGHT = 26
BODY_TOP = 7  # grid row of body-box row 0
STUB_ROWS = (9, 10)  # body-box rows of the connector stub
STUB_WIDTH = 2
DOT_SIZE = 2
DOT_GAP = 2
DOT_CLEARANCE = 3

# Letters that do not join to the following (left) letter.
NON_LEFT_JOINING = set("ادذرزو")

FORMS = ("iso", "ini", "med", "fin")

_BODIES = {
    "alif": [
        "###", "###", "###", "###", "###", "###",
        "###", "###", "###", "###", "###", "###",
        "...", "...",
    ],
    "beh": [
        "............", "............", "............", "............",
        "..........##", "..........##",
        "##........##", "##........##", "##........##",
        "############", "############", "############",
        "............", "............",
    ],
    "noon": [
        "........", "........", "........",
        "......##", "......##", "......##",
        "##....##", "##....##", "##....##",
        "########", "########", "########",
        "........", "........",
    ],
    "yeh": [
        ".........", ".........", ".........", ".........", ".........",
        "##.....##", "##.....##", "##.....##", "##.....##",
        "#########", "#########", "#########",
        "..#######", "..#######",
    ],
    "hah": [
        "..........",
        "..########", "..########",
        "......##..", ".....##...", "....##....", "...##.....", "..##......",
        "##........", "##........",
        "##......##",
        "##########",
        ".########.",
        "..........",
    ],
    "dal": [
        "........", "........", "........",
        "...#####",
        "......##", "......##", "......##", "......##", "......##",
        "########", "########", "########",
        "........", "........",
    ],
    "reh": [
        "......", "......", "......", "......", "......", "......",
        "....##", "....##", "...###", "..####",
        ".####.", "#####.", "####..", "###...",
    ],
    "seen": [
        ".............", ".............", ".............", ".............",
        "##...##...##.", "##...##...##.", "##...##...##.", "##...##...##.", "##...##...##.",
        "#############", "#############", "#############",
        ".............", ".............",
    ],
    "sad": [
        "............", "............", "............", "............", "............",
        "..########..",
        "..##....##..", "..##....##..", "..##....##..",
        "############", "############", "############",
        "............", "............",
    ],
    "tah": [
        "##.........", "##.........", "##.........", "##.........", "##.........",
        "##.#######.",
        "##.##...##.", "##.##...##.", "##.##...##.",
        "###########", "###########", "###########",
        "...........", "...........",
    ],
    "ain": [
        "........",
        "..######", "..######",
        "###.....", "###.....",
        "..######", "..######",
        "###.....", "###.....",
        "########", "########", "########",
        "........", "........",
    ],
    "feh": [
        "............", "............",
        ".....#######",
        ".....##...##", ".....##...##", ".....##...##",
        ".....#######",
        ".........##.", ".........##.",
        "############", "############", "############",
        "............", "............",
    ],
    "qaf": [
        "............", "............",
        ".....#######",
        ".....##...##", ".....##...##", ".....##...##",
        ".....#######",
        ".........##.", ".........##.",
        "############", "############", "############",
        ".##########.", "..########..",
    ],
    "kaf": [
        ".......##", ".......##", ".......##", ".......##", ".......##",
        "...##..##", "...##..##", "...##..##", "...##..##",
        "#########", "#########", "#########",
        ".........", ".........",
    ],
    "lam": [
        "......##", "......##", "......##", "......##", "......##",
        "......##", "......##", "......##", "......##",
        "########", "########", "########",
        "........", "........",
    ],
    "meem": [
        ".........", ".........", ".........", ".........",
        "#########",
        "##.....##", "##.....##", "##.....##",
        "#########", "#########",
        "##.......", "##.......", "##.......", "##.......",
    ],
    "heh": [
        "........", "........", "........", "........",
        "########",
        "##....##", "##....##", "##....##", "##....##",
        "########", "########", "########",
        "........", "........",
    ],
    "waw": [
        "........", "........", "........",
        ".#######",
        ".##...##", ".##...##", ".##...##",
        ".#######",
        "....####", "...#####",
        "..####..",
        "#####...", "####....", "###.....",
    ],
}

# letter -> (body name, dots above, dots below)
LETTERS = {
    "ا": ("alif", 0, 0),
    "ب": ("beh", 0, 1),
    "ت": ("beh", 2, 0),
    "ث": ("beh", 3, 0),
    "ج": ("hah", 0, 1),
    "ح": ("hah", 0, 0),
    "خ": ("hah", 1, 0),
    "د": ("dal", 0, 0),
    "ذ": ("dal", 1, 0),
    "ر": ("reh", 0, 0),
    "ز": ("reh", 1, 0),
    "س": ("seen", 0, 0),
    "ش": ("seen", 3, 0),
    "ص": ("sad", 0, 0),
    "ض": ("sad", 1, 0),
    "ط": ("tah", 0, 0),
    "ظ": ("tah", 1, 0),
    "ع": ("ain", 0, 0),
    "غ": ("ain", 1, 0),
    "ف": ("feh", 1, 0),
    "ق": ("qaf", 2, 0),
    "ك": ("kaf", 0, 0),
    "ل": ("lam", 0, 0),
    "م": ("meem", 0, 0),
    "ن": ("noon", 1, 0),
    "ه": ("heh", 0, 0),
    "و": ("waw", 0, 0),
    "ي": ("yeh", 0, 2),
}

ALPHABET = "".join(LETTERS)


def _body_array(name):
    rows = _BODIES[name]
    return np.array([[c == "#" for c in row] for row in rows], dtype=bool)


def letter_forms(letter):
    """Contextual forms available for a letter."""
    if letter not in LETTERS:
        raise ValueError(f"not a base letter: {letter!r}")
    return ("iso", "fin") if letter in NON_LEFT_JOINING else FORMS


def render_glyph(letter, form="iso"):
    """Boolean raster (LINE_HEIGHT x cell width) of one letter form.

    Returns (raster, body_x0, body_width): the horizontal extent of the body
    inside the cell, excluding connector stubs.
    """
    if form not in letter_forms(letter):
        raise ValueError(f"letter {letter!r} has no {form!r} form")
    body_name, n_above, n_below = LETTERS[letter]
    body = _body_array(body_name)
    body_h, body_w = body.shape
    left_stub = STUB_WIDTH if form in ("ini", "med") else 0
    right_stub = STUB_WIDTH if form in ("fin", "med") else 0
    cell_w = body_w + left_stub + right_stub
    cell = np.zeros((LINE_HEIGHT, cell_w), dtype=bool)
    cell[BODY_TOP : BODY_TOP + body_h, left_stub : left_stub + body_w] = body
    for r in STUB_ROWS:
        if left_stub:
            cell[BODY_TOP + r, :left_stub] = True
        if right_stub:
            cell[BODY_TOP + r, left_stub + body_w :] = True

    body_rows = np.nonzero(body.any(axis=1))[0]
    top_grid = BODY_TOP + int(body_rows[0])
    bottom_grid = BODY_TOP + int(body_rows[-1])
    if n_above:
        _stamp_dots(cell, n_above, top_grid - DOT_CLEARANCE - DOT_SIZE, left_stub, body_w)
    if n_below:
        _stamp_dots(cell, n_below, bottom_grid + DOT_CLEARANCE + 1, left_stub, body_w)
    return cell, left_stub, body_w


def _stamp_dots(cell, count, row0, body_x0, body_w):
    gap = DOT_GAP if count * DOT_SIZE + (count - 1) * DOT_GAP <= body_w else 1
    span = count * DOT_SIZE + (count - 1) * gap
    x = body_x0 + max(0, (body_w - span) // 2)
    for _ in range(count):
        cell[row0 : row0 + DOT_SIZE, x : x + DOT_SIZE] = True
        x += DOT_SIZE + gap


def _form_for_position(word, i, joined):
    if not joined:
        return "iso"
    joins_prev = i > 0 and word[i - 1] not in NON_LEFT_JOINING
    joins_next = i + 1 < len(word) and word[i] not in NON_LEFT_JOINING
    if joins_prev and joins_next:
        return "med"
    if joins_prev:
        return "fin"
    if joins_next:
        return "ini"
    return "iso"


def render_text(text, joined=True, letter_gap=2, word_gap=6):
    """Render a caption string right-to-left on the design grid.

    Returns (raster, glyph_records, piece_records). Glyph records carry
    letter, form, piece index and the tight bbox of the glyph's own pixels;
    piece records describe each maximal connected run of joined letters with
    its bbox and logical-order text. Words are separated by spaces.
    """
    words = [w for w in text.split(" ") if w]
    if not words:
        raise ValueError("caption text is empty")
    for w in words:
        for ch in w:
            if ch not in LETTERS:
                raise ValueError(f"unsupported character {ch!r} in caption")

    cells = []  # (letter, form, joined_to_previous_glyph, word_break_before, word_idx)
    for wi, word in enumerate(words):
        for i, ch in enumerate(word):
            form = _form_for_position(word, i, joined)
            joins_prev = joined and i > 0 and word[i - 1] not in NON_LEFT_JOINING
            cells.append((ch, form, joins_prev, i == 0 and wi > 0, wi))

    rendered = [render_glyph(ch, form) for ch, form, _, _, _ in cells]
    total_w = 0
    for idx, (cell, _, _) in enumerate(rendered):
        _, _, joins_prev, word_break, _ = cells[idx]
        if idx > 0:
            total_w += 0 if joins_prev else (word_gap if word_break else letter_gap)
        total_w += cell.shape[1]

    raster = np.zeros((LINE_HEIGHT, total_w), dtype=bool)
    glyph_records = []
    piece_records = []
    x_right = total_w
    piece_letters = []
    piece_x1 = None
    piece_word = 0
    for idx, (cell, _, _) in enumerate(rendered):
        ch, form, joins_prev, word_break, wi = cells[idx]
        if idx > 0 and not joins_prev:
            x_right -= word_gap if word_break else letter_gap
        if not joins_prev and piece_letters:
            piece_records.append(_close_piece(raster, piece_letters, piece_x1, x_right, piece_word))
            piece_letters = []
        if not piece_letters:
            piece_x1 = x_right
            piece_word = wi
        w = cell.shape[1]
        x0 = x_right - w
        raster[:, x0:x_right] |= cell
        ys, xs = np.nonzero(cell)
        glyph_records.append({
            "letter": ch,
            "form": form,
            "piece": len(piece_records),
            "word": wi,
            "bbox": (x0 + int(xs.min()), int(ys.min()),
                     int(xs.max() - xs.min()) + 1, int(ys.max() - ys.min()) + 1),
        })
        piece_letters.append(ch)
        x_right = x0
    if piece_letters:
        piece_records.append(_close_piece(raster, piece_letters, piece_x1, x_right, piece_word))
    return raster, glyph_records, piece_records


def _close_piece(raster, letters, x1, x0, word_idx):
    sub = raster[:, x0:x1]
    ys, xs = np.nonzero(sub)
    bbox = (x0 + int(xs.min()), int(ys.min()),
            int(xs.max() - xs.min()) + 1, int(ys.max() - ys.min()) + 1)
    return {"text": "".join(letters), "bbox": bbox, "word": word_idx}


def scale_raster(raster, scale):
    """Integer nearest-neighbor upscale."""
    if scale == 1:
        return raster.copy()
    return np.kron(raster, np.ones((scale, scale), dtype=raster.dtype))
