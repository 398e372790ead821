"""Command line interface: synthesize, train, detect, recognize, evaluate.

Exit codes: 0 success, 1 a metric gate failed, 2 usage or data error.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import evalkit, localizer, recognizer, synthetic, textline
from .config import ConfigError, default_config, load_config
from .imgio import binary_to_gray, read_image, write_image
from .mfi import candidate_bands, integrate_frames
from .raster import rgb_to_gray

FRAME_EXTENSIONS = (".png", ".ppm", ".pgm")


def _load_cfg(args):
    if getattr(args, "config", None):
        return load_config(args.config)
    return default_config()


def _list_frames(frames_dir):
    try:
        names = sorted(n for n in os.listdir(frames_dir)
                       if n.lower().endswith(FRAME_EXTENSIONS))
    except OSError as exc:
        raise ValueError(f"cannot read frames directory: {exc}") from None
    if not names:
        raise ValueError(f"no frames found in {frames_dir}")
    return [os.path.join(frames_dir, n) for n in names]


def _windows(paths, window_length):
    out = []
    start = 0
    while start < len(paths):
        chunk = paths[start : start + window_length]
        out.append((chunk, chunk[len(chunk) // 2]))
        start += window_length
    return out


def _detect_window(frame_paths, cfg, model):
    frames = [_as_rgb(read_image(p)) for p in frame_paths]
    integrated = integrate_frames(frames)
    bands = candidate_bands(integrated, cfg.mfi.edge_density_threshold,
                            cfg.mfi.min_band_thickness)
    boxes = localizer.localize_text_boxes(
        integrated, bands, model, cfg.localizer.score_threshold,
        cfg.localizer.min_zone_width, cfg.localizer.min_zone_height)
    return integrated, boxes


def _as_rgb(img):
    if img.ndim == 2:
        return np.stack([img] * 3, axis=-1)
    return img


def _crop_box(gray, box, cfg):
    h, w = gray.shape
    x0 = max(0, box.x - cfg.textline.crop_pad_x)
    x1 = min(w, box.x + box.width + cfg.textline.crop_pad_x)
    y0 = max(0, box.y - cfg.textline.crop_pad_y)
    y1 = min(h, box.y + box.height + cfg.textline.crop_pad_y)
    return gray[y0:y1, x0:x1]


def _prepare_line(region, cfg):
    return textline.line_from_region(
        region,
        target_height=cfg.textline.target_height,
        band_halfwidth=cfg.textline.baseline_band_halfwidth,
        orientations=cfg.gabor_orientations(),
        phi=cfg.gabor.phase,
        gamma=cfg.gabor.gamma,
        sigma_per_lambda=cfg.gabor.sigma_per_lambda,
        lambda_per_stroke=cfg.gabor.lambda_per_stroke,
        fcm_m=cfg.binarizer.fuzzifier,
        fcm_epsilon=cfg.binarizer.epsilon,
        fcm_max_iter=cfg.binarizer.max_iter,
        fcm_seed=cfg.binarizer.seed,
        min_component_px=cfg.textline.min_component_px,
        median_prefilter=cfg.textline.median_prefilter,
    )


def _recognize_region(region, cfg, base, params, lexicon):
    try:
        line = _prepare_line(region, cfg)
    except ValueError:
        return None, "", [], None
    segments = textline.segment_glyphs(
        line, cfg.textline.gap_threshold,
        cfg.textline.min_segment_width, cfg.textline.min_segment_area)
    text, per_glyph = recognizer.recognize_line(segments, base, params)
    corrected = None
    if lexicon:
        corrected = recognizer.lexicon_correct(text, lexicon,
                                               cfg.recognizer.max_edit_distance)
    return line, text, per_glyph, corrected


def _dump_line_debug(debug_dir, tag, line, segments):
    img = np.stack([binary_to_gray(line.image)] * 3, axis=-1)
    for seg in segments:
        for x in seg.column_span:
            img[:, x] = (0, 200, 0)
    img[line.baseline_row, :] = (255, 0, 0)
    write_image(os.path.join(debug_dir, f"line_{tag}.png"), img)


def _draw_boxes(frame, boxes):
    img = frame.copy()
    for b in boxes:
        x1, y1 = b.x + b.width - 1, b.y + b.height - 1
        img[b.y, b.x : x1 + 1] = (255, 0, 0)
        img[y1, b.x : x1 + 1] = (255, 0, 0)
        img[b.y : y1 + 1, b.x] = (255, 0, 0)
        img[b.y : y1 + 1, x1] = (255, 0, 0)
    return img


def _load_lexicon(path):
    if not path:
        return []
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


def cmd_synthesize(args):
    cfg = _load_cfg(args)
    if args.spec:
        spec = synthetic.SyntheticSpec.from_json(args.spec)
    else:
        spec = synthetic.SyntheticSpec()
    if args.text:
        spec.caption_text = args.text
    os.makedirs(args.out, exist_ok=True)
    for i in range(args.clips):
        out_dir = args.out if args.clips == 1 else os.path.join(args.out, f"clip_{i:03d}")
        os.makedirs(out_dir, exist_ok=True)
        clip = synthetic.generate_clip(
            spec, out_dir, args.seed + i, emit_bands_csv=args.emit_bands_csv,
            edge_density_threshold=cfg.mfi.edge_density_threshold,
            min_band_thickness=cfg.mfi.min_band_thickness)
        if args.emit_glyph_csv:
            rows = glyph_csv_rows(clip, spec, cfg)
            with open(os.path.join(out_dir, "glyphs.csv"), "w", encoding="utf-8") as f:
                for vec, label in rows:
                    f.write(",".join(repr(float(v)) for v in vec) + f",{label}\n")
        print(f"wrote clip to {out_dir} (caption: {clip.caption_text})")
    return 0


def glyph_csv_rows(clip, spec, cfg):
    """160-feature rows for every glyph of a clip's clean rendering.

    Truth units whose segmentation does not produce one segment per letter
    are skipped; the caller sees the difference between rows and glyph count.
    """
    from .glyphfeat import extract_features

    rep = synthetic.representative_indices(spec.frame_count, spec.window_length)[0]
    clean = clip.clean_composite(rep)
    gray = rgb_to_gray(clean)
    rows = []
    for unit, letters in zip(clip.truth_units, clip.unit_glyphs):
        box = localizer.TextBox(unit["x"], unit["y"], unit["w"], unit["h"])
        region = _crop_box(gray, box, cfg)
        try:
            line = _prepare_line(region, cfg)
        except ValueError:
            continue
        segments = textline.segment_glyphs(
            line, cfg.textline.gap_threshold,
            cfg.textline.min_segment_width, cfg.textline.min_segment_area)
        if len(segments) != len(letters):
            continue
        for seg, rec in zip(segments, letters):
            rows.append((extract_features(seg), f"{rec['letter']}:{rec['form']}"))
    return rows


def cmd_train(args):
    cfg = _load_cfg(args)
    if args.kind == "localizer":
        feats, labels = localizer.load_band_csv(args.dataset)
        model = localizer.mlp_train(feats, labels, cfg.localizer.epochs,
                                    cfg.localizer.learning_rate, cfg.localizer.seed)
        localizer.save_localizer_model(model, args.model_out)
        acc = localizer.mlp_accuracy(model, feats, labels)
        print(f"localizer: {len(labels)} bands, final loss {model.epoch_losses[-1]:.6f}, "
              f"training accuracy {acc:.3f}")
    else:
        feats, labels = recognizer.load_glyph_csv(args.dataset)
        base = recognizer.train_prototypes(feats, labels, cfg.recognizer.membership_mode,
                                           cfg.recognizer.k_init)
        params = recognizer.FuzzyKnnParams(cfg.recognizer.k, cfg.recognizer.m)
        recognizer.save_prototypes(base, params, args.model_out)
        print(f"recognizer: {base.vectors.shape[0]} prototypes, "
              f"{len(base.classes)} classes, k={params.k}, m={params.m}")
    return 0


def _require_model(path, kind):
    if not path:
        raise ValueError(f"no {kind} model configured (set [paths] {kind}_model)")
    if not os.path.exists(path):
        raise ValueError(f"{kind} model not found: {path}")


def cmd_detect(args):
    cfg = _load_cfg(args)
    model_path = args.model or cfg.paths.localizer_model
    _require_model(model_path, "localizer")
    model = localizer.load_localizer_model(model_path)
    debug_dir = args.debug_dir or cfg.paths.debug_dir
    if debug_dir:
        os.makedirs(debug_dir, exist_ok=True)
    frames = _list_frames(args.frames_dir)
    windows = _windows(frames, cfg.mfi.window_length)

    def work(item):
        chunk, rep = item
        return rep, _detect_window(chunk, cfg, model)

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(work, windows))

    with open(args.out, "w", encoding="utf-8") as f:
        for rep, (integrated, boxes) in results:
            name = os.path.basename(rep)
            record = {"frame": name,
                      "boxes": [dict(x=b.x, y=b.y, w=b.width, h=b.height,
                                     score=round(b.score, 6)) for b in boxes]}
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            if debug_dir:
                from .raster import sobel_magnitude
                write_image(os.path.join(debug_dir, f"integrated_{name}"), integrated)
                write_image(os.path.join(debug_dir, f"edges_{name}"),
                            sobel_magnitude(rgb_to_gray(integrated)))
                write_image(os.path.join(debug_dir, f"boxes_{name}"),
                            _draw_boxes(integrated, boxes))
    print(f"detected boxes for {len(results)} windows -> {args.out}")
    return 0


def cmd_recognize(args):
    cfg = _load_cfg(args)
    rec_path = args.recognizer_model or cfg.paths.recognizer_model
    _require_model(rec_path, "recognizer")
    base, params = recognizer.load_prototypes(rec_path)
    if args.k:
        params = recognizer.FuzzyKnnParams(args.k, params.m)
    lexicon = _load_lexicon(args.lexicon or cfg.paths.lexicon)
    debug_dir = args.debug_dir or cfg.paths.debug_dir
    if debug_dir:
        os.makedirs(debug_dir, exist_ok=True)

    records = []
    if args.regions:
        for path in _list_frames(args.frames_dir):
            gray = read_image(path)
            if gray.ndim == 3:
                gray = rgb_to_gray(gray)
            line, text, per_glyph, corrected = _recognize_region(gray, cfg, base, params, lexicon)
            records.append(_recognition_record(os.path.basename(path), None, text,
                                               per_glyph, corrected, base))
            if debug_dir and line is not None:
                segments = textline.segment_glyphs(line, cfg.textline.gap_threshold,
                                                   cfg.textline.min_segment_width,
                                                   cfg.textline.min_segment_area)
                _dump_line_debug(debug_dir, os.path.basename(path), line, segments)
    else:
        model_path = args.model or cfg.paths.localizer_model
        _require_model(model_path, "localizer")
        model = localizer.load_localizer_model(model_path)
        frames = _list_frames(args.frames_dir)
        windows = _windows(frames, cfg.mfi.window_length)

        def work(item):
            chunk, rep = item
            integrated, boxes = _detect_window(chunk, cfg, model)
            gray = rgb_to_gray(integrated)
            out = []
            for i, box in enumerate(boxes):
                region = _crop_box(gray, box, cfg)
                line, text, per_glyph, corrected = _recognize_region(region, cfg, base,
                                                                     params, lexicon)
                out.append((os.path.basename(rep), box, text, per_glyph, corrected, line, i))
            return out

        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
            for group in pool.map(work, windows):
                for name, box, text, per_glyph, corrected, line, i in group:
                    records.append(_recognition_record(name, box, text, per_glyph,
                                                       corrected, base))
                    if debug_dir and line is not None:
                        segments = textline.segment_glyphs(
                            line, cfg.textline.gap_threshold,
                            cfg.textline.min_segment_width, cfg.textline.min_segment_area)
                        _dump_line_debug(debug_dir, f"{name}_{i}", line, segments)

    with open(args.out, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    print(f"recognized {len(records)} regions -> {args.out}")
    return 0


def _recognition_record(frame, box, text, per_glyph, corrected, base):
    record = {"frame": frame, "text": text,
              "glyphs": [{"predicted": cm.predicted,
                          "margin": round(cm.runner_up_margin, 6),
                          "memberships": [round(float(v), 6) for v in cm.u]}
                         for cm in per_glyph]}
    if box is not None:
        record["box"] = dict(x=box.x, y=box.y, w=box.width, h=box.height)
    if corrected is not None:
        record["corrected"] = corrected
    return record


def _read_jsonl(path):
    records = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            records.setdefault(doc["frame"], []).extend(doc.get("boxes", []))
    return records


def _boxes_of(entries):
    return [(e["x"], e["y"], e["w"], e["h"]) for e in entries]


def cmd_evaluate(args):
    cfg = _load_cfg(args)
    pred = _read_jsonl(args.pred)
    truth = _read_jsonl(args.truth)
    iou_thr = cfg.evaluate.iou_threshold
    det = evalkit.DetectionTally()
    pred_texts, truth_texts = [], []
    for frame in sorted(set(pred) | set(truth)):
        p = pred.get(frame, [])
        t = truth.get(frame, [])
        det = det + evalkit.match_detections(_boxes_of(p), _boxes_of(t), iou_thr)
        matches = evalkit.greedy_matches(_boxes_of(p), _boxes_of(t), iou_thr)
        matched_t = set()
        for di, ti in matches:
            if t[ti].get("text"):
                pred_texts.append(p[di].get("text", ""))
                truth_texts.append(t[ti]["text"])
            matched_t.add(ti)
        for ti, entry in enumerate(t):
            if ti not in matched_t and entry.get("text"):
                pred_texts.append("")
                truth_texts.append(entry["text"])
    rec = evalkit.score_recognition(pred_texts, truth_texts)
    recall, precision = evalkit.recall_precision(det)
    cr, wr = evalkit.char_word_rates(rec)
    report = {
        "recall": recall, "precision": precision, "cr": cr, "wr": wr,
        "tallies": {"a_find": det.a_find, "a_false": det.a_false, "a_miss": det.a_miss,
                    "correct_chars": rec.correct_chars, "total_chars": rec.total_chars,
                    "correct_words": rec.correct_words, "total_words": rec.total_words},
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(report, f, ensure_ascii=False, sort_keys=True, indent=1)
            f.write("\n")

    def show(v, pct=False):
        if v is None:
            return "undefined"
        return f"{v:.2f}%" if pct else f"{v:.4f}"

    print(f"{'metric':<12}{'value':>12}")
    print(f"{'recall':<12}{show(recall):>12}")
    print(f"{'precision':<12}{show(precision):>12}")
    print(f"{'CR':<12}{show(cr, pct=True):>12}")
    print(f"{'WR':<12}{show(wr, pct=True):>12}")
    print(f"tallies: find={det.a_find} false={det.a_false} miss={det.a_miss} "
          f"chars={rec.correct_chars}/{rec.total_chars} words={rec.correct_words}/{rec.total_words}")

    gates = [("recall", recall, args.min_recall), ("precision", precision, args.min_precision),
             ("cr", cr, args.min_cr), ("wr", wr, args.min_wr)]
    for name, value, bound in gates:
        if bound is not None and (value is None or value < bound):
            print(f"metric gate failed: {name}={show(value)} < {bound}", file=sys.stderr)
            return 1
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="capocr",
                                     description="Caption text detection and Arabic glyph "
                                                 "recognition for frame sequences")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="generate synthetic caption clips")
    p.add_argument("--spec", help="JSON file with SyntheticSpec fields")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clips", type=int, default=1)
    p.add_argument("--text", help="caption text override")
    p.add_argument("--emit-bands-csv", action="store_true")
    p.add_argument("--emit-glyph-csv", action="store_true")
    p.add_argument("--config")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("train", help="train the localizer MLP or recognizer prototypes")
    p.add_argument("kind", choices=("localizer", "recognizer"))
    p.add_argument("dataset", help="CSV dataset path")
    p.add_argument("--model-out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("detect", help="detect caption boxes in a frame directory")
    p.add_argument("frames_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--model", help="localizer model path (overrides config)")
    p.add_argument("--debug-dir")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("recognize", help="detect and transcribe captions")
    p.add_argument("frames_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--model", help="localizer model path (overrides config)")
    p.add_argument("--recognizer-model", help="prototype model path (overrides config)")
    p.add_argument("--regions", action="store_true",
                   help="treat each input image as an already-cropped text region")
    p.add_argument("--lexicon")
    p.add_argument("--k", type=int, help="override the model's neighbor count")
    p.add_argument("--debug-dir")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("evaluate", help="score predictions against ground truth")
    p.add_argument("pred")
    p.add_argument("truth")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--config")
    p.add_argument("--min-recall", type=float)
    p.add_argument("--min-precision", type=float)
    p.add_argument("--min-cr", type=float)
    p.add_argument("--min-wr", type=float)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
