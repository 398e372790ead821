"""Fuzzy k-nearest-neighbor glyph classification and line assembly.

A query segment's class memberships are the distance-weighted average of
its k nearest prototypes' membership rows:

    u_j = sum_t u_jt * w_t / sum_t w_t,   w_t = 1 / d(x, x_t)^(2/(m-1))

with Euclidean d over the 160-vector. A query coincident with prototypes
takes the average of the coincident membership rows directly.
"""

import json
from dataclasses import dataclass

import numpy as np

from .align import levenshtein
from .glyphfeat import FEATURE_DIM, FEATURE_LAYOUT_ID, extract_features


class LayoutMismatch(ValueError):
    """Prototype base was built with a different feature layout."""


@dataclass
class PrototypeSet:
    vectors: np.ndarray  # (n, FEATURE_DIM)
    memberships: np.ndarray  # (n, C), rows sum to 1
    classes: list  # ordered label alphabet
    feature_layout_id: str = FEATURE_LAYOUT_ID


@dataclass
class FuzzyKnnParams:
    k: int = 10
    m: float = 2.0


@dataclass
class ClassMembership:
    u: np.ndarray  # per-class memberships, sum 1
    predicted: str
    runner_up_margin: float


def glyph_code(label):
    """Text glyph for a class label; contextual form suffixes (':form') drop."""
    return label.split(":", 1)[0]


def fuzzy_knn_membership(query, base, params):
    """Classify one feature vector against the prototype base."""
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (FEATURE_DIM,):
        raise ValueError(f"query must have {FEATURE_DIM} features, got {q.shape}")
    if base.feature_layout_id != FEATURE_LAYOUT_ID:
        raise LayoutMismatch(f"prototype layout {base.feature_layout_id!r} != {FEATURE_LAYOUT_ID!r}")
    n = base.vectors.shape[0]
    if n == 0:
        raise ValueError("empty prototype base")
    if not 1 <= params.k <= n:
        raise ValueError(f"k={params.k} outside 1..{n}")
    if params.m <= 1.0:
        raise ValueError("fuzzifier m must be > 1")
    d2 = ((base.vectors - q) ** 2).sum(axis=1)
    nearest = np.argsort(d2, kind="stable")[: params.k]
    if d2[nearest[0]] == 0.0:
        rows = base.memberships[d2 == 0.0]
        u = rows.mean(axis=0)
    else:
        w = d2[nearest] ** (-1.0 / (params.m - 1.0))
        u = (w[:, None] * base.memberships[nearest]).sum(axis=0) / w.sum()
    idx = int(np.argmax(u))
    if u.size > 1:
        margin = float(u[idx] - np.partition(u, -2)[-2])
    else:
        margin = float(u[idx])
    return ClassMembership(u, base.classes[idx], margin)


def train_prototypes(vectors, labels, membership_mode="crisp", k_init=5):
    """Build a prototype base from labeled glyph vectors.

    crisp mode stores one-hot membership rows. knn_soft applies the
    Keller-style initialization u_own = 0.51 + 0.49 * n_own/k and
    u_other = 0.49 * n_other/k, where n_j counts class-j examples among the
    sample's k_init nearest neighbors within the training set (self excluded).
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != FEATURE_DIM or x.shape[0] == 0:
        raise ValueError(f"expected non-empty (n, {FEATURE_DIM}) array, got {x.shape}")
    if len(labels) != x.shape[0]:
        raise ValueError("labels must pair with vectors")
    classes = sorted(set(labels))
    if not classes:
        raise ValueError("no class labels")
    index = {c: i for i, c in enumerate(classes)}
    n = x.shape[0]
    u = np.zeros((n, len(classes)))
    if membership_mode == "crisp":
        for i, lab in enumerate(labels):
            u[i, index[lab]] = 1.0
    elif membership_mode == "knn_soft":
        if not 1 <= k_init <= n - 1:
            raise ValueError(f"k_init={k_init} outside 1..{n - 1}")
        for i in range(n):
            d2 = ((x - x[i]) ** 2).sum(axis=1)
            d2[i] = np.inf
            neighbors = np.argsort(d2, kind="stable")[:k_init]
            for j in neighbors:
                u[i, index[labels[j]]] += 0.49 / k_init
            u[i, index[labels[i]]] += 0.51
    else:
        raise ValueError(f"unknown membership_mode: {membership_mode!r}")
    return PrototypeSet(x.copy(), u, classes)


def recognize_line(segments, base, params):
    """Classify segments (already ordered right-to-left) into a string.

    Returns the concatenated glyph codes in logical order plus the
    per-segment memberships. An empty segment list yields an empty string.
    """
    per_glyph = [fuzzy_knn_membership(extract_features(seg), base, params)
                 for seg in segments]
    text = "".join(glyph_code(cm.predicted) for cm in per_glyph)
    return text, per_glyph


def lexicon_correct(text, lexicon, max_edit_distance=1):
    """Replace text by the unique nearest lexicon word within the bound.

    Exact lexicon hits, empty lexicons, distance ties and words beyond the
    bound all leave the text unchanged.
    """
    if not lexicon or text in lexicon:
        return text
    dists = [levenshtein(text, w) for w in lexicon]
    best = min(dists)
    if best > max_edit_distance:
        return text
    hits = [w for w, d in zip(lexicon, dists) if d == best]
    return hits[0] if len(hits) == 1 else text


def save_prototypes(base, params, path):
    doc = {
        "version": 1,
        "feature_layout_id": base.feature_layout_id,
        "classes": list(base.classes),
        "prototypes": [
            {"vector": v.tolist(), "memberships": m.tolist()}
            for v, m in zip(base.vectors, base.memberships)
        ],
        "params": {"k": params.k, "m": params.m},
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, sort_keys=True)
        f.write("\n")


def load_prototypes(path):
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("version") != 1:
        raise ValueError(f"unsupported recognizer model version: {doc.get('version')}")
    classes = list(doc["classes"])
    protos = doc["prototypes"]
    if not classes or not protos:
        raise ValueError("recognizer model has no classes or prototypes")
    vectors = np.asarray([p["vector"] for p in protos], dtype=np.float64)
    memberships = np.asarray([p["memberships"] for p in protos], dtype=np.float64)
    if vectors.shape[1] != FEATURE_DIM or memberships.shape != (len(protos), len(classes)):
        raise ValueError("recognizer model has wrong dimensions")
    base = PrototypeSet(vectors, memberships, classes, doc["feature_layout_id"])
    params = FuzzyKnnParams(int(doc["params"]["k"]), float(doc["params"]["m"]))
    return base, params


def load_glyph_csv(path):
    """Labeled glyph dataset: FEATURE_DIM feature columns then a label column."""
    feats, labels = [], []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != FEATURE_DIM + 1:
                raise ValueError(f"{path}:{lineno}: expected {FEATURE_DIM + 1} columns, got {len(parts)}")
            try:
                feats.append([float(p) for p in parts[:FEATURE_DIM]])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            labels.append(parts[FEATURE_DIM])
    if not feats:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(feats), labels
