"""Text formats: edge lists, label files, point-cloud CSVs, JSON reports."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .graph import Mode, Partition, WeightedGraph


def _dense_ids(tokens: list[str]) -> tuple[np.ndarray, np.ndarray]:
    """Map arbitrary vertex tokens to ``0..n-1``.

    Integer-looking ids are ordered numerically, anything else lexically.
    Returns (dense index per token, original id per dense index).
    """
    uniq = sorted(set(tokens))
    try:
        keyed = sorted(uniq, key=int)
        originals = np.array([int(t) for t in keyed], dtype=object)
    except ValueError:
        keyed = uniq
        originals = np.array(keyed, dtype=object)
    pos = {t: i for i, t in enumerate(keyed)}
    return np.array([pos[t] for t in tokens], dtype=np.int64), originals


def read_edge_list(path, mode: Mode | str = Mode.COST) -> tuple[WeightedGraph, np.ndarray]:
    """Read ``u v [weight]`` lines (``#`` comments allowed).

    A missing weight column means weight 1. Returns the graph and the array
    of original vertex ids indexed by dense id.
    """
    us, vs, ws = [], [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'u v [weight]'")
            us.append(parts[0])
            vs.append(parts[1])
            ws.append(float(parts[2]) if len(parts) == 3 else 1.0)
    idx, originals = _dense_ids(us + vs)
    m = len(us)
    g = WeightedGraph(len(originals), idx[:m], idx[m:], np.asarray(ws), mode)
    return g, originals


def write_edge_list(path, g: WeightedGraph, ids=None, header: str | None = None) -> None:
    ids = np.arange(g.n) if ids is None else np.asarray(ids, dtype=object)
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        for a, b, w in zip(g.u, g.v, g.w):
            fh.write(f"{ids[a]}\t{ids[b]}\t{float(w)!r}\n")


def read_labels(path, ids=None) -> Partition:
    """Read ``u label`` lines, aligned with the dense ids of an edge list.

    ``ids`` is the original-id array returned by :func:`read_edge_list`; when
    omitted, vertex tokens must already be dense integers. Label values are
    remapped to ``0..k-1`` in sorted order.
    """
    raw: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u label'")
            raw[parts[0]] = parts[1]
    if ids is None:
        keys = sorted(raw, key=int)
        if [int(k) for k in keys] != list(range(len(keys))):
            raise ValueError("label file ids are not dense 0..n-1; pass the edge-list id map")
        ids = np.array([int(k) for k in keys], dtype=object)
    missing = [i for i in ids if str(i) not in raw]
    if missing:
        raise ValueError(f"{len(missing)} vertices have no label (e.g. {missing[0]})")
    values = [raw[str(i)] for i in ids]
    lab_idx, _ = _dense_ids(values)
    return Partition(lab_idx)


def write_labels(path, z: Partition, ids=None) -> None:
    ids = np.arange(z.n) if ids is None else np.asarray(ids, dtype=object)
    with open(path, "w") as fh:
        for i, lab in zip(ids, z.labels):
            fh.write(f"{i}\t{int(lab)}\n")


def read_point_cloud(path, label_col: str | None = None):
    """Load a numeric CSV with a header row; ``label_col`` names the label column."""
    from .transforms import PointCloud

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [r for r in reader if r]
    if label_col is not None and label_col not in header:
        raise ValueError(f"label column {label_col!r} not in CSV header")
    feat_cols = [i for i, h in enumerate(header) if h != label_col]
    pts = np.array([[float(r[i]) for i in feat_cols] for r in rows])
    labels = None
    if label_col is not None:
        j = header.index(label_col)
        labels, _ = _dense_ids([r[j] for r in rows])
    return PointCloud(pts, labels)


def write_point_cloud(path, cloud) -> None:
    d = cloud.points.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i}" for i in range(d)] + (["label"] if cloud.labels is not None else []))
        for i, row in enumerate(cloud.points):
            extra = [int(cloud.labels[i])] if cloud.labels is not None else []
            w.writerow([repr(float(x)) for x in row] + extra)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
