"""Loading and saving spaces: CSV matrices, JSON descriptors, content digests.

CSV: n rows of n comma-separated numbers, token ``inf`` allowed, with an
optional leading header row of labels.  JSON: either an explicit
``{"labels", "matrix", "omega"}`` descriptor (infinities written as the
string "inf") or ``{"generator": {"kind", "params", "seed"}}``.
"""

import hashlib
import json
import math
import os

import numpy as np

from .spaces import ExtendedMetricSpace, generate, space_from_matrix

__all__ = [
    "load_space",
    "save_space",
    "load_csv",
    "save_csv",
    "load_json",
    "save_json",
    "space_digest",
    "space_to_descriptor",
    "parse_generator_spec",
]

GENERATOR_KINDS = ("line", "euclidean", "hyperboloid", "strip", "graph", "random_metric")


def _infer_omega(matrix):
    """The unique index whose every off-diagonal entry is +inf, if any."""
    n = matrix.shape[0]
    cands = []
    for i in range(n):
        row = np.delete(matrix[i], i)
        if row.size and np.all(np.isposinf(row)):
            cands.append(i)
    if len(cands) > 1:
        raise ValueError("more than one all-infinite row; at most one point at infinity allowed")
    return cands[0] if cands else None


def _parse_token(tok):
    t = tok.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(tok)


def load_csv(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file")
    first = lines[0].split(",")
    labels = None
    try:
        [_parse_token(t) for t in first]
    except ValueError:
        labels = [t.strip() for t in first]
        lines = lines[1:]
    rows = [[_parse_token(t) for t in ln.split(",")] for ln in lines]
    m = np.array(rows, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{path}: matrix is not square ({m.shape})")
    return space_from_matrix(m, labels, _infer_omega(m))


def save_csv(space, path):
    with open(path, "w") as fh:
        fh.write(",".join(space.labels) + "\n")
        for row in space.dist:
            fh.write(",".join("inf" if math.isinf(v) else repr(float(v)) for v in row) + "\n")


def _matrix_to_jsonable(m):
    return [["inf" if math.isinf(v) else float(v) for v in row] for row in m]


def _matrix_from_jsonable(rows):
    return np.array(
        [[math.inf if isinstance(v, str) else float(v) for v in row] for row in rows], dtype=float
    )


def space_to_descriptor(space):
    return {
        "labels": list(space.labels),
        "matrix": _matrix_to_jsonable(space.dist),
        "omega": space.omega,
    }


def load_json(path):
    with open(path) as fh:
        doc = json.load(fh)
    return space_from_descriptor(doc)


def space_from_descriptor(doc):
    if "generator" in doc:
        g = doc["generator"]
        return generate(g["kind"], g.get("params"), g.get("seed", 0))
    m = _matrix_from_jsonable(doc["matrix"])
    return space_from_matrix(m, doc.get("labels"), doc.get("omega"))


def save_json(space, path):
    with open(path, "w") as fh:
        json.dump(space_to_descriptor(space), fh, indent=1)
        fh.write("\n")


def parse_generator_spec(spec):
    """Parse ``kind:key=val,key=val`` strings, e.g. ``euclidean:dim=2,n=20``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r} (known: {', '.join(GENERATOR_KINDS)})")
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"malformed generator parameter {item!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise ValueError(f"non-numeric generator parameter {item!r}") from None
    return kind, params


def load_space(source, seed=None):
    """Resolve a path (csv/json) or generator spec string to a validated-shape space."""
    if isinstance(source, ExtendedMetricSpace):
        return source
    if os.path.exists(source):
        if source.endswith(".json"):
            return load_json(source)
        return load_csv(source)
    if ":" in source or source in GENERATOR_KINDS:
        kind, params = parse_generator_spec(source)
        return generate(kind, params, 0 if seed is None else seed)
    raise FileNotFoundError(f"no such file and not a generator spec: {source!r}")


def save_space(space, path, fmt=None):
    fmt = fmt or ("csv" if path.endswith(".csv") else "json")
    if fmt == "csv":
        save_csv(space, path)
    elif fmt == "json":
        save_json(space, path)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def space_digest(space):
    """Stable content hash of labels, matrix, and omega index."""
    doc = json.dumps(
        {
            "labels": list(space.labels),
            "matrix": [[repr(float(v)) for v in row] for row in space.dist],
            "omega": space.omega,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(doc.encode()).hexdigest()
