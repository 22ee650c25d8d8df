"""Discretized unit ball and covering diagnostics."""

from __future__ import annotations

import csv

import numpy as np

from pgreedy.errors import InputError
from pgreedy.kernel import as_points, distances


def grid_axis(per_axis: int) -> np.ndarray:
    """``per_axis`` equispaced coordinates on [-1, 1], endpoints included."""
    i = np.arange(per_axis, dtype=float)
    return -1.0 + 2.0 * i / (per_axis - 1)


def discretize_ball(dim: int, per_axis: int) -> np.ndarray:
    """Points of the uniform ``per_axis**dim`` grid on [-1, 1]^dim inside the unit ball.

    Rows come out in lexicographic grid order (last coordinate fastest), which
    fixes the candidate indices used for tie-breaking. Points exactly on the
    unit sphere are kept.
    """
    if dim < 1:
        raise InputError("dim must be >= 1")
    if per_axis < 2:
        raise InputError("per_axis must be >= 2")
    # membership is decided on integer grid offsets: (0.6, 0.8) and similar
    # lattice points on the sphere would be lost to rounding in floating point
    offsets = 2 * np.arange(per_axis, dtype=np.int64) - (per_axis - 1)
    mesh = np.meshgrid(*([offsets] * dim), indexing="ij")
    ints = np.stack([m.reshape(-1) for m in mesh], axis=1)
    inside = np.einsum("ij,ij->i", ints, ints) <= (per_axis - 1) ** 2
    idx = (ints[inside] + (per_axis - 1)) // 2
    return np.ascontiguousarray(grid_axis(per_axis)[idx])


def fill_distance(selected, candidates) -> float:
    """``max_{c in candidates} min_{s in selected} ||c - s||_2`` by brute force."""
    candidates = np.asarray(candidates, dtype=float)
    dim = candidates.shape[1] if candidates.ndim == 2 else 1
    candidates = as_points(candidates, dim)
    selected = as_points(selected, dim)
    if len(selected) == 0:
        raise InputError("fill distance is undefined for an empty point set")
    nearest = np.full(len(candidates), np.inf)
    for s in selected:
        np.minimum(nearest, distances(s, candidates), out=nearest)
    return float(nearest.max()) if len(candidates) else 0.0


def write_points_csv(path, pts) -> None:
    pts = np.asarray(pts, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(pts.shape[1])])
        for row in pts:
            w.writerow([repr(float(v)) for v in row])


def read_points_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and not _is_numeric(rows[0]):
        rows = rows[1:]
    return np.array([[float(v) for v in r] for r in rows], dtype=float)


def _is_numeric(row) -> bool:
    try:
        [float(v) for v in row]
    except ValueError:
        return False
    return True
