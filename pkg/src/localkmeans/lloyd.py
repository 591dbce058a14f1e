"""Single-machine Lloyd primitives: nearest-center assignment and mean updates."""

from dataclasses import dataclass

import numpy as np

from .validation import as_matrix


@dataclass
class ClusterModel:
    """K cluster centers plus the number of points attached to each.

    ``sizes[k]`` is the count behind ``centers[k]``; a size of 0 marks a
    cluster that received no points and whose center was carried over.
    """

    centers: np.ndarray  # (K, d)
    sizes: np.ndarray    # (K,)

    def __post_init__(self):
        self.centers = as_matrix(self.centers, "centers")
        self.sizes = np.asarray(self.sizes, dtype=np.int64)
        if self.sizes.ndim != 1 or self.sizes.shape[0] != self.centers.shape[0]:
            raise ValueError("sizes must be 1-D with one entry per center")
        if np.any(self.sizes < 0):
            raise ValueError("sizes must be non-negative")

    @property
    def n_clusters(self):
        return self.centers.shape[0]

    @property
    def dim(self):
        return self.centers.shape[1]

    def copy(self):
        return ClusterModel(self.centers.copy(), self.sizes.copy())


def _check_dims(points, centers):
    if points.shape[1] != centers.shape[1]:
        raise ValueError(
            f"dimension mismatch: points have d={points.shape[1]}, "
            f"centers have d={centers.shape[1]}"
        )


def assign(points, centers):
    """Label each point with its nearest center (squared Euclidean).

    Ties break toward the lowest cluster index.
    """
    points = as_matrix(points, "points")
    centers = as_matrix(centers, "centers")
    _check_dims(points, centers)
    sq_dists = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(sq_dists, axis=1)


def update_centers(points, assignment, n_clusters, prev):
    """Recompute each center as the mean of its assigned points.

    A cluster with no points keeps its center from ``prev`` and gets size 0.
    """
    points = as_matrix(points, "points")
    assignment = np.asarray(assignment, dtype=np.int64)
    if assignment.shape != (points.shape[0],):
        raise ValueError("assignment must label every point")
    if prev.n_clusters != n_clusters:
        raise ValueError(
            f"prev model has {prev.n_clusters} clusters, expected {n_clusters}"
        )
    _check_dims(points, prev.centers)

    centers = prev.centers.copy()
    sizes = np.zeros(n_clusters, dtype=np.int64)
    for k in range(n_clusters):
        mask = assignment == k
        count = int(mask.sum())
        sizes[k] = count
        if count > 0:
            centers[k] = points[mask].sum(axis=0) / count
    return ClusterModel(centers, sizes)


def local_objective(points, centers):
    """Sum over points of the squared distance to the nearest center."""
    points = as_matrix(points, "points")
    centers = as_matrix(centers, "centers")
    _check_dims(points, centers)
    sq_dists = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return float(sq_dists.min(axis=1).sum())
