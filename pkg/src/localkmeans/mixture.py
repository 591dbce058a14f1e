"""Synthetic mixture data, separation statistics, and dataset ingestion.

Provides the generators for the two synthetic settings (a symmetric pair of
clusters at ``+theta``/``-theta``, and a general K-component Gaussian
mixture), signal-to-noise bookkeeping, and CSV loading + machine partitioning
for real datasets.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .validation import (
    as_matrix,
    as_vector,
    check_nonnegative,
    check_positive_int,
    machine_rng,
    normalize_seed,
)


@dataclass
class GroundTruth:
    """Generative parameters attached to a synthetic dataset.

    ``theta_star`` is set only for the symmetric two-cluster mode, where the
    centers are ``+theta_star`` and ``-theta_star``.
    """

    centers: np.ndarray          # (K, d)
    sigma: float
    theta_star: np.ndarray | None = None

    def __post_init__(self):
        self.centers = as_matrix(self.centers, "centers")
        self.sigma = check_nonnegative(self.sigma, "sigma")
        if self.theta_star is not None:
            self.theta_star = as_vector(self.theta_star, "theta_star")

    @property
    def gamma(self):
        """Minimum pairwise distance between the true centers."""
        return min_center_separation(self.centers)


def min_center_separation(centers):
    """Smallest pairwise Euclidean distance among the given centers."""
    centers = as_matrix(centers, "centers")
    k = centers.shape[0]
    if k < 2:
        raise ValueError("need at least two centers for a separation")
    dists = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
    return float(dists[np.triu_indices(k, k=1)].min())


def max_center_separation(centers):
    centers = as_matrix(centers, "centers")
    k = centers.shape[0]
    if k < 2:
        raise ValueError("need at least two centers for a separation")
    dists = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
    return float(dists[np.triu_indices(k, k=1)].max())


@dataclass
class MixtureSpec:
    """Ground-truth generative model for the K-cluster synthetic setting.

    Args:
        dimension: ambient dimension d.
        num_clusters: number of mixture components K.
        centers: (K, d) array of true centers, pairwise distinct for K > 1.
        noise_std: per-coordinate Gaussian noise standard deviation.
        num_machines: number of compute nodes m.
        points_per_machine: samples per node n.
        cluster_weights: mixing weights, default uniform; must sum to 1
            within 1e-9.
    """

    dimension: int
    num_clusters: int
    centers: np.ndarray
    noise_std: float
    num_machines: int
    points_per_machine: int
    cluster_weights: np.ndarray | None = None

    def __post_init__(self):
        self.dimension = check_positive_int(self.dimension, "dimension")
        self.num_clusters = check_positive_int(self.num_clusters, "num_clusters")
        self.num_machines = check_positive_int(self.num_machines, "num_machines")
        self.points_per_machine = check_positive_int(
            self.points_per_machine, "points_per_machine"
        )
        self.noise_std = check_nonnegative(self.noise_std, "noise_std")
        self.centers = as_matrix(self.centers, "centers")
        if self.centers.shape != (self.num_clusters, self.dimension):
            raise ValueError(
                f"centers must have shape ({self.num_clusters}, {self.dimension}), "
                f"got {self.centers.shape}"
            )
        if self.num_clusters > 1 and min_center_separation(self.centers) <= 0.0:
            raise ValueError("centers must be pairwise distinct")
        if self.cluster_weights is None:
            self.cluster_weights = np.full(
                self.num_clusters, 1.0 / self.num_clusters
            )
        else:
            self.cluster_weights = as_vector(self.cluster_weights, "cluster_weights")
            if self.cluster_weights.shape[0] != self.num_clusters:
                raise ValueError("cluster_weights must have one entry per cluster")
            if np.any(self.cluster_weights < 0):
                raise ValueError("cluster_weights must be non-negative")
            if abs(self.cluster_weights.sum() - 1.0) > 1e-9:
                raise ValueError("cluster_weights must sum to 1 within 1e-9")

    @classmethod
    def orthonormal(cls, num_clusters, dimension, noise_std, num_machines,
                    points_per_machine, scale=1.0, cluster_weights=None):
        """Spec with centers ``scale * e_k`` (scaled standard basis vectors).

        All pairwise center distances then equal ``scale * sqrt(2)``.
        """
        if num_clusters > dimension:
            raise ValueError("orthonormal centers require num_clusters <= dimension")
        centers = scale * np.eye(dimension)[:num_clusters]
        return cls(dimension, num_clusters, centers, noise_std, num_machines,
                   points_per_machine, cluster_weights)

    @classmethod
    def symmetric2(cls, theta_star, noise_std, num_machines, points_per_machine):
        """Two-cluster spec with centers ``+theta_star`` and ``-theta_star``."""
        theta = as_vector(theta_star, "theta_star")
        centers = np.vstack([theta, -theta])
        return cls(theta.shape[0], 2, centers, noise_std, num_machines,
                   points_per_machine)

    def truth(self, theta_star=None):
        return GroundTruth(self.centers, self.noise_std, theta_star)


@dataclass
class DistributedDataset:
    """m machine blocks of n points each, with optional true labels.

    Labels are cluster indices in [0, K); in symmetric mode they are stored
    as {-1, +1} signs instead and converted at the metrics boundary.
    """

    points: np.ndarray                 # (m, n, d)
    labels: np.ndarray | None = None   # (m, n)
    symmetric: bool = False
    truth: GroundTruth | None = field(default=None, repr=False)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 3:
            raise ValueError(
                f"points must have shape (machines, per_machine, dim), "
                f"got {self.points.shape}"
            )
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points contain non-finite values")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != self.points.shape[:2]:
                raise ValueError("labels must match the (machines, per_machine) layout")
            if self.symmetric:
                if not np.all(np.isin(self.labels, (-1, 1))):
                    raise ValueError("symmetric labels must be -1 or +1")
            elif np.any(self.labels < 0):
                raise ValueError("labels must be non-negative cluster indices")

    @property
    def num_machines(self):
        return self.points.shape[0]

    @property
    def points_per_machine(self):
        return self.points.shape[1]

    @property
    def dim(self):
        return self.points.shape[2]

    @property
    def num_points(self):
        return self.points.shape[0] * self.points.shape[1]

    def flat_points(self):
        """All points as one (m*n, d) array, machine blocks in order."""
        return self.points.reshape(-1, self.dim)

    def flat_labels(self):
        return None if self.labels is None else self.labels.reshape(-1)


@dataclass
class SeparationReport:
    """Separation and balance statistics of a labeled dataset.

    gamma: minimum pairwise center distance.
    lambda_ratio: maximum pairwise center distance divided by gamma.
    alpha: smallest global cluster fraction, min_k nu_k / (m*n).
    beta: worst local-to-global cluster balance, min_{i,k} nu_{k,i} / nu_k.
    r: two-cluster SNR (set only for a symmetric +/- center pair).
    r_k: K-cluster SNR.
    """

    gamma: float
    lambda_ratio: float
    alpha: float
    beta: float
    r: float | None
    r_k: float


def snr_symmetric2(theta_norm, sigma, dimension, num_machines, points_per_machine):
    """Two-cluster signal-to-noise ratio ||theta|| / (sigma * sqrt(1 + 9d/(mn)))."""
    if theta_norm <= 0:
        raise ValueError("theta_norm must be positive")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    mn = num_machines * points_per_machine
    return theta_norm / (sigma * np.sqrt(1.0 + 9.0 * dimension / mn))


def sigma_for_snr(target_r, theta_norm, dimension, num_machines, points_per_machine):
    """Noise level sigma at which the two-cluster SNR equals ``target_r``.

    Closed-form inversion of :func:`snr_symmetric2`.
    """
    if target_r <= 0:
        raise ValueError("target_r must be positive")
    if theta_norm <= 0:
        raise ValueError("theta_norm must be positive")
    mn = num_machines * points_per_machine
    return theta_norm / (target_r * np.sqrt(1.0 + 9.0 * dimension / mn))


def snr_kcluster(gamma, sigma, alpha, num_clusters, dimension, num_machines,
                 points_per_machine):
    """K-cluster SNR (gamma/sigma) * sqrt(alpha / (1 + K*d/(mn)))."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    mn = num_machines * points_per_machine
    return (gamma / sigma) * np.sqrt(alpha / (1.0 + num_clusters * dimension / mn))


def generate_symmetric2(theta_star, sigma, num_machines, points_per_machine, seed,
                        noise="gaussian"):
    """Sample the symmetric two-cluster model ``x = z * theta_star + w``.

    Signs z are uniform on {-1, +1}; w is N(0, sigma^2 I_d). Each machine
    draws from an independent sub-stream keyed by (seed, machine index), so
    regenerating any one block does not depend on the others.

    Args:
        theta_star: signal vector, must have positive norm.
        sigma: noise standard deviation, >= 0.
        num_machines: number of machine blocks m.
        points_per_machine: points per block n.
        seed: integer seed; identical seeds give bit-identical datasets.
        noise: noise family; only "gaussian" is implemented.

    Returns:
        DistributedDataset with symmetric=True, labels in {-1, +1}, and
        attached GroundTruth.
    """
    if noise != "gaussian":
        raise ValueError(f"unsupported noise kind: {noise!r}")
    theta = as_vector(theta_star, "theta_star")
    if np.linalg.norm(theta) <= 0:
        raise ValueError("theta_star must have positive norm (SNR is undefined)")
    sigma = check_nonnegative(sigma, "sigma")
    m = check_positive_int(num_machines, "num_machines")
    n = check_positive_int(points_per_machine, "points_per_machine")
    d = theta.shape[0]

    points = np.empty((m, n, d))
    labels = np.empty((m, n), dtype=np.int64)
    for i in range(m):
        rng = machine_rng(seed, i)
        z = rng.integers(0, 2, size=n) * 2 - 1
        w = rng.normal(0.0, sigma, size=(n, d)) if sigma > 0 else np.zeros((n, d))
        points[i] = z[:, None] * theta + w
        labels[i] = z

    truth = GroundTruth(np.vstack([theta, -theta]), sigma, theta_star=theta)
    return DistributedDataset(points, labels, symmetric=True, truth=truth)


def generate_mixture(spec, seed, noise="gaussian"):
    """Sample the K-cluster mixture: label per cluster_weights, Gaussian noise.

    Per-machine sub-streams are keyed by (seed, machine index); see
    :func:`generate_symmetric2` for the determinism contract.
    """
    if noise != "gaussian":
        raise ValueError(f"unsupported noise kind: {noise!r}")
    m = spec.num_machines
    n = spec.points_per_machine
    d = spec.dimension
    weights = spec.cluster_weights / spec.cluster_weights.sum()

    points = np.empty((m, n, d))
    labels = np.empty((m, n), dtype=np.int64)
    for i in range(m):
        rng = machine_rng(seed, i)
        z = rng.choice(spec.num_clusters, size=n, p=weights)
        w = (rng.normal(0.0, spec.noise_std, size=(n, d))
             if spec.noise_std > 0 else np.zeros((n, d)))
        points[i] = spec.centers[z] + w
        labels[i] = z

    return DistributedDataset(points, labels, symmetric=False, truth=spec.truth())


def separation_report(dataset, spec):
    """Compute gamma, lambda, alpha, beta, and the SNRs for a labeled dataset.

    Raises:
        ValueError: if the dataset has no labels or some true cluster is
            globally empty (alpha undefined).
    """
    if dataset.labels is None:
        raise ValueError("separation_report requires true labels")
    k = spec.num_clusters
    gamma = min_center_separation(spec.centers)
    lam = max_center_separation(spec.centers) / gamma

    if dataset.symmetric:
        label_idx = (1 - dataset.labels) // 2  # +1 -> 0, -1 -> 1
    else:
        label_idx = dataset.labels
    mn = dataset.num_points

    global_sizes = np.bincount(label_idx.reshape(-1), minlength=k)
    if np.any(global_sizes == 0):
        empty = int(np.flatnonzero(global_sizes == 0)[0])
        raise ValueError(f"true cluster {empty} is globally empty; alpha is undefined")
    alpha = float(global_sizes.min()) / mn

    per_machine = np.stack(
        [np.bincount(label_idx[i], minlength=k) for i in range(dataset.num_machines)]
    )
    beta = float((per_machine / global_sizes[None, :]).min())

    sigma = spec.noise_std
    r_k = (snr_kcluster(gamma, sigma, alpha, k, spec.dimension,
                        dataset.num_machines, dataset.points_per_machine)
           if sigma > 0 else np.inf)

    r = None
    if k == 2 and np.allclose(spec.centers[1], -spec.centers[0]):
        theta_norm = float(np.linalg.norm(spec.centers[0]))
        r = (snr_symmetric2(theta_norm, sigma, spec.dimension,
                            dataset.num_machines, dataset.points_per_machine)
             if sigma > 0 else np.inf)

    return SeparationReport(gamma, lam, alpha, beta, r, float(r_k))


def load_csv(path, label_column=None, has_header=False):
    """Load a numeric CSV into a flat point array plus optional labels.

    One point per row. If ``label_column`` is given, that column holds the
    class label and the remaining columns form the point; label values are
    mapped to contiguous indices 0..K-1 (sorted by their string form).

    Returns:
        (points, labels): points is (N, d) float64; labels is (N,) int64 or
        None when no label column was given.

    Raises:
        ValueError: on an empty file, ragged rows, non-numeric cells, or a
            label column outside the row width, reporting the file line.
    """
    rows = []
    raw_labels = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line_no, row in enumerate(reader, start=1):
            if has_header and line_no == 1:
                continue
            if not row or (len(row) == 1 and row[0].strip() == ""):
                continue
            if width is None:
                width = len(row)
                if label_column is not None and not 0 <= label_column < width:
                    raise ValueError(
                        f"line {line_no}: label column {label_column} outside "
                        f"row width {width}"
                    )
            elif len(row) != width:
                raise ValueError(
                    f"line {line_no}: expected {width} columns, got {len(row)}"
                )
            if label_column is not None:
                raw_labels.append(row[label_column].strip())
                row = row[:label_column] + row[label_column + 1:]
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise ValueError(f"line {line_no}: non-numeric cell in {row!r}") from None

    if not rows:
        raise ValueError(f"{path}: no data rows")
    points = np.asarray(rows, dtype=np.float64)
    labels = None
    if label_column is not None:
        classes = sorted(set(raw_labels))
        index = {c: i for i, c in enumerate(classes)}
        labels = np.asarray([index[c] for c in raw_labels], dtype=np.int64)
    return points, labels


def partition(points, labels, num_machines, seed):
    """Shuffle points and split them into equal machine blocks.

    Block size is floor(N/m); the remainder points are dropped so every
    machine holds exactly the same count.
    """
    points = as_matrix(points, "points")
    m = check_positive_int(num_machines, "num_machines")
    total = points.shape[0]
    if m > total:
        raise ValueError(f"cannot split {total} points across {m} machines")
    if labels is not None:
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (total,):
            raise ValueError("labels must have one entry per point")

    rng = np.random.default_rng(normalize_seed(seed))
    order = rng.permutation(total)
    n = total // m
    keep = order[: m * n]
    blocks = points[keep].reshape(m, n, points.shape[1])
    block_labels = None if labels is None else labels[keep].reshape(m, n)
    return DistributedDataset(blocks, block_labels, symmetric=False, truth=None)
