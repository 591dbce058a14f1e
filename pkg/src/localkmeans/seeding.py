"""Initial center selection: distributed k-means++ and perturbed truth."""

import numpy as np

from .lloyd import ClusterModel
from .mixture import min_center_separation
from .validation import as_matrix, check_nonnegative, normalize_seed


def _score_matrix(points, chosen, squared=True):
    """Per-point selection scores given the centers chosen so far.

    With no chosen centers every score is 1 (uniform first pick); afterwards
    a point's score is its distance to the nearest chosen center, squared by
    default (D^2 weighting).
    """
    m, n, _ = points.shape
    if not chosen:
        return np.ones((m, n))
    centers = np.asarray(chosen)
    sq = ((points[:, :, None, :] - centers[None, None, :, :]) ** 2).sum(axis=3)
    best = sq.min(axis=2)
    return best if squared else np.sqrt(best)


def distributed_kmeanspp(data, n_clusters, seed, squared=True):
    """Pick ``n_clusters`` data points as centers by two-stage D^2 sampling.

    Each round scores every point by its (squared) distance to the nearest
    already-chosen center, selects a machine with probability proportional to
    its total score, then a point inside it with probability proportional to
    its own score. Jointly this equals sampling one point out of all m*n with
    probability score / total score, so the procedure matches running
    k-means++ on the pooled data.

    If every score is zero (fewer distinct points than clusters), the round
    falls back to a uniform pick among the points not yet chosen.

    Returns:
        ClusterModel holding the chosen points with all sizes 0.
    """
    m = data.num_machines
    n = data.points_per_machine
    if n_clusters > m * n:
        raise ValueError(f"cannot seed {n_clusters} clusters from {m * n} points")
    rng = np.random.default_rng(normalize_seed(seed))

    chosen = []
    chosen_idx = set()
    for _ in range(n_clusters):
        scores = _score_matrix(data.points, chosen, squared=squared)
        per_machine = scores.sum(axis=1)
        total = per_machine.sum()
        if total > 0:
            machine = rng.choice(m, p=per_machine / total)
            point = rng.choice(n, p=scores[machine] / per_machine[machine])
        else:
            remaining = [(i, j) for i in range(m) for j in range(n)
                         if (i, j) not in chosen_idx]
            machine, point = remaining[rng.integers(len(remaining))]
        chosen_idx.add((machine, point))
        chosen.append(data.points[machine, point].copy())

    return ClusterModel(np.asarray(chosen), np.zeros(n_clusters, dtype=np.int64))


def perturbed_centers(true_centers, rho, seed):
    """True centers plus isotropic noise of expected norm ~ rho * gamma.

    Center k becomes ``theta_k + rho * gamma * g_k`` with g_k ~ N(0, I_d / d)
    and gamma the minimum pairwise distance between the true centers.
    """
    centers = as_matrix(true_centers, "true_centers")
    rho = check_nonnegative(rho, "rho")
    k, d = centers.shape
    if rho == 0.0:
        return ClusterModel(centers.copy(), np.zeros(k, dtype=np.int64))
    gamma = min_center_separation(centers) if k > 1 else 1.0
    rng = np.random.default_rng(normalize_seed(seed))
    noise = rng.normal(0.0, 1.0 / np.sqrt(d), size=(k, d))
    return ClusterModel(centers + rho * gamma * noise, np.zeros(k, dtype=np.int64))
