"""Speaker vectors, k-means clustering, and a 2-D t-SNE embedding.

Everything here is deterministic given (inputs, seed): numpy Generators
are seeded explicitly and no step depends on iteration order of sets or
dicts. Distances are squared Euclidean throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .confusion import ConfusionMatrix, SpeakerProfile
from .errors import ValidationError

RAW_COUNTS = "raw_counts"
ROW_FREQUENCY = "row_frequency"


@dataclass
class SpeakerVector:
    """Row-major flattening of a confusion matrix (inventory² dimensions)."""

    speaker_id: str
    values: np.ndarray
    normalization: str = RAW_COUNTS


def vectorize(matrix, normalization: str = RAW_COUNTS,
              speaker_id: str = "") -> SpeakerVector:
    """Flatten a ConfusionMatrix (or a SpeakerProfile) into one vector.

    row_frequency divides each row by its sum so speakers with different
    utterance volumes become comparable; empty rows stay zero.
    """
    if isinstance(matrix, SpeakerProfile):
        speaker_id = matrix.speaker_id
        matrix = matrix.matrix
    if not isinstance(matrix, ConfusionMatrix):
        raise ValidationError("vectorize expects a ConfusionMatrix or SpeakerProfile")
    counts = matrix.counts.astype(np.float64)
    if normalization == ROW_FREQUENCY:
        sums = counts.sum(axis=1, keepdims=True)
        nonzero = sums[:, 0] > 0
        counts[nonzero] /= sums[nonzero]
    elif normalization != RAW_COUNTS:
        raise ValidationError(f"unknown normalization {normalization!r}")
    return SpeakerVector(speaker_id, counts.reshape(-1), normalization)


@dataclass
class ClusterResult:
    assignments: dict[str, int]
    centroids: np.ndarray
    inertia: float
    iterations: int
    seed: int
    inertia_history: list[float] = field(default_factory=list)


def _stack(vectors) -> tuple[list[str], np.ndarray]:
    ids = [v.speaker_id for v in vectors]
    data = np.stack([np.asarray(v.values, dtype=np.float64) for v in vectors])
    return ids, data


def _sq_dists(data: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = data[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _init_kmeanspp(data: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = data.shape[0]
    centers = np.empty((k, data.shape[1]))
    first = rng.integers(n)
    centers[0] = data[first]
    closest = _sq_dists(data, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        if total == 0.0:
            # all remaining points coincide with a center; any pick works
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=closest / total)
        centers[c] = data[idx]
        closest = np.minimum(closest, _sq_dists(data, centers[c:c + 1])[:, 0])
    return centers


def kmeans(vectors, k: int, seed: int = 0, init: str = "kmeanspp",
           max_iter: int = 300, rel_tol: float = 1e-9) -> ClusterResult:
    """Lloyd iterations until assignment fixpoint, inertia plateau, or max_iter.

    Empty clusters are re-seeded with the point farthest from its
    assigned centroid. Inertia is checked to be non-increasing on every
    iteration.
    """
    ids, data = _stack(vectors)
    n = data.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} out of range for {n} vectors")
    rng = np.random.default_rng(seed)
    if init == "kmeanspp":
        centers = _init_kmeanspp(data, k, rng)
    elif init == "forgy":
        centers = data[rng.choice(n, size=k, replace=False)].copy()
    else:
        raise ValidationError(f"unknown init {init!r}")

    dists = _sq_dists(data, centers)
    labels = dists.argmin(axis=1)
    inertia = float(dists[np.arange(n), labels].sum())
    history = [inertia]
    iterations = 0

    for iterations in range(1, max_iter + 1):
        for c in range(k):
            members = labels == c
            if members.any():
                centers[c] = data[members].mean(axis=0)
            else:
                farthest = int(np.argmax(dists[np.arange(n), labels]))
                centers[c] = data[farthest]
                labels[farthest] = c
        dists = _sq_dists(data, centers)
        new_labels = dists.argmin(axis=1)
        new_inertia = float(dists[np.arange(n), new_labels].sum())
        # Lloyd is monotone; allow only float-noise-level slack
        if new_inertia > inertia * (1 + 1e-12) + 1e-12:
            raise AssertionError(
                f"inertia increased: {inertia} -> {new_inertia}"
            )
        history.append(new_inertia)
        converged = bool((new_labels == labels).all())
        plateau = abs(inertia - new_inertia) < rel_tol * max(inertia, 1e-30)
        labels, inertia = new_labels, new_inertia
        if converged or plateau:
            break

    assignments = {sid: int(c) for sid, c in zip(ids, labels)}
    return ClusterResult(assignments, centers, inertia, iterations, seed, history)


def purity(result: ClusterResult, labels: dict[str, str]) -> float:
    """Fraction of points whose cluster's majority label matches their own."""
    missing = [sid for sid in result.assignments if sid not in labels]
    if missing:
        raise ValidationError(f"no group label for {missing[0]!r}")
    by_cluster: dict[int, dict[str, int]] = {}
    for sid, cluster in result.assignments.items():
        counts = by_cluster.setdefault(cluster, {})
        lab = labels[sid]
        counts[lab] = counts.get(lab, 0) + 1
    total = len(result.assignments)
    agreeing = sum(max(counts.values()) for counts in by_cluster.values())
    return agreeing / total


@dataclass
class EmbeddingPoint:
    speaker_id: str
    x: float
    y: float


@dataclass
class TsneResult:
    points: list[EmbeddingPoint]
    kl_divergence: float
    initial_kl: float
    iterations: int


def pairwise_sq_dists(data: np.ndarray) -> np.ndarray:
    diff = data[:, None, :] - data[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def conditional_affinities(sq_dists: np.ndarray, perplexity: float,
                           entropy_tol: float = 1e-5,
                           max_steps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Per-point Gaussian affinities with entropy matched to log2(perplexity).

    Binary search over each point's precision beta; returns the row-wise
    conditional distribution matrix (zero diagonal, rows sum to 1) and
    the achieved entropies in bits. When the target entropy is
    unreachable (e.g. all neighbors equidistant) the closest achievable
    distribution is kept.
    """
    n = sq_dists.shape[0]
    target = math.log2(perplexity)
    P = np.zeros((n, n))
    entropies = np.zeros(n)
    for i in range(n):
        d = np.delete(sq_dists[i], i)
        beta = 1.0
        beta_min, beta_max = -np.inf, np.inf
        row = None
        entropy = 0.0
        for _ in range(max_steps):
            w = np.exp(-d * beta)
            total = w.sum()
            if total <= 0.0:
                row = np.full_like(d, 1.0 / len(d))
            else:
                row = w / total
            nz = row > 0
            entropy = float(-(row[nz] * np.log2(row[nz])).sum())
            diff = entropy - target
            if abs(diff) <= entropy_tol:
                break
            if diff > 0:
                beta_min = beta
                beta = beta * 2.0 if beta_max == np.inf else (beta + beta_max) / 2.0
            else:
                beta_max = beta
                beta = beta / 2.0 if beta_min == -np.inf else (beta + beta_min) / 2.0
        entropies[i] = entropy
        P[i, np.arange(n) != i] = row
    return P, entropies


def symmetrized_affinities(conditional: np.ndarray) -> np.ndarray:
    n = conditional.shape[0]
    return (conditional + conditional.T) / (2.0 * n)


def _kl(P: np.ndarray, Y: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """KL(P || Q) in nats plus the Student-t kernel pieces for the gradient."""
    n = Y.shape[0]
    num = 1.0 / (1.0 + pairwise_sq_dists(Y))
    np.fill_diagonal(num, 0.0)
    Q = num / num.sum()
    tiny = 1e-12
    mask = P > 0
    kl = float((P[mask] * np.log(np.maximum(P[mask], tiny)
                                 / np.maximum(Q[mask], tiny))).sum())
    return kl, num, Q


def tsne(vectors, perplexity: float = 5.0, learning_rate: float = 200.0,
         iterations: int = 1000, seed: int = 0,
         early_exaggeration: float = 12.0, exaggeration_iters: int = 250,
         entropy_tol: float = 1e-5) -> TsneResult:
    """Exact (non-approximated) t-SNE to 2 dimensions.

    Gradient descent with momentum (0.5 for the exaggerated phase, 0.8
    after); the input set is tiny so no tree approximation is warranted.
    """
    ids, data = _stack(vectors)
    n = data.shape[0]
    if n < 3:
        raise ValidationError("t-SNE needs at least 3 points")
    if not perplexity < n - 1:
        raise ValidationError(
            f"perplexity {perplexity} infeasible for {n} points (need < {n - 1})"
        )

    cond, _ = conditional_affinities(pairwise_sq_dists(data), perplexity,
                                     entropy_tol)
    P = symmetrized_affinities(cond)

    rng = np.random.default_rng(seed)
    Y = rng.normal(0.0, 1e-4, size=(n, 2))
    update = np.zeros_like(Y)
    gains = np.ones_like(Y)

    initial_kl, _, _ = _kl(P, Y)

    for it in range(iterations):
        exaggerating = it < exaggeration_iters
        P_eff = P * early_exaggeration if exaggerating else P
        momentum = 0.5 if exaggerating else 0.8
        _, num, Q = _kl(P, Y)
        PQ = (P_eff - Q) * num
        grad = 4.0 * (np.diag(PQ.sum(axis=1)) - PQ) @ Y
        # delta-bar-delta gains keep the step sizes stable under momentum
        agree = (grad > 0) == (update > 0)
        gains[agree] *= 0.8
        gains[~agree] += 0.2
        np.clip(gains, 0.01, None, out=gains)
        update = momentum * update - learning_rate * gains * grad
        Y = Y + update
        Y = Y - Y.mean(axis=0)

    final_kl, _, _ = _kl(P, Y)
    if not np.isfinite(Y).all() or not np.isfinite(final_kl):
        raise ArithmeticError("t-SNE diverged; lower the learning rate")

    points = [EmbeddingPoint(sid, float(x), float(y)) for sid, (x, y) in zip(ids, Y)]
    return TsneResult(points, final_kl, initial_kl, iterations)
