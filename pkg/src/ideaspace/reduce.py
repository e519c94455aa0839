"""Dimensionality reduction: a compact UMAP and PCA eigenvalue extraction.

The UMAP here is a deterministic, exact-kNN implementation sized for
corpora of a few hundred points: smooth-kNN calibration by bisection,
fuzzy union symmetrization, PCA initialization, and serial negative-
sampling SGD. PCA eigenvalues use the Gram-matrix route when the ambient
dimension exceeds the point count.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

try:
    from numba import njit, prange
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

    prange = range

_SMOOTH_K_TOL = 1e-5
_SMOOTH_K_ITER = 64


@dataclass(frozen=True)
class UmapParams:
    n_neighbors: int = 15
    min_dist: float = 0.1
    n_epochs: int = 400
    learning_rate: float = 1.0
    negative_samples: int = 5
    seed: int = 0
    metric: str = "cosine"  # "cosine" | "euclidean"
    # Opt-in Hogwild-style SGD: faster on large inputs but racy writes
    # make coordinates nondeterministic run to run. Leave False anywhere
    # reproducibility matters.
    parallel_sgd: bool = False

    def __post_init__(self):
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be >= 2")
        if self.min_dist <= 0:
            raise ValueError("min_dist must be positive")
        if self.n_epochs < 1 or self.learning_rate <= 0 or self.negative_samples < 1:
            raise ValueError("n_epochs, learning_rate, negative_samples must be positive")
        if self.metric not in ("cosine", "euclidean"):
            raise ValueError(f"unknown metric {self.metric!r}")


@dataclass(frozen=True)
class Projection:
    """2D coordinates plus the parameters and input digest that made them."""

    points: np.ndarray
    params: UmapParams
    source_digest: str


@dataclass(frozen=True)
class EigenSpectrum:
    """Centered scatter-matrix eigenvalues, sorted descending."""

    values: np.ndarray
    centered: bool
    n_points: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(v) > 1e-9) or np.any(v < -1e-9):
            raise ValueError("eigenvalues must be non-negative and descending")
        object.__setattr__(self, "values", np.maximum(v, 0.0))


def _as_array(matrix) -> np.ndarray:
    vectors = getattr(matrix, "vectors", matrix)
    return np.asarray(vectors, dtype=np.float64)


def _digest_of(matrix) -> str:
    digest = getattr(matrix, "digest", None)
    if callable(digest):
        return digest()
    arr = np.ascontiguousarray(np.asarray(matrix, dtype=np.float64))
    return hashlib.sha256(arr.tobytes()).hexdigest()


def pairwise_distances(x: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        sq = np.sum(x**2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
        return np.sqrt(np.maximum(d2, 0.0))
    if metric == "cosine":
        norms = np.linalg.norm(x, axis=1)
        norms = np.where(norms == 0.0, 1.0, norms)
        unit = x / norms[:, None]
        return np.maximum(1.0 - unit @ unit.T, 0.0)
    raise ValueError(f"unknown metric {metric!r}")


def exact_knn(x: np.ndarray, k: int, metric: str) -> tuple[np.ndarray, np.ndarray]:
    """Indices and distances of each point's k nearest neighbors (self
    excluded), by full pairwise distances with stable ordering."""
    n = x.shape[0]
    dist = pairwise_distances(x, metric)
    np.fill_diagonal(dist, np.inf)
    order = np.argsort(dist, axis=1, kind="stable")[:, :k]
    rows = np.arange(n)[:, None]
    return order, dist[rows, order]


def smooth_knn_calibration(knn_dists: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-point (rho, sigma) for the locally-adaptive neighbor kernel.

    rho is the distance to the nearest neighbor; sigma solves
    sum_j exp(-max(0, d_ij - rho_i) / sigma_i) = log2(k) by bisection.
    """
    n, k = knn_dists.shape
    target = np.log2(k)
    rho = knn_dists[:, 0].copy()
    sigma = np.empty(n)
    for i in range(n):
        shifted = np.maximum(knn_dists[i] - rho[i], 0.0)
        lo, hi, mid = 0.0, np.inf, 1.0
        for _ in range(_SMOOTH_K_ITER):
            psum = float(np.sum(np.exp(-shifted / mid)))
            if abs(psum - target) < _SMOOTH_K_TOL:
                break
            if psum > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = max(mid, 1e-12)
    return rho, sigma


def fuzzy_graph(
    knn_idx: np.ndarray, knn_dists: np.ndarray, rho: np.ndarray, sigma: np.ndarray, n: int
) -> np.ndarray:
    """Symmetrized membership-weight matrix w = a + b - a*b (dense)."""
    w = np.zeros((n, n))
    rows = np.repeat(np.arange(n), knn_idx.shape[1])
    cols = knn_idx.ravel()
    vals = np.exp(-np.maximum(knn_dists - rho[:, None], 0.0) / sigma[:, None]).ravel()
    w[rows, cols] = vals
    wt = w.T
    return w + wt - w * wt


def fit_kernel_coefficients(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares (a, b) for the low-dimensional kernel 1/(1 + a*r^(2b)).

    The target curve is 1 up to min_dist and an exponential falloff
    beyond, evaluated on [0, 3*spread].
    """

    def kernel(r, a, b):
        return 1.0 / (1.0 + a * r ** (2.0 * b))

    r = np.linspace(0.0, 3.0 * spread, 300)
    y = np.where(r < min_dist, 1.0, np.exp(-(r - min_dist) / spread))
    (a, b), _ = curve_fit(kernel, r, y)
    return float(a), float(b)


def principal_axes_init(x: np.ndarray, seed: int) -> np.ndarray:
    """Project onto the top-2 principal axes, rescale each axis to std
    1e-2, and add seeded jitter."""
    centered = x - x.mean(axis=0)
    # Right singular vectors give the principal axes without forming the
    # d x d scatter matrix.
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    coords = centered @ vt[:2].T
    if coords.shape[1] < 2:
        coords = np.hstack([coords, np.zeros((coords.shape[0], 2 - coords.shape[1]))])
    std = coords.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    coords = coords / std * 1e-2
    rng = np.random.default_rng(seed)
    return coords + rng.normal(scale=1e-4, size=coords.shape)


@njit(cache=True)
def _taus_next(state):
    state[0] = (((state[0] & 4294967294) << 12) & 0xFFFFFFFF) ^ (
        (((state[0] << 13) & 0xFFFFFFFF) ^ state[0]) >> 19
    )
    state[1] = (((state[1] & 4294967288) << 4) & 0xFFFFFFFF) ^ (
        (((state[1] << 2) & 0xFFFFFFFF) ^ state[1]) >> 25
    )
    state[2] = (((state[2] & 4294967280) << 17) & 0xFFFFFFFF) ^ (
        (((state[2] << 3) & 0xFFFFFFFF) ^ state[2]) >> 11
    )
    return state[0] ^ state[1] ^ state[2]


@njit(cache=True)
def _sgd_layout(
    embedding,
    head,
    tail,
    epochs_per_sample,
    a,
    b,
    rng_state,
    initial_alpha,
    negative_samples,
    n_epochs,
    n_vertices,
):
    dim = embedding.shape[1]
    alpha = initial_alpha
    epochs_per_negative = epochs_per_sample / negative_samples
    next_sample = epochs_per_sample.copy()
    next_negative = epochs_per_negative.copy()
    for epoch in range(n_epochs):
        for e in range(epochs_per_sample.shape[0]):
            if next_sample[e] > epoch:
                continue
            j = head[e]
            k = tail[e]
            dist_sq = 0.0
            for d in range(dim):
                diff = embedding[j, d] - embedding[k, d]
                dist_sq += diff * diff
            if dist_sq > 0.0:
                grad_coeff = -2.0 * a * b * dist_sq ** (b - 1.0)
                grad_coeff /= a * dist_sq**b + 1.0
            else:
                grad_coeff = 0.0
            for d in range(dim):
                grad_d = grad_coeff * (embedding[j, d] - embedding[k, d])
                if grad_d > 4.0:
                    grad_d = 4.0
                elif grad_d < -4.0:
                    grad_d = -4.0
                embedding[j, d] += grad_d * alpha
                embedding[k, d] -= grad_d * alpha
            next_sample[e] += epochs_per_sample[e]

            n_neg = int((epoch - next_negative[e]) / epochs_per_negative[e])
            for _ in range(n_neg):
                other = _taus_next(rng_state) % n_vertices
                if other == j:
                    continue
                dist_sq = 0.0
                for d in range(dim):
                    diff = embedding[j, d] - embedding[other, d]
                    dist_sq += diff * diff
                if dist_sq > 0.0:
                    grad_coeff = 2.0 * b
                    grad_coeff /= (0.001 + dist_sq) * (a * dist_sq**b + 1.0)
                else:
                    grad_coeff = 0.0
                for d in range(dim):
                    if grad_coeff > 0.0:
                        grad_d = grad_coeff * (embedding[j, d] - embedding[other, d])
                        if grad_d > 4.0:
                            grad_d = 4.0
                        elif grad_d < -4.0:
                            grad_d = -4.0
                    else:
                        grad_d = 4.0
                    embedding[j, d] += grad_d * alpha
            next_negative[e] += n_neg * epochs_per_negative[e]
        alpha = initial_alpha * (1.0 - (epoch + 1) / n_epochs)
    return embedding


@njit(cache=True, parallel=True)
def _sgd_layout_parallel(
    embedding,
    head,
    tail,
    epochs_per_sample,
    a,
    b,
    rng_states,
    initial_alpha,
    negative_samples,
    n_epochs,
    n_vertices,
):
    # Same update rule as _sgd_layout, but edges run concurrently with
    # racy embedding writes (Hogwild); each edge owns an rng state row.
    dim = embedding.shape[1]
    alpha = initial_alpha
    epochs_per_negative = epochs_per_sample / negative_samples
    next_sample = epochs_per_sample.copy()
    next_negative = epochs_per_negative.copy()
    for epoch in range(n_epochs):
        for e in prange(epochs_per_sample.shape[0]):
            if next_sample[e] > epoch:
                continue
            j = head[e]
            k = tail[e]
            dist_sq = 0.0
            for d in range(dim):
                diff = embedding[j, d] - embedding[k, d]
                dist_sq += diff * diff
            if dist_sq > 0.0:
                grad_coeff = -2.0 * a * b * dist_sq ** (b - 1.0)
                grad_coeff /= a * dist_sq**b + 1.0
            else:
                grad_coeff = 0.0
            for d in range(dim):
                grad_d = grad_coeff * (embedding[j, d] - embedding[k, d])
                if grad_d > 4.0:
                    grad_d = 4.0
                elif grad_d < -4.0:
                    grad_d = -4.0
                embedding[j, d] += grad_d * alpha
                embedding[k, d] -= grad_d * alpha
            next_sample[e] += epochs_per_sample[e]

            n_neg = int((epoch - next_negative[e]) / epochs_per_negative[e])
            for _ in range(n_neg):
                other = _taus_next(rng_states[e]) % n_vertices
                if other == j:
                    continue
                dist_sq = 0.0
                for d in range(dim):
                    diff = embedding[j, d] - embedding[other, d]
                    dist_sq += diff * diff
                if dist_sq > 0.0:
                    grad_coeff = 2.0 * b
                    grad_coeff /= (0.001 + dist_sq) * (a * dist_sq**b + 1.0)
                else:
                    grad_coeff = 0.0
                for d in range(dim):
                    if grad_coeff > 0.0:
                        grad_d = grad_coeff * (embedding[j, d] - embedding[other, d])
                        if grad_d > 4.0:
                            grad_d = 4.0
                        elif grad_d < -4.0:
                            grad_d = -4.0
                    else:
                        grad_d = 4.0
                    embedding[j, d] += grad_d * alpha
            next_negative[e] += n_neg * epochs_per_negative[e]
        alpha = initial_alpha * (1.0 - (epoch + 1) / n_epochs)
    return embedding


def umap_fit(matrix, params: UmapParams | None = None) -> Projection:
    """Project an embedding matrix (or raw n x d array) to 2D.

    Deterministic for a fixed (matrix, params): exact kNN, smooth-kNN
    calibration, fuzzy union, PCA init, then serial negative-sampling SGD
    with the learning rate decaying linearly to zero. With
    ``params.parallel_sgd`` the SGD runs Hogwild-parallel instead and
    gives up run-to-run determinism.
    """
    if params is None:
        params = UmapParams()
    x = _as_array(matrix)
    n = x.shape[0]
    if n <= params.n_neighbors:
        raise ValueError(
            f"need at least n_neighbors + 1 = {params.n_neighbors + 1} points, got {n}"
        )

    knn_idx, knn_dists = exact_knn(x, params.n_neighbors, params.metric)
    rho, sigma = smooth_knn_calibration(knn_dists)
    graph = fuzzy_graph(knn_idx, knn_dists, rho, sigma, n)

    max_w = graph.max()
    if max_w <= 0.0:
        raise ValueError("degenerate neighborhood graph (all weights zero)")
    graph[graph < max_w / params.n_epochs] = 0.0
    head, tail = np.nonzero(graph)
    weights = graph[head, tail]
    epochs_per_sample = max_w / weights

    a, b = fit_kernel_coefficients(params.min_dist)
    embedding = np.ascontiguousarray(principal_axes_init(x, params.seed))

    seed_rng = np.random.default_rng(params.seed)
    args = (
        embedding,
        head.astype(np.int64),
        tail.astype(np.int64),
        epochs_per_sample.astype(np.float64),
        float(a),
        float(b),
    )
    tail_args = (
        float(params.learning_rate),
        int(params.negative_samples),
        int(params.n_epochs),
        n,
    )
    if params.parallel_sgd:
        rng_states = seed_rng.integers(
            1 << 16, (1 << 31) - 1, size=(head.shape[0], 3)
        ).astype(np.int64)
        _sgd_layout_parallel(*args, rng_states, *tail_args)
    else:
        rng_state = seed_rng.integers(1 << 16, (1 << 31) - 1, size=3).astype(np.int64)
        _sgd_layout(*args, rng_state, *tail_args)
    return Projection(points=embedding, params=params, source_digest=_digest_of(matrix))


def pca_eigenvalues(matrix, k: int = 10) -> EigenSpectrum:
    """Top-k eigenvalues of the centered scatter matrix, descending.

    When the ambient dimension exceeds the point count the n x n Gram
    matrix of centered rows is used instead of the d x d scatter matrix;
    the nonzero spectra coincide. No 1/(n-1) scaling is applied.
    """
    x = _as_array(matrix)
    n, d = x.shape
    if n < 2:
        raise ValueError("need at least 2 points")
    if k < 1:
        raise ValueError("k must be >= 1")
    centered = x - x.mean(axis=0)
    if d > n:
        values = np.linalg.eigvalsh(centered @ centered.T)
    else:
        values = np.linalg.eigvalsh(centered.T @ centered)
    values = np.sort(values)[::-1]
    values = np.maximum(values, 0.0)
    count = min(k, n - 1, d)
    return EigenSpectrum(values=values[:count], centered=True, n_points=n)


def eigen_gaps(spectrum: EigenSpectrum) -> np.ndarray:
    """Absolute differences between consecutive eigenvalues."""
    values = spectrum.values
    if values.shape[0] < 2:
        raise ValueError("need at least 2 eigenvalues")
    return np.abs(np.diff(values))
