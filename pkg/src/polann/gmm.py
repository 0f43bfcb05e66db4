"""Four-component Gaussian mixture fitted by expectation-maximization.

The mixture density is p(x) = sum_k pi_k * N(x; mu_k, Sigma_k) with one
component per sentiment class.  Components are initialized from labeled
data (class means, covariances, and proportions), which binds component k
to class k for good; EM then refines the parameters on the same features.

All densities are evaluated in log space with log-sum-exp normalization;
full and tied covariances go through Cholesky factorizations, so
log-determinants and Mahalanobis terms stay finite, and reg_covar is
added to every covariance diagonal to keep factorizations positive
definite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from .errors import FitError, PolannError, ValidationError
from .evaluation import confusion, metrics
from .polarity import LABELS, SentimentLabel

COVARIANCE_TYPES = ("full", "diagonal", "tied", "spherical")
N_COMPONENTS = len(LABELS)

_LOG_2PI = math.log(2.0 * math.pi)
_WEIGHT_FLOOR = 10.0 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class GmmConfig:
    """Fitting options; n_components is pinned to the four classes."""

    covariance_type: str = "full"
    tol: float = 1e-4
    max_iter: int = 200
    reg_covar: float = 1e-6
    seed: int = 0
    n_init: int = 1
    n_components: int = N_COMPONENTS

    def __post_init__(self):
        if self.covariance_type not in COVARIANCE_TYPES:
            raise ValidationError(f"unknown covariance type {self.covariance_type!r}")
        if self.tol <= 0:
            raise ValidationError("tol must be positive")
        if self.max_iter <= 0:
            raise ValidationError("max_iter must be positive")
        if self.reg_covar < 0:
            raise ValidationError("reg_covar must be non-negative")
        if self.n_init < 1:
            raise ValidationError("n_init must be at least 1")
        if self.n_components != N_COMPONENTS:
            raise ValidationError(f"n_components is fixed at {N_COMPONENTS}")


@dataclass
class GmmParams:
    """Mixture weights, means, and covariances; component k is class k."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    covariance_type: str
    classes: tuple[SentimentLabel, ...] = field(default_factory=lambda: LABELS)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.means = np.asarray(self.means, dtype=np.float64)
        self.covariances = np.asarray(self.covariances, dtype=np.float64)
        if self.covariance_type not in COVARIANCE_TYPES:
            raise ValidationError(f"unknown covariance type {self.covariance_type!r}")
        if self.weights.shape != (N_COMPONENTS,):
            raise ValidationError("weights must have one entry per component")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-9:
            raise ValidationError("weights must be non-negative and sum to 1")
        if self.means.ndim != 2 or self.means.shape[0] != N_COMPONENTS:
            raise ValidationError("means must be a (4, d) matrix")

    @property
    def feature_dim(self) -> int:
        return self.means.shape[1]

    def copy(self) -> "GmmParams":
        return GmmParams(
            weights=self.weights.copy(),
            means=self.means.copy(),
            covariances=self.covariances.copy(),
            covariance_type=self.covariance_type,
            classes=self.classes,
        )


@dataclass
class FitReport:
    """Trace of one EM run: per-iteration total log-likelihood."""

    final_log_likelihood: float
    iterations: int
    converged: bool
    per_iteration_ll: list[float]


def _chol_log_density(X: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """log N(x; mean, cov) for every row of X, via a Cholesky factor."""
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise FitError(
            "covariance matrix is not positive definite; increase reg_covar"
        ) from exc
    d = X.shape[1]
    log_det = 2.0 * np.sum(np.log(np.diag(chol)))
    solved = solve_triangular(chol, (X - mean).T, lower=True)
    maha = np.sum(solved**2, axis=0)
    return -0.5 * (d * _LOG_2PI + log_det + maha)


def _log_densities(X: np.ndarray, params: GmmParams) -> np.ndarray:
    """(n, 4) matrix of per-component Gaussian log-densities."""
    n, d = X.shape
    out = np.empty((n, N_COMPONENTS), dtype=np.float64)
    cov = params.covariances
    if params.covariance_type == "full":
        for k in range(N_COMPONENTS):
            out[:, k] = _chol_log_density(X, params.means[k], cov[k])
    elif params.covariance_type == "tied":
        for k in range(N_COMPONENTS):
            out[:, k] = _chol_log_density(X, params.means[k], cov)
    elif params.covariance_type == "diagonal":
        if np.any(cov <= 0):
            raise FitError("diagonal covariance has non-positive entries; increase reg_covar")
        log_det = np.sum(np.log(cov), axis=1)
        diff = X[:, None, :] - params.means[None, :, :]
        maha = np.sum(diff**2 / cov[None, :, :], axis=2)
        out = -0.5 * (d * _LOG_2PI + log_det[None, :] + maha)
    else:  # spherical
        if np.any(cov <= 0):
            raise FitError("spherical covariance has non-positive entries; increase reg_covar")
        diff = X[:, None, :] - params.means[None, :, :]
        sq = np.sum(diff**2, axis=2)
        out = -0.5 * (d * _LOG_2PI + d * np.log(cov)[None, :] + sq / cov[None, :])
    return out


def _e_step(X: np.ndarray, params: GmmParams) -> tuple[float, np.ndarray]:
    """Total log-likelihood and log-responsibilities under current params."""
    log_prob = _log_densities(X, params) + np.log(params.weights)[None, :]
    log_norm = logsumexp(log_prob, axis=1)
    log_resp = log_prob - log_norm[:, None]
    return float(np.sum(log_norm)), log_resp


def _m_step(
    X: np.ndarray, resp: np.ndarray, covariance_type: str, reg_covar: float
) -> GmmParams:
    """Weighted parameter updates from responsibilities."""
    n, d = X.shape
    nk = resp.sum(axis=0) + _WEIGHT_FLOOR
    weights = nk / nk.sum()
    means = (resp.T @ X) / nk[:, None]
    if covariance_type == "full":
        cov = np.empty((N_COMPONENTS, d, d))
        for k in range(N_COMPONENTS):
            diff = X - means[k]
            cov[k] = ((resp[:, k, None] * diff).T @ diff) / nk[k]
            cov[k].flat[:: d + 1] += reg_covar
    elif covariance_type == "tied":
        scatter = X.T @ X - (nk[:, None] * means).T @ means
        cov = scatter / n
        cov.flat[:: d + 1] += reg_covar
    elif covariance_type == "diagonal":
        avg_sq = (resp.T @ (X * X)) / nk[:, None]
        cov = avg_sq - means**2 + reg_covar
    else:  # spherical
        avg_sq = (resp.T @ (X * X)) / nk[:, None]
        cov = (avg_sq - means**2 + reg_covar).mean(axis=1)
    return GmmParams(
        weights=weights, means=means, covariances=cov, covariance_type=covariance_type
    )


def init_supervised(
    features,
    labels: Sequence[SentimentLabel],
    covariance_type: str = "full",
    reg_covar: float = 1e-6,
) -> GmmParams:
    """Initialize one component per class from labeled feature rows.

    Component k gets the class-k sample mean and covariance (plus
    reg_covar on the diagonal) and a weight equal to the class proportion.
    A single-example class falls back to the identity scaled by reg_covar
    plus the global feature variance.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError("features must be a 2-D matrix")
    labels = list(labels)
    if len(labels) != X.shape[0]:
        raise ValidationError("feature rows and labels must align")
    if covariance_type not in COVARIANCE_TYPES:
        raise ValidationError(f"unknown covariance type {covariance_type!r}")
    n, d = X.shape
    global_var = float(X.var())
    means = np.empty((N_COMPONENTS, d))
    raw_covs = np.empty((N_COMPONENTS, d, d))
    counts = np.zeros(N_COMPONENTS)
    label_idx = np.array([int(label) for label in labels])
    for k, label in enumerate(LABELS):
        mask = label_idx == k
        counts[k] = mask.sum()
        if counts[k] == 0:
            raise ValidationError(f"class {label} has no examples")
        rows = X[mask]
        means[k] = rows.mean(axis=0)
        if counts[k] == 1:
            raw_covs[k] = np.eye(d) * global_var
        else:
            diff = rows - means[k]
            raw_covs[k] = (diff.T @ diff) / counts[k]
    if covariance_type == "full":
        cov = raw_covs.copy()
        for k in range(N_COMPONENTS):
            cov[k].flat[:: d + 1] += reg_covar
    elif covariance_type == "tied":
        cov = np.tensordot(counts, raw_covs, axes=1) / n
        cov.flat[:: d + 1] += reg_covar
    elif covariance_type == "diagonal":
        cov = np.stack([np.diag(raw_covs[k]) for k in range(N_COMPONENTS)]) + reg_covar
    else:  # spherical
        cov = np.array([np.diag(raw_covs[k]).mean() for k in range(N_COMPONENTS)]) + reg_covar
    return GmmParams(
        weights=counts / n, means=means, covariances=cov, covariance_type=covariance_type
    )


def _run_em(X: np.ndarray, params: GmmParams, config: GmmConfig) -> tuple[GmmParams, FitReport]:
    per_ll: list[float] = []
    prev_ll = None
    converged = False
    for _ in range(config.max_iter):
        ll, log_resp = _e_step(X, params)
        if not math.isfinite(ll):
            raise FitError(f"log-likelihood became non-finite ({ll})")
        per_ll.append(ll)
        if prev_ll is not None and abs(ll - prev_ll) < config.tol:
            converged = True
            break
        prev_ll = ll
        params = _m_step(X, np.exp(log_resp), config.covariance_type, config.reg_covar)
    report = FitReport(
        final_log_likelihood=per_ll[-1],
        iterations=len(per_ll),
        converged=converged,
        per_iteration_ll=per_ll,
    )
    return params, report


def fit_em(features, init: GmmParams, config: GmmConfig) -> tuple[GmmParams, FitReport]:
    """Run EM from a supervised initialization; best of n_init runs wins.

    Run 1 starts exactly at the initialization; later runs perturb the
    initial means with seeded zero-mean noise (0.1 times the per-dimension
    data spread) so the component-class binding survives restarts.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < N_COMPONENTS:
        raise ValidationError(f"need a 2-D matrix with at least {N_COMPONENTS} rows")
    if X.shape[1] != init.feature_dim:
        raise ValidationError(
            f"feature dimension {X.shape[1]} does not match init ({init.feature_dim})"
        )
    if init.covariance_type != config.covariance_type:
        raise ValidationError("init covariance layout does not match the config")
    rng = np.random.default_rng(config.seed)
    scale = 0.1 * X.std(axis=0)
    best: tuple[GmmParams, FitReport] | None = None
    for run in range(config.n_init):
        start = init.copy()
        if run > 0:
            start.means = init.means + rng.normal(size=init.means.shape) * scale
        params, report = _run_em(X, start, config)
        if best is None or report.final_log_likelihood > best[1].final_log_likelihood:
            best = (params, report)
    assert best is not None
    return best


def predict_proba(params: GmmParams, features) -> np.ndarray:
    """Per-component posterior responsibilities; every row sums to 1."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.feature_dim:
        raise ValidationError(
            f"features must be 2-D with {params.feature_dim} columns"
        )
    _, log_resp = _e_step(X, params)
    resp = np.exp(log_resp)
    return resp / resp.sum(axis=1, keepdims=True)


def predict(params: GmmParams, features) -> list[SentimentLabel]:
    """Most-probable component mapped through the component-class binding."""
    resp = predict_proba(params, features)
    return [params.classes[k] for k in np.argmax(resp, axis=1)]


def grid_search(
    features, labels: Sequence[SentimentLabel], grid: Sequence[GmmConfig]
) -> tuple[GmmParams, GmmConfig, dict[GmmConfig, float]]:
    """Fit each config, score by macro-F1 on the training labels, keep the best.

    Configurations that fail to fit score -1 instead of aborting the
    search; earlier grid positions win ties.
    """
    if not grid:
        raise ValidationError("grid must contain at least one configuration")
    labels = list(labels)
    scores: dict[GmmConfig, float] = {}
    best = None
    for position, config in enumerate(grid):
        try:
            init = init_supervised(
                features,
                labels,
                covariance_type=config.covariance_type,
                reg_covar=config.reg_covar,
            )
            params, _ = fit_em(features, init, config)
            predicted = predict(params, features)
            score = metrics(confusion(labels, predicted)).macro_f1
        except PolannError:
            scores[config] = -1.0
            continue
        scores[config] = score
        if best is None or score > best[0]:
            best = (score, position, params, config)
    if best is None:
        raise FitError("every grid configuration failed to fit")
    return best[2], best[3], scores


def default_grid(seed: int = 0, tol: float = 1e-4, max_iter: int = 200) -> list[GmmConfig]:
    """Covariance type x reg_covar x n_init cross (24 configurations)."""
    grid = []
    for covariance_type in COVARIANCE_TYPES:
        for reg_covar in (1e-6, 1e-4, 1e-2):
            for n_init in (1, 5):
                grid.append(
                    GmmConfig(
                        covariance_type=covariance_type,
                        tol=tol,
                        max_iter=max_iter,
                        reg_covar=reg_covar,
                        seed=seed,
                        n_init=n_init,
                    )
                )
    return grid


def params_to_dict(params: GmmParams) -> dict:
    return {
        "covariance_type": params.covariance_type,
        "feature_dim": params.feature_dim,
        "classes": [str(label) for label in params.classes],
        "weights": params.weights.tolist(),
        "means": params.means.tolist(),
        "covariances": params.covariances.tolist(),
    }


def params_from_dict(data: dict) -> GmmParams:
    try:
        classes = tuple(SentimentLabel.parse(name) for name in data["classes"])
        params = GmmParams(
            weights=np.asarray(data["weights"], dtype=np.float64),
            means=np.asarray(data["means"], dtype=np.float64),
            covariances=np.asarray(data["covariances"], dtype=np.float64),
            covariance_type=data["covariance_type"],
            classes=classes,
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed mixture parameter document: {exc}") from exc
    if params.feature_dim != data.get("feature_dim", params.feature_dim):
        raise ValidationError("declared feature_dim does not match the means matrix")
    return params


def save_params(params: GmmParams, stream) -> None:
    json.dump(params_to_dict(params), stream, indent=2)
    stream.write("\n")


def load_params(data) -> GmmParams:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid parameter JSON: {exc.msg}") from exc
    return params_from_dict(obj)
