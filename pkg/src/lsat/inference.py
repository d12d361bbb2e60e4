"""Grid Bayesian updates, segment-weighted prediction and a ridge baseline.

The posterior lives on an explicit parameter grid: an update multiplies
the current belief by a likelihood vector and renormalizes by the evidence
sum, returning a fresh grid. Segment-weighted prediction is a convex
combination of per-segment probabilities with caller weights. The ridge
regressor (normal equations, Cholesky solve, unpenalized intercept) is
the stand-in predictor behind the features -> value interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import (
    AllZeroWeights,
    DimensionMismatch,
    EmptyInput,
    EvidenceZero,
    SingularSystem,
)

_PROB_TOL = 1e-12


def _prob_vector(values, name: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatch(f"{name} must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    if np.any(v < 0):
        raise ValueError(f"{name} must be nonnegative")
    return v


@dataclass(frozen=True)
class PosteriorGrid:
    """Discrete belief over a parameter grid.

    prior is the belief used by the most recent update (sums to 1),
    likelihood the vector applied, posterior the normalized product. On a
    fresh grid posterior equals prior under a unit likelihood.
    """

    parameters: np.ndarray
    prior: np.ndarray
    likelihood: np.ndarray
    posterior: np.ndarray

    def __post_init__(self):
        params = np.asarray(self.parameters, dtype=float)
        prior = _prob_vector(self.prior, "prior")
        like = _prob_vector(self.likelihood, "likelihood")
        post = _prob_vector(self.posterior, "posterior")
        if not (params.shape == prior.shape == like.shape == post.shape):
            raise DimensionMismatch("grid vectors must share one length")
        for name, vec in (("prior", prior), ("posterior", post)):
            if abs(vec.sum() - 1.0) > _PROB_TOL:
                raise ValueError(f"{name} must sum to 1 within {_PROB_TOL:g}")
        for obj, arr in (
            ("parameters", params),
            ("prior", prior),
            ("likelihood", like),
            ("posterior", post),
        ):
            object.__setattr__(self, obj, arr)
            arr.setflags(write=False)

    @staticmethod
    def from_prior(parameters, prior) -> "PosteriorGrid":
        """Fresh grid whose posterior is the prior itself."""
        p = _prob_vector(prior, "prior")
        return PosteriorGrid(
            parameters=np.asarray(parameters, dtype=float),
            prior=p,
            likelihood=np.ones_like(p),
            posterior=p.copy(),
        )

    def mean(self) -> float:
        return float(np.dot(self.parameters, self.posterior))

    def variance(self) -> float:
        m = self.mean()
        return float(np.dot((self.parameters - m) ** 2, self.posterior))


def grid_posterior(grid: PosteriorGrid, likelihood) -> PosteriorGrid:
    """Multiply the grid's current belief by a likelihood and renormalize.

    posterior_i = belief_i * likelihood_i / sum_j belief_j * likelihood_j.
    The returned grid's prior is the belief that entered this update, so
    chained calls compose sequentially. Raises EvidenceZero when every
    product vanishes.
    """
    like = _prob_vector(likelihood, "likelihood")
    if like.shape != grid.posterior.shape:
        raise DimensionMismatch("likelihood length must match the grid")
    unnorm = grid.posterior * like
    evidence = unnorm.sum()
    if evidence == 0.0:
        raise EvidenceZero("all prior*likelihood products are zero")
    return PosteriorGrid(
        parameters=grid.parameters,
        prior=grid.posterior,
        likelihood=like,
        posterior=unnorm / evidence,
    )


@dataclass(frozen=True)
class SegmentWeight:
    """One segment's prediction weight rho and probability-like value p."""

    rho: float
    p: float

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho >= 0):
            raise ValueError("rho must be finite and nonnegative")
        if not np.isfinite(self.p):
            raise ValueError("p must be finite")


def weighted_prediction(entries: Sequence[SegmentWeight]) -> float:
    """Normalized weighted sum: sum_k (rho_k / sum rho) * p_k."""
    if not entries:
        raise EmptyInput("need at least one segment weight")
    rho = np.array([e.rho for e in entries])
    total = rho.sum()
    if total <= 0.0:
        raise AllZeroWeights("segment weights sum to zero")
    p = np.array([e.p for e in entries])
    return float(np.dot(rho / total, p))


@dataclass(frozen=True)
class BaselineModel:
    """Affine model: feature weights followed by the intercept (last entry)."""

    weights: np.ndarray
    ridge_lambda: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise DimensionMismatch("weights must be a nonempty vector")
        if self.ridge_lambda < 0:
            raise ValueError("ridge lambda must be nonnegative")
        object.__setattr__(self, "weights", w)
        w.setflags(write=False)

    @property
    def n_features(self) -> int:
        return self.weights.size - 1


def fit_baseline(features, targets, ridge_lambda: float = 0.0) -> BaselineModel:
    """Ridge fit minimizing ||Xw + b - y||^2 + lambda ||w||^2.

    Solved through the normal equations with a Cholesky factorization of
    the (symmetric positive-definite) regularized Gram matrix; the
    intercept is never penalized. Raises SingularSystem when lambda = 0
    and the Gram matrix is rank-deficient.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.size or x.shape[0] < 1:
        raise DimensionMismatch("features must be M x F with M matching targets")
    if ridge_lambda < 0:
        raise ValueError("ridge lambda must be nonnegative")
    design = np.hstack([x, np.ones((x.shape[0], 1))])
    gram = design.T @ design
    penalty = np.eye(design.shape[1])
    penalty[-1, -1] = 0.0  # intercept stays unpenalized
    rhs = design.T @ y
    try:
        factor = cho_factor(gram + ridge_lambda * penalty)
        weights = cho_solve(factor, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"normal equations not positive definite: {exc}") from exc
    return BaselineModel(weights=weights, ridge_lambda=float(ridge_lambda))


def predict_baseline(model: BaselineModel, features) -> float:
    """Intercept plus the dot product of feature weights and features."""
    f = np.asarray(features, dtype=float)
    if f.ndim != 1 or f.size != model.n_features:
        raise DimensionMismatch(
            f"expected {model.n_features} features, got shape {f.shape}"
        )
    return float(model.weights[-1] + np.dot(model.weights[:-1], f))
