"""
Synthetic convex tasks for the simulator.

The training set is split into k contiguous partitions of d/k points. The
partial gradient of partition j is (1/d)·sum of per-point gradients, so the
partials of all k partitions add up to the gradient of the mean loss.
"""
import logging
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit

from gradcode.errors import ConfigError

logger = logging.getLogger(__name__)


class DatasetSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    task: Literal["logistic", "least_squares"] = "logistic"
    n_points: int = Field(default=1000, gt=0)
    dim: int = Field(default=10, gt=0)
    noise: float = Field(default=1.0, ge=0.0)
    test_points: int = Field(default=500, gt=0)
    separation: float = Field(default=2.0, gt=0.0)


class SyntheticTask:
    """Training and held-out data plus loss, gradient and accuracy."""

    def __init__(self, spec: DatasetSpec, x_train, y_train, x_test, y_test):
        self.spec = spec
        self.x_train = x_train
        self.y_train = y_train
        self.x_test = x_test
        self.y_test = y_test

    @property
    def n_points(self) -> int:
        return self.x_train.shape[0]

    @property
    def dim(self) -> int:
        return self.x_train.shape[1]

    def _point_gradients(self, theta: np.ndarray) -> np.ndarray:
        margin = self.x_train @ theta
        if self.spec.task == "logistic":
            signs = 2.0 * self.y_train - 1.0
            weight = -signs * expit(-signs * margin)
        else:
            weight = margin - self.y_train
        return self.x_train * weight[:, None]

    def partial_gradients(self, theta: np.ndarray, k: int) -> np.ndarray:
        """Array of shape (k, dim) holding g_1..g_k."""
        if self.n_points % k != 0:
            raise ConfigError(
                f"{self.n_points} training points do not split into k={k} equal partitions"
            )
        per_point = self._point_gradients(theta)
        return per_point.reshape(k, self.n_points // k, self.dim).sum(axis=1) / self.n_points

    def full_gradient(self, theta: np.ndarray) -> np.ndarray:
        return self._point_gradients(theta).mean(axis=0)

    def loss(self, theta: np.ndarray, split: str = "train") -> float:
        x, y = (self.x_train, self.y_train) if split == "train" else (self.x_test, self.y_test)
        margin = x @ theta
        if self.spec.task == "logistic":
            signs = 2.0 * y - 1.0
            return float(np.mean(np.logaddexp(0.0, -signs * margin)))
        return float(0.5 * np.mean((margin - y) ** 2))

    def accuracy(self, theta: np.ndarray) -> Optional[float]:
        if self.spec.task != "logistic":
            return None
        predicted = (self.x_test @ theta) > 0
        return float(np.mean(predicted == (self.y_test > 0.5)))

    def smoothness_constant(self) -> float:
        """Lipschitz constant L of the mean-loss gradient."""
        top = float(np.linalg.eigvalsh(self.x_train.T @ self.x_train)[-1]) / self.n_points
        return top / 4.0 if self.spec.task == "logistic" else top


def _draw(spec: DatasetSpec, rng: np.random.Generator, count: int, direction: np.ndarray):
    if spec.task == "logistic":
        labels = rng.integers(0, 2, size=count).astype(float)
        centers = np.outer(2.0 * labels - 1.0, direction) * spec.separation / 2.0
        return centers + spec.noise * rng.standard_normal((count, spec.dim)), labels
    features = rng.standard_normal((count, spec.dim))
    return features, features @ direction + spec.noise * rng.standard_normal(count)


def make_dataset(spec: DatasetSpec, seed: int) -> SyntheticTask:
    """
    Generate a task from a Philox stream.

    Logistic: two Gaussian clouds at +/- separation/2 along a random unit
    direction. Least squares: standard normal features, responses from a
    random parameter vector plus Gaussian noise.
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 2])))
    direction = rng.standard_normal(spec.dim)
    if spec.task == "logistic":
        direction /= np.linalg.norm(direction)
    x_train, y_train = _draw(spec, rng, spec.n_points, direction)
    x_test, y_test = _draw(spec, rng, spec.test_points, direction)
    logger.debug("Generated %s task: %d train, %d test, dim %d", spec.task, spec.n_points, spec.test_points, spec.dim)
    return SyntheticTask(spec, x_train, y_train, x_test, y_test)
