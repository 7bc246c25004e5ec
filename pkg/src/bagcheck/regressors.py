"""Minimal regression predictors: least squares and a CART regression tree.

Just enough machinery to study how averaging models fit on resampled
training sets changes test MSE for a stable predictor (least squares)
versus an unstable one (deep regression tree).  Not a general-purpose
learning library; see module non-goals in the README.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np


@dataclass
class RegressionDataset:
    """Feature matrix (n, d) and target vector (n,), all finite."""

    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.targets = np.asarray(self.targets, dtype=float)
        if self.inputs.ndim != 2:
            raise ValueError("inputs must be a 2-d array (n, d)")
        if self.targets.ndim != 1:
            raise ValueError("targets must be a 1-d array")
        if len(self.inputs) != len(self.targets):
            raise ValueError("inputs and targets must have the same length")
        if len(self.targets) == 0:
            raise ValueError("empty dataset")
        if not (np.isfinite(self.inputs).all() and np.isfinite(self.targets).all()):
            raise ValueError("dataset contains non-finite values")

    def __len__(self):
        return len(self.targets)


@dataclass(frozen=True)
class TreeParams:
    """max_depth=None grows until pure; min_leaf bounds leaf size."""

    max_depth: Optional[int] = None
    min_leaf: int = 1

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")


@dataclass
class LinearModel:
    intercept: float
    coefs: np.ndarray

    def predict(self, inputs) -> Union[float, np.ndarray]:
        x = np.asarray(inputs, dtype=float)
        if x.ndim == 1:
            return float(self.intercept + x @ self.coefs)
        return self.intercept + x @ self.coefs


@dataclass
class _Node:
    value: float
    feature: int = -1
    threshold: float = 0.0
    left: Optional["_Node"] = None
    right: Optional["_Node"] = None

    @property
    def is_leaf(self):
        return self.left is None


@dataclass
class TreeModel:
    root: _Node
    n_features: int

    def predict(self, inputs) -> Union[float, np.ndarray]:
        x = np.asarray(inputs, dtype=float)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} features, got {x.shape[1]}"
            )
        out = np.empty(len(x))
        self._fill(self.root, x, np.arange(len(x)), out)
        return float(out[0]) if single else out

    def _fill(self, node: _Node, x, idx, out):
        if node.is_leaf:
            out[idx] = node.value
            return
        go_left = x[idx, node.feature] <= node.threshold
        self._fill(node.left, x, idx[go_left], out)
        self._fill(node.right, x, idx[~go_left], out)


def fit_ols(train: RegressionDataset) -> LinearModel:
    """Least squares with intercept.

    Solved on centered data, so rank-deficient systems take the
    minimum-norm slope vector; in particular a single training point
    yields slope 0 and intercept equal to its target.
    """
    x, y = train.inputs, train.targets
    x_mean = x.mean(axis=0)
    y_mean = y.mean()
    coefs, *_ = np.linalg.lstsq(x - x_mean, y - y_mean, rcond=None)
    return LinearModel(intercept=float(y_mean - x_mean @ coefs), coefs=coefs)


def _best_split(x, y, min_leaf):
    """Exhaustive midpoint search; ties go to the lowest feature, then
    the lowest threshold.  Returns (feature, threshold, reduction) or None."""
    n = len(y)
    sy, sy2 = y.sum(), (y**2).sum()
    parent_sse = sy2 - sy * sy / n
    best = None
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        ys = y[order]
        cum_y = np.cumsum(ys)
        cum_y2 = np.cumsum(ys**2)
        counts = np.arange(1, n)
        left_sse = cum_y2[:-1] - cum_y[:-1] ** 2 / counts
        right_sse = (sy2 - cum_y2[:-1]) - (sy - cum_y[:-1]) ** 2 / (n - counts)
        valid = (
            (xs[:-1] < xs[1:])
            & (counts >= min_leaf)
            & (n - counts >= min_leaf)
        )
        if not valid.any():
            continue
        reduction = np.where(valid, parent_sse - left_sse - right_sse, -np.inf)
        k = int(np.argmax(reduction))
        if reduction[k] > 0 and (best is None or reduction[k] > best[2]):
            best = (f, (xs[k] + xs[k + 1]) / 2.0, float(reduction[k]))
    return best


def fit_tree(train: RegressionDataset, params: TreeParams = TreeParams()) -> TreeModel:
    """CART regression tree: splits maximize the drop in sum of squared
    deviations, leaves predict their mean target."""
    x, y = train.inputs, train.targets

    def build(idx, depth):
        node_y = y[idx]
        node = _Node(value=float(node_y.mean()))
        if params.max_depth is not None and depth >= params.max_depth:
            return node
        if len(idx) < 2 * params.min_leaf or np.ptp(node_y) == 0:
            return node
        split = _best_split(x[idx], node_y, params.min_leaf)
        if split is None:
            return node
        node.feature, node.threshold, _ = split
        go_left = x[idx, node.feature] <= node.threshold
        node.left = build(idx[go_left], depth + 1)
        node.right = build(idx[~go_left], depth + 1)
        return node

    return TreeModel(root=build(np.arange(len(y)), 0), n_features=x.shape[1])


@dataclass
class BaggedModel:
    models: List[Union[LinearModel, TreeModel]]

    def predict(self, inputs) -> Union[float, np.ndarray]:
        preds = self.models[0].predict(inputs)
        for model in self.models[1:]:
            preds = preds + model.predict(inputs)
        return preds / len(self.models)


def fit_base(train: RegressionDataset, base: str, params: TreeParams):
    if base == "ols":
        return fit_ols(train)
    if base == "tree":
        return fit_tree(train, params)
    raise ValueError(f"unknown base model {base!r}; expected 'ols' or 'tree'")


def bagged_predictor(
    train: RegressionDataset,
    m: int,
    n_iterations: int,
    seed: int,
    base: str = "tree",
    params: TreeParams = TreeParams(),
) -> BaggedModel:
    """Average of n_iterations base models, each fit on a fresh bag.

    Per-bag streams come from (seed, bag_index); predictions are averaged
    in bag order.
    """
    if n_iterations < 1:
        raise ValueError("need at least one bag")
    n = len(train)
    models = []
    for i in range(n_iterations):
        rng = np.random.default_rng((seed, i))
        idx = rng.integers(0, n, size=m)
        bag = RegressionDataset(train.inputs[idx], train.targets[idx])
        models.append(fit_base(bag, base, params))
    return BaggedModel(models=models)


def predict(model, inputs):
    """Predict one input vector (returns float) or a batch (returns array)."""
    return model.predict(inputs)


def mse_on(model, test: RegressionDataset) -> float:
    """Mean squared prediction error on a dataset."""
    residual = model.predict(test.inputs) - test.targets
    return float(np.mean(residual**2))
