"""Bagged Gini decision trees for binary labels.

Plain CART: unlimited depth, minimum split size 2, floor(sqrt(F)) candidate
features per split, bootstrap samples the size of the training set, majority
vote across trees.  Every random draw comes from a positionally derived seed
so fits are reproducible bit-for-bit regardless of execution order.
"""

from __future__ import annotations

import math

import numpy as np


class DecisionTree:
    """One Gini-grown binary classification tree."""

    def __init__(self, max_features: int, rng: np.random.Generator):
        self.max_features = max_features
        self._rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.label: list[int] = []

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.label.append(0)
        return len(self.feature) - 1

    def _best_split(self, X, y, idx):
        """Best (weighted Gini, feature, threshold) over a random feature subset."""
        n = idx.size
        y_node = y[idx]
        total1 = int(y_node.sum())
        n_features = X.shape[1]
        candidates = self._rng.permutation(n_features)[: self.max_features]
        best_score = math.inf
        best = None
        for f in candidates:
            v = X[idx, f]
            order = np.argsort(v, kind="stable")
            sv = v[order]
            sy = y_node[order]
            cuts = np.nonzero(sv[:-1] < sv[1:])[0]
            if cuts.size == 0:
                continue
            left1 = np.cumsum(sy)[cuts].astype(np.float64)
            nl = cuts + 1.0
            nr = n - nl
            left0 = nl - left1
            right1 = total1 - left1
            right0 = nr - right1
            gini_l = 1.0 - (left0 / nl) ** 2 - (left1 / nl) ** 2
            gini_r = 1.0 - (right0 / nr) ** 2 - (right1 / nr) ** 2
            score = (nl * gini_l + nr * gini_r) / n
            k = int(np.argmin(score))
            if score[k] < best_score:
                lo, hi = sv[cuts[k]], sv[cuts[k] + 1]
                thr = 0.5 * (lo + hi)
                # Midpoint can round onto either neighbor for adjacent floats;
                # pin to the left value so the <= rule matches the partition.
                if not (lo <= thr < hi):
                    thr = lo
                best_score = score[k]
                best = (int(f), float(thr))
        return best

    def fit(self, X: np.ndarray, y: np.ndarray, sample_idx: np.ndarray):
        stack = [(self._new_node(), sample_idx)]
        while stack:
            node, idx = stack.pop()
            y_node = y[idx]
            ones = int(y_node.sum())
            self.label[node] = 1 if ones * 2 > idx.size else 0
            if idx.size < 2 or ones == 0 or ones == idx.size:
                continue
            split = self._best_split(X, y, idx)
            if split is None:
                continue
            f, thr = split
            mask = X[idx, f] <= thr
            self.feature[node] = f
            self.threshold[node] = thr
            left = self._new_node()
            right = self._new_node()
            self.left[node] = left
            self.right[node] = right
            stack.append((left, idx[mask]))
            stack.append((right, idx[~mask]))
        self._feature = np.array(self.feature)
        self._threshold = np.array(self.threshold)
        self._left = np.array(self.left)
        self._right = np.array(self.right)
        self._label = np.array(self.label, dtype=np.int8)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self._feature[node] >= 0
        while active.any():
            rows = np.nonzero(active)[0]
            cur = node[rows]
            go_left = X[rows, self._feature[cur]] <= self._threshold[cur]
            node[rows] = np.where(go_left, self._left[cur], self._right[cur])
            active = self._feature[node] >= 0
        return self._label[node]


class RandomForest:
    """Bagged decision trees with majority vote (ties go to class 0)."""

    def __init__(self, n_trees: int = 100, seed: int = 0):
        if n_trees < 1:
            raise ValueError(f"need at least one tree, got {n_trees}")
        self.n_trees = n_trees
        self.seed = seed
        self.trees: list[DecisionTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int8)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
            raise ValueError("X must be (n, F) with matching label vector")
        classes = np.unique(y)
        if classes.size < 2:
            raise ValueError("single-class training set")
        n, n_features = X.shape
        max_features = max(1, int(math.sqrt(n_features)))
        seeds = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        self.trees = []
        for t in range(self.n_trees):
            rng = np.random.default_rng(seeds[t])
            bootstrap = rng.integers(0, n, size=n)
            tree = DecisionTree(max_features, rng)
            tree.fit(X, y, bootstrap)
            self.trees.append(tree)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self.trees:
            raise RuntimeError("forest is not fitted")
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees:
            votes += tree.predict(X)
        return (votes * 2 > self.n_trees).astype(np.int8)
