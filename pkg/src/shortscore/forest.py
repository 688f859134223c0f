"""Bagged regression trees with exact per-feature prediction attribution.

Every node stores the mean of the bootstrap targets that reached it, so a
prediction decomposes exactly into the root mean (bias) plus, for each
split on the path, the child-mean minus parent-mean credited to the split
feature. Training is deterministic: tree ``t`` draws its bootstrap and its
per-split feature subsets from ``default_rng(master_seed + t)``, so results
do not depend on how trees are scheduled. Split ties are broken by lowest
feature index, then lowest threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .features.schema import FeatureSchema, SchemaMismatchError


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 500
    max_depth: int | None = None
    min_samples_leaf: int = 2
    features_per_split: int | None = None    # None -> ceil(sqrt(n_features))
    master_seed: int = 0

    def resolve_features_per_split(self, n_features: int) -> int:
        m = self.features_per_split
        if m is None:
            m = math.isqrt(n_features)
            if m * m < n_features:
                m += 1
        return max(1, min(m, n_features))

    def to_dict(self) -> dict:
        return {"n_trees": self.n_trees, "max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
                "features_per_split": self.features_per_split,
                "master_seed": self.master_seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ForestParams":
        return cls(n_trees=int(d["n_trees"]),
                   max_depth=None if d["max_depth"] is None else int(d["max_depth"]),
                   min_samples_leaf=int(d["min_samples_leaf"]),
                   features_per_split=(None if d["features_per_split"] is None
                                       else int(d["features_per_split"])),
                   master_seed=int(d["master_seed"]))


@dataclass
class Tree:
    """Flattened binary tree; leaves have feature -1 and child offsets -1."""

    feature: np.ndarray      # int32
    threshold: np.ndarray    # float64 (nan at leaves)
    left: np.ndarray         # int32
    right: np.ndarray        # int32
    mean: np.ndarray         # float64

    def n_nodes(self) -> int:
        return len(self.feature)


@dataclass
class Forest:
    trees: list[Tree]
    params: ForestParams
    n_features: int
    schema_fingerprint: str | None = None
    target_range: tuple[float, float] = (0.0, 0.0)


class _TreeBuilder:
    __slots__ = ("X", "y", "max_depth", "min_leaf", "m", "rng",
                 "feature", "threshold", "left", "right", "mean")

    def __init__(self, X, y, params: ForestParams, rng):
        self.X = X
        self.y = y
        self.max_depth = params.max_depth
        self.min_leaf = params.min_samples_leaf
        self.m = params.resolve_features_per_split(X.shape[1])
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.mean: list[float] = []

    def _new_node(self, node_mean: float) -> int:
        idx = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(float("nan"))
        self.left.append(-1)
        self.right.append(-1)
        self.mean.append(node_mean)
        return idx

    def _best_split(self, rows: np.ndarray):
        """Variance-reduction split over a random feature subset.

        Returns (feature, threshold, left_rows, right_rows) or None. Ties
        go to the lowest feature index (candidates scanned in ascending
        order, strict improvement required) then the lowest threshold
        (first argmax within the ascending value scan).
        """
        cand = np.sort(self.rng.choice(self.X.shape[1], size=self.m, replace=False))
        y = self.y[rows]
        n = len(rows)
        best_score = -np.inf
        best = None
        for f in cand:
            v = self.X[rows, f]
            order = np.argsort(v, kind="stable")
            vs = v[order]
            if vs[0] == vs[-1]:
                continue
            ys = y[order]
            csum = np.cumsum(ys)
            total = csum[-1]
            counts = np.arange(1, n)
            valid = vs[1:] > vs[:-1]
            valid &= (counts >= self.min_leaf) & ((n - counts) >= self.min_leaf)
            if not valid.any():
                continue
            sums = csum[:-1]
            # Minimizing child SSE == maximizing sum_l^2/n_l + sum_r^2/n_r.
            score = np.where(
                valid,
                sums * sums / counts + (total - sums) * (total - sums) / (n - counts),
                -np.inf)
            j = int(np.argmax(score))
            if score[j] > best_score:
                thr = (vs[j] + vs[j + 1]) / 2.0
                if thr >= vs[j + 1]:    # midpoint rounded up between adjacent floats
                    thr = vs[j]
                best_score = score[j]
                best = (int(f), float(thr), rows[order[:j + 1]], rows[order[j + 1:]])
        return best

    def build(self) -> Tree:
        root_rows = np.arange(len(self.y))
        root = self._new_node(float(self.y.mean()))
        stack = [(root, root_rows, 0)]
        while stack:
            node, rows, depth = stack.pop()
            y = self.y[rows]
            if (len(rows) < 2 * self.min_leaf
                    or (self.max_depth is not None and depth >= self.max_depth)
                    or bool((y == y[0]).all())):
                continue
            split = self._best_split(rows)
            if split is None:
                continue
            f, thr, rows_l, rows_r = split
            self.feature[node] = f
            self.threshold[node] = thr
            left = self._new_node(float(self.y[rows_l].mean()))
            right = self._new_node(float(self.y[rows_r].mean()))
            self.left[node] = left
            self.right[node] = right
            # Left child pushed last so it is grown first: keeps the rng
            # draw order depth-first left-to-right, independent of data.
            stack.append((right, rows_r, depth + 1))
            stack.append((left, rows_l, depth + 1))
        return Tree(feature=np.asarray(self.feature, dtype=np.int32),
                    threshold=np.asarray(self.threshold, dtype=np.float64),
                    left=np.asarray(self.left, dtype=np.int32),
                    right=np.asarray(self.right, dtype=np.int32),
                    mean=np.asarray(self.mean, dtype=np.float64))


def _train_single_tree(X, y, params: ForestParams, tree_index: int) -> Tree:
    rng = np.random.default_rng(params.master_seed + tree_index)
    idx = rng.integers(0, len(y), size=len(y))
    return _TreeBuilder(X[idx], y[idx], params, rng).build()


def train_forest(X, y, params: ForestParams | None = None,
                 schema_fingerprint: str | None = None) -> Forest:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D feature matrix")
    if len(X) != len(y):
        raise ValueError(f"X has {len(X)} rows but y has {len(y)} targets")
    if len(y) < 2:
        raise ValueError("need at least 2 training rows")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("training data contains non-finite values")
    params = params or ForestParams()
    if params.n_trees < 1:
        raise ValueError("n_trees must be positive")
    trees = [_train_single_tree(X, y, params, t) for t in range(params.n_trees)]
    return Forest(trees=trees, params=params, n_features=X.shape[1],
                  schema_fingerprint=schema_fingerprint,
                  target_range=(float(y.min()), float(y.max())))


def _tree_leaf_nodes(tree: Tree, X: np.ndarray) -> np.ndarray:
    node = np.zeros(len(X), dtype=np.int64)
    while True:
        f = tree.feature[node]
        active = np.nonzero(f >= 0)[0]
        if active.size == 0:
            return node
        cur = node[active]
        go_left = X[active, f[active]] <= tree.threshold[cur]
        node[active] = np.where(go_left, tree.left[cur], tree.right[cur])


def _as_matrix(forest: Forest, X) -> tuple[np.ndarray, bool]:
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != forest.n_features:
        raise SchemaMismatchError(
            f"input has {X.shape[1]} features, forest expects {forest.n_features}")
    return X, single


def predict(forest: Forest, X) -> np.ndarray | float:
    """Mean over trees of the reached leaf's training mean."""
    X, single = _as_matrix(forest, X)
    acc = np.zeros(len(X), dtype=np.float64)
    for tree in forest.trees:
        acc += tree.mean[_tree_leaf_nodes(tree, X)]
    out = acc / len(forest.trees)
    return float(out[0]) if single else out


def round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else int(math.ceil(x - 0.5))


def predict_grade(forest: Forest, X, grade_min: int, grade_max: int):
    """Round the raw prediction half-away-from-zero, clamp to the grade range."""
    raw = predict(forest, X)
    if isinstance(raw, float):
        return min(grade_max, max(grade_min, round_half_away(raw)))
    return np.asarray([min(grade_max, max(grade_min, round_half_away(float(v))))
                       for v in raw], dtype=np.int64)


@dataclass
class Contribution:
    bias: float
    per_feature: np.ndarray
    per_group: dict[str, float] | None = None

    @property
    def prediction(self) -> float:
        return self.bias + float(self.per_feature.sum())


def decompose(forest: Forest, x, schema: FeatureSchema | None = None) -> Contribution:
    """Path attribution: each split credits child-mean minus parent-mean to
    its feature; bias is the root mean. Averaged over trees, the identity
    ``bias + sum(per_feature) == predict(x)`` holds to float precision.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) != forest.n_features:
        raise SchemaMismatchError(
            f"input has shape {x.shape}, forest expects ({forest.n_features},)")
    if schema is not None:
        if len(schema) != forest.n_features:
            raise SchemaMismatchError("schema length does not match forest")
        if forest.schema_fingerprint and schema.fingerprint() != forest.schema_fingerprint:
            raise SchemaMismatchError("schema fingerprint does not match forest")
    contrib = np.zeros(forest.n_features, dtype=np.float64)
    bias = 0.0
    for tree in forest.trees:
        node = 0
        bias += tree.mean[0]
        while tree.feature[node] >= 0:
            f = tree.feature[node]
            child = (tree.left[node] if x[f] <= tree.threshold[node]
                     else tree.right[node])
            contrib[f] += tree.mean[child] - tree.mean[node]
            node = child
    n = len(forest.trees)
    bias /= n
    contrib /= n
    per_group = None
    if schema is not None:
        per_group = {g: float(contrib[schema.group_indices(g)].sum())
                     for g in schema.present_groups()}
    return Contribution(bias=bias, per_feature=contrib, per_group=per_group)


def group_importance(forest: Forest, X_val, y_val, schema: FeatureSchema,
                     grade_min: int, grade_max: int, mode: str = "permutation",
                     X_train=None, y_train=None, seed: int = 0,
                     qwk_fn=None) -> list[tuple[str, float]]:
    """QWK drop per feature group, ordered descending.

    ``refit_ablation`` retrains without the group's columns (the faithful
    ablation); ``permutation`` shuffles the group's validation columns as a
    cheap proxy. Returns ``[(group, qwk_fall), ...]``.
    """
    from .evaluation import qwk_value
    qwk_fn = qwk_fn or qwk_value

    X_val = np.asarray(X_val, dtype=np.float64)
    y_val = np.asarray(y_val)
    base_pred = predict_grade(forest, X_val, grade_min, grade_max)
    base = qwk_fn(y_val, base_pred, grade_min, grade_max)
    drops = []
    groups = schema.present_groups()
    if mode == "permutation":
        rng = np.random.default_rng(seed)
        for g in groups:
            idx = schema.group_indices(g)
            perm = rng.permutation(len(X_val))
            Xp = X_val.copy()
            Xp[:, idx] = X_val[perm][:, idx]
            pred = predict_grade(forest, Xp, grade_min, grade_max)
            drops.append((g, base - qwk_fn(y_val, pred, grade_min, grade_max)))
    elif mode == "refit_ablation":
        if X_train is None or y_train is None:
            raise ValueError("refit_ablation mode needs X_train and y_train")
        X_train = np.asarray(X_train, dtype=np.float64)
        for g in groups:
            keep = [i for i in range(len(schema)) if schema.groups[i] != g]
            if not keep:
                raise ValueError("cannot ablate the only feature group")
            sub = train_forest(X_train[:, keep], y_train, forest.params)
            pred = predict_grade(sub, X_val[:, keep], grade_min, grade_max)
            drops.append((g, base - qwk_fn(y_val, pred, grade_min, grade_max)))
    else:
        raise ValueError(f"unknown importance mode {mode!r}")
    drops.sort(key=lambda gd: (-gd[1], gd[0]))
    return drops
