"""scikit-learn wrapper around the graph 1-Laplacian bipartition."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .graphlap import affinity_graph, bipartition, inverse_power_method, ratio_cut_value


class GraphRatioCut(ClusterMixin, BaseEstimator):
    """Two-way clustering by the second eigenvector of the graph 1-Laplacian.

    Parameters
    ----------
    affinity : {"knn", "precomputed"}
        ``"knn"`` builds Gaussian kNN weights from the rows of ``X``;
        ``"precomputed"`` takes ``X`` as a symmetric weight matrix.
    n_neighbors, bandwidth, radius :
        Graph construction, see ``graphlap.affinity_graph``.
    n_starts : int
        Starts of the inverse power method (Fiedler start plus random ones).
    random_state : int

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
        1 on the nonnegative side of the eigenvector, 0 elsewhere.
    eigenvector_ : ndarray
    ratio_cut_ : float
        Discrete ratio cut ``cut(S) / min(|S|, |S^c|)`` of the labelling.
    n_iter_ : int
    """

    def __init__(self, affinity="knn", n_neighbors=10, bandwidth=None, radius=None, n_starts=5, random_state=0):
        self.affinity = affinity
        self.n_neighbors = n_neighbors
        self.bandwidth = bandwidth
        self.radius = radius
        self.n_starts = n_starts
        self.random_state = random_state

    def _weights(self, X):
        if self.affinity == "precomputed":
            W = check_array(X, accept_sparse="csr")
            if W.shape[0] != W.shape[1]:
                raise ValueError("precomputed affinity must be square")
            return W
        if self.affinity != "knn":
            raise ValueError(f"unknown affinity {self.affinity!r}")
        X = check_array(X)
        k = min(self.n_neighbors, len(X) - 1)
        return affinity_graph(X, k=k, bandwidth=self.bandwidth, radius=self.radius).weights

    def fit(self, X, y=None):
        W = self._weights(X)
        res = inverse_power_method(W, starts=self.n_starts, seed=self.random_state or 0)
        pos, _ = bipartition(res.f)
        labels = np.zeros(W.shape[0], dtype=int)
        labels[pos] = 1
        self.labels_ = labels
        self.eigenvector_ = res.f
        self.ratio_cut_ = ratio_cut_value(W, labels.astype(bool))
        self.n_iter_ = res.iterations
        self.n_features_in_ = np.shape(X)[1]
        return self

    def fit_predict(self, X, y=None, **kwargs):
        return self.fit(X).labels_

    def score(self, X=None, y=None):
        """Negative ratio cut of the fitted partition (higher is better)."""
        check_is_fitted(self, "labels_")
        return -self.ratio_cut_
