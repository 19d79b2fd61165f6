"""Weighted graphs, connected-subgraph partitions, Laplacians and coarsening."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class WeightedGraph:
    """Undirected weighted graph over nodes 0..n-1.

    Edges carry strictly positive weights, self-loops are rejected and each
    unordered pair is stored once.  The adjacency matrix is kept as a
    symmetric sparse matrix and must not be mutated after construction.
    """

    __slots__ = ("n", "_adj", "_u", "_v", "_w")

    def __init__(self, n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray):
        # Canonical internal constructor: parallel arrays with u < v, one
        # entry per unordered edge, already validated by the classmethods.
        self.n = int(n)
        self._u = u
        self._v = v
        self._w = w
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.concatenate([w, w])
        self._adj = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges) -> "WeightedGraph":
        """Build from an iterable of (u, v) or (u, v, weight) tuples."""
        if n < 1:
            raise ValueError("graph needs at least one node")
        us, vs, ws = [], [], []
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                w = 1.0
            else:
                u, v, w = edge
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if w <= 0.0:
                raise ValueError(f"non-positive weight {w} on edge ({u},{v})")
            if u > v:
                u, v = v, u
            us.append(u)
            vs.append(v)
            ws.append(w)
        u = np.asarray(us, dtype=np.int64)
        v = np.asarray(vs, dtype=np.int64)
        w = np.asarray(ws, dtype=np.float64)
        key = u * n + v
        if len(np.unique(key)) != len(key):
            raise ValueError("duplicate edges in input")
        order = np.argsort(key, kind="stable")
        return cls(n, u[order], v[order], w[order])

    @classmethod
    def from_adjacency(cls, matrix) -> "WeightedGraph":
        """Build from a dense or sparse symmetric adjacency matrix."""
        a = sp.coo_matrix(matrix)
        if a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        scale = max(1.0, abs(a.data).max()) if a.nnz else 1.0
        asym = abs(a - a.T)
        if asym.nnz and asym.max() > 1e-12 * scale:
            raise ValueError("adjacency matrix must be symmetric")
        mask = a.row < a.col
        u, v, w = a.row[mask], a.col[mask], a.data[mask]
        keep = w != 0.0
        u, v, w = u[keep], v[keep], w[keep]
        if np.any(w <= 0.0):
            raise ValueError("adjacency weights must be positive")
        diag = a.tocsr().diagonal()
        if np.any(diag != 0.0):
            raise ValueError("self-loops are not allowed")
        key = u.astype(np.int64) * a.shape[0] + v
        if len(np.unique(key)) != len(key):
            raise ValueError("duplicate entries in adjacency input")
        order = np.argsort(key, kind="stable")
        return cls(a.shape[0], u[order].astype(np.int64), v[order].astype(np.int64),
                   w[order].astype(np.float64))

    # -- views ------------------------------------------------------------

    @property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric sparse adjacency (read-only by convention)."""
        return self._adj

    @property
    def num_edges(self) -> int:
        return len(self._w)

    @property
    def degrees(self) -> np.ndarray:
        return np.asarray(self._adj.sum(axis=1)).ravel()

    @property
    def total_weight(self) -> float:
        """Sum of edge weights, each unordered edge counted once."""
        return float(self._w.sum())

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(u, v, w) arrays with u < v, one entry per edge."""
        return self._u, self._v, self._w

    def edges(self):
        for u, v, w in zip(self._u, self._v, self._w):
            yield int(u), int(v), float(w)

    def subgraph(self, nodes: np.ndarray) -> "WeightedGraph":
        """Induced subgraph; local node j corresponds to nodes[j]."""
        nodes = np.asarray(nodes, dtype=np.int64)
        pos = -np.ones(self.n, dtype=np.int64)
        pos[nodes] = np.arange(len(nodes))
        mask = (pos[self._u] >= 0) & (pos[self._v] >= 0)
        return WeightedGraph(len(nodes), pos[self._u[mask]], pos[self._v[mask]],
                             self._w[mask].copy())

    def dense_adjacency(self) -> np.ndarray:
        return self._adj.toarray()

    def __repr__(self) -> str:  # pragma: no cover
        return f"WeightedGraph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True, eq=False)
class SubgraphPartition:
    """Node labelling 1..K where each label class induces a connected subgraph.

    Connectivity is a contract of the producers (partition detection,
    component extraction); `partition_is_connected` checks it explicitly.
    """

    labels: np.ndarray
    n_subgraphs: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        k = int(self.n_subgraphs)
        if labels.ndim != 1 or len(labels) == 0:
            raise ValueError("labels must be a non-empty vector")
        if labels.min() < 1 or labels.max() > k:
            raise ValueError(f"labels must lie in 1..{k}")
        if len(np.unique(labels)) != k:
            raise ValueError("every label in 1..K must appear at least once")

    @classmethod
    def from_labels(cls, labels) -> "SubgraphPartition":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(labels=labels, n_subgraphs=int(labels.max()) if len(labels) else 0)

    @classmethod
    def compact(cls, raw_labels) -> "SubgraphPartition":
        """Relabel arbitrary class ids to 1..K ordered by smallest member index."""
        raw = np.asarray(raw_labels)
        values, first = np.unique(raw, return_index=True)
        order = np.argsort(first, kind="stable")
        mapping = {int(values[c]): i + 1 for i, c in enumerate(order)}
        labels = np.array([mapping[int(c)] for c in raw], dtype=np.int64)
        return cls(labels=labels, n_subgraphs=len(values))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def sizes(self) -> np.ndarray:
        """Subgraph sizes N_k indexed by label-1."""
        return np.bincount(self.labels, minlength=self.n_subgraphs + 1)[1:]

    def members(self, k: int) -> np.ndarray:
        """Nodes of subgraph k in ascending original index (fixes the local order)."""
        if not 1 <= k <= self.n_subgraphs:
            raise ValueError(f"unknown subgraph label {k}")
        return np.flatnonzero(self.labels == k)

    def node_lists(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(1, self.n_subgraphs + 2))
        return [np.sort(order[bounds[k]:bounds[k + 1]]) for k in range(self.n_subgraphs)]


# -- core operations -------------------------------------------------------


def laplacian(graph: WeightedGraph) -> np.ndarray:
    """Dense combinatorial Laplacian: degree matrix minus adjacency."""
    a = graph.dense_adjacency()
    lap = -a
    lap[np.diag_indices(graph.n)] = a.sum(axis=1)
    return lap


def split_adjacency(graph: WeightedGraph,
                    partition: SubgraphPartition) -> tuple[WeightedGraph, WeightedGraph]:
    """Split edges into intra-subgraph and inter-subgraph graphs (same node set)."""
    if partition.n != graph.n:
        raise ValueError("partition length does not match graph size")
    u, v, w = graph.edge_arrays()
    same = partition.labels[u] == partition.labels[v]
    a_int = WeightedGraph(graph.n, u[same], v[same], w[same].copy())
    a_ext = WeightedGraph(graph.n, u[~same], v[~same], w[~same].copy())
    return a_int, a_ext


def extract_local_adjacency(graph: WeightedGraph, partition: SubgraphPartition,
                            k: int) -> WeightedGraph:
    """Induced subgraph on the members of label k, nodes in ascending index order."""
    if partition.n != graph.n:
        raise ValueError("partition length does not match graph size")
    return graph.subgraph(partition.members(k))


def connected_components(graph: WeightedGraph) -> SubgraphPartition:
    """Component labelling, numbered by ascending smallest node index."""
    _, raw = csgraph.connected_components(graph.adjacency, directed=False)
    return SubgraphPartition.compact(raw)


def partition_is_connected(graph: WeightedGraph, partition: SubgraphPartition) -> bool:
    """True when every label class induces a connected subgraph."""
    if partition.n != graph.n:
        raise ValueError("partition length does not match graph size")
    a_int, _ = split_adjacency(graph, partition)
    comp = connected_components(a_int)
    return comp.n_subgraphs == partition.n_subgraphs


def coarsen(graph: WeightedGraph, partition: SubgraphPartition,
            include_labels: np.ndarray | None = None) -> WeightedGraph:
    """Aggregate nodes into one supernode per subgraph label.

    Supernode pair weight is the summed weight of edges between the two
    subgraphs; the diagonal is forced to zero (no self-loops).  When
    `include_labels` is given (ascending), only those subgraphs become
    supernodes and edges touching other subgraphs are dropped; supernode j
    then stands for include_labels[j].
    """
    if partition.n != graph.n:
        raise ValueError("partition length does not match graph size")
    if include_labels is None:
        include_labels = np.arange(1, partition.n_subgraphs + 1)
    include_labels = np.asarray(include_labels, dtype=np.int64)
    pos = -np.ones(partition.n_subgraphs + 1, dtype=np.int64)
    pos[include_labels] = np.arange(len(include_labels))
    u, v, w = graph.edge_arrays()
    cu = pos[partition.labels[u]]
    cv = pos[partition.labels[v]]
    mask = (cu >= 0) & (cv >= 0) & (cu != cv)
    lo = np.minimum(cu[mask], cv[mask])
    hi = np.maximum(cu[mask], cv[mask])
    m = len(include_labels)
    key = lo * m + hi
    uniq, inv = np.unique(key, return_inverse=True)
    weights = np.bincount(inv, weights=w[mask], minlength=len(uniq))
    return WeightedGraph(m, (uniq // m).astype(np.int64), (uniq % m).astype(np.int64),
                         weights.astype(np.float64))


def global_eigenbasis(graph: WeightedGraph, p: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Canonical eigendecomposition of the full-graph Laplacian.

    Requires a connected graph; eigenvalues ascend and eigenvectors follow the
    deterministic sign and degeneracy rules of the spectral module.
    """
    from .spectral import laplacian_eigh

    if connected_components(graph).n_subgraphs != 1:
        raise ValueError("global Fourier transform requires a connected graph")
    return laplacian_eigh(laplacian(graph), p)


def global_fourier(graph: WeightedGraph, signal: np.ndarray) -> np.ndarray:
    """Project a signal on the orthonormal Laplacian eigenbasis of the full graph."""
    x = as_signal(signal, graph.n)
    _, q = global_eigenbasis(graph, p=2)
    return q.T @ x


def as_signal(values, n: int) -> np.ndarray:
    """Validate and convert node values into a float vector of length n."""
    x = np.asarray(values, dtype=np.float64)
    if x.shape != (n,):
        raise ValueError(f"signal must be a vector of length {n}, got shape {x.shape}")
    return x


# -- generators -------------------------------------------------------------


def line_graph(n: int) -> WeightedGraph:
    """Path graph 0-1-...-(n-1) with unit weights."""
    if n < 1:
        raise ValueError("line graph needs at least one node")
    idx = np.arange(n - 1, dtype=np.int64)
    return WeightedGraph(n, idx, idx + 1, np.ones(n - 1))


def grid_graph(rows: int, cols: int) -> WeightedGraph:
    """Regular 2-d grid with unit weights, node (r, c) at index r*cols + c."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return WeightedGraph.from_edges(rows * cols, edges)


def sbm_graph(block_sizes, p_in: float, p_out: float, seed: int) -> WeightedGraph:
    """Stochastic block model with unit weights, deterministic given the seed."""
    sizes = [int(s) for s in block_sizes]
    if not sizes or min(sizes) < 1:
        raise ValueError("block sizes must be positive")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError("need 0 <= p_out <= p_in <= 1")
    rng = np.random.default_rng(seed)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    n = int(offsets[-1])
    block_of = np.repeat(np.arange(len(sizes)), sizes)

    us, vs = [], []
    for b, s in enumerate(sizes):
        if s < 2 or p_in == 0.0:
            continue
        iu, iv = np.triu_indices(s, k=1)
        if p_in < 1.0:
            mask = rng.random(len(iu)) < p_in
            iu, iv = iu[mask], iv[mask]
        us.append(iu + offsets[b])
        vs.append(iv + offsets[b])

    cross_pairs = (n * (n - 1)) // 2 - sum(s * (s - 1) // 2 for s in sizes)
    if cross_pairs > 0 and p_out > 0.0:
        if p_out == 1.0 or cross_pairs <= 2_000_000:
            iu, iv = np.triu_indices(n, k=1)
            mask = block_of[iu] != block_of[iv]
            iu, iv = iu[mask], iv[mask]
            if p_out < 1.0:
                keep = rng.random(len(iu)) < p_out
                iu, iv = iu[keep], iv[keep]
            us.append(iu)
            vs.append(iv)
        else:
            # Large sparse regime: draw the edge count, then rejection-sample
            # distinct cross-block pairs.
            count = int(rng.binomial(cross_pairs, p_out))
            seen: set[int] = set()
            iu, iv = [], []
            while len(seen) < count:
                batch = max(1024, 2 * (count - len(seen)))
                a = rng.integers(0, n, size=batch)
                b = rng.integers(0, n, size=batch)
                for x, y in zip(a, b):
                    if x >= y or block_of[x] == block_of[y]:
                        continue
                    code = int(x) * n + int(y)
                    if code in seen:
                        continue
                    seen.add(code)
                    iu.append(int(x))
                    iv.append(int(y))
                    if len(seen) == count:
                        break
            us.append(np.asarray(iu, dtype=np.int64))
            vs.append(np.asarray(iv, dtype=np.int64))

    if us:
        u = np.concatenate(us).astype(np.int64)
        v = np.concatenate(vs).astype(np.int64)
    else:
        u = np.empty(0, dtype=np.int64)
        v = np.empty(0, dtype=np.int64)
    order = np.argsort(u * n + v, kind="stable")
    return WeightedGraph(n, u[order], v[order], np.ones(len(u)))
