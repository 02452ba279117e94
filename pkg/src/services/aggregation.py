"""
Aggregation predicate.

The swarm is aggregated when the union of discs of radius r + padding around
all robot centers is connected. Two equal discs meet exactly when their
centers are at most 2(r + padding) apart, so connectivity of that threshold
graph decides the question.
"""

from typing import Dict, List, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from src.config import get_config
from src.domain import AggregationReport, MRState


class DisjointSet:
    """Union-find over 0..n-1 with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False when they were already one."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def groups(self) -> List[frozenset]:
        members: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            members.setdefault(self.find(x), []).append(x)
        return sorted((frozenset(m) for m in members.values()), key=min)


def check_positions(
    positions: np.ndarray,
    threshold: float,
    tolerance: Optional[float] = None,
) -> AggregationReport:
    """Aggregation report for an (n, 2) array of centers."""
    tol = get_config().AGGREGATION_TOLERANCE if tolerance is None else tolerance
    n = len(positions)
    uf = DisjointSet(n)
    if n > 1:
        i_idx, j_idx = np.triu_indices(n, k=1)
        deltas = positions[j_idx] - positions[i_idx]
        close = np.hypot(deltas[:, 0], deltas[:, 1]) <= threshold + tol
        for i, j in zip(i_idx[close], j_idx[close]):
            uf.union(int(i), int(j))
    components = tuple(uf.groups())
    return AggregationReport(
        aggregated=len(components) == 1,
        components=components,
        largest_component_size=max(len(c) for c in components),
    )


def positions_connected(
    positions: np.ndarray,
    threshold: float,
    tolerance: Optional[float] = None,
) -> bool:
    """The aggregated flag of check_positions alone, without the components."""
    tol = get_config().AGGREGATION_TOLERANCE if tolerance is None else tolerance
    n = len(positions)
    if n < 2:
        return True
    close = pdist(positions) <= threshold + tol
    # A connected graph on n vertices has at least n - 1 edges.
    if np.count_nonzero(close) < n - 1:
        return False
    count, _ = connected_components(csr_matrix(squareform(close)), directed=False)
    return count == 1


def check(state: MRState) -> AggregationReport:
    """Connected components of the padded-disc union."""
    return check_positions(state.positions(), state.world.aggregation_distance)


def is_aggregated(state: MRState) -> bool:
    return check(state).aggregated
