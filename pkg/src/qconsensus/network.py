"""Network topology and embedding of local operators into the full qubit space."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

__all__ = [
    "NetworkTopology",
    "is_connected",
    "embed_local",
    "embed_neighborhood",
    "permutation_unitary",
    "permutation_index_table",
]

PROBABILITY_SUM_ATOL = 1e-12


@dataclass(frozen=True)
class NetworkTopology:
    """Qubit count, pairwise interaction neighborhoods, optional edge weights.

    Neighborhoods are unordered site pairs {j, k} with 1 <= j < k <= m; they
    are normalized to sorted tuples on construction.  Optional probabilities
    give the selection distribution for randomized schedules (one positive
    weight per neighborhood, summing to 1).
    """

    m: int
    neighborhoods: tuple[tuple[int, int], ...]
    probabilities: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"need at least 2 sites, got m={self.m}")
        pairs = []
        for pair in self.neighborhoods:
            j, k = (int(s) for s in pair)
            if j == k:
                raise ValueError(f"neighborhood {pair} repeats a site")
            j, k = min(j, k), max(j, k)
            if j < 1 or k > self.m:
                raise ValueError(f"neighborhood {pair} out of range 1..{self.m}")
            pairs.append((j, k))
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate neighborhoods")
        object.__setattr__(self, "neighborhoods", tuple(pairs))
        if self.probabilities is not None:
            q = tuple(float(p) for p in self.probabilities)
            if len(q) != len(pairs):
                raise ValueError(
                    f"{len(q)} probabilities for {len(pairs)} neighborhoods"
                )
            if any(p <= 0 for p in q):
                raise ValueError("selection probabilities must be positive")
            if abs(sum(q) - 1.0) > PROBABILITY_SUM_ATOL:
                raise ValueError(f"selection probabilities sum to {sum(q)!r}, not 1")
            object.__setattr__(self, "probabilities", q)


def is_connected(topology: NetworkTopology) -> bool:
    """True iff the interaction graph is connected and covers every site."""
    g = nx.Graph()
    g.add_nodes_from(range(1, topology.m + 1))
    g.add_edges_from(topology.neighborhoods)
    return nx.is_connected(g)


def embed_local(sigma: np.ndarray, site: int, m: int) -> np.ndarray:
    """I^(site-1) (x) sigma (x) I^(m-site) for a single-qubit operator."""
    sigma = np.asarray(sigma, dtype=complex)
    if sigma.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {sigma.shape}")
    if not 1 <= site <= m:
        raise ValueError(f"site {site} out of range 1..{m}")
    left = np.eye(1 << (site - 1), dtype=complex)
    right = np.eye(1 << (m - site), dtype=complex)
    return np.kron(np.kron(left, sigma), right)


def _validated_permutation(pi, m: int) -> tuple[int, ...]:
    images = tuple(int(p) for p in pi)
    if len(images) != m or sorted(images) != list(range(1, m + 1)):
        raise ValueError(f"{pi!r} is not a permutation of 1..{m}")
    return images


def permutation_index_table(pi, m: int) -> np.ndarray:
    """Basis-index map of the subsystem permutation pi.

    Returns the array t with U_pi[t[n], n] = 1, where U_pi is the unitary
    with U_pi (X_1 (x) ... (x) X_m) U_pi^dag = X_pi(1) (x) ... (x) X_pi(m).
    On basis strings, U_pi |b_1 ... b_m> = |b_pi(1) ... b_pi(m)>.
    """
    images = _validated_permutation(pi, m)
    dim = 1 << m
    table = np.empty(dim, dtype=np.intp)
    for n in range(dim):
        new = 0
        for i in range(m):
            bit = (n >> (m - images[i])) & 1
            new = (new << 1) | bit
        table[n] = new
    return table


def permutation_unitary(pi, m: int) -> np.ndarray:
    """Unitary representation of a subsystem permutation.

    Defined by U_pi (X_1 (x) ... (x) X_m) U_pi^dag = X_pi(1) (x) ... (x) X_pi(m)
    for all single-site operator tuples.
    """
    table = permutation_index_table(pi, m)
    dim = table.shape[0]
    u = np.zeros((dim, dim), dtype=complex)
    u[table, np.arange(dim)] = 1.0
    return u


def embed_neighborhood(op: np.ndarray, pair, m: int) -> np.ndarray:
    """Operator acting as the given 4x4 block on sites (j, k), identity elsewhere.

    Non-adjacent pairs are handled by conjugating with the site permutation
    that brings j, k to the two leading slots.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (4, 4):
        raise ValueError(f"expected a 4x4 neighborhood operator, got shape {op.shape}")
    j, k = (int(s) for s in pair)
    j, k = min(j, k), max(j, k)
    if j == k or j < 1 or k > m:
        raise ValueError(f"invalid pair {pair} for m={m}")
    images = [0] * m
    images[j - 1] = 1
    images[k - 1] = 2
    fill = 3
    for site in range(1, m + 1):
        if site not in (j, k):
            images[site - 1] = fill
            fill += 1
    wide = np.kron(op, np.eye(1 << (m - 2), dtype=complex))
    table = permutation_index_table(tuple(images), m)
    out = np.empty_like(wide)
    out[np.ix_(table, table)] = wide
    return out
