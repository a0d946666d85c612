"""Connected spin-interaction topologies and the four-vertex catalog."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np


class GraphError(ValueError):
    """Base class for invalid graph definitions."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class UnknownGraphError(GraphError):
    pass


class GraphFileError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected connected graph on vertices ``0 .. n_vertices-1``.

    Build instances with :func:`make_graph` so that validation and edge
    canonicalization are applied; ``edges`` is a sorted tuple of ``(u, v)``
    pairs with ``u < v``.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def same_topology(self, other: Graph) -> bool:
        return self.n_vertices == other.n_vertices and self.edges == other.edges


@dataclass(frozen=True)
class GraphProperties:
    edge_count: int
    total_degree: int
    ground_degeneracy: int


def _is_connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def make_graph(n_vertices: int, edges, name: str = "") -> Graph:
    """Validate and canonicalize a graph.

    Raises a distinct :class:`GraphError` subclass for each defect: self
    loop, duplicate edge, out-of-range endpoint, disconnected vertex set.
    """
    n_vertices = int(n_vertices)
    if n_vertices < 1:
        raise VertexRangeError(f"n_vertices must be >= 1, got {n_vertices}")
    canon = set()
    for pair in edges:
        u, v = (int(x) for x in pair)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        for w in (u, v):
            if not 0 <= w < n_vertices:
                raise VertexRangeError(f"endpoint {w} outside [0, {n_vertices})")
        key = (min(u, v), max(u, v))
        if key in canon:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        canon.add(key)
    if not _is_connected(n_vertices, canon):
        raise DisconnectedGraphError(f"graph on {n_vertices} vertices with edges {sorted(canon)} is disconnected")
    return Graph(n_vertices, tuple(sorted(canon)), name)


# Pan pendant hangs off vertex 2; every attachment point is isomorphic.
_CATALOG_EDGES = {
    "P4": [(0, 1), (1, 2), (2, 3)],
    "C4": [(0, 1), (1, 2), (2, 3), (3, 0)],
    "Sd4": [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
    "K4": list(combinations(range(4), 2)),
    "PAN": [(0, 1), (1, 2), (0, 2), (2, 3)],
    "S3": [(0, 1), (0, 2), (0, 3)],
}

CATALOG_NAMES = tuple(_CATALOG_EDGES)
_ALIASES = {name.upper(): name for name in CATALOG_NAMES}


def catalog_graph(name: str) -> Graph:
    key = _ALIASES.get(str(name).upper())
    if key is None:
        raise UnknownGraphError(f"unknown catalog graph {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    return make_graph(4, _CATALOG_EDGES[key], name=key)


def catalog() -> list[Graph]:
    return [catalog_graph(name) for name in CATALOG_NAMES]


def spin_configurations(n: int) -> np.ndarray:
    """All ``2**n`` spin patterns; row ``b`` has ``s_i = +1`` where bit ``i`` of ``b`` is 0."""
    b = np.arange(2**n)[:, None]
    bits = (b >> np.arange(n)[None, :]) & 1
    return 1 - 2 * bits


def classical_energies(g: Graph, J: float) -> np.ndarray:
    """Energy ``-J * sum_{(i,j)} s_i s_j`` of every computational-basis configuration."""
    s = spin_configurations(g.n_vertices)
    bond = np.zeros(s.shape[0])
    for u, v in g.edges:
        bond += s[:, u] * s[:, v]
    return -J * bond


def ground_degeneracy_bruteforce(g: Graph, J: float, tol: float = 1e-9) -> int:
    e = classical_energies(g, J)
    return int(np.count_nonzero(e <= e.min() + tol))


def graph_properties(g: Graph, J: float = -1.0) -> GraphProperties:
    """Edge count, total degree and zero-field ground degeneracy.

    The degeneracy is counted by enumerating every classical spin
    configuration of the diagonal Hamiltonian, so ``n_vertices`` must stay
    small (about 20 at most).
    """
    if g.n_vertices > 20:
        raise ValueError("brute-force enumeration limited to 20 vertices")
    return GraphProperties(
        edge_count=g.edge_count,
        total_degree=int(g.degrees().sum()),
        ground_degeneracy=ground_degeneracy_bruteforce(g, J),
    )


def relabel(g: Graph, perm) -> Graph:
    """Apply the vertex map ``i -> perm[i]``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(g.n_vertices)):
        raise ValueError(f"{perm} is not a permutation of range({g.n_vertices})")
    return make_graph(g.n_vertices, [(perm[u], perm[v]) for u, v in g.edges], name=g.name)


def read_graph_file(path) -> Graph:
    """Parse the plain-text graph format.

    ::

        n 4
        e 0 1
        e 1 2

    Blank lines and ``#`` comments are ignored.
    """
    path = Path(path)
    n = None
    edges = []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                if n is not None:
                    raise GraphFileError(f"{path}:{lineno}: repeated 'n' line")
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3:
                if n is None:
                    raise GraphFileError(f"{path}:{lineno}: edge before 'n' line")
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise GraphFileError(f"{path}:{lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphFileError(f"{path}:{lineno}: {exc}") from None
    if n is None:
        raise GraphFileError(f"{path}: missing 'n <vertex_count>' line")
    return make_graph(n, edges, name=path.stem)


def write_graph_file(g: Graph, path) -> None:
    lines = [f"n {g.n_vertices}"] + [f"e {u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")
