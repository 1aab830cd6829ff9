"""Physical connectivity graphs of Ising cores: all-to-all, King's graph, and
tiled Hybrid.

Node indexing is stable: King grids are row-major (node = row*cols + col);
Hybrid cores are tile-major (node = tile*tile_size + slot) with tiles row-major
over the tile grid. Hybrid tiles sit on an offset-row hex layout (odd rows
shifted right), which gives interior tiles exactly six tile neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Pair, graph_density


@dataclass
class CoreTopology:
    kind: str  # "a2a" | "king" | "hybrid"
    n: int
    edges: list[Pair]
    geometry: dict = field(default_factory=dict)
    _adj: list | None = field(default=None, init=False, repr=False, compare=False)
    _csr: tuple | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def capacity(self) -> int:
        return self.n

    def adjacency(self) -> list[np.ndarray]:
        """Sorted neighbor arrays per node, cached."""
        if self._adj is None:
            nbrs: list[list[int]] = [[] for _ in range(self.n)]
            for i, j in self.edges:
                nbrs[i].append(j)
                nbrs[j].append(i)
            self._adj = [np.array(sorted(x), dtype=np.intp) for x in nbrs]
        return self._adj

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency as flat CSR (offsets, neighbors), cached; useful for
        vectorized breadth-first searches."""
        if self._csr is None:
            adj = self.adjacency()
            offsets = np.zeros(self.n + 1, dtype=np.intp)
            for i, a in enumerate(adj):
                offsets[i + 1] = offsets[i] + len(a)
            flat = (
                np.concatenate(adj) if self.n else np.empty(0, dtype=np.intp)
            )
            self._csr = (offsets, flat.astype(np.intp))
        return self._csr

    def degree(self, i: int) -> int:
        return len(self.adjacency()[i])

    def has_edge(self, i: int, j: int) -> bool:
        a = self.adjacency()[i]
        k = np.searchsorted(a, j)
        return k < len(a) and a[k] == j

    def density(self) -> float:
        return graph_density(self.edges, self.n)

    def to_text(self) -> str:
        """Edge-list export in the problem text format (unit couplings)."""
        lines = [f"ising {self.n} {self.num_edges}", "offset 0.0"]
        lines += [f"J {i} {j} 1.0" for i, j in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def a2a(n: int) -> CoreTopology:
    """Complete graph: a physical link between every pair of spins."""
    if n < 1:
        raise ValueError("need n >= 1")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return CoreTopology(kind="a2a", n=n, edges=edges)


def kings(rows: int, cols: int) -> CoreTopology:
    """Grid whose links follow the legal moves of a chess king."""
    if rows < 1 or cols < 1:
        raise ValueError("need rows, cols >= 1")

    def node(r: int, c: int) -> int:
        return r * cols + c

    edges: list[Pair] = []
    for r in range(rows):
        for c in range(cols):
            for dr, dc in ((0, 1), (1, -1), (1, 0), (1, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    a, b = node(r, c), node(rr, cc)
                    edges.append((a, b) if a < b else (b, a))
    return CoreTopology(
        kind="king", n=rows * cols, edges=edges, geometry={"rows": rows, "cols": cols}
    )


def _hex_tile_neighbors(r: int, c: int) -> list[tuple[int, int]]:
    if r % 2 == 0:
        deltas = ((0, -1), (0, 1), (-1, -1), (-1, 0), (1, -1), (1, 0))
    else:
        deltas = ((0, -1), (0, 1), (-1, 0), (-1, 1), (1, 0), (1, 1))
    return [(r + dr, c + dc) for dr, dc in deltas]


def hybrid(tile_rows: int, tile_cols: int, tile_size: int = 16) -> CoreTopology:
    """Tiles of fully connected spins; neighboring tiles (hex layout) are fully
    coupled spin-to-spin, so an interior-tile spin has degree
    (tile_size-1) + 6*tile_size."""
    if tile_rows < 1 or tile_cols < 1 or tile_size < 1:
        raise ValueError("need positive tile grid and tile size")
    num_tiles = tile_rows * tile_cols

    def tile_index(r: int, c: int) -> int:
        return r * tile_cols + c

    edges: list[Pair] = []
    for t in range(num_tiles):
        base = t * tile_size
        edges += [(base + a, base + b) for a in range(tile_size) for b in range(a + 1, tile_size)]
    tile_pairs: set[Pair] = set()
    for r in range(tile_rows):
        for c in range(tile_cols):
            for rr, cc in _hex_tile_neighbors(r, c):
                if 0 <= rr < tile_rows and 0 <= cc < tile_cols:
                    s, t = tile_index(r, c), tile_index(rr, cc)
                    tile_pairs.add((s, t) if s < t else (t, s))
    for s, t in sorted(tile_pairs):
        edges += [
            (s * tile_size + a, t * tile_size + b)
            for a in range(tile_size)
            for b in range(tile_size)
        ]
    return CoreTopology(
        kind="hybrid",
        n=num_tiles * tile_size,
        edges=edges,
        geometry={
            "tile_rows": tile_rows,
            "tile_cols": tile_cols,
            "tile_size": tile_size,
            "tile_adjacencies": len(tile_pairs),
        },
    )


def topology_density(t: CoreTopology) -> float:
    return t.density()
