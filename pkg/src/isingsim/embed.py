"""Approximate minor embedding by spin replication.

A logical spin maps to a chain: a connected set of physical nodes held aligned
by a strong ferromagnetic coupling. The heuristic places logical nodes in BFS
order of the problem graph, puts each at the free physical node minimizing the
summed free-path distance to its already-placed neighbors, and absorbs the
path interiors into the new node's chain. Dead ends rip up a random fraction
of the placement and retry; a full restart begins from a fresh random root.

Every embedding returned by find_embedding is validated (disjoint chains,
chain connectivity, logical-edge coverage) before it escapes.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import IsingProblem
from .topology import CoreTopology


class EmbeddingError(ValueError):
    pass


@dataclass
class Embedding:
    core: CoreTopology
    chains: dict[int, tuple[int, ...]]  # logical spin -> sorted physical nodes

    @property
    def num_logical(self) -> int:
        return len(self.chains)

    @property
    def num_physical(self) -> int:
        return sum(len(c) for c in self.chains.values())

    def max_chain_length(self) -> int:
        return max(len(c) for c in self.chains.values())

    def to_text(self) -> str:
        lines = [
            "chain {} {}".format(i, " ".join(str(p) for p in self.chains[i]))
            for i in sorted(self.chains)
        ]
        return "\n".join(lines) + "\n"


def embedding_from_text(text: str, core: CoreTopology) -> Embedding:
    chains: dict[int, tuple[int, ...]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "chain" or len(parts) < 3:
            raise ValueError(f"unrecognized embedding line {line!r}")
        chains[int(parts[1])] = tuple(sorted(int(p) for p in parts[2:]))
    return Embedding(core=core, chains=chains)


def graph_hash(p: IsingProblem) -> str:
    """Hash of the coupling graph only (n and J keys); clamping changes h and
    offset but not the graph, so embeddings are shared across clamp states."""
    text = f"{p.n};" + ";".join(f"{i},{j}" for i, j in sorted(p.J))
    return hashlib.sha256(text.encode()).hexdigest()


def validate_embedding(emb: Embedding, problem: IsingProblem) -> None:
    """Raise EmbeddingError unless all embedding invariants hold."""
    core = emb.core
    if set(emb.chains) != set(range(problem.n)):
        raise EmbeddingError("chains do not cover exactly the problem's spins")
    seen: set[int] = set()
    adj = core.adjacency()
    for i, chain in emb.chains.items():
        if not chain:
            raise EmbeddingError(f"empty chain for spin {i}")
        members = set(chain)
        if members & seen:
            raise EmbeddingError(f"chain for spin {i} overlaps another chain")
        seen |= members
        if any(not 0 <= p < core.n for p in members):
            raise EmbeddingError(f"chain for spin {i} uses nodes outside the core")
        # connectivity within the chain
        reached = {chain[0]}
        queue = deque([chain[0]])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                y = int(y)
                if y in members and y not in reached:
                    reached.add(y)
                    queue.append(y)
        if reached != members:
            raise EmbeddingError(f"chain for spin {i} is not connected")
    if len(seen) > core.capacity:
        raise EmbeddingError("embedding exceeds core capacity")
    for (i, j) in problem.J:
        ci, cj = set(emb.chains[i]), set(emb.chains[j])
        if not any(int(y) in cj for x in ci for y in adj[x]):
            raise EmbeddingError(f"logical edge ({i},{j}) has no physical edge")


def _bfs_order(n: int, nbrs: list[list[int]], rng: np.random.Generator) -> list[int]:
    order: list[int] = []
    visited = np.zeros(n, dtype=bool)
    remaining = list(range(n))
    queue: deque[int] = deque()
    while len(order) < n:
        if not queue:
            remaining = [x for x in remaining if not visited[x]]
            root = remaining[int(rng.integers(0, len(remaining)))]
            visited[root] = True
            queue.append(root)
        u = queue.popleft()
        order.append(u)
        for v in nbrs[u]:
            if not visited[v]:
                visited[v] = True
                queue.append(v)
    return order


def _bfs_free(core: CoreTopology, sources, free: np.ndarray):
    """Distances/parents from a chain through free nodes only. Sources sit at
    distance 0; every non-source visited node is free."""
    offsets, flat = core.csr()
    dist = np.full(core.n, -1, dtype=np.int32)
    parent = np.full(core.n, -1, dtype=np.intp)
    frontier = np.array(sorted(sources), dtype=np.intp)
    dist[frontier] = 0
    d = 0
    while frontier.size:
        counts = offsets[frontier + 1] - offsets[frontier]
        total = int(counts.sum())
        if total == 0:
            break
        base = np.repeat(offsets[frontier], counts)
        pos = base + (np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts))
        nbr = flat[pos]
        src = np.repeat(frontier, counts)
        mask = (dist[nbr] == -1) & free[nbr]
        nbr, src = nbr[mask], src[mask]
        if nbr.size == 0:
            break
        uniq, first = np.unique(nbr, return_index=True)
        dist[uniq] = d + 1
        parent[uniq] = src[first]
        frontier = uniq
        d += 1
    return dist, parent


def _trace_path(f: int, parent: np.ndarray, chain: set[int]) -> list[int]:
    """Free interior nodes strictly between f and the source chain."""
    path = []
    node = int(parent[f])
    while node not in chain:
        path.append(node)
        node = int(parent[node])
    return path


def find_embedding(
    problem: IsingProblem,
    core: CoreTopology,
    seed: int = 0,
    retries: int = 8,
    rip_fraction: float = 0.25,
    max_ripups: int | None = None,
) -> Embedding | None:
    """Minor-embed the problem's coupling graph into the core; None when the
    retry budget is exhausted (not-embeddable is a normal outcome)."""
    n = problem.n
    if n < 1:
        raise ValueError("problem must have at least one spin")
    if n > core.capacity:
        return None
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for i, j in problem.J:
        nbrs[i].append(j)
        nbrs[j].append(i)
    nbrs = [sorted(x) for x in nbrs]
    budget = max_ripups if max_ripups is not None else max(20, n)
    for attempt in range(retries):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt,)))
        chains = _attempt(n, nbrs, core, rng, rip_fraction, budget)
        if chains is not None:
            emb = Embedding(
                core=core, chains={i: tuple(sorted(c)) for i, c in chains.items()}
            )
            validate_embedding(emb, problem)
            return emb
    return None


def _attempt(n, nbrs, core, rng, rip_fraction, max_ripups):
    owner = np.full(core.n, -1, dtype=np.intp)
    free = np.ones(core.n, dtype=bool)
    chains: dict[int, set[int]] = {}
    pending = deque(_bfs_order(n, nbrs, rng))
    ripups = 0
    while pending:
        u = pending.popleft()
        placed = [v for v in nbrs[u] if v in chains]
        site = _choose_site(placed, chains, free, core, rng)
        if site is None:
            ripups += 1
            if ripups > max_ripups or not chains:
                return None
            victims = rng.choice(
                sorted(chains),
                size=max(1, int(len(chains) * rip_fraction)),
                replace=False,
            )
            pending.appendleft(u)
            for v in victims:
                for node in chains[v]:
                    owner[node] = -1
                    free[node] = True
                del chains[v]
                pending.append(int(v))
            continue
        f, paths = site
        members = {f}
        for path in paths.values():
            members.update(path)
        for node in members:
            owner[node] = u
            free[node] = False
        chains[u] = members
    return chains


def _choose_site(placed, chains, free, core, rng):
    """Pick the free node minimizing total free-path distance to the chains of
    the placed neighbors; return (node, {neighbor: interior path})."""
    if not placed:
        candidates = np.flatnonzero(free)
        if candidates.size == 0:
            return None
        return int(candidates[rng.integers(0, candidates.size)]), {}
    total = np.zeros(core.n)
    searches = {}
    for v in placed:
        dist, parent = _bfs_free(core, chains[v], free)
        reach = dist >= 0
        if not np.any(reach & free):
            return None
        searches[v] = parent
        total += np.where(reach, dist, np.inf)
    total[~free] = np.inf
    f = int(np.argmin(total))
    if not np.isfinite(total[f]):
        return None
    paths = {v: _trace_path(f, searches[v], chains[v]) for v in placed}
    return f, paths


@dataclass
class EmbeddedProblem:
    """Physical problem over the embedded nodes, densely reindexed."""

    problem: IsingProblem
    embedding: Embedding
    chain_strength: float
    nodes: list[int]  # dense index -> physical core node
    chain_tree_edges: int

    def dense_chain(self, logical: int) -> list[int]:
        index = {p: k for k, p in enumerate(self.nodes)}
        return [index[p] for p in self.embedding.chains[logical]]


def default_chain_strength(p: IsingProblem, factor: float = 2.0) -> float:
    scale = max((abs(v) for v in p.J.values()), default=1.0)
    return factor * scale


def embed_problem(
    p: IsingProblem, emb: Embedding, chain_strength: float
) -> EmbeddedProblem:
    """Split fields uniformly over chains, place each logical coupling on the
    lexicographically smallest physical edge between the two chains, and tie
    each chain together with +chain_strength on a spanning tree."""
    if chain_strength <= 0:
        raise ValueError("chain_strength must be positive")
    validate_embedding(emb, p)
    adj = emb.core.adjacency()
    nodes = sorted(node for chain in emb.chains.values() for node in chain)
    index = {node: k for k, node in enumerate(nodes)}
    h = np.zeros(len(nodes))
    J: dict[tuple[int, int], float] = {}
    for i, chain in emb.chains.items():
        share = float(p.h[i]) / len(chain)
        for node in chain:
            h[index[node]] += share
    for (i, j), w in p.J.items():
        ci, cj = emb.chains[i], set(emb.chains[j])
        candidates = sorted(
            (min(a, int(b)), max(a, int(b)))
            for a in ci
            for b in adj[a]
            if int(b) in cj
        )
        a, b = candidates[0]
        key = (index[a], index[b])
        key = (min(key), max(key))
        J[key] = J.get(key, 0.0) + w
    tree_edges = 0
    for i, chain in emb.chains.items():
        members = set(chain)
        root = min(members)
        reached = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                y = int(y)
                if y in members and y not in reached:
                    reached.add(y)
                    queue.append(y)
                    key = (index[min(x, y)], index[max(x, y)])
                    J[key] = J.get(key, 0.0) + chain_strength
                    tree_edges += 1
    physical = IsingProblem(n=len(nodes), h=h, J=J, offset=p.offset)
    return EmbeddedProblem(
        problem=physical,
        embedding=emb,
        chain_strength=chain_strength,
        nodes=nodes,
        chain_tree_edges=tree_edges,
    )


def identity_embedding(p: IsingProblem, core: CoreTopology) -> Embedding:
    """Chains of size one on nodes 0..n-1; valid only when the problem graph is
    a subgraph of the core on those nodes (always true for all-to-all)."""
    emb = Embedding(core=core, chains={i: (i,) for i in range(p.n)})
    validate_embedding(emb, p)
    return emb


def decode(ep: EmbeddedProblem, s) -> tuple[np.ndarray, int]:
    """Majority-vote each chain; exact ties decode to -1 and count as broken,
    as does any non-unanimous chain."""
    s = np.asarray(s)
    if s.shape != (ep.problem.n,):
        raise ValueError(
            f"assignment length {s.shape} != physical size {ep.problem.n}"
        )
    index = {node: k for k, node in enumerate(ep.nodes)}
    n_logical = ep.embedding.num_logical
    out = np.zeros(n_logical, dtype=np.int8)
    broken = 0
    for i in range(n_logical):
        votes = [int(s[index[node]]) for node in ep.embedding.chains[i]]
        total = sum(votes)
        out[i] = 1 if total > 0 else -1
        if any(v != votes[0] for v in votes):
            broken += 1
    return out, broken


def induced_graph(p: IsingProblem, members: list[int]) -> IsingProblem:
    """Subgraph over `members` (reindexed in list order); fields dropped,
    coupling weights kept. Used for embeddability questions only."""
    index = {m: k for k, m in enumerate(members)}
    J = {}
    for (i, j), w in p.J.items():
        if i in index and j in index:
            a, b = index[i], index[j]
            J[(min(a, b), max(a, b))] = w
    return IsingProblem(n=len(members), h=np.zeros(len(members)), J=J)


def max_embeddable_prefix(
    order: list[int],
    problem: IsingProblem,
    core: CoreTopology,
    seed: int = 0,
    retries: int = 4,
) -> int:
    """Largest k such that the induced subgraph on order[:k] embeds; grows spin
    by spin and stops at the first failure."""
    best = 0
    for k in range(1, len(order) + 1):
        if k > core.capacity:
            break
        sub = induced_graph(problem, list(order[:k]))
        if find_embedding(sub, core, seed=seed, retries=retries) is None:
            break
        best = k
    return best


class EmbeddingCache:
    """Disk cache of embedding attempts keyed by (graph hash, core, seed).
    Failures are cached too (as 'unembeddable'), which matters for sweeps."""

    def __init__(self, root: str | Path | None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)
        self._memory: dict[str, Embedding | None] = {}

    def _key(self, problem: IsingProblem, core: CoreTopology, seed: int) -> str:
        geo = ",".join(f"{k}={core.geometry[k]}" for k in sorted(core.geometry))
        text = f"{graph_hash(problem)}|{core.kind}|{core.n}|{geo}|{seed}"
        return hashlib.sha256(text.encode()).hexdigest()

    def find(
        self,
        problem: IsingProblem,
        core: CoreTopology,
        seed: int = 0,
        retries: int = 8,
    ) -> Embedding | None:
        key = self._key(problem, core, seed)
        if key in self._memory:
            return self._memory[key]
        path = self.root / f"{key}.emb" if self.root is not None else None
        if path is not None and path.exists():
            text = path.read_text()
            result = (
                None
                if text.startswith("unembeddable")
                else embedding_from_text(text, core)
            )
            self._memory[key] = result
            return result
        result = find_embedding(problem, core, seed=seed, retries=retries)
        self._memory[key] = result
        if path is not None:
            path.write_text("unembeddable\n" if result is None else result.to_text())
        return result
