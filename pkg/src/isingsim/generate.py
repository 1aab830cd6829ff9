"""Seeded random benchmark generators and the text problem format.

All generators are pure functions of (parameters, seed). Randomness comes from
numpy's PCG64 seeded through SeedSequence, so output is stable across runs and
platforms; substreams for independent components are spawned from the same
sequence. Coupling weights default to nonzero integers in [-7, 7] with h = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formulate import CnfFormula, ParseError
from .model import IsingProblem

DEFAULT_N = 50
ER_P_SWEEP = (0.06, 0.12, 0.24, 0.48)
BA_M_SWEEP = (1, 2, 4, 8, 16, 32)
POW_M_SWEEP = (1, 2, 4, 8, 16)
POW_TRIANGLE_P = 0.5
SAT_ALPHA_SWEEP = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class WeightSpec:
    """Distribution of coupling weights; draws are guaranteed nonzero."""

    kind: str = "uniform_int"  # uniform_int | uniform_real | constant
    low: float = -7.0
    high: float = 7.0

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform_int":
            values = np.array(
                [v for v in range(int(self.low), int(self.high) + 1) if v != 0],
                dtype=float,
            )
            return rng.choice(values, size=size)
        if self.kind == "uniform_real":
            w = rng.uniform(self.low, self.high, size=size)
            while np.any(w == 0.0):  # measure-zero, but keep the guarantee
                w[w == 0.0] = rng.uniform(self.low, self.high, size=int(np.sum(w == 0.0)))
            return w
        if self.kind == "constant":
            if self.high == 0.0:
                raise ValueError("constant weight must be nonzero")
            return np.full(size, float(self.high))
        raise ValueError(f"unknown weight kind {self.kind!r}")


DEFAULT_WEIGHTS = WeightSpec()


@dataclass(frozen=True)
class GeneratorSpec:
    """One generator invocation; `param` is p, m, or alpha depending on family."""

    family: str  # erdos_renyi | barabasi_albert | power_law_cluster | random_3sat
    n: int
    param: float
    seed: int
    weights: WeightSpec = DEFAULT_WEIGHTS

    def in_default_sweep(self) -> bool:
        sweeps = {
            "erdos_renyi": ER_P_SWEEP,
            "barabasi_albert": BA_M_SWEEP,
            "power_law_cluster": POW_M_SWEEP,
            "random_3sat": SAT_ALPHA_SWEEP,
        }
        return self.param in sweeps.get(self.family, ())

    def build(self):
        if self.family == "erdos_renyi":
            return gen_erdos_renyi(self.n, self.param, self.seed, self.weights)
        if self.family == "barabasi_albert":
            return gen_barabasi_albert(self.n, int(self.param), self.seed, self.weights)
        if self.family == "power_law_cluster":
            return gen_power_law_cluster(
                self.n, int(self.param), POW_TRIANGLE_P, self.seed, self.weights
            )
        if self.family == "random_3sat":
            return gen_random_3sat(self.n, self.param, self.seed)
        raise ValueError(f"unknown family {self.family!r}")


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _edges_to_problem(n: int, edges: list[tuple[int, int]], seed: int,
                      weights: WeightSpec) -> IsingProblem:
    w = weights.draw(_rng(seed, 1), len(edges))
    J = {(i, j): float(v) for (i, j), v in zip(edges, w)}
    return IsingProblem(n=n, h=np.zeros(n), J=J)


def gen_erdos_renyi(n: int, p: float, seed: int,
                    weights: WeightSpec = DEFAULT_WEIGHTS) -> IsingProblem:
    """Each unordered pair is coupled independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    rng = _rng(seed, 0)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    u = rng.random(len(pairs))
    edges = [pair for pair, ui in zip(pairs, u) if ui < p]
    return _edges_to_problem(n, edges, seed, weights)


def _preferential_pick(rng: np.random.Generator, degrees: np.ndarray,
                       exclude: set[int]) -> int:
    """One degree-proportional draw among nodes not in `exclude`; uniform when
    every eligible node still has degree zero."""
    weights = degrees.astype(float).copy()
    for i in exclude:
        if i < len(weights):
            weights[i] = 0.0
    total = weights.sum()
    if total == 0.0:
        eligible = [i for i in range(len(degrees)) if i not in exclude]
        return int(eligible[rng.integers(0, len(eligible))])
    return int(rng.choice(len(degrees), p=weights / total))


def gen_barabasi_albert(n: int, m: int, seed: int,
                        weights: WeightSpec = DEFAULT_WEIGHTS) -> IsingProblem:
    """Preferential attachment from m isolated seed nodes; (n-m)*m edges.

    Each new node picks m distinct existing targets one at a time with
    probability proportional to the degree snapshot taken before it attaches
    (uniform while all degrees are zero).
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = _rng(seed, 0)
    degrees = np.zeros(n, dtype=np.int64)
    edges: list[tuple[int, int]] = []
    for u in range(m, n):
        snapshot = degrees[:u].copy()
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(_preferential_pick(rng, snapshot, chosen))
        for v in sorted(chosen):
            edges.append((v, u))
            degrees[v] += 1
            degrees[u] += 1
    return _edges_to_problem(n, edges, seed, weights)


def gen_power_law_cluster(n: int, m: int, p_triangle: float, seed: int,
                          weights: WeightSpec = DEFAULT_WEIGHTS) -> IsingProblem:
    """Growth with triangle closure: each of a new node's m links is either a
    preferential attachment or, with probability p_triangle, a closure to a
    random neighbor of the previously attached target (preferential fallback
    when no eligible neighbor exists). Exactly (n-m)*m edges."""
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    if not 0.0 <= p_triangle <= 1.0:
        raise ValueError(f"p_triangle must be in [0,1], got {p_triangle}")
    rng = _rng(seed, 0)
    degrees = np.zeros(n, dtype=np.int64)
    adj: list[set[int]] = [set() for _ in range(n)]
    edges: list[tuple[int, int]] = []

    def connect(u: int, v: int):
        a, b = (v, u) if v < u else (u, v)
        edges.append((a, b))
        adj[u].add(v)
        adj[v].add(u)
        degrees[u] += 1
        degrees[v] += 1

    for u in range(m, n):
        snapshot = degrees[:u].copy()
        target = _preferential_pick(rng, snapshot, set(adj[u]) | {u})
        connect(u, target)
        count = 1
        while count < m:
            if rng.random() < p_triangle:
                neighborhood = sorted(adj[target] - adj[u] - {u})
                if neighborhood:
                    nbr = neighborhood[int(rng.integers(0, len(neighborhood)))]
                    connect(u, nbr)
                    count += 1
                    continue
            target = _preferential_pick(rng, snapshot, set(adj[u]) | {u})
            connect(u, target)
            count += 1
    return _edges_to_problem(n, edges, seed, weights)


def gen_random_3sat(n: int, alpha: float, seed: int) -> CnfFormula:
    """round(alpha*n) clauses of 3 distinct variables with fair-coin polarities."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if n < 3:
        raise ValueError(f"need n >= 3 variables, got {n}")
    rng = _rng(seed, 0)
    m = int(round(alpha * n))
    clauses = []
    for _ in range(m):
        vs = np.sort(rng.choice(n, size=3, replace=False))
        polarity = rng.integers(0, 2, size=3)
        clauses.append(tuple((int(v), bool(b)) for v, b in zip(vs, polarity)))
    return CnfFormula(num_vars=n, clauses=clauses)


def problem_to_text(p: IsingProblem) -> str:
    """Text format: 'ising <n> <num_couplings>' header, 'offset <v>',
    nonzero 'h <i> <v>' lines, and 'J <i> <j> <v>' lines."""
    lines = [f"ising {p.n} {p.num_couplings}", f"offset {float(p.offset)!r}"]
    for i in range(p.n):
        if p.h[i] != 0.0:
            lines.append(f"h {i} {float(p.h[i])!r}")
    for (i, j) in sorted(p.J):
        lines.append(f"J {i} {j} {float(p.J[(i, j)])!r}")
    return "\n".join(lines) + "\n"


def problem_from_text(text: str) -> IsingProblem:
    n = None
    num_couplings = 0
    h = None
    J: dict[tuple[int, int], float] = {}
    offset = 0.0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "ising":
            if len(parts) != 3:
                raise ParseError(f"malformed header {line!r}", lineno)
            n, num_couplings = int(parts[1]), int(parts[2])
            h = np.zeros(n)
        elif n is None:
            raise ParseError("data before 'ising' header", lineno)
        elif parts[0] == "offset" and len(parts) == 2:
            offset = float(parts[1])
        elif parts[0] == "h" and len(parts) == 3:
            h[int(parts[1])] = float(parts[2])
        elif parts[0] == "J" and len(parts) == 4:
            J[(int(parts[1]), int(parts[2]))] = float(parts[3])
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if n is None:
        raise ParseError("missing 'ising' header")
    if len(J) != num_couplings:
        raise ParseError(f"header declares {num_couplings} couplings, found {len(J)}")
    return IsingProblem(n=n, h=h, J=J, offset=offset)
