"""Ising and QUBO problem containers, energy evaluation, and exact transforms.

Energy conventions used throughout the package:

* Ising:  E(s) = offset - sum_{i<j} J_ij s_i s_j - sum_i h_i s_i,  s_i in {-1, +1}
* QUBO:   E(x) = offset + sum_{i<=j} Q_ij x_i x_j,                 x_i in {0, 1}

Couplings are stored sparsely, once per unordered pair; local fields are dense.
Spin assignments are plain numpy arrays with values +-1; binary assignments use 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Pair = tuple[int, int]


def _pair(i: int, j: int) -> Pair:
    if i == j:
        raise ValueError(f"self-coupling ({i},{i}) is not allowed")
    return (i, j) if i < j else (j, i)


def as_spins(values) -> np.ndarray:
    """Validate and return a +-1 spin vector as an int8 array."""
    s = np.asarray(values, dtype=np.int8)
    if s.ndim != 1 or not np.all(np.abs(s) == 1):
        raise ValueError("spin assignment must be a 1-D vector of -1/+1 values")
    return s


def as_bits(values) -> np.ndarray:
    """Validate and return a 0/1 bit vector as an int8 array."""
    x = np.asarray(values, dtype=np.int8)
    if x.ndim != 1 or not np.all((x == 0) | (x == 1)):
        raise ValueError("binary assignment must be a 1-D vector of 0/1 values")
    return x


@dataclass
class IsingProblem:
    """Sparse-coupling Ising problem.

    Parameters
    ----------
    n : int
        Spin count.
    h : array-like
        Dense local-field coefficients, length n.
    J : dict[(int, int), float]
        Couplings keyed by unordered spin pair (stored with i < j).
    offset : float
        Constant added to every energy.
    """

    n: int
    h: np.ndarray
    J: dict[Pair, float] = field(default_factory=dict)
    offset: float = 0.0
    _pairs: tuple | None = field(default=None, init=False, repr=False, compare=False)
    _csr: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        if self.h.shape != (self.n,):
            raise ValueError(f"h must have length n={self.n}, got shape {self.h.shape}")
        J = {}
        for (i, j), v in self.J.items():
            key = _pair(int(i), int(j))
            if not (0 <= key[0] and key[1] < self.n):
                raise ValueError(f"coupling index out of range: {key}")
            if key in J:
                raise ValueError(f"duplicate coupling for pair {key}")
            J[key] = float(v)
        self.J = J

    @property
    def num_couplings(self) -> int:
        return len(self.J)

    def edges(self) -> list[Pair]:
        return sorted(self.J)

    def density(self) -> float:
        return graph_density(self.J.keys(), self.n)

    def pair_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Couplings as parallel (i, j, weight) arrays, cached for vector energy."""
        if self._pairs is None:
            if self.J:
                items = sorted(self.J.items())
                ii = np.array([k[0] for k, _ in items], dtype=np.intp)
                jj = np.array([k[1] for k, _ in items], dtype=np.intp)
                ww = np.array([v for _, v in items], dtype=float)
            else:
                ii = jj = np.empty(0, dtype=np.intp)
                ww = np.empty(0, dtype=float)
            self._pairs = (ii, jj, ww)
        return self._pairs

    def neighbor_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Adjacency in CSR form (offsets, neighbor index, coupling weight), cached."""
        if self._csr is None:
            counts = np.zeros(self.n + 1, dtype=np.intp)
            for i, j in self.J:
                counts[i + 1] += 1
                counts[j + 1] += 1
            offsets = np.cumsum(counts)
            nbr = np.zeros(offsets[-1], dtype=np.intp)
            w = np.zeros(offsets[-1], dtype=float)
            cursor = offsets[:-1].copy()
            for (i, j), v in self.J.items():
                nbr[cursor[i]] = j
                w[cursor[i]] = v
                cursor[i] += 1
                nbr[cursor[j]] = i
                w[cursor[j]] = v
                cursor[j] += 1
            self._csr = (offsets, nbr, w)
        return self._csr

    def local_fields(self, s: np.ndarray) -> np.ndarray:
        """L_i = h_i + sum_j J_ij s_j for every spin."""
        ii, jj, ww = self.pair_arrays()
        L = self.h.astype(float).copy()
        np.add.at(L, ii, ww * s[jj])
        np.add.at(L, jj, ww * s[ii])
        return L


@dataclass
class QuboProblem:
    """Sparse QUBO with upper-triangular storage (keys i <= j); offset holds any
    constant term folded out of polynomial manipulations."""

    n: int
    Q: dict[Pair, float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        Q = {}
        for (i, j), v in self.Q.items():
            i, j = int(i), int(j)
            if i > j:
                raise ValueError(f"QUBO keys must satisfy i <= j, got ({i},{j})")
            if not (0 <= i and j < self.n):
                raise ValueError(f"QUBO index out of range: ({i},{j})")
            Q[(i, j)] = float(v)
        self.Q = Q


def ising_energy(p: IsingProblem, s) -> float:
    """E(s) = offset - sum J_ij s_i s_j - sum h_i s_i."""
    s = np.asarray(s)
    if s.shape != (p.n,):
        raise ValueError(f"assignment length {s.shape} does not match n={p.n}")
    ii, jj, ww = p.pair_arrays()
    return float(p.offset - np.dot(ww, s[ii] * s[jj]) - np.dot(p.h, s))


def qubo_energy(q: QuboProblem, x) -> float:
    """E(x) = offset + sum_{i<=j} Q_ij x_i x_j."""
    x = np.asarray(x)
    if x.shape != (q.n,):
        raise ValueError(f"assignment length {x.shape} does not match n={q.n}")
    e = q.offset
    for (i, j), v in q.Q.items():
        e += v * x[i] * x[j]
    return float(e)


def qubo_to_ising(q: QuboProblem) -> IsingProblem:
    """Exact transform under x_i = (s_i + 1)/2.

    J_ij = -Q_ij/4, h_i = -(Q_ii/2 + sum_j Q_ij/4), with the constant term
    absorbed into the offset so energies agree on every assignment.
    """
    h = np.zeros(q.n)
    J: dict[Pair, float] = {}
    offset = q.offset
    for (i, j), v in q.Q.items():
        if i == j:
            h[i] -= v / 2.0
            offset += v / 2.0
        else:
            J[(i, j)] = J.get((i, j), 0.0) - v / 4.0
            h[i] -= v / 4.0
            h[j] -= v / 4.0
            offset += v / 4.0
    J = {k: v for k, v in J.items() if v != 0.0}
    return IsingProblem(n=q.n, h=h, J=J, offset=offset)


def ising_to_qubo(p: IsingProblem) -> QuboProblem:
    """Inverse transform; round-trips through qubo_to_ising exactly."""
    Q: dict[Pair, float] = {}
    diag = np.zeros(p.n)
    offset = p.offset + float(np.sum(p.h))
    for i in range(p.n):
        if p.h[i] != 0.0:
            diag[i] -= 2.0 * p.h[i]
    for (i, j), v in p.J.items():
        if v == 0.0:
            continue
        Q[(i, j)] = -4.0 * v
        diag[i] += 2.0 * v
        diag[j] += 2.0 * v
        offset -= v
    for i in range(p.n):
        if diag[i] != 0.0:
            Q[(i, i)] = diag[i]
    return QuboProblem(n=p.n, Q=Q, offset=offset)


def clamp(p: IsingProblem, i: int, v: int) -> IsingProblem:
    """Fix spin i to v and fold its terms into the remaining problem.

    Neighbors pick up h_j += v*J_ij; the offset absorbs -v*h_i. The remaining
    spins are reindexed by dropping i: old index j maps to j if j < i, else j-1.
    """
    if not (0 <= i < p.n):
        raise ValueError(f"spin index {i} out of range for n={p.n}")
    if v not in (-1, 1):
        raise ValueError(f"clamp value must be -1 or +1, got {v}")
    h = np.delete(p.h.copy(), i)
    offset = p.offset - v * float(p.h[i])
    J: dict[Pair, float] = {}

    def remap(k: int) -> int:
        return k if k < i else k - 1

    for (a, b), w in p.J.items():
        if a == i:
            h[remap(b)] += v * w
        elif b == i:
            h[remap(a)] += v * w
        else:
            J[(remap(a), remap(b))] = w
    return IsingProblem(n=p.n - 1, h=h, J=J, offset=offset)


def spins_to_bits(s) -> np.ndarray:
    """x_i = (s_i + 1)/2."""
    s = as_spins(s)
    return ((s + 1) // 2).astype(np.int8)


def bits_to_spins(x) -> np.ndarray:
    """s_i = 2 x_i - 1."""
    x = as_bits(x)
    return (2 * x - 1).astype(np.int8)


def graph_density(edges, n: int) -> float:
    """Edges over the maximum possible edge count; 0 for n < 2."""
    if n < 2:
        return 0.0
    m = len(edges) if hasattr(edges, "__len__") else sum(1 for _ in edges)
    return 2.0 * m / (n * (n - 1))


def quantize_couplings(p: IsingProblem, levels: int) -> IsingProblem:
    """Optional hardware-precision hook: snap J and h to `levels` signed integer
    steps of max|J| (identity when couplings are already on the grid). Off by
    default everywhere; kept for experiments on coupling precision."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    scale = max((abs(v) for v in p.J.values()), default=0.0)
    if scale == 0.0:
        return IsingProblem(n=p.n, h=p.h.copy(), J=dict(p.J), offset=p.offset)
    step = scale / levels
    J = {k: round(v / step) * step for k, v in p.J.items()}
    J = {k: v for k, v in J.items() if v != 0.0}
    h = np.round(p.h / step) * step
    return IsingProblem(n=p.n, h=h, J=J, offset=p.offset)
