"""Benchmark formulations: 3SAT CNF and Max-Cut instances as QUBO/Ising problems.

3SAT uses the compact per-clause encoding with one ancilla variable per clause:
for a clause over bits y1, y2, y3 (a negated literal contributes 1-x in place
of x) and ancilla a,

    -(a + 1)(y1 + y2 + y3) + 2a + y1*y2 + y1*y3 + y2*y3

which contributes -1 when the clause is satisfied (minimizing over a) and 0
otherwise, so the instance minimum is -m exactly when the formula is
satisfiable. Constants from negated-literal substitution are folded into the
QUBO offset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import IsingProblem, QuboProblem, as_bits

Literal = tuple[int, bool]  # (variable index, polarity)


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class FormulationError(ValueError):
    pass


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[tuple[Literal, ...]]

    def __post_init__(self):
        for c, clause in enumerate(self.clauses):
            if not 1 <= len(clause) <= 3:
                raise ValueError(f"clause {c} has {len(clause)} literals")
            vs = [v for v, _ in clause]
            if len(set(vs)) != len(vs):
                raise ValueError(f"clause {c} repeats a variable")
            if any(not 0 <= v < self.num_vars for v in vs):
                raise ValueError(f"clause {c} references a variable out of range")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.num_clauses}"]
        for clause in self.clauses:
            lits = [(v + 1) if pos else -(v + 1) for v, pos in clause]
            lines.append(" ".join(str(l) for l in lits) + " 0")
        return "\n".join(lines) + "\n"


@dataclass
class MaxCutInstance:
    n: int
    edges: list[tuple[int, int, float]]

    def __post_init__(self):
        seen = set()
        for i, j, _ in self.edges:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i},{j}) for n={self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add((i, j))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def to_gset(self) -> str:
        lines = [f"{self.n} {self.num_edges}"]
        for i, j, w in self.edges:
            wtxt = str(int(w)) if float(w).is_integer() else repr(float(w))
            lines.append(f"{i + 1} {j + 1} {wtxt}")
        return "\n".join(lines) + "\n"


@dataclass
class VariableMap:
    """QUBO variable roles for a 3SAT encoding: indices [0, num_vars) are the
    original Boolean variables, index num_vars + c is the ancilla of clause c."""

    num_vars: int
    num_clauses: int

    @property
    def num_qubo_vars(self) -> int:
        return self.num_vars + self.num_clauses

    def is_ancilla(self, i: int) -> bool:
        return i >= self.num_vars

    def clause_of(self, i: int) -> int:
        if not self.is_ancilla(i):
            raise ValueError(f"variable {i} is an original, not an ancilla")
        return i - self.num_vars

    def original_bits(self, x) -> np.ndarray:
        return as_bits(x)[: self.num_vars]


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF. Clauses may span lines; each ends with a 0 token."""
    num_vars = num_clauses = None
    clauses: list[tuple[Literal, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                clause = tuple((abs(l) - 1, l > 0) for l in pending)
                if len(clause) > 3:
                    raise ParseError(f"clause has {len(clause)} literals (max 3)", lineno)
                if not clause:
                    raise ParseError("empty clause", lineno)
                if len({v for v, _ in clause}) != len(clause):
                    raise ParseError("clause repeats a variable", lineno)
                for v, _ in clause:
                    if v >= num_vars:
                        raise ParseError(f"variable {v + 1} out of range", lineno)
                clauses.append(clause)
                pending = []
            else:
                pending.append(lit)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("unterminated clause at end of input")
    if len(clauses) != num_clauses:
        raise ParseError(
            f"header declares {num_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars=num_vars, clauses=clauses)


def sat_to_qubo(cnf: CnfFormula) -> tuple[QuboProblem, VariableMap]:
    """Encode a 3-literal-per-clause CNF as a QUBO over n + m variables."""
    n, m = cnf.num_vars, cnf.num_clauses
    for c, clause in enumerate(cnf.clauses):
        if len(clause) != 3:
            raise FormulationError(
                f"clause {c} has {len(clause)} literals; the encoding needs exactly 3"
            )
    linear = np.zeros(n + m)
    quad: dict[tuple[int, int], float] = {}
    offset = 0.0

    def add_pair(i: int, j: int, v: float):
        key = (i, j) if i < j else (j, i)
        quad[key] = quad.get(key, 0.0) + v

    for c, clause in enumerate(cnf.clauses):
        xa = n + c
        lits = [(v, (0.0, 1.0) if pos else (1.0, -1.0)) for v, pos in clause]
        # -(xa + 1) * sum_k y_k            with y_k = a_k + b_k * x_k
        for v, (a, b) in lits:
            offset -= a
            linear[v] -= b
            linear[xa] -= a
            add_pair(xa, v, -b)
        # + 2 xa
        linear[xa] += 2.0
        # + y_j * y_k over the three pairs
        for p in range(3):
            for q in range(p + 1, 3):
                (vj, (aj, bj)), (vk, (ak, bk)) = lits[p], lits[q]
                offset += aj * ak
                linear[vj] += ak * bj
                linear[vk] += aj * bk
                add_pair(vj, vk, bj * bk)

    Q = {k: v for k, v in quad.items() if v != 0.0}
    for i in range(n + m):
        if linear[i] != 0.0:
            Q[(i, i)] = Q.get((i, i), 0.0) + linear[i]
    return QuboProblem(n=n + m, Q=Q, offset=offset), VariableMap(n, m)


def evaluate_cnf(cnf: CnfFormula, x) -> tuple[bool, int]:
    """Return (all clauses satisfied, satisfied clause count)."""
    x = as_bits(x)
    if len(x) != cnf.num_vars:
        raise ValueError(f"assignment length {len(x)} != num_vars {cnf.num_vars}")
    count = 0
    for clause in cnf.clauses:
        if any((x[v] == 1) == pos for v, pos in clause):
            count += 1
    return count == cnf.num_clauses, count


def parse_gset(text: str) -> MaxCutInstance:
    """Parse an edge-list instance: header '<n> <num_edges>', then 1-indexed
    '<i> <j> <w>' lines."""
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines:
        raise ParseError("empty instance")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"malformed header {lines[0]!r}", 1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"malformed header {lines[0]!r}", 1) from None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"malformed edge line {line!r}", lineno)
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"malformed edge line {line!r}", lineno) from None
        if i == j:
            raise ParseError(f"self-loop on node {i}", lineno)
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"node index out of range in {line!r}", lineno)
        a, b = min(i, j) - 1, max(i, j) - 1
        if (a, b) in seen:
            raise ParseError(f"duplicate edge ({i},{j})", lineno)
        seen.add((a, b))
        edges.append((a, b, w))
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    return MaxCutInstance(n=n, edges=edges)


def parse_best_known(text: str) -> dict[str, float]:
    """Best-known-cuts file: lines '<instance-name> <value>'; '#' comments."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<name> <value>', got {raw!r}", lineno)
        values[parts[0]] = float(parts[1])
    return values


def maxcut_to_ising(mc: MaxCutInstance) -> IsingProblem:
    """h = 0, J_ij = -w_ij/2, offset = total_weight/2, so that

        ising_energy(s) = total_weight - cut(s)

    and cut_value + ising_energy is the constant total_weight."""
    total = mc.total_weight()
    J = {(i, j): -w / 2.0 for i, j, w in mc.edges if w != 0.0}
    return IsingProblem(n=mc.n, h=np.zeros(mc.n), J=J, offset=total / 2.0)


def cut_value(mc: MaxCutInstance, s) -> float:
    s = np.asarray(s)
    if s.shape != (mc.n,):
        raise ValueError(f"assignment length {s.shape} != n {mc.n}")
    return float(sum(w * (1 - int(s[i]) * int(s[j])) / 2.0 for i, j, w in mc.edges))


def solution_accuracy(kind: str, found: float, target: float) -> tuple[bool, float]:
    """Judge a solution against its reference value.

    'sat' and 'qubo' pass only at the exact target energy (100% criterion);
    'maxcut' passes at cut >= 0.9 * best known (inclusive). The returned
    fraction is found/target for maxcut and binary for the exact kinds.
    """
    if kind in ("sat", "qubo"):
        passed = abs(found - target) <= 1e-9
        return passed, 1.0 if passed else 0.0
    if kind == "maxcut":
        passed = found >= 0.9 * target
        return passed, float(found / target) if target else 1.0
    raise ValueError(f"unknown solution kind {kind!r}")
