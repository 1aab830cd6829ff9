"""Tests for problem containers, energies, and exact transforms."""

import itertools

import numpy as np
import pytest

from isingsim.model import (
    IsingProblem,
    QuboProblem,
    bits_to_spins,
    clamp,
    graph_density,
    ising_energy,
    ising_to_qubo,
    quantize_couplings,
    qubo_energy,
    qubo_to_ising,
    spins_to_bits,
)


def oracle_ising_energy(p, s):
    """Independent term-by-term summation, no numpy."""
    e = p.offset
    for i in range(p.n):
        e -= p.h[i] * s[i]
    for (i, j), v in p.J.items():
        e -= v * s[i] * s[j]
    return e


def all_spin_states(n):
    for bits in itertools.product([0, 1], repeat=n):
        yield np.array([2 * b - 1 for b in reversed(bits)], dtype=np.int8)


def random_ising(rng, n, p_edge=0.5, h_scale=1.0):
    h = rng.uniform(-h_scale, h_scale, n)
    J = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_edge:
                J[(i, j)] = rng.uniform(-2, 2)
    return IsingProblem(n=n, h=h, J=J, offset=rng.uniform(-1, 1))


def random_qubo(rng, n, p_entry=0.5):
    Q = {}
    for i in range(n):
        for j in range(i, n):
            if rng.random() < p_entry:
                Q[(i, j)] = rng.uniform(-3, 3)
    return QuboProblem(n=n, Q=Q)


class TestIsingEnergy:
    def test_single_spin_field(self):
        p = IsingProblem(n=1, h=[1.0], J={})
        assert ising_energy(p, [1]) == -1.0

    def test_aligned_ferromagnetic_pair(self):
        p = IsingProblem(n=2, h=[0.0, 0.0], J={(0, 1): 1.0})
        assert ising_energy(p, [1, 1]) == -1.0

    def test_matches_summation_oracle(self):
        rng = np.random.default_rng(7)
        p = random_ising(rng, 6)
        for _ in range(20):
            s = rng.choice([-1, 1], size=6)
            assert ising_energy(p, s) == pytest.approx(oracle_ising_energy(p, s), abs=1e-12)

    def test_length_mismatch(self):
        p = IsingProblem(n=2, h=[0.0, 0.0], J={})
        with pytest.raises(ValueError):
            ising_energy(p, [1, 1, 1])

    def test_rejects_self_coupling(self):
        with pytest.raises(ValueError):
            IsingProblem(n=2, h=[0.0, 0.0], J={(1, 1): 1.0})


class TestQuboEnergy:
    def test_single_diagonal(self):
        q = QuboProblem(n=1, Q={(0, 0): 1.0})
        assert qubo_energy(q, [1]) == 1.0

    def test_zero_vector(self):
        q = QuboProblem(n=3, Q={(0, 1): 5.0, (2, 2): -2.0})
        assert qubo_energy(q, [0, 0, 0]) == 0.0

    def test_direct_arithmetic(self):
        q = QuboProblem(n=2, Q={(0, 0): 1.0, (0, 1): 2.0, (1, 1): 3.0})
        assert qubo_energy(q, [1, 1]) == 6.0

    def test_rejects_lower_triangular(self):
        with pytest.raises(ValueError):
            QuboProblem(n=2, Q={(1, 0): 1.0})


class TestQuboToIsing:
    def test_zero_qubo(self):
        p = qubo_to_ising(QuboProblem(n=3, Q={}))
        assert np.all(p.h == 0) and p.J == {} and p.offset == 0.0

    def test_known_four_state_spectrum(self):
        q = QuboProblem(n=2, Q={(0, 0): 1.0, (0, 1): 2.0, (1, 1): 3.0})
        p = qubo_to_ising(q)
        # binary images (0,0),(1,0),(0,1),(1,1) -> energies 0,1,3,6
        got = [ising_energy(p, bits_to_spins(x)) for x in ([0, 0], [1, 0], [0, 1], [1, 1])]
        assert got == pytest.approx([0.0, 1.0, 3.0, 6.0], abs=1e-12)

    def test_random_enumeration_equality_and_argmin(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            q = random_qubo(rng, n)
            p = qubo_to_ising(q)
            qe, ie = [], []
            for k in range(2 ** n):
                x = np.array([(k >> b) & 1 for b in range(n)], dtype=np.int8)
                qe.append(qubo_energy(q, x))
                ie.append(ising_energy(p, 2 * x - 1))
            qe, ie = np.array(qe), np.array(ie)
            assert np.max(np.abs(qe - ie)) <= 1e-9
            assert set(np.flatnonzero(qe <= qe.min() + 1e-9)) == set(
                np.flatnonzero(ie <= ie.min() + 1e-9)
            )


class TestIsingToQubo:
    def test_zero_problem(self):
        q = ising_to_qubo(IsingProblem(n=2, h=[0.0, 0.0], J={}))
        assert q.Q == {} and q.offset == 0.0

    def test_single_coupling_spectrum(self):
        p = IsingProblem(n=2, h=[0.0, 0.0], J={(0, 1): 1.0})
        q = ising_to_qubo(p)
        for x in ([0, 0], [1, 0], [0, 1], [1, 1]):
            x = np.array(x, dtype=np.int8)
            assert qubo_energy(q, x) == pytest.approx(ising_energy(p, 2 * x - 1), abs=1e-12)

    def test_random_roundtrip(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            p = random_ising(rng, n)
            back = qubo_to_ising(ising_to_qubo(p))
            for s in all_spin_states(n):
                assert ising_energy(back, s) == pytest.approx(ising_energy(p, s), abs=1e-9)


class TestClamp:
    def test_two_spin_example(self):
        p = IsingProblem(n=2, h=[0.0, 0.5], J={(0, 1): 1.0})
        c = clamp(p, 0, -1)
        assert c.n == 1
        assert c.h[0] == pytest.approx(-0.5)
        assert c.offset == pytest.approx(0.0)
        for s1 in (-1, 1):
            assert ising_energy(c, [s1]) == pytest.approx(ising_energy(p, [-1, s1]))

    def test_isolated_spin(self):
        p = IsingProblem(n=3, h=[2.0, 0.0, 1.0], J={(1, 2): 1.0})
        c = clamp(p, 0, 1)
        assert c.J == {(0, 1): 1.0}
        assert c.offset == pytest.approx(p.offset - 2.0)
        assert np.allclose(c.h, [0.0, 1.0])

    def test_sequential_clamps_match_enumeration(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            p = random_ising(rng, 8)
            fixed = {}
            cur = p
            for i_orig, v in [(2, -1), (5, 1), (0, -1)]:
                # translate the original index into the current reduced index
                i_cur = i_orig - sum(1 for f in fixed if f < i_orig)
                fixed[i_orig] = v
                cur = clamp(cur, i_cur, v)
            remaining = [i for i in range(8) if i not in fixed]
            for s_part in all_spin_states(len(remaining)):
                full = np.zeros(8, dtype=np.int8)
                for k, i in enumerate(remaining):
                    full[i] = s_part[k]
                for i, v in fixed.items():
                    full[i] = v
                assert ising_energy(cur, s_part) == pytest.approx(
                    ising_energy(p, full), abs=1e-9
                )

    def test_index_out_of_range(self):
        p = IsingProblem(n=2, h=[0.0, 0.0], J={})
        with pytest.raises(ValueError):
            clamp(p, 2, 1)


class TestBitSpinMaps:
    def test_basic(self):
        assert spins_to_bits([1]).tolist() == [1]
        assert spins_to_bits([-1]).tolist() == [0]
        assert bits_to_spins([1]).tolist() == [1]
        assert bits_to_spins([0]).tolist() == [-1]

    def test_roundtrip(self):
        rng = np.random.default_rng(19)
        s = rng.choice([-1, 1], size=50)
        assert np.array_equal(bits_to_spins(spins_to_bits(s)), s)
        x = rng.integers(0, 2, size=50)
        assert np.array_equal(spins_to_bits(bits_to_spins(x)), x)


class TestGraphDensity:
    def test_complete(self):
        edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
        assert graph_density(edges, 5) == 1.0

    def test_empty(self):
        assert graph_density([], 5) == 0.0

    def test_path(self):
        assert graph_density([(0, 1), (1, 2)], 3) == pytest.approx(2 / 3)

    def test_small_n(self):
        assert graph_density([], 1) == 0.0

    def test_relabel_invariance(self):
        rng = np.random.default_rng(23)
        edges = [(0, 1), (1, 4), (2, 3), (0, 4)]
        perm = rng.permutation(5)
        relabeled = [tuple(sorted((perm[i], perm[j]))) for i, j in edges]
        assert graph_density(edges, 5) == graph_density(relabeled, 5)


class TestArgminPreservation:
    def test_conversion_preserves_argmin(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            p = random_ising(rng, n)
            q = ising_to_qubo(p)
            ie = np.array(
                [ising_energy(p, 2 * np.array([(k >> b) & 1 for b in range(n)]) - 1)
                 for k in range(2 ** n)]
            )
            qe = np.array(
                [qubo_energy(q, np.array([(k >> b) & 1 for b in range(n)]))
                 for k in range(2 ** n)]
            )
            assert set(np.flatnonzero(ie <= ie.min() + 1e-9)) == set(
                np.flatnonzero(qe <= qe.min() + 1e-9)
            )

    def test_clamp_at_optimum_preserves_argmin(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n = 5
            p = random_ising(rng, n)
            energies = {tuple(s): ising_energy(p, s) for s in all_spin_states(n)}
            best = min(energies.values())
            optima = {s for s, e in energies.items() if e <= best + 1e-9}
            s_star = sorted(optima)[0]
            c = clamp(p, 0, int(s_star[0]))
            c_energies = {tuple(s): ising_energy(c, s) for s in all_spin_states(n - 1)}
            c_best = min(c_energies.values())
            assert c_best == pytest.approx(best, abs=1e-9)
            c_optima = {(s_star[0],) + s for s, e in c_energies.items() if e <= c_best + 1e-9}
            assert c_optima == {s for s in optima if s[0] == s_star[0]}


class TestQuantization:
    def test_identity_on_grid(self):
        p = IsingProblem(n=2, h=[1.0, -2.0], J={(0, 1): 4.0})
        q = quantize_couplings(p, 4)
        assert q.J == p.J and np.array_equal(q.h, p.h)

    def test_snaps_to_levels(self):
        p = IsingProblem(n=2, h=[0.0, 0.0], J={(0, 1): 1.0})
        q = quantize_couplings(quantize_couplings(p, 7), 7)
        assert q.J == quantize_couplings(p, 7).J
