import random

import pytest

from cluster_friezes.errors import BudgetExceeded, DimensionMismatch
from cluster_friezes.laurent import IntLaurentPoly as P, RationalFunction as RF
from cluster_friezes.mutation import (
    MutationMatrix,
    canonical_address,
    enumerate_exchange_graph,
    extract_gcf,
    find_skew_symmetrizer,
    gcf_from_principal,
    is_cluster_monomial,
    is_global_Y_monomial,
    mat_mul,
    mutate_A_seed,
    mutate_matrix,
    mutate_matrix_raw,
    mutate_Y_seed,
    principal_pattern_at,
    reduce_word,
    seed_at,
    separation_check,
)
from cluster_friezes.tropical import reexpress_A

B_A2 = ((0, -1), (1, 0))
B_A3 = ((0, -1, 0), (1, 0, -1), (0, 1, 0))
B_B2 = ((0, -1), (2, 0))


def rf(i, n=2):
    return RF.variable(i, n)


def rand_mutation_matrix(rng, r=3):
    while True:
        rows = [[0] * r for _ in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                v = rng.randint(-2, 2)
                rows[i][j] = v
                rows[j][i] = -v
        if find_skew_symmetrizer(tuple(map(tuple, rows))) is not None:
            return tuple(map(tuple, rows))


class TestMatrixMutation:
    def test_rank2_sign_flip(self):
        assert mutate_matrix(MutationMatrix(B_A2), 1).entries == ((0, 1), (-1, 0))

    def test_involution_random(self):
        rng = random.Random(2)
        for _ in range(40):
            b = rand_mutation_matrix(rng)
            k = rng.randint(1, 3)
            assert mutate_matrix_raw(mutate_matrix_raw(b, k), k) == b

    def test_a3_direction_one(self):
        assert mutate_matrix_raw(B_A3, 1) == ((0, 1, 0), (-1, 0, -1), (0, 1, 0))

    def test_direction_out_of_range(self):
        with pytest.raises(DimensionMismatch):
            mutate_matrix(MutationMatrix(B_A2), 3)

    def test_skew_symmetrizability_preserved(self):
        rng = random.Random(9)
        for _ in range(20):
            b = MutationMatrix(rand_mutation_matrix(rng))
            k = rng.randint(1, 3)
            assert b.mutate(k).skew_symmetrizer == b.skew_symmetrizer


class TestAddresses:
    def test_root(self):
        assert canonical_address(1, 0, 3) == ()

    def test_positive_belt(self):
        assert canonical_address(3, 0, 3) == (1, 2)
        assert canonical_address(1, 1, 3) == (1, 2, 3)

    def test_negative_belt(self):
        assert canonical_address(3, -1, 3) == (3,)
        assert canonical_address(1, -1, 3) == (3, 2, 1)
        assert canonical_address(2, -2, 3) == (3, 2, 1, 3, 2)

    def test_rank_one_reduces(self):
        assert canonical_address(1, 2, 1) == ()
        assert canonical_address(1, 3, 1) == (1,)

    def test_word_reduction(self):
        assert reduce_word((1, 1)) == ()
        assert reduce_word((1, 2, 2, 1, 3)) == (3,)


class TestSeedMutation:
    def test_a_mutation_rank2(self):
        seed = mutate_A_seed(seed_at("A", B_A2, ()), 1)
        assert seed.cluster[0] == (RF.one(2) + rf(2)) / rf(1)
        assert seed.cluster[1] == rf(2)

    def test_a_involution(self):
        root = seed_at("A", B_A2, ())
        assert mutate_A_seed(mutate_A_seed(root, 1), 1) == root

    def test_a2_five_variables(self):
        graph = enumerate_exchange_graph("A", B_A2, 100)
        one = RF.one(2)
        expected = {
            rf(1),
            rf(2),
            (one + rf(2)) / rf(1),
            (one + rf(1) + rf(2)) / (rf(1) * rf(2)),
            (one + rf(1)) / rf(2),
        }
        assert set(graph.cluster_variables()) == expected

    def test_y_mutation_chain(self):
        y1, y2, one = rf(1), rf(2), RF.one(2)
        s = seed_at("Y", B_A2, (1,))
        assert s.cluster == (y1**-1, y2 * (one + y1))
        s = seed_at("Y", B_A2, (1, 2))
        assert s.cluster == ((one + y2 + y1 * y2) / y1, (y2 * (one + y1)) ** -1)
        s = seed_at("Y", B_A2, (1, 2, 1, 2, 1))
        assert s.cluster == (y2, y1)

    def test_y_involution(self):
        root = seed_at("Y", B_B2, ())
        assert mutate_Y_seed(mutate_Y_seed(root, 2), 2) == root

    def test_seed_at_reduced_word(self):
        assert seed_at("A", B_A2, (1, 1)) == seed_at("A", B_A2, ())

    def test_seed_at_matrix(self):
        s = seed_at("Y", B_A2, (1,))
        assert s.matrix == ((0, 1), (-1, 0))

    def test_path_independence_unordered(self):
        far = seed_at("A", B_A2, (1, 2, 1, 2, 1))
        root = seed_at("A", B_A2, ())
        assert far.unordered_key() == root.unordered_key()
        assert far.address != root.address


class TestPrincipalCoefficients:
    def test_root_identity(self):
        data = extract_gcf(B_A2, ())
        ident = ((1, 0), (0, 1))
        assert data.gmatrix == ident and data.cmatrix == ident
        assert all(f.is_one() for f in data.fpolys)

    def test_a2_fpolys(self):
        data = extract_gcf(B_A2, (1,))
        assert data.fpolys[0] == P.one(2) + P.variable(1, 2)
        data = extract_gcf(B_A2, (1, 2))
        p1, p2 = P.variable(1, 2), P.variable(2, 2)
        assert data.fpolys[1] == P.one(2) + p2 + p1 * p2

    def test_recurrence_matches_principal_seed(self):
        rng = random.Random(4)
        for b0 in (B_A2, B_B2, B_A3):
            r = len(b0)
            for _ in range(12):
                addr = reduce_word(tuple(rng.randint(1, r) for _ in range(5)))
                fast = extract_gcf(b0, addr)
                slow = gcf_from_principal(b0, addr)
                assert fast.gmatrix == slow.gmatrix
                assert fast.cmatrix == slow.cmatrix
                assert fast.fpolys == slow.fpolys

    def test_g_b_equals_b_c(self):
        rng = random.Random(8)
        for b0 in (B_A2, B_A3):
            r = len(b0)
            for _ in range(15):
                addr = reduce_word(tuple(rng.randint(1, r) for _ in range(6)))
                from cluster_friezes.mutation import gcf_pattern

                bt, g, c, _ = gcf_pattern(b0).at(addr)
                assert mat_mul(g, bt) == mat_mul(b0, c)

    def test_fpoly_shape(self):
        rng = random.Random(21)
        for _ in range(15):
            addr = reduce_word(tuple(rng.randint(1, 3) for _ in range(6)))
            data = extract_gcf(B_A3, addr)
            for f in data.fpolys:
                assert f.constant_coeff() == 1
                assert f.coefficients_nonnegative()

    def test_principal_seed_frozen_variables(self):
        seed = principal_pattern_at(B_A2, (1, 2, 1))
        assert seed.frozen == (RF.variable(3, 4), RF.variable(4, 4))


class TestSeparation:
    def test_root(self):
        assert separation_check(B_A2, ())

    def test_depth_six_rank2(self):
        for addr in [(1,), (2,), (1, 2), (2, 1), (1, 2, 1), (2, 1, 2),
                     (1, 2, 1, 2), (2, 1, 2, 1), (1, 2, 1, 2, 1),
                     (2, 1, 2, 1, 2), (1, 2, 1, 2, 1, 2)]:
            assert separation_check(B_A2, addr)

    def test_b2_whole_graph(self):
        graph = enumerate_exchange_graph("Y", B_B2, 100)
        assert all(separation_check(B_B2, s.address) for s in graph.seeds.values())


class TestGlobalMonomials:
    def test_cluster_monomial_criterion(self):
        assert is_cluster_monomial(B_A2, (), (0, 0))
        assert is_cluster_monomial(B_A2, (), (2, 1))
        assert not is_cluster_monomial(B_A2, (), (-1, 0))

    def test_global_y_monomial(self):
        assert is_global_Y_monomial(B_A2, (), (0, 0))
        assert is_global_Y_monomial(B_A2, (), (1, 0))
        assert not is_global_Y_monomial(B_A2, (), (0, 1))


class TestExchangeGraph:
    def test_a2_counts(self):
        graph = enumerate_exchange_graph("A", B_A2, 100)
        assert len(graph.seeds) == 5
        assert len(graph.cluster_variables()) == 5

    def test_a2_y_variables(self):
        graph = enumerate_exchange_graph("Y", B_A2, 100)
        assert len(graph.cluster_variables()) == 10

    def test_budget_exceeded_affine(self):
        with pytest.raises(BudgetExceeded):
            enumerate_exchange_graph("A", ((0, -2), (2, 0)), 20)

    def test_laurent_positivity(self):
        # every variable, re-expanded in every chart, is a nonnegative
        # Laurent polynomial
        from cluster_friezes.mutation import seed_pattern

        for b0 in (B_A2, B_B2):
            graph = enumerate_exchange_graph("A", b0, 100)
            pattern = seed_pattern("A", b0)
            addresses = sorted(graph.addresses, key=len)
            for var in graph.cluster_variables():
                for target in addresses:
                    expr = var
                    for pos, k in enumerate(target):
                        expr = reexpress_A(expr, pattern, target[:pos], k)
                    assert expr.is_laurent()
                    assert expr.num.coefficients_nonnegative()
