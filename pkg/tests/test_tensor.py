import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sym_tensor
from tpm.errors import (
    CapExceeded,
    DimensionMismatch,
    EmptyDecomposition,
    InvalidArgs,
)
from tpm.tensor import (
    contract_mat,
    contract_vec,
    dense_contract_vec,
    dense_symmetry_defect,
    eigen_residual,
    frobenius_norm,
    make_sym_tensor,
    tensor_from_json,
    tensor_to_json,
    to_dense,
)

S3 = np.sqrt(3.0) / 2.0
MB_V = np.array([[0.0, S3, -S3], [1.0, -0.5, -0.5]])


def mb_tensor(d):
    return make_sym_tensor(MB_V, np.ones(3), d)


class TestConstruction:
    def test_mb_three_terms(self):
        T = mb_tensor(3)
        assert T.r == 3 and T.n == 2 and T.d == 3
        assert np.allclose(np.linalg.norm(T.V, axis=0), 1.0, atol=1e-12)

    def test_odd_order_cancellation(self):
        v = np.array([0.6, 0.8])
        with pytest.raises(EmptyDecomposition):
            make_sym_tensor(np.column_stack([v, -v]), [1.0, 1.0], 3)

    def test_colinear_merge(self):
        v = np.array([0.6, 0.8])
        T = make_sym_tensor(np.column_stack([v, v]), [1.0, 2.0], 4)
        assert T.r == 1
        assert np.isclose(T.lambdas[0], 3.0)

    def test_negated_column_even_order_merges(self):
        v = np.array([1.0, 0.0])
        T = make_sym_tensor(np.column_stack([v, -v]), [1.0, 1.0], 4)
        assert T.r == 1 and np.isclose(T.lambdas[0], 2.0)

    def test_norm_absorbed_into_lambda(self):
        v = np.array([0.0, 2.0])
        T = make_sym_tensor(v[:, None], [1.0], 3)
        assert np.isclose(T.lambdas[0], 8.0)
        assert np.allclose(T.V[:, 0], [0.0, 1.0])

    def test_zero_column_rejected(self):
        with pytest.raises(InvalidArgs):
            make_sym_tensor(np.zeros((2, 1)), [1.0], 3)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            make_sym_tensor(MB_V, [1.0, 1.0], 3)

    def test_bad_order(self):
        with pytest.raises(InvalidArgs):
            make_sym_tensor(MB_V, np.ones(3), 1)

    def test_immutability(self):
        T = mb_tensor(3)
        with pytest.raises(ValueError):
            T.V[0, 0] = 5.0


class TestContractions:
    def test_mb_d3_frame_vector(self):
        T = mb_tensor(3)
        y = contract_vec(T, np.array([0.0, 1.0]))
        assert np.allclose(y, [0.0, 0.75], atol=1e-14)

    def test_mb_d5_frame_vector(self):
        T = mb_tensor(5)
        y = contract_vec(T, np.array([0.0, 1.0]))
        assert np.allclose(y, [0.0, 15.0 / 16.0], atol=1e-14)

    def test_zero_input(self):
        T = mb_tensor(4)
        assert np.allclose(contract_vec(T, np.zeros(2)), 0.0)

    def test_dimension_check(self):
        with pytest.raises(DimensionMismatch):
            contract_vec(mb_tensor(3), np.ones(3))

    def test_contract_mat_d3(self, mb_cols):
        # rank-one expansion oracle: v1 v1^T - (v2 v2^T + v3 v3^T)/2
        v1, v2, v3 = mb_cols
        oracle = np.outer(v1, v1) - 0.5 * (np.outer(v2, v2) + np.outer(v3, v3))
        M = contract_mat(mb_tensor(3), v1)
        assert np.allclose(M, oracle, atol=1e-14)
        assert np.allclose(M, np.diag([-0.75, 0.75]), atol=1e-12)

    def test_contract_mat_d5(self, mb_cols):
        v1, v2, v3 = mb_cols
        oracle = np.outer(v1, v1) - 0.125 * (np.outer(v2, v2) + np.outer(v3, v3))
        M = contract_mat(mb_tensor(5), v1)
        assert np.allclose(M, oracle, atol=1e-14)
        assert np.allclose(M, np.diag([-3.0 / 16.0, 15.0 / 16.0]), atol=1e-12)

    def test_contract_mat_d2_constant(self):
        T = mb_tensor(2)
        rng = np.random.default_rng(0)
        M1 = contract_mat(T, rng.normal(size=2))
        M2 = contract_mat(T, rng.normal(size=2))
        assert np.allclose(M1, M2, atol=1e-14)

    def test_contract_mat_symmetric(self):
        rng = np.random.default_rng(1)
        T = random_sym_tensor(rng, n=3, d=4, r=4)
        M = contract_mat(T, rng.normal(size=3))
        assert np.max(np.abs(M - M.T)) <= 1e-12


class TestDense:
    def test_mb_d3_corner_entry(self):
        D = to_dense(mb_tensor(3))
        # 1*1^3 + (-1/2)^3 + (-1/2)^3, summed by hand
        assert np.isclose(D.entries[1, 1, 1], 1.0 + 2.0 * (-0.5) ** 3)

    def test_single_term(self):
        T = make_sym_tensor(np.array([[1.0], [0.0]]), [1.0], 3)
        D = to_dense(T)
        assert D.entries[0, 0, 0] == 1.0
        assert np.sum(np.abs(D.entries)) == 1.0

    def test_dense_contraction_matches(self):
        T = mb_tensor(3)
        v1 = np.array([0.0, 1.0])
        assert np.allclose(dense_contract_vec(to_dense(T), v1), contract_vec(T, v1), atol=1e-14)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            to_dense(mb_tensor(30))

    def test_symmetry_invariant(self):
        rng = np.random.default_rng(2)
        T = random_sym_tensor(rng, n=3, d=4, r=3)
        assert dense_symmetry_defect(to_dense(T)) <= 1e-12


class TestOracleEquivalence:
    def test_50_random_tensors(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(1, 5))
            d = int(rng.integers(2, 6))
            r = int(rng.integers(1, 7))
            T = random_sym_tensor(rng, n=n, d=d, r=r)
            D = to_dense(T)
            x = rng.normal(size=n)
            yd = dense_contract_vec(D, x)
            y = contract_vec(T, x)
            scale = max(1.0, np.linalg.norm(yd))
            assert np.linalg.norm(y - yd) <= 1e-11 * scale
            # matrix contraction against dense: contract d-2 modes
            Md = D.entries
            for _ in range(d - 2):
                Md = np.tensordot(x, Md, axes=([0], [0]))
            M = contract_mat(T, x)
            assert np.linalg.norm(M - Md) <= 1e-11 * max(1.0, np.linalg.norm(Md))


class TestProperties:
    @settings(max_examples=50, deadline=None)
    @given(c=st.floats(-3.0, 3.0), seed=st.integers(0, 2**31))
    def test_homogeneity(self, c, seed):
        rng = np.random.default_rng(seed)
        T = random_sym_tensor(rng, n=3, r=3)
        x = rng.normal(size=3)
        lhs = contract_vec(T, c * x)
        rhs = c ** (T.d - 1) * contract_vec(T, x)
        assert np.allclose(lhs, rhs, atol=1e-9 * max(1.0, np.max(np.abs(rhs))))

    def test_mat_times_x_equals_vec(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            T = random_sym_tensor(rng)
            x = rng.normal(size=T.n)
            assert np.allclose(contract_mat(T, x) @ x, contract_vec(T, x), atol=1e-12 * max(1.0, frobenius_norm(T)))

    def test_rayleigh_consistency(self):
        T = mb_tensor(5)
        v = np.array([0.0, 1.0])
        mu, res = eigen_residual(T, v)
        assert res <= 1e-12
        assert abs(np.linalg.norm(contract_vec(T, v)) - abs(mu)) <= 1e-10


class TestEigenResidual:
    def test_mb_d4_e1(self):
        mu, res = eigen_residual(mb_tensor(4), np.array([1.0, 0.0]))
        assert np.isclose(mu, 9.0 / 8.0, atol=1e-14)
        assert res <= 1e-14

    def test_mb_d5_e1_not_eigenvector(self):
        _, res = eigen_residual(mb_tensor(5), np.array([1.0, 0.0]))
        assert res > 0.1

    def test_exact_eigenvector_zero_residual(self):
        T = make_sym_tensor(np.eye(3), [2.0, 1.0, 1.0], 4)
        mu, res = eigen_residual(T, np.array([1.0, 0.0, 0.0]))
        assert mu == 2.0 and res == 0.0


class TestJson:
    def test_round_trip_bit_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            T = random_sym_tensor(rng)
            T2 = tensor_from_json(tensor_to_json(T))
            assert T2.d == T.d
            assert np.array_equal(T2.V, T.V)
            assert np.array_equal(T2.lambdas, T.lambdas)

    def test_schema_fields(self):
        doc = json.loads(tensor_to_json(mb_tensor(3)))
        assert set(doc) == {"n", "r", "d", "lambdas", "V"}
        assert doc["n"] == 2 and doc["r"] == 3 and doc["d"] == 3
        assert len(doc["V"]) == 3 and len(doc["V"][0]) == 2  # column-major

    def test_malformed_rejected(self):
        with pytest.raises(InvalidArgs):
            tensor_from_json("{}")
        with pytest.raises(InvalidArgs):
            tensor_from_json(json.dumps({"n": 2, "r": 1, "d": 3, "lambdas": [1.0], "V": [[3.0, 4.0]]}))
