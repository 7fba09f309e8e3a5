import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alcc_lab import dft_code
from alcc_lab.codec import (
    FUNCTIONS,
    GRAM,
    IDENTITY,
    DatasetBatch,
    EncodingParams,
    InsufficientEvaluationsError,
    MetricError,
    assign_shares,
    db,
    encode_shares,
    lagrange_basis,
    make_batch,
    reconstruct,
    relative_error,
)
from alcc_lab.numeric import ParameterError


def small_params(**overrides):
    defaults = dict(n_workers=7, k=2, t=0, degree=2, beta=1.5, sigma_pad=1.0)
    defaults.update(overrides)
    return EncodingParams(**defaults)


class TestParams:
    def test_paper_scale_dimension(self):
        params = EncodingParams(n_workers=31, k=5, t=3, degree=2,
                                beta=1.5, sigma_pad=1e6)
        assert params.code_dimension == 15

    def test_dimension_bound_enforced(self):
        with pytest.raises(ParameterError):
            EncodingParams(n_workers=5, k=5, t=3, degree=2)

    def test_mapping_must_be_permutation(self):
        with pytest.raises(ParameterError):
            EncodingParams(n_workers=7, k=2, t=0, degree=2, mapping=(0, 0, 1, 2, 3, 4, 5))


class TestLagrangeBasis:
    def test_single_node_is_one(self):
        params = EncodingParams(n_workers=3, k=1, t=0, degree=1)
        assert np.allclose(lagrange_basis(params, 0.3 + 4j), [1.0])

    def test_indicator_at_nodes(self):
        params = small_params()
        for r, node in enumerate(params.encoding_nodes):
            basis = lagrange_basis(params, node)
            expected = np.zeros(params.nodes)
            expected[r] = 1.0
            assert np.abs(basis - expected).max() <= 1e-9

    def test_two_node_hand_value(self):
        # nodes at +1 and -1: l_1(0) = (0 - (-1)) / (1 - (-1)) = 0.5
        params = EncodingParams(n_workers=3, k=2, t=0, degree=1, beta=1.0)
        assert np.isclose(lagrange_basis(params, 0.0)[0], 0.5)

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=50, deadline=None)
    def test_partition_of_unity(self, seed):
        params = EncodingParams(n_workers=31, k=5, t=3, degree=2)
        rng = np.random.default_rng(seed)
        radius = 2 * params.beta * np.sqrt(rng.uniform())
        z = radius * np.exp(2j * np.pi * rng.uniform())
        assert abs(lagrange_basis(params, z).sum() - 1.0) <= 1e-9


class TestEncodeShares:
    def test_single_block_constant_polynomial(self):
        params = EncodingParams(n_workers=5, k=1, t=0, degree=1)
        rng = np.random.default_rng(0)
        batch = make_batch(params, rng.standard_normal((1, 3, 2)), rng)
        shares = encode_shares(batch, params)
        for share in shares.values:
            assert np.allclose(share, batch.blocks[0], atol=1e-12)

    def test_reinterpolation_recovers_blocks(self):
        params = EncodingParams(n_workers=9, k=3, t=1, degree=2, sigma_pad=1.0)
        rng = np.random.default_rng(1)
        batch = make_batch(params, rng.standard_normal((3, 4, 2)), rng)
        shares = encode_shares(batch, params)
        # fit the encoding polynomial from its N evaluations, read it at the nodes
        vand = params.eval_points[:, None] ** np.arange(params.nodes)
        flat = shares.values.reshape(params.n_workers, -1)
        coeffs = np.linalg.lstsq(vand, flat, rcond=None)[0]
        for r in range(params.k):
            z = params.encoding_nodes[r]
            rec = sum(coeffs[j] * z**j for j in range(params.nodes))
            rel = np.linalg.norm(rec.reshape(4, 2) - batch.blocks[r])
            assert rel <= 1e-6 * max(1.0, np.linalg.norm(batch.blocks[r]))

    def test_paper_setting_runs(self):
        params = EncodingParams(n_workers=31, k=5, t=3, degree=2,
                                beta=1.5, sigma_pad=1e6)
        rng = np.random.default_rng(2)
        batch = make_batch(params, rng.standard_normal((5, 20, 5)), rng)
        shares = encode_shares(batch, params)
        assert shares.values.shape == (31, 20, 5)
        assert params.code_dimension == 15

    def test_padding_scale(self):
        params = EncodingParams(n_workers=31, k=5, t=3, degree=2, sigma_pad=1e3)
        rng = np.random.default_rng(3)
        batch = make_batch(params, rng.standard_normal((5, 50, 40)), rng)
        observed = np.sqrt(np.mean(np.abs(batch.padding) ** 2))
        assert np.isclose(observed, 1e3 / np.sqrt(3), rtol=0.05)


class TestAssignShares:
    def _shares(self):
        params = small_params()
        rng = np.random.default_rng(4)
        batch = make_batch(params, rng.standard_normal((2, 2, 2)), rng)
        return encode_shares(batch, params)

    def test_identity_default(self):
        assert assign_shares(self._shares()).tolist() == list(range(7))

    def test_reverse(self):
        mapping = tuple(reversed(range(7)))
        assert assign_shares(self._shares(), mapping).tolist() == list(mapping)

    def test_non_bijective_rejected(self):
        with pytest.raises(ParameterError):
            assign_shares(self._shares(), (0, 0, 1, 2, 3, 4, 5))


class TestReconstruct:
    @pytest.mark.parametrize("n,k,t", [(7, 2, 1), (9, 3, 1), (12, 4, 0), (31, 5, 3)])
    def test_identity_function_round_trip(self, n, k, t):
        params = EncodingParams(n_workers=n, k=k, t=t, degree=1, sigma_pad=1.0)
        rng = np.random.default_rng(5)
        batch = make_batch(params, rng.standard_normal((k, 3, 2)), rng)
        shares = encode_shares(batch, params)
        estimate = reconstruct(IDENTITY.apply(shares.values), params)
        assert relative_error(batch.blocks, estimate) <= 1e-8

    def test_gram_function_matches_direct_oracle(self):
        params = small_params()  # k=2, t=0, degree=2, N=7, K=3
        rng = np.random.default_rng(6)
        blocks = rng.standard_normal((2, 4, 3))
        batch = make_batch(params, blocks, rng)
        shares = encode_shares(batch, params)
        estimate = reconstruct(GRAM.apply(shares.values), params)
        oracle = GRAM.apply(blocks)
        assert relative_error(oracle, estimate) <= 1e-6

    def test_subset_path_matches_full_path(self):
        params = EncodingParams(n_workers=9, k=2, t=1, degree=2, sigma_pad=1.0)
        rng = np.random.default_rng(7)
        batch = make_batch(params, rng.standard_normal((2, 3, 3)), rng)
        returns = GRAM.apply(encode_shares(batch, params).values)
        full = reconstruct(returns, params)
        keep = np.array([0, 1, 2, 4, 5, 6, 8])  # 7 >= K = 7
        subset = reconstruct(returns[keep], params, eval_indices=keep)
        assert relative_error(full, subset) <= 1e-6

    def test_uncorrected_errors_degrade_at_least_20db(self):
        params = EncodingParams(n_workers=31, k=5, t=3, degree=2, sigma_pad=1.0)
        rng = np.random.default_rng(8)
        clean_errs, noisy_errs = [], []
        for _ in range(10):
            blocks = rng.standard_normal((5, 20, 5))
            batch = make_batch(params, blocks, rng)
            returns = GRAM.apply(encode_shares(batch, params).values)
            oracle = GRAM.apply(blocks)
            clean_errs.append(relative_error(oracle, reconstruct(returns, params)))
            corrupted = returns.copy()
            for q in rng.choice(31, size=2, replace=False):
                corrupted[q] += 10 + np.sqrt(1e3 / 2) * (
                    rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
                )
            noisy_errs.append(relative_error(oracle, reconstruct(corrupted, params)))
        gap_db = db(np.mean(noisy_errs)) - db(np.mean(clean_errs))
        assert gap_db >= 20.0

    def test_insufficient_evaluations_rejected(self):
        params = small_params()
        with pytest.raises(InsufficientEvaluationsError):
            reconstruct(np.zeros((2, 3, 3)), params, eval_indices=[0, 1])


class TestCodewordStructure:
    def test_returned_rows_have_zero_syndrome(self):
        # worker outputs, entry by entry, are codewords of the (N, K) code
        params = EncodingParams(n_workers=31, k=5, t=3, degree=2, sigma_pad=1e6)
        rng = np.random.default_rng(9)
        batch = make_batch(params, rng.standard_normal((5, 20, 5)), rng)
        returns = GRAM.apply(encode_shares(batch, params).values)
        code = dft_code.build_code(31, params.code_dimension)
        rows = returns.reshape(31, -1).T
        syn = dft_code.syndrome(code, rows)
        assert np.linalg.norm(syn) <= 1e-6 * np.linalg.norm(rows)

    def test_reconstruction_permutation_equivariant(self):
        params = EncodingParams(n_workers=9, k=2, t=1, degree=2, sigma_pad=1.0)
        rng = np.random.default_rng(10)
        batch = make_batch(params, rng.standard_normal((2, 3, 3)), rng)
        returns = GRAM.apply(encode_shares(batch, params).values)
        direct = reconstruct(returns, params)
        mapping = np.array([3, 1, 4, 0, 8, 2, 7, 5, 6])
        # worker mapping[i] holds evaluation i; invert before decoding
        per_worker = np.empty_like(returns)
        per_worker[mapping] = returns
        recovered = per_worker[mapping]
        assert np.array_equal(reconstruct(recovered, params), direct)


class TestRelativeError:
    def test_exact_match_is_zero(self):
        y = np.ones((2, 2))
        assert relative_error(y, y) == 0.0

    def test_double_is_one(self):
        y = np.ones((3, 2))
        assert np.isclose(relative_error(y, 2 * y), 1.0)

    def test_hand_value(self):
        assert np.isclose(relative_error(np.array([[3.0, 4.0]]), np.zeros((1, 2))), 1.0)

    def test_zero_reference_rejected(self):
        with pytest.raises(MetricError):
            relative_error(np.zeros((2, 2)), np.ones((2, 2)))

    def test_db_convention(self):
        assert np.isclose(db(0.1), -20.0)


def test_function_registry():
    assert set(FUNCTIONS) == {"gram", "identity"}
    assert FUNCTIONS["gram"].degree == 2
