import numpy as np
import pytest

from nestedpolar.gf2 import BitMatrix, BitVector, rank, vec_mat_mul
from nestedpolar.polar import (
    CodeParams,
    PolarCodeSpec,
    bit_reversal_permutation,
    encode,
    generator_matrix,
    polar_transform,
)

from oracles import F, kron_power, naive_vec_mat_mul, reference_generator


def test_code_params_guard():
    assert CodeParams(0).N == 1
    assert CodeParams(10).N == 1024
    with pytest.raises(ValueError):
        CodeParams(21)
    with pytest.raises(ValueError):
        CodeParams(-1)


def test_bit_reversal_small():
    assert np.array_equal(bit_reversal_permutation(1), [0, 1])
    assert np.array_equal(bit_reversal_permutation(2), [0, 2, 1, 3])
    assert np.array_equal(bit_reversal_permutation(3), [0, 4, 2, 6, 1, 5, 3, 7])


def test_bit_reversal_is_involution():
    for n in range(0, 11):
        perm = bit_reversal_permutation(n)
        assert np.array_equal(perm[perm], np.arange(1 << n))


def test_generator_matrix_small():
    assert generator_matrix(0) == BitMatrix([[1]])
    assert generator_matrix(1) == BitMatrix(F)
    assert np.array_equal(generator_matrix(2).entries, kron_power(2)[[0, 2, 1, 3]])


def test_generator_matrix_matches_reference():
    for n in range(0, 7):
        assert np.array_equal(generator_matrix(n).entries, reference_generator(n))


def test_generator_matrix_full_rank():
    for n in range(0, 11):
        assert rank(generator_matrix(n)) == 1 << n


def test_transform_zero_and_hand_case():
    assert polar_transform(BitVector([0, 0, 0, 0])) == BitVector([0, 0, 0, 0])
    assert polar_transform(BitVector([1, 1])) == BitVector([0, 1])


def test_transform_matches_matrix_multiplication():
    rng = np.random.default_rng(2)
    for n in range(0, 7):
        g = generator_matrix(n)
        for _ in range(20):
            u = BitVector(rng.integers(0, 2, 1 << n, dtype=np.uint8))
            assert polar_transform(u) == vec_mat_mul(u, g)


def test_transform_is_involution():
    rng = np.random.default_rng(4)
    for n in range(0, 11):
        u = BitVector(rng.integers(0, 2, 1 << n, dtype=np.uint8))
        assert polar_transform(polar_transform(u)) == u


def test_transform_rejects_bad_length():
    with pytest.raises(ValueError):
        polar_transform(BitVector([1, 0, 1]))


def test_spec_validation():
    params = CodeParams(2)
    spec = PolarCodeSpec(params, [1, 3], {0: 0, 2: 1})
    assert spec.info_len == 2
    assert np.array_equal(spec.frozen_template, [0, 0, 1, 0])
    with pytest.raises(ValueError):
        PolarCodeSpec(params, [3, 1], {0: 0, 2: 0})
    with pytest.raises(ValueError):
        PolarCodeSpec(params, [1, 3], {0: 0})
    with pytest.raises(ValueError):
        PolarCodeSpec(params, [1, 3], {0: 0, 2: 2})
    with pytest.raises(ValueError):
        PolarCodeSpec(params, [1, 4], {0: 0, 2: 0, 3: 0})


def test_encode_all_frozen():
    spec = PolarCodeSpec.zero_frozen(CodeParams(2), [])
    assert encode(spec, BitVector([])) == BitVector([0, 0, 0, 0])


def test_encode_hand_case():
    spec = PolarCodeSpec(CodeParams(1), [1], {0: 0})
    assert encode(spec, BitVector([1])) == BitVector([1, 1])


def test_encode_matches_explicit_submatrices():
    rng = np.random.default_rng(6)
    g = generator_matrix(2).entries
    for _ in range(30):
        k = int(rng.integers(1, 4))
        info = np.sort(rng.choice(4, size=k, replace=False))
        frozen_idx = np.setdiff1d(np.arange(4), info)
        frozen = {int(i): int(rng.integers(0, 2)) for i in frozen_idx}
        spec = PolarCodeSpec(CodeParams(2), info, frozen)
        msg = rng.integers(0, 2, k, dtype=np.uint8)
        u_frozen = np.array([frozen[int(i)] for i in frozen_idx], dtype=np.uint8)
        expected = naive_vec_mat_mul(msg, g[info]) ^ (
            naive_vec_mat_mul(u_frozen, g[frozen_idx]) if frozen_idx.size else 0
        )
        assert np.array_equal(encode(spec, BitVector(msg)).bits, expected)


def test_encode_length_mismatch():
    spec = PolarCodeSpec.zero_frozen(CodeParams(2), [0, 1])
    with pytest.raises(ValueError):
        encode(spec, BitVector([1]))


def test_spec_does_not_freeze_caller_arrays():
    info = np.array([0, 1], dtype=np.int64)
    PolarCodeSpec.zero_frozen(CodeParams(2), info)
    info[0] = 1  # caller's array stays writeable
    assert info[0] == 1
