import numpy as np
import pytest

from src.errors import PermutationError
from src.permutation import (Permutation, apply_permutation, filter_by_length, format_sigma, holdout_split,
                             identity_sigma, invert, load_sigma, permute_corpus, random_sigma, reverse_sigma,
                             sigma_from_name, standard_sigma)


def test_standard_sigma():
    sigma = standard_sigma()
    assert sigma.n == 18
    assert sigma.map[0] == 11
    assert sigma.map[17] == 7
    assert sorted(sigma.map) == list(range(18))
    assert invert(sigma).map[11] == 0


def test_permutation_must_be_bijection():
    with pytest.raises(PermutationError):
        Permutation((0, 0, 1))
    with pytest.raises(PermutationError):
        Permutation((1, 2, 3))
    with pytest.raises(PermutationError):
        Permutation(())


def test_reverse():
    assert reverse_sigma(3).map == (2, 1, 0)
    assert invert(reverse_sigma(7)) == reverse_sigma(7)
    with pytest.raises(PermutationError):
        reverse_sigma(0)


def test_random_sigma_is_seeded():
    assert random_sigma(18, seed=3) == random_sigma(18, seed=3)
    assert sorted(random_sigma(18, seed=3).map) == list(range(18))


def test_apply_definition():
    assert apply_permutation(["a", "b", "c"], Permutation((2, 0, 1))) == ["c", "a", "b"]
    assert apply_permutation(["a", "b"], identity_sigma(2)) == ["a", "b"]


def test_apply_length_mismatch_names_both_lengths():
    with pytest.raises(PermutationError, match="3 tokens.*length 18"):
        apply_permutation(["a", "b", "c"], standard_sigma())


def test_round_trip_on_random_sentences():
    rng = np.random.default_rng(18)
    sigma = standard_sigma()
    inverse = invert(sigma)
    for _ in range(1000):
        tokens = [f"t{v}" for v in rng.integers(0, 50, size=18)]
        permuted = apply_permutation(tokens, sigma)
        assert sorted(permuted) == sorted(tokens)
        assert apply_permutation(permuted, inverse) == tokens


def test_filter_by_length():
    src = ["a b", "a b c d e f g", "c d"]
    tgt = ["x", "y", "z"]
    result = filter_by_length(src, tgt, 2)
    assert result.indices == [0, 2]
    assert result.pairs == [("a b", "x"), ("c d", "z")]
    assert result.histogram == {2: 2, 7: 1}
    assert result.most_common_length == 2


def test_filter_empty_corpus():
    result = filter_by_length([], [], 18)
    assert result.pairs == []
    assert result.histogram == {}
    assert result.most_common_length is None


def test_filter_mismatched_sides():
    with pytest.raises(PermutationError):
        filter_by_length(["a"], [], 1)


def test_permute_corpus_leaves_targets():
    pairs = [("a b c", "x y"), ("d e f", "z")]
    assert permute_corpus(pairs, reverse_sigma(3)) == [("c b a", "x y"), ("f e d", "z")]


def test_holdout_split():
    train, test = holdout_split(50, 10, seed=2)
    assert len(test) == 10
    assert sorted(train + test) == list(range(50))
    assert test == sorted(test)
    assert (train, test) == holdout_split(50, 10, seed=2)
    with pytest.raises(PermutationError):
        holdout_split(5, 6)


def test_sigma_file_round_trip(tmp_path):
    path = tmp_path / "sigma.txt"
    path.write_text(format_sigma(standard_sigma()) + "\n", encoding="utf-8")
    assert load_sigma(path) == standard_sigma()
    path.write_text("0 1 x", encoding="utf-8")
    with pytest.raises(PermutationError):
        load_sigma(path)


def test_sigma_from_name(tmp_path):
    assert sigma_from_name("standard", 18) == standard_sigma()
    assert sigma_from_name("reverse", 4).map == (3, 2, 1, 0)
    assert sigma_from_name("identity", 2).map == (0, 1)
    with pytest.raises(PermutationError, match="length 18"):
        sigma_from_name("standard", 10)
    with pytest.raises(PermutationError):
        sigma_from_name("file", 3)
    with pytest.raises(PermutationError):
        sigma_from_name("shuffle", 3)
