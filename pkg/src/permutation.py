"""
Corpus Permutations
Fixed-length corpus filtering and deterministic source-side token permutations
(standard fixed permutation, reversal, seeded random) for locality-bias probes.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from .corpus_model import split_tokens
from .errors import PermutationError

logger = logging.getLogger(__name__)

T = TypeVar("T")

# output position i takes input token STANDARD_MAP[i]
STANDARD_MAP = (11, 5, 9, 15, 8, 14, 10, 1, 3, 16, 12, 2, 0, 6, 17, 4, 13, 7)
STANDARD_LENGTH = len(STANDARD_MAP)


@dataclass(frozen=True)
class Permutation:
    """A bijection on positions [0, n)."""
    map: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.map)
        if not values:
            raise PermutationError("permutation must cover at least one position")
        if sorted(values) != list(range(len(values))):
            raise PermutationError(f"not a bijection on [0, {len(values)}): {list(values)}")
        object.__setattr__(self, "map", values)

    @property
    def n(self) -> int:
        return len(self.map)


def identity_sigma(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def standard_sigma() -> Permutation:
    """The fixed 18-position permutation used for the permuted-source corpora."""
    return Permutation(STANDARD_MAP)


def reverse_sigma(n: int) -> Permutation:
    if n < 1:
        raise PermutationError(f"permutation length must be >= 1, got {n}")
    return Permutation(tuple(range(n - 1, -1, -1)))


def random_sigma(n: int, seed: int) -> Permutation:
    if n < 1:
        raise PermutationError(f"permutation length must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return Permutation(tuple(int(v) for v in rng.permutation(n)))


def invert(p: Permutation) -> Permutation:
    inverse = [0] * p.n
    for i, source in enumerate(p.map):
        inverse[source] = i
    return Permutation(tuple(inverse))


def apply_permutation(tokens: Sequence[T], p: Permutation) -> List[T]:
    if len(tokens) != p.n:
        raise PermutationError(f"sequence has {len(tokens)} tokens but permutation has length {p.n}")
    return [tokens[source] for source in p.map]


def format_sigma(p: Permutation) -> str:
    """Space-separated map, the format load_sigma reads back."""
    return " ".join(str(v) for v in p.map)


def load_sigma(path: Union[str, Path]) -> Permutation:
    """Read a permutation written as space-separated integers (any whitespace)."""
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        values = [int(v) for v in text.split()]
    except ValueError as e:
        raise PermutationError(f"{path}: permutation file must hold integers only ({e})") from e
    return Permutation(tuple(values))


def sigma_from_name(name: str, length: int, seed: int = 0,
                    sigma_file: Optional[Union[str, Path]] = None) -> Permutation:
    """Resolve a CLI sigma choice: standard, reverse, random, identity or file."""
    if name == "standard":
        sigma = standard_sigma()
    elif name == "reverse":
        sigma = reverse_sigma(length)
    elif name == "random":
        sigma = random_sigma(length, seed)
    elif name == "identity":
        sigma = identity_sigma(length)
    elif name == "file":
        if sigma_file is None:
            raise PermutationError("sigma 'file' needs a permutation file")
        sigma = load_sigma(sigma_file)
    else:
        raise PermutationError(f"unknown sigma '{name}'")
    if sigma.n != length:
        raise PermutationError(f"sigma '{name}' has length {sigma.n}, corpus length is {length}")
    return sigma


@dataclass
class LengthFilterResult:
    """Pairs whose source has exactly `length` tokens, in corpus order."""
    length: int
    indices: List[int] = field(default_factory=list)
    pairs: List[Tuple[str, str]] = field(default_factory=list)
    histogram: Dict[int, int] = field(default_factory=dict)

    @property
    def most_common_length(self) -> Optional[int]:
        """Most frequent source length; ties go to the shorter length."""
        if not self.histogram:
            return None
        return min(self.histogram, key=lambda k: (-self.histogram[k], k))


def filter_by_length(src_lines: Sequence[str], tgt_lines: Sequence[str], length: int) -> LengthFilterResult:
    if len(src_lines) != len(tgt_lines):
        raise PermutationError(f"source/target line counts differ: {len(src_lines)} vs {len(tgt_lines)}")
    result = LengthFilterResult(length=length)
    counts: Counter = Counter()
    for index, (src, tgt) in enumerate(zip(src_lines, tgt_lines)):
        n = len(split_tokens(src))
        counts[n] += 1
        if n == length:
            result.indices.append(index)
            result.pairs.append((src, tgt))
    result.histogram = dict(sorted(counts.items()))
    logger.info(f"Length filter L={length}: kept {len(result.pairs)} of {len(src_lines)} pairs")
    return result


def holdout_split(n_items: int, n_test: int, seed: int = 0) -> Tuple[List[int], List[int]]:
    """Seeded split of range(n_items) into (train, test) index lists, both ascending."""
    if n_test < 0 or n_test > n_items:
        raise PermutationError(f"cannot hold out {n_test} of {n_items} items")
    rng = np.random.default_rng(seed)
    test = sorted(int(i) for i in rng.choice(n_items, size=n_test, replace=False))
    held = set(test)
    train = [i for i in range(n_items) if i not in held]
    return train, test


def permute_corpus(pairs: Sequence[Tuple[str, str]], p: Permutation) -> List[Tuple[str, str]]:
    """Permute source tokens of every pair; targets pass through untouched."""
    permuted = []
    for src, tgt in pairs:
        permuted.append((" ".join(apply_permutation(split_tokens(src), p)), tgt))
    return permuted
