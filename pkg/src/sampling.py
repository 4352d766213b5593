"""
Control Corpus Sampling
Length-matched and size-matched random control corpora for challenge sets,
the length/score correlation check, and seeded selections (test-set caps,
manual validation samples).

Every corpus draws from its own generator seeded with seed ^ corpus_index, so
results do not depend on the order or the number of threads that produce them.
"""

import logging
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .corpus_model import BitextRecord, ChallengeInstance, ChallengeSet
from .errors import SamplingError
from .metrics import pearson

logger = logging.getLogger(__name__)

GENERATOR_NAME = "numpy.random.PCG64"
REJECTION_ATTEMPTS = 32


def corpus_rng(seed: int, corpus_index: int) -> np.random.Generator:
    """Generator for one corpus, independent of every other corpus."""
    return np.random.default_rng(seed ^ corpus_index)


@dataclass
class SampleReport:
    """Where a challenge-set score falls among control-corpus scores."""
    seed: int
    n_corpora: int
    sample_scores: List[float]
    challenge_score: float
    rank: int            # samples scoring <= the challenge set
    empirical_p: float
    generator: str = GENERATOR_NAME
    correlation: str = "pearson"
    extra: Dict = field(default_factory=dict)

    @property
    def below_all(self) -> bool:
        return self.rank == 0

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["below_all"] = self.below_all
        return data


class _LengthIndex:
    """Record ids sorted by source length, for window lookups."""

    def __init__(self, pool: Sequence[BitextRecord]):
        ordered = sorted(pool, key=lambda r: (r.src_len, r.record_id))
        self.lengths = [r.src_len for r in ordered]
        self.ids = [r.record_id for r in ordered]

    def window(self, length: int, tol: int) -> List[int]:
        lo = bisect_left(self.lengths, length - tol)
        hi = bisect_right(self.lengths, length + tol)
        return self.ids[lo:hi]


def length_matched_corpora(challenge: ChallengeSet,
                           pool: Sequence[BitextRecord],
                           n_corpora: int = 100,
                           tol: int = 1,
                           seed: int = 0,
                           records: Optional[Sequence[BitextRecord]] = None,
                           workers: int = 1) -> List[List[int]]:
    """
    Draw corpora whose length distribution matches a challenge set.

    Sentence i of every corpus is drawn uniformly from pool records whose source
    length is within tol of challenge sentence i. Within one corpus records are
    not repeated while candidates remain; when a window runs dry it falls back to
    drawing with replacement and logs a warning.

    Args:
        challenge: the challenge set to match
        pool: population to sample from
        n_corpora: number of control corpora
        tol: allowed length difference
        seed: base seed
        records: where to look up challenge sentence lengths (defaults to pool)
        workers: sampling threads; the result does not depend on it

    Returns:
        n_corpora lists of record ids, aligned with challenge.record_ids
    """
    lookup = {r.record_id: r for r in (records if records is not None else pool)}
    missing = [rid for rid in challenge.record_ids if rid not in lookup]
    if missing:
        raise SamplingError(f"challenge records {missing[:5]} not found for length lookup")
    challenge_lengths = [lookup[rid].src_len for rid in challenge.record_ids]

    index = _LengthIndex(pool)
    windows: Dict[int, List[int]] = {}
    for length in sorted(set(challenge_lengths)):
        candidates = index.window(length, tol)
        if not candidates:
            raise SamplingError(f"no pool sentence within ±{tol} of length {length}")
        windows[length] = candidates

    def draw(corpus_index: int) -> List[int]:
        rng = corpus_rng(seed, corpus_index)
        used = set()
        corpus = []
        for length in challenge_lengths:
            candidates = windows[length]
            choice = None
            for _ in range(REJECTION_ATTEMPTS):
                candidate = candidates[int(rng.integers(len(candidates)))]
                if candidate not in used:
                    choice = candidate
                    break
            if choice is None:
                available = [c for c in candidates if c not in used]
                if available:
                    choice = available[int(rng.integers(len(available)))]
                else:
                    logger.warning(f"Corpus {corpus_index}: length window {length}±{tol} exhausted, "
                                   f"sampling with replacement")
                    choice = candidates[int(rng.integers(len(candidates)))]
            used.add(choice)
            corpus.append(choice)
        return corpus

    return _map_corpora(draw, n_corpora, workers)


def random_corpora(pool: Sequence[BitextRecord], size: int, n: int = 1000, seed: int = 0,
                   workers: int = 1) -> List[List[int]]:
    """n uniform samples of `size` distinct records each."""
    if size > len(pool):
        raise SamplingError(f"sample size {size} exceeds pool size {len(pool)}")
    ids = np.array(sorted(r.record_id for r in pool), dtype=np.int64)

    def draw(corpus_index: int) -> List[int]:
        rng = corpus_rng(seed, corpus_index)
        return [int(i) for i in rng.choice(ids, size=size, replace=False)]

    return _map_corpora(draw, n, workers)


def _map_corpora(draw: Callable[[int], List[int]], n: int, workers: int) -> List[List[int]]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(draw, range(n)))
    return [draw(i) for i in range(n)]


def mean_lengths(corpora: Sequence[Sequence[int]], pool: Sequence[BitextRecord]) -> List[float]:
    lengths = {r.record_id: r.src_len for r in pool}
    means = []
    for corpus in corpora:
        if not corpus:
            raise SamplingError("cannot take the mean length of an empty corpus")
        means.append(sum(lengths[rid] for rid in corpus) / len(corpus))
    return means


def length_score_correlation(corpora: Sequence[Sequence[int]], scores: Sequence[float],
                             pool: Sequence[BitextRecord]) -> float:
    """Pearson correlation between per-corpus mean source length and score."""
    if len(corpora) != len(scores):
        raise SamplingError(f"{len(corpora)} corpora but {len(scores)} scores")
    return pearson(mean_lengths(corpora, pool), scores)


def challenge_rank(challenge_score: float, sample_scores: Sequence[float],
                   seed: int = 0) -> SampleReport:
    """Count samples scoring at or below the challenge set; ties count against it."""
    if not sample_scores:
        raise SamplingError("challenge_rank needs at least one sample score")
    rank = sum(1 for s in sample_scores if s <= challenge_score)
    return SampleReport(
        seed=seed,
        n_corpora=len(sample_scores),
        sample_scores=[float(s) for s in sample_scores],
        challenge_score=float(challenge_score),
        rank=rank,
        empirical_p=rank / len(sample_scores),
    )


def cap_record_ids(record_ids: Sequence[int], max_sentences: Optional[int], seed: int = 0) -> List[int]:
    """Seeded subsample of at most max_sentences ids, returned in ascending order."""
    ids = sorted(record_ids)
    if max_sentences is None or len(ids) <= max_sentences:
        return ids
    rng = np.random.default_rng(seed)
    chosen = rng.choice(np.array(ids, dtype=np.int64), size=max_sentences, replace=False)
    logger.info(f"Capped {len(ids)} sentences to {max_sentences} (seed {seed})")
    return sorted(int(i) for i in chosen)


def validation_sample(sets: Sequence[ChallengeSet], distances: Sequence[int] = (1, 2, 5),
                      per_cell: int = 10, seed: int = 0) -> List[ChallengeInstance]:
    """
    Stratified draw of instances for manual inspection: up to per_cell instances
    per (phenomenon, exact distance), one instance per sentence.
    """
    sample = []
    for set_index, challenge_set in enumerate(sets):
        by_record = challenge_set.instances_by_record()
        for distance in distances:
            rng = corpus_rng(seed, set_index * 1000 + distance)
            candidates = []
            for record_id in sorted(by_record):
                at_distance = [i for i in by_record[record_id] if i.distance == distance]
                if at_distance:
                    candidates.append(at_distance[0])
            if len(candidates) > per_cell:
                picked = rng.choice(len(candidates), size=per_cell, replace=False)
                candidates = [candidates[i] for i in sorted(int(p) for p in picked)]
            sample.extend(candidates)
    return sample
