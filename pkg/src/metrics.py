"""
MT Metrics
Corpus BLEU with multi-bleu semantics, sentence and corpus RIBES, and the rank
and linear correlations used for distance-trend and length analyses.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import pearsonr, spearmanr

from .errors import MetricInputError

logger = logging.getLogger(__name__)

MAX_ORDER = 4
RIBES_ALPHA = 0.25
RIBES_BETA = 0.10

Tokens = Sequence[str]


@dataclass
class BleuReport:
    """Decomposed corpus BLEU."""
    precisions: List[float]
    matches: List[int]
    totals: List[int]
    bp: float
    hyp_len: int
    ref_len: int
    score: float                 # 0..100
    n_sentences: int
    empty_hypothesis: bool = False  # bp = 0 convention applied

    def to_dict(self) -> Dict:
        return {
            "metric": "bleu",
            "score": round(self.score, 2),
            "precisions": [round(p, 6) for p in self.precisions],
            "bp": round(self.bp, 6),
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
            "n_sentences": self.n_sentences,
        }


@dataclass
class RibesReport:
    """Decomposed sentence RIBES."""
    nkt: float
    unigram_precision: float
    bp: float
    alpha: float
    beta: float
    score: float                 # 0..1
    ranks: List[int] = field(default_factory=list)
    empty_input: bool = False


def ngram_counts(tokens: Tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu_stats(hyp: Tokens, ref: Tokens, max_order: int = MAX_ORDER) -> Tuple[List[int], List[int]]:
    """Clipped n-gram matches and hypothesis n-gram totals, per order."""
    matches, totals = [], []
    for n in range(1, max_order + 1):
        hyp_counts = ngram_counts(hyp, n)
        ref_counts = ngram_counts(ref, n)
        matches.append(sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items()))
        totals.append(max(len(hyp) - n + 1, 0))
    return matches, totals


def brevity_penalty(ref_len: int, hyp_len: int) -> float:
    if hyp_len == 0:
        return 0.0
    if hyp_len >= ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / hyp_len)


def bleu_corpus(hyps: Sequence[Tokens], refs: Sequence[Tokens],
                lowercase: bool = False, max_order: int = MAX_ORDER) -> BleuReport:
    """
    Corpus BLEU computed the way multi-bleu.perl does.

    N-gram matches and totals are summed over all sentences before dividing;
    any order with zero matches (or zero n-grams) makes the score 0.

    Args:
        hyps: tokenized system outputs
        refs: one tokenized reference per hypothesis
        lowercase: compare case-insensitively (multi-bleu -lc)

    Returns:
        BleuReport with the score on the 0-100 scale
    """
    if len(hyps) != len(refs):
        raise MetricInputError(f"hypothesis/reference count mismatch: {len(hyps)} vs {len(refs)}")
    if not hyps:
        raise MetricInputError("cannot score an empty corpus")

    matches = [0] * max_order
    totals = [0] * max_order
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        if lowercase:
            hyp = [t.lower() for t in hyp]
            ref = [t.lower() for t in ref]
        sent_matches, sent_totals = sentence_bleu_stats(hyp, ref, max_order)
        for i in range(max_order):
            matches[i] += sent_matches[i]
            totals[i] += sent_totals[i]
        hyp_len += len(hyp)
        ref_len += len(ref)

    precisions = [m / t if t else 0.0 for m, t in zip(matches, totals)]
    bp = brevity_penalty(ref_len, hyp_len)
    empty = hyp_len == 0
    if empty:
        logger.warning("All hypotheses are empty; BLEU is 0 with brevity penalty 0")

    if empty or any(m == 0 for m in matches):
        score = 0.0
    else:
        log_mean = sum(math.log(p) for p in precisions) / max_order
        score = 100.0 * bp * math.exp(log_mean)

    return BleuReport(precisions=precisions, matches=matches, totals=totals, bp=bp,
                      hyp_len=hyp_len, ref_len=ref_len, score=score, n_sentences=len(hyps),
                      empty_hypothesis=empty)


def _occurrences(ngram: Tuple[str, ...], tokens: Tokens) -> List[int]:
    """Start positions of ngram in tokens, overlapping matches included."""
    n = len(ngram)
    return [i for i in range(len(tokens) - n + 1) if tuple(tokens[i:i + n]) == ngram]


def ribes_align(hyp: Tokens, ref: Tokens) -> List[int]:
    """
    Align hypothesis words to reference positions.

    A word aligns directly when it occurs exactly once in both sentences. Otherwise
    the context is grown one word at a time, trying the left-extended n-gram before
    the right-extended one, until an n-gram occurs exactly once in each sentence.
    Words that never become unique stay unaligned, and each reference position is
    used at most once.

    Returns:
        Reference positions of the aligned hypothesis words, in hypothesis order
    """
    ranks: List[int] = []
    used = set()
    ref_counts = Counter(ref)
    hyp_counts = Counter(hyp)

    for i, word in enumerate(hyp):
        if ref_counts[word] == 0:
            continue
        position: Optional[int] = None
        if ref_counts[word] == 1 and hyp_counts[word] == 1:
            position = ref.index(word)
        else:
            for window in range(1, max(i + 1, len(hyp) - i)):
                if window <= i:
                    ngram = tuple(hyp[i - window:i + 1])
                    in_ref = _occurrences(ngram, ref)
                    if len(in_ref) == 1 and len(_occurrences(ngram, hyp)) == 1:
                        position = in_ref[0] + window
                        break
                if i + window < len(hyp):
                    ngram = tuple(hyp[i:i + window + 1])
                    in_ref = _occurrences(ngram, ref)
                    if len(in_ref) == 1 and len(_occurrences(ngram, hyp)) == 1:
                        position = in_ref[0]
                        break
        if position is not None and position not in used:
            used.add(position)
            ranks.append(position)
    return ranks


def normalized_kendall_tau(ranks: Sequence[int]) -> float:
    """Share of ascending pairs among all pairs of ranks."""
    k = len(ranks)
    if k < 2:
        return 0.0
    ascending = sum(1 for i in range(k - 1) for j in range(i + 1, k) if ranks[i] < ranks[j])
    return ascending / (k * (k - 1) / 2)


def ribes_sentence(hyp: Tokens, ref: Tokens, alpha: float = RIBES_ALPHA,
                   beta: float = RIBES_BETA) -> RibesReport:
    """RIBES = NKT * precision^alpha * BP^beta; 0 when fewer than two words align."""
    if not hyp or not ref:
        return RibesReport(nkt=0.0, unigram_precision=0.0, bp=0.0, alpha=alpha, beta=beta,
                           score=0.0, empty_input=True)

    ranks = ribes_align(hyp, ref)
    bp = brevity_penalty(len(ref), len(hyp))
    precision = len(ranks) / len(hyp)
    if len(ranks) < 2:
        return RibesReport(nkt=0.0, unigram_precision=precision, bp=bp, alpha=alpha, beta=beta,
                           score=0.0, ranks=ranks)

    nkt = normalized_kendall_tau(ranks)
    score = nkt * (precision ** alpha) * (bp ** beta)
    return RibesReport(nkt=nkt, unigram_precision=precision, bp=bp, alpha=alpha, beta=beta,
                       score=score, ranks=ranks)


def ribes_corpus(hyps: Sequence[Tokens], refs: Sequence[Tokens], alpha: float = RIBES_ALPHA,
                 beta: float = RIBES_BETA) -> float:
    """Mean sentence RIBES, summed in corpus order."""
    if len(hyps) != len(refs):
        raise MetricInputError(f"hypothesis/reference count mismatch: {len(hyps)} vs {len(refs)}")
    if not hyps:
        raise MetricInputError("cannot score an empty corpus")
    total = 0.0
    empty = 0
    for hyp, ref in zip(hyps, refs):
        report = ribes_sentence(hyp, ref, alpha, beta)
        empty += report.empty_input
        total += report.score
    if empty:
        logger.warning(f"RIBES: {empty} sentences with empty hypothesis or reference scored 0")
    return total / len(hyps)


def _check_series(xs: Sequence[float], ys: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    if len(xs) != len(ys):
        raise MetricInputError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise MetricInputError(f"correlation needs at least 2 points, got {len(xs)}")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise MetricInputError("correlation is undefined for a constant series")
    return x, y


def _statistic(value: float) -> float:
    if np.isnan(value):
        raise MetricInputError("correlation is undefined for this input")
    return max(-1.0, min(1.0, float(value)))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation; raises MetricInputError on degenerate input."""
    x, y = _check_series(xs, ys)
    return _statistic(pearsonr(x, y).statistic)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties."""
    x, y = _check_series(xs, ys)
    return _statistic(spearmanr(x, y).statistic)
