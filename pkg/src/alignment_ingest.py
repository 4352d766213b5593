"""
Pharaoh Alignment Ingest
Reads FastAlign-style "i-j" word alignments (0-based source/target indices)
and answers displacement queries for reordering detection.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from .errors import AlignmentFormatError, CorpusMismatchError, InputEncodingError

logger = logging.getLogger(__name__)

PAIR_TOKEN = re.compile(r"^([0-9]+)-([0-9]+)$")

AlignmentPair = Tuple[int, int]


@dataclass(frozen=True)
class AlignmentSet:
    """Word alignment of one sentence pair; duplicate pairs collapse."""
    pairs: FrozenSet[AlignmentPair] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def sorted_pairs(self) -> List[AlignmentPair]:
        return sorted(self.pairs)

    def max_displacement(self) -> Optional[int]:
        return max_displacement(self)

    def check_bounds(self, src_len: int, tgt_len: int, record_id: Optional[int] = None):
        """Raise CorpusMismatchError if any index falls outside the sentence lengths."""
        for src, tgt in self.sorted_pairs():
            if src >= src_len or tgt >= tgt_len:
                where = f"record {record_id}: " if record_id is not None else ""
                raise CorpusMismatchError(
                    f"{where}alignment pair {src}-{tgt} exceeds sentence lengths "
                    f"(source {src_len}, target {tgt_len})")


def parse_pharaoh_line(line: str, line_number: Optional[int] = None) -> AlignmentSet:
    """
    Parse one Pharaoh line such as "0-0 1-2 2-1".

    Args:
        line: whitespace-separated i-j tokens; empty line means no alignment
        line_number: used only for error messages

    Returns:
        AlignmentSet with each pair once
    """
    pairs = set()
    for token in line.split():
        match = PAIR_TOKEN.match(token)
        if not match:
            raise AlignmentFormatError(token, line_number)
        pairs.add((int(match.group(1)), int(match.group(2))))
    return AlignmentSet(frozenset(pairs))


def max_displacement(alignment: AlignmentSet) -> Optional[int]:
    """Largest |src - tgt| over the pairs, or None for an empty alignment."""
    if not alignment.pairs:
        return None
    return max(abs(src - tgt) for src, tgt in alignment.pairs)


def maximal_pair(alignment: AlignmentSet) -> Optional[AlignmentPair]:
    """Lexicographically smallest pair achieving the maximum displacement."""
    best = max_displacement(alignment)
    if best is None:
        return None
    return min(pair for pair in alignment.pairs if abs(pair[0] - pair[1]) == best)


def iter_pharaoh(lines: Iterable[Union[str, bytes]]) -> Iterable[AlignmentSet]:
    source = getattr(lines, "name", None)
    source = source if isinstance(source, str) else None
    for line_number, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise InputEncodingError(e.reason, line_number, source) from None
        yield parse_pharaoh_line(raw, line_number)


def read_pharaoh(source: Union[str, Path, Iterable[str]]) -> List[AlignmentSet]:
    """Read a whole alignment file (path or open stream); line k aligns bitext record k."""
    if isinstance(source, (str, Path)):
        with open(source, "rb") as f:
            alignments = list(iter_pharaoh(f))
    else:
        alignments = list(iter_pharaoh(source))
    logger.info(f"Read {len(alignments)} alignment lines")
    return alignments
