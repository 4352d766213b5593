"""
Corpus Model
Joins tokenized bitext, source parses, word alignments and system output into
addressable records, and persists extracted challenge sets.
"""

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .alignment_ingest import AlignmentSet, iter_pharaoh
from .conllu_ingest import ParsedSentence, parse_conllu
from .errors import CorpusMismatchError, InputEncodingError, LddToolkitError

logger = logging.getLogger(__name__)

ASCII_WHITESPACE = re.compile(r"[ \t\n\r\f\v]+")

SOURCE_FILE = "source.txt"
TARGET_FILE = "target.txt"
INSTANCES_FILE = "instances.jsonl"
MANIFEST_FILE = "manifest.json"


class Phenomenon(Enum):
    """Long-distance dependency types a challenge set can hold."""
    REORDER = "reorder"
    REFLEXIVE = "reflexive"
    PARTICLE = "particle"
    PREP_STRANDING = "prep_stranding"

    @property
    def is_lexical(self) -> bool:
        return self is not Phenomenon.REORDER

    @property
    def label(self) -> str:
        return {
            Phenomenon.REORDER: "Reorder",
            Phenomenon.REFLEXIVE: "Reflexive",
            Phenomenon.PARTICLE: "Particle",
            Phenomenon.PREP_STRANDING: "Preposition Stranding",
        }[self]


def split_tokens(line: str) -> List[str]:
    """Split a pre-tokenized line on ASCII whitespace."""
    stripped = line.strip(" \t\n\r\f\v")
    if not stripped:
        return []
    return ASCII_WHITESPACE.split(stripped)


@dataclass
class BitextRecord:
    """One sentence pair with its optional annotations."""
    record_id: int
    src_tokens: List[str]
    tgt_tokens: List[str]
    parse: Optional[ParsedSentence] = None
    alignment: Optional[AlignmentSet] = None
    parse_mismatch: bool = False  # parser segmentation differs from the tokenized source

    @property
    def src_len(self) -> int:
        return len(self.src_tokens)


@dataclass(frozen=True)
class ChallengeInstance:
    """
    One detected trigger.

    Lexical phenomena store 1-based CoNLL-U ids in head_index/dep_index.
    Reordering stores no head and keeps the (src, tgt) alignment pair with the
    maximal displacement, as two 0-based indices, in dep_index.
    """
    record_id: int
    phenomenon: Phenomenon
    head_index: Optional[int]
    dep_index: Union[int, Tuple[int, int]]
    distance: int

    def to_dict(self) -> Dict[str, Any]:
        dep = list(self.dep_index) if isinstance(self.dep_index, tuple) else self.dep_index
        return {
            "record_id": self.record_id,
            "phenomenon": self.phenomenon.value,
            "head_index": self.head_index,
            "dep_index": dep,
            "distance": self.distance,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChallengeInstance":
        dep = data["dep_index"]
        return cls(
            record_id=int(data["record_id"]),
            phenomenon=Phenomenon(data["phenomenon"]),
            head_index=data["head_index"],
            dep_index=tuple(dep) if isinstance(dep, list) else dep,
            distance=int(data["distance"]),
        )


@dataclass
class ChallengeSet:
    """A named collection of instances; its size is counted in sentences."""
    name: str
    phenomenon: Phenomenon
    min_distance: int
    instances: List[ChallengeInstance] = field(default_factory=list)

    @property
    def record_ids(self) -> List[int]:
        return sorted({instance.record_id for instance in self.instances})

    def __len__(self) -> int:
        return len(self.record_ids)

    def instances_by_record(self) -> Dict[int, List[ChallengeInstance]]:
        grouped: Dict[int, List[ChallengeInstance]] = {}
        for instance in self.instances:
            grouped.setdefault(instance.record_id, []).append(instance)
        return grouped

    def distance_histogram(self) -> Dict[int, int]:
        """Instance count per exact distance."""
        counts = Counter(instance.distance for instance in self.instances)
        return dict(sorted(counts.items()))


def _lines(stream: Iterable[Union[str, bytes]]) -> List[str]:
    source = getattr(stream, "name", None)
    source = source if isinstance(source, str) else None
    lines = []
    for line_number, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise InputEncodingError(e.reason, line_number, source) from None
        lines.append(raw.rstrip("\r\n"))
    return lines


def load_bitext(src_stream: Iterable[str],
                tgt_stream: Iterable[str],
                parse_stream: Optional[Iterable] = None,
                align_stream: Optional[Iterable[str]] = None,
                strict: bool = False) -> List[BitextRecord]:
    """
    Join parallel inputs by line number.

    Args:
        src_stream, tgt_stream: one pre-tokenized sentence per line
        parse_stream: CoNLL-U for the source side, one block per line of src
        align_stream: Pharaoh alignments, one line per sentence pair
        strict: abort on the first ill-formed CoNLL-U sentence

    Returns:
        BitextRecord per line, record_id = 0-based line number
    """
    src_lines = _lines(src_stream)
    tgt_lines = _lines(tgt_stream)
    if len(src_lines) != len(tgt_lines):
        raise CorpusMismatchError(f"length mismatch {len(src_lines)} vs {len(tgt_lines)}")

    parses: Optional[List[ParsedSentence]] = None
    if parse_stream is not None:
        parses = parse_conllu(parse_stream, strict=strict)
        if len(parses) != len(src_lines):
            raise CorpusMismatchError(f"length mismatch {len(src_lines)} vs {len(parses)} "
                                      f"(source lines vs CoNLL-U sentences)")

    alignments: Optional[List[AlignmentSet]] = None
    if align_stream is not None:
        alignments = list(iter_pharaoh(align_stream))
        if len(alignments) != len(src_lines):
            raise CorpusMismatchError(f"length mismatch {len(src_lines)} vs {len(alignments)} "
                                      f"(source lines vs alignment lines)")

    records = []
    mismatches = 0
    for record_id, (src_line, tgt_line) in enumerate(zip(src_lines, tgt_lines)):
        record = BitextRecord(
            record_id=record_id,
            src_tokens=split_tokens(src_line),
            tgt_tokens=split_tokens(tgt_line),
        )
        if parses is not None:
            record.parse = parses[record_id]
            if record.parse.is_valid and len(record.parse.tokens) != record.src_len:
                record.parse_mismatch = True
                mismatches += 1
        if alignments is not None:
            record.alignment = alignments[record_id]
            record.alignment.check_bounds(record.src_len, len(record.tgt_tokens), record_id)
        records.append(record)

    if mismatches:
        logger.warning(f"{mismatches} records have parser/tokenizer segmentation mismatches")
    logger.info(f"Loaded {len(records)} bitext records "
                f"(parses: {parses is not None}, alignments: {alignments is not None})")
    return records


def load_bitext_files(src_path: Union[str, Path], tgt_path: Union[str, Path],
                      conllu_path: Optional[Union[str, Path]] = None,
                      align_path: Optional[Union[str, Path]] = None,
                      strict: bool = False) -> List[BitextRecord]:
    """Path-based wrapper around load_bitext."""
    with open(src_path, "rb") as src, open(tgt_path, "rb") as tgt:
        parse_file = open(conllu_path, "rb") if conllu_path else None
        align_file = open(align_path, "rb") if align_path else None
        try:
            return load_bitext(src, tgt, parse_file, align_file, strict=strict)
        finally:
            if parse_file:
                parse_file.close()
            if align_file:
                align_file.close()


def read_lines(path: Union[str, Path]) -> List[str]:
    with open(path, "rb") as f:
        return _lines(f)


def write_challenge_set(challenge_set: ChallengeSet,
                        records: Sequence[BitextRecord],
                        out_dir: Union[str, Path]) -> Dict[str, Path]:
    """
    Persist a challenge set.

    Writes source/target text restricted to the set's records (ascending record
    order), the instances as JSON lines, and a manifest.

    Returns:
        Mapping of file role to written path
    """
    out_path = Path(out_dir)
    by_id = {record.record_id: record for record in records}
    paths = {
        "source": out_path / SOURCE_FILE,
        "target": out_path / TARGET_FILE,
        "instances": out_path / INSTANCES_FILE,
        "manifest": out_path / MANIFEST_FILE,
    }
    try:
        out_path.mkdir(parents=True, exist_ok=True)
        record_ids = challenge_set.record_ids
        missing = [rid for rid in record_ids if rid not in by_id]
        if missing:
            raise CorpusMismatchError(f"challenge set '{challenge_set.name}' refers to unknown "
                                      f"records {missing[:5]}")

        with open(paths["source"], "w", encoding="utf-8", newline="\n") as src, \
                open(paths["target"], "w", encoding="utf-8", newline="\n") as tgt:
            for record_id in record_ids:
                src.write(" ".join(by_id[record_id].src_tokens) + "\n")
                tgt.write(" ".join(by_id[record_id].tgt_tokens) + "\n")

        ordered = sorted(challenge_set.instances, key=_instance_sort_key)
        with open(paths["instances"], "w", encoding="utf-8", newline="\n") as f:
            for instance in ordered:
                f.write(json.dumps(instance.to_dict(), ensure_ascii=False) + "\n")

        manifest = {
            "name": challenge_set.name,
            "phenomenon": challenge_set.phenomenon.value,
            "min_distance": challenge_set.min_distance,
            "n_sentences": len(record_ids),
            "n_instances": len(challenge_set.instances),
            "distance_histogram": {str(k): v for k, v in challenge_set.distance_histogram().items()},
        }
        with open(paths["manifest"], "w", encoding="utf-8", newline="\n") as f:
            json.dump(manifest, f, indent=2, ensure_ascii=False)
            f.write("\n")
    except OSError as e:
        raise LddToolkitError(f"could not write challenge set to {e.filename or out_path}: {e.strerror}") from e

    logger.info(f"Wrote challenge set {challenge_set.name}: {len(challenge_set)} sentences, "
                f"{len(challenge_set.instances)} instances -> {out_path}")
    return paths


def _instance_sort_key(instance: ChallengeInstance):
    dep = instance.dep_index if isinstance(instance.dep_index, tuple) else (instance.dep_index,)
    return (instance.record_id, dep, instance.head_index or 0)


def read_instances(path: Union[str, Path]) -> List[ChallengeInstance]:
    instances = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                instances.append(ChallengeInstance.from_dict(json.loads(line)))
    return instances


def read_challenge_set(set_dir: Union[str, Path]) -> ChallengeSet:
    """Inverse of write_challenge_set: rebuilds the set from its manifest and instances."""
    set_path = Path(set_dir)
    with open(set_path / MANIFEST_FILE, "r", encoding="utf-8") as f:
        manifest = json.load(f)
    return ChallengeSet(
        name=manifest["name"],
        phenomenon=Phenomenon(manifest["phenomenon"]),
        min_distance=int(manifest["min_distance"]),
        instances=read_instances(set_path / INSTANCES_FILE),
    )
