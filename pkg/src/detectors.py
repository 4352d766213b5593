"""
LDD Detectors
Rule-based extraction of long-distance dependency instances:
- reordering via word-alignment displacement
- reflexive verbs, verb-particle constructions and preposition stranding via
  source-side UD dependency edges
plus distance slicing of the resulting challenge sets.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Collection, Dict, List, Optional, Sequence

from .alignment_ingest import AlignmentSet, max_displacement, maximal_pair
from .conllu_ingest import ParsedSentence, Token
from .corpus_model import BitextRecord, ChallengeInstance, ChallengeSet, Phenomenon
from .errors import MissingAnnotationError, ThresholdError

logger = logging.getLogger(__name__)

DEFAULT_REORDER_THRESHOLD = 5
DEFAULT_MIN_DISTANCE = 1

PARTICLE_DEPRELS = {"compound:prt", "prt"}
OBLIQUE_DEPREL = "obl"
ADPOSITION = "ADP"
REFLEXIVE_KEYS = ("Reflex", "refl")

# preposition stranding is a property of English-like sources
PREP_STRANDING_LANGUAGES = {"en", "eng", "english"}


@dataclass
class DetectorConfig:
    """Configuration for one challenge-set extraction."""
    phenomenon: Phenomenon
    min_distance: int = DEFAULT_MIN_DISTANCE
    reorder_threshold: int = DEFAULT_REORDER_THRESHOLD
    source_language: str = "en"
    force_prep_stranding: bool = False

    def __post_init__(self):
        if isinstance(self.phenomenon, str):
            self.phenomenon = Phenomenon(self.phenomenon)
        if self.min_distance < 0:
            raise ValueError(f"min_distance must be >= 0, got {self.min_distance}")
        if self.reorder_threshold < 1:
            raise ValueError(f"reorder_threshold must be >= 1, got {self.reorder_threshold}")

    @property
    def threshold(self) -> int:
        """Distance bound that instances of this config must reach."""
        if self.phenomenon is Phenomenon.REORDER:
            return self.reorder_threshold
        return self.min_distance

    @property
    def name(self) -> str:
        if self.phenomenon is Phenomenon.REORDER:
            return f"reorder_t{self.reorder_threshold}"
        return f"{self.phenomenon.value}_d{self.min_distance}"

    @property
    def required_annotation(self) -> str:
        return "alignment" if self.phenomenon is Phenomenon.REORDER else "parse"

    @property
    def enabled(self) -> bool:
        if self.phenomenon is not Phenomenon.PREP_STRANDING:
            return True
        return self.force_prep_stranding or self.source_language.lower() in PREP_STRANDING_LANGUAGES


def dependency_distance(head_id: int, dep_id: int) -> int:
    """Number of syntactic words between two tokens (0 when adjacent)."""
    if head_id == dep_id:
        raise ValueError(f"head and dependent are the same token ({head_id})")
    return abs(head_id - dep_id) - 1


def detect_reordering(alignment: AlignmentSet, threshold: int = DEFAULT_REORDER_THRESHOLD,
                      record_id: int = 0) -> Optional[ChallengeInstance]:
    """
    Reordering trigger: an aligned pair whose indices differ by at least threshold.
    The distance here is the raw index difference |src - tgt|.
    """
    displacement = max_displacement(alignment)
    if displacement is None or displacement < threshold:
        return None
    return ChallengeInstance(
        record_id=record_id,
        phenomenon=Phenomenon.REORDER,
        head_index=None,
        dep_index=maximal_pair(alignment),
        distance=displacement,
    )


def _lexical_instances(sentence: ParsedSentence, min_distance: int, record_id: int,
                       phenomenon: Phenomenon,
                       matches: Callable[[Token], bool]) -> List[ChallengeInstance]:
    instances = []
    for token in sentence.tokens:
        if token.is_root or not matches(token):
            continue
        distance = dependency_distance(token.head, token.id)
        if distance >= min_distance:
            instances.append(ChallengeInstance(
                record_id=record_id,
                phenomenon=phenomenon,
                head_index=token.head,
                dep_index=token.id,
                distance=distance,
            ))
    return instances


def is_reflexive(token: Token) -> bool:
    for key in REFLEXIVE_KEYS:
        value = token.feature(key)
        if value is not None and value.lower() == "yes":
            return True
    return False


def is_particle(token: Token) -> bool:
    return token.deprel in PARTICLE_DEPRELS


def is_stranded_preposition(token: Token) -> bool:
    oblique = token.deprel == OBLIQUE_DEPREL or token.deprel.startswith(OBLIQUE_DEPREL + ":")
    return oblique and token.upos == ADPOSITION


def detect_reflexive(sentence: ParsedSentence, min_distance: int = DEFAULT_MIN_DISTANCE,
                     record_id: int = 0) -> List[ChallengeInstance]:
    """Reflexive pronoun (Reflex=Yes) paired with its syntactic head."""
    return _lexical_instances(sentence, min_distance, record_id, Phenomenon.REFLEXIVE, is_reflexive)


def detect_particle(sentence: ParsedSentence, min_distance: int = DEFAULT_MIN_DISTANCE,
                    record_id: int = 0) -> List[ChallengeInstance]:
    """Particle dependent (compound:prt or prt) paired with its verb."""
    return _lexical_instances(sentence, min_distance, record_id, Phenomenon.PARTICLE, is_particle)


def detect_prep_stranding(sentence: ParsedSentence, min_distance: int = DEFAULT_MIN_DISTANCE,
                          record_id: int = 0) -> List[ChallengeInstance]:
    """Adposition attached by obl (or an obl subtype) to its head."""
    return _lexical_instances(sentence, min_distance, record_id, Phenomenon.PREP_STRANDING,
                              is_stranded_preposition)


LEXICAL_DETECTORS: Dict[Phenomenon, Callable[..., List[ChallengeInstance]]] = {
    Phenomenon.REFLEXIVE: detect_reflexive,
    Phenomenon.PARTICLE: detect_particle,
    Phenomenon.PREP_STRANDING: detect_prep_stranding,
}


def detect_record(record: BitextRecord, config: DetectorConfig) -> List[ChallengeInstance]:
    """Run one config's rule over one record."""
    if config.phenomenon is Phenomenon.REORDER:
        if record.alignment is None:
            raise MissingAnnotationError(config.name, "alignment")
        instance = detect_reordering(record.alignment, config.reorder_threshold, record.record_id)
        return [instance] if instance else []

    if record.parse is None:
        raise MissingAnnotationError(config.name, "parse")
    detector = LEXICAL_DETECTORS[config.phenomenon]
    return detector(record.parse, config.min_distance, record.record_id)


def _check_annotations(records: Sequence[BitextRecord], config: DetectorConfig,
                       supplied: Optional[Collection[str]] = None):
    annotation = config.required_annotation
    if supplied is not None and annotation not in supplied:
        raise MissingAnnotationError(config.name, annotation)
    if any(getattr(r, annotation) is None for r in records):
        raise MissingAnnotationError(config.name, annotation)


def extract_challenge_sets(records: Sequence[BitextRecord],
                           configs: Sequence[DetectorConfig],
                           workers: int = 1,
                           supplied: Optional[Collection[str]] = None) -> List[ChallengeSet]:
    """
    Build one challenge set per config.

    Args:
        records: joined bitext with the annotations the configs need
        configs: detector configurations
        workers: per-record detection threads; output order does not depend on it
        supplied: annotation streams given for the corpus ("parse", "alignment"); a config
                  whose annotation is absent fails even when there are no records

    Returns:
        ChallengeSet per config, records in ascending record_id order
    """
    results = []
    for config in configs:
        _check_annotations(records, config, supplied)
        challenge_set = ChallengeSet(name=config.name, phenomenon=config.phenomenon,
                                     min_distance=config.threshold)
        if not config.enabled:
            logger.warning(f"{config.name}: disabled for source language "
                           f"'{config.source_language}' (use force_prep_stranding to enable)")
            results.append(challenge_set)
            continue

        ordered = sorted(records, key=lambda r: r.record_id)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                per_record = list(pool.map(lambda r: detect_record(r, config), ordered))
        else:
            per_record = [detect_record(r, config) for r in ordered]

        for instances in per_record:
            challenge_set.instances.extend(instances)

        logger.info(f"Extracted {config.name}: {len(challenge_set)} sentences, "
                    f"{len(challenge_set.instances)} instances")
        results.append(challenge_set)
    return results


def slice_by_distance(challenge_set: ChallengeSet, thresholds: Sequence[int]) -> List[ChallengeSet]:
    """
    Partition a challenge set by minimum distance.

    For each threshold, keeps the instances at that distance or more, so a record
    stays in the slice when at least one of its instances does. Threshold 0 is
    the unrestricted control that includes adjacent pairs, so it needs a set
    extracted at distance 0.
    """
    slices = []
    for threshold in thresholds:
        if threshold < challenge_set.min_distance:
            raise ThresholdError(f"cannot slice '{challenge_set.name}' at {threshold}: "
                                 f"set was extracted at {challenge_set.min_distance}")
        slices.append(ChallengeSet(
            name=_slice_name(challenge_set, threshold),
            phenomenon=challenge_set.phenomenon,
            min_distance=threshold,
            instances=[i for i in challenge_set.instances if i.distance >= threshold],
        ))
    return slices


def _slice_name(challenge_set: ChallengeSet, threshold: int) -> str:
    if challenge_set.phenomenon is Phenomenon.REORDER:
        return f"reorder_t{threshold}"
    return f"{challenge_set.phenomenon.value}_d{threshold}"
