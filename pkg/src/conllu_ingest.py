"""
CoNLL-U Ingest
Reads UD v2 CoNLL-U files into dependency trees the detectors can query.
Lines are parsed with the conllu package; multiword-token ranges and empty
nodes are kept aside so that token ids and distances are counted over
syntactic words only.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Dict, Iterable, Iterator, List, Optional, TextIO, Tuple, Union

from conllu.exceptions import ParseException
from conllu.models import Metadata, Token as ConlluToken, TokenList
from conllu.parser import (parse_dict_value, parse_id_value, parse_int_value, parse_line,
                           parse_token_and_metadata)

from .errors import ConlluFormatError

logger = logging.getLogger(__name__)

FIELDS = ("id", "form", "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc")
N_COLUMNS = len(FIELDS)


def _verbatim(line: List[str], i: int) -> str:
    return line[i]


def _token_id(line: List[str], i: int):
    try:
        return parse_id_value(line[i])
    except ParseException:
        raise ParseException(f"invalid token id '{line[i]}'") from None


def _head(line: List[str], i: int) -> Optional[int]:
    try:
        return parse_int_value(line[i])
    except ParseException:
        raise ParseException(f"non-integer head '{line[i]}'") from None


# ids, FEATS and HEAD are decoded; every other column is kept as written
FIELD_PARSERS = {
    "id": _token_id,
    "feats": lambda line, i: parse_dict_value(line[i]),
    "head": _head,
    **{name: _verbatim for name in ("form", "lemma", "upos", "xpos", "deprel", "deps", "misc")},
}

Stream = Union[BinaryIO, TextIO, Iterable[str], Iterable[bytes]]
NumberedLine = Tuple[int, str]


@dataclass
class Token:
    """One syntactic word of a parsed sentence."""
    id: int
    form: str
    lemma: str
    upos: str
    feats: Dict[str, str]
    head: int
    deprel: str
    xpos: str = "_"
    deps: str = "_"
    misc: str = "_"

    def feature(self, key: str) -> Optional[str]:
        return feature_lookup(self, key)

    @property
    def is_root(self) -> bool:
        return self.head == 0

    def to_conllu(self) -> ConlluToken:
        return ConlluToken(zip(FIELDS, (self.id, self.form, self.lemma, self.upos, self.xpos,
                                        self.feats or None, self.head, self.deprel, self.deps, self.misc)))


@dataclass
class ParsedSentence:
    """A dependency-parsed sentence; tokens hold syntactic words in id order."""
    sent_id: str
    text: Optional[str]
    tokens: List[Token] = field(default_factory=list)
    metadata: Dict[str, Optional[str]] = field(default_factory=dict)  # comment lines as key/value
    extra_tokens: List[ConlluToken] = field(default_factory=list)    # range and empty-node lines
    warnings: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def token(self, token_id: int) -> Token:
        return self.tokens[token_id - 1]


def feature_lookup(token: Token, key: str) -> Optional[str]:
    """Case-insensitive lookup of a morphological feature."""
    wanted = key.lower()
    for name, value in token.feats.items():
        if name.lower() == wanted:
            return value
    return None


def _numbered_lines(stream: Stream, source: Optional[str]) -> Iterator[NumberedLine]:
    """Yield (line number, text) without the line terminator (LF or CRLF)."""
    if isinstance(stream, (str, Path)):
        raise TypeError("pass an open stream, not a path; use read_conllu() for files")
    for line_number, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ConlluFormatError(f"invalid UTF-8 ({e.reason})", line_number, source) from None
        yield line_number, raw.rstrip("\r\n")


def _blocks(stream: Stream, source: Optional[str]) -> Iterator[List[NumberedLine]]:
    block: List[NumberedLine] = []
    for line_number, line in _numbered_lines(stream, source):
        if line.strip():
            block.append((line_number, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


def _metadata(block: List[NumberedLine], source: Optional[str]) -> Metadata:
    comments = [(n, line) for n, line in block if line.startswith("#")]
    if not comments:
        return Metadata()
    try:
        parsed = parse_token_and_metadata("\n".join(line for _, line in comments),
                                          fields=FIELDS, field_parsers=FIELD_PARSERS)
    except ParseException as e:
        raise ConlluFormatError(f"bad comment block: {e}", comments[0][0], source) from None
    return parsed.metadata


def _word(data: ConlluToken, expected_id: int, line_number: int, source: Optional[str]) -> Token:
    token_id = data["id"]
    if token_id != expected_id:
        raise ConlluFormatError(f"token id {token_id} out of sequence (expected {expected_id})",
                                line_number, source)
    head = data["head"]
    if head is None:
        raise ConlluFormatError(f"token {token_id} has no head", line_number, source)
    if head < 0:
        raise ConlluFormatError(f"negative head {head}", line_number, source)
    if head == token_id:
        raise ConlluFormatError(f"token {token_id} is its own head", line_number, source)
    feats = dict(data["feats"] or {})
    for name, value in feats.items():
        if not value:
            raise ConlluFormatError(f"malformed feature '{name}'", line_number, source)
    return Token(id=token_id, form=data["form"], lemma=data["lemma"], upos=data["upos"], xpos=data["xpos"],
                 feats=feats, head=head, deprel=data["deprel"], deps=data["deps"], misc=data["misc"])


def _parse_block(block: List[NumberedLine], ordinal: int, source: Optional[str]) -> ParsedSentence:
    metadata = _metadata(block, source)
    sentence = ParsedSentence(sent_id=metadata.get("sent_id") or str(ordinal), text=metadata.get("text"),
                              metadata=dict(metadata))
    lines_by_id: Dict[int, int] = {}
    for line_number, line in block:
        if line.startswith("#"):
            continue
        n_columns = len(line.split("\t"))
        if n_columns != N_COLUMNS:
            raise ConlluFormatError(f"expected {N_COLUMNS} tab-separated columns, found {n_columns}",
                                    line_number, source)
        try:
            data = parse_line(line, FIELDS, FIELD_PARSERS)
        except ParseException as e:
            raise ConlluFormatError(str(e), line_number, source) from None
        if isinstance(data["id"], tuple):
            sentence.extra_tokens.append(data)
            continue
        if not isinstance(data["id"], int):
            raise ConlluFormatError(f"invalid token id '{line.split(chr(9), 1)[0]}'", line_number, source)
        token = _word(data, len(sentence.tokens) + 1, line_number, source)
        sentence.tokens.append(token)
        lines_by_id[token.id] = line_number

    n = len(sentence.tokens)
    for token in sentence.tokens:
        if token.head > n:
            raise ConlluFormatError(f"sentence {sentence.sent_id}: token {token.id} has head "
                                    f"{token.head} beyond sentence length {n}", lines_by_id[token.id], source)
    roots = sum(1 for t in sentence.tokens if t.is_root)
    if sentence.tokens and roots != 1:
        sentence.warnings.append(f"expected exactly one root, found {roots}")
        logger.warning(f"Sentence {sentence.sent_id}: expected exactly one root, found {roots}")
    return sentence


def _failed_sentence(block: List[NumberedLine], ordinal: int, error: str) -> ParsedSentence:
    try:
        metadata = _metadata(block, None)
    except ConlluFormatError:
        metadata = Metadata()
    sent_id = metadata.get("sent_id") or str(ordinal)
    logger.warning(f"Skipping ill-formed sentence {sent_id}: {error}")
    return ParsedSentence(sent_id=sent_id, text=metadata.get("text"), metadata=dict(metadata), errors=[error])


def iter_conllu(stream: Stream, strict: bool = False) -> Iterator[ParsedSentence]:
    """
    Stream sentences out of a CoNLL-U source.

    Args:
        stream: binary or text stream (or any iterable of lines), UTF-8
        strict: raise on the first malformed line; otherwise the offending sentence
                is yielded with no tokens and its error recorded, so that block k of
                the input is always sentence k of the output

    Yields:
        ParsedSentence per blank-line separated block
    """
    source = getattr(stream, "name", None)
    source = source if isinstance(source, str) else None
    for ordinal, block in enumerate(_blocks(stream, source), start=1):
        try:
            sentence = _parse_block(block, ordinal, source)
        except ConlluFormatError as e:
            if strict:
                raise
            sentence = _failed_sentence(block, ordinal, str(e))
        yield sentence


def parse_conllu(stream: Stream, strict: bool = False) -> List[ParsedSentence]:
    """Parse a whole CoNLL-U stream. Ill-formed sentences come back token-less unless strict."""
    sentences = list(iter_conllu(stream, strict=strict))
    skipped = sum(1 for s in sentences if s.errors)
    logger.info(f"Parsed {len(sentences)} CoNLL-U sentences ({skipped} skipped)")
    return sentences


def read_conllu(path: Union[str, Path], strict: bool = False) -> List[ParsedSentence]:
    with open(path, "rb") as f:
        return parse_conllu(f, strict=strict)


def to_token_list(sentence: ParsedSentence) -> TokenList:
    """Rebuild the conllu TokenList, re-inserting ranges before and empty nodes after their word."""
    ranges: Dict[int, List[ConlluToken]] = {}
    empties: Dict[int, List[ConlluToken]] = {}
    for extra in sentence.extra_tokens:
        start, separator, _ = extra["id"]
        (ranges if separator == "-" else empties).setdefault(start, []).append(extra)

    items = list(empties.get(0, []))
    for token in sentence.tokens:
        items.extend(ranges.get(token.id, []))
        items.append(token.to_conllu())
        items.extend(empties.get(token.id, []))

    metadata = Metadata(sentence.metadata)
    if "sent_id" not in metadata:
        metadata = Metadata({"sent_id": sentence.sent_id, **metadata})
    return TokenList(items, metadata=metadata)


def format_conllu(sentence: ParsedSentence) -> str:
    """Serialize a sentence back to CoNLL-U (LF line endings, trailing blank line)."""
    return to_token_list(sentence).serialize()


def write_conllu(sentences: Iterable[ParsedSentence], path: Union[str, Path]):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for sentence in sentences:
            f.write(format_conllu(sentence))
