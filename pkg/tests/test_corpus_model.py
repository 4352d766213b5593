import io
import json

import pytest

from src.corpus_model import (ChallengeInstance, ChallengeSet, Phenomenon, load_bitext, read_challenge_set,
                              read_lines, split_tokens, write_challenge_set)
from src.errors import CorpusMismatchError, InputEncodingError, LddToolkitError


def test_split_tokens_ascii_whitespace_only():
    assert split_tokens("  a\tb  c \r\n") == ["a", "b", "c"]
    assert split_tokens("a\u00a0b c") == ["a\u00a0b", "c"]
    assert split_tokens("") == []


def test_load_fixture(records):
    assert len(records) == 20
    assert [r.record_id for r in records] == list(range(20))
    assert records[7].src_len == 12
    assert records[7].alignment.max_displacement() == 5
    assert records[3].parse.token(3).form == "sich"


def test_parse_mismatch_flag(records):
    flagged = [r.record_id for r in records if r.parse_mismatch]
    assert flagged == [12]


def test_line_count_mismatch():
    with pytest.raises(CorpusMismatchError, match="length mismatch 2 vs 1"):
        load_bitext(["a", "b"], ["x"])


def test_parse_count_mismatch(fixture_paths):
    src = ["he gave in ."]
    with open(fixture_paths["conllu"], "rb") as parses, pytest.raises(CorpusMismatchError):
        load_bitext(src, ["er gab nach ."], parse_stream=parses)


def test_alignment_out_of_bounds():
    with pytest.raises(CorpusMismatchError, match="record 0"):
        load_bitext(["a b"], ["x y"], align_stream=["0-0 2-1"])


def test_annotations_are_optional():
    records = load_bitext(io.StringIO("a b\n"), io.StringIO("x y\n"))
    assert records[0].parse is None
    assert records[0].alignment is None
    assert records[0].tgt_tokens == ["x", "y"]


def test_empty_corpus():
    assert load_bitext([], []) == []


def test_instance_dict_round_trip():
    lexical = ChallengeInstance(3, Phenomenon.PARTICLE, 2, 5, 2)
    reorder = ChallengeInstance(7, Phenomenon.REORDER, None, (5, 0), 5)
    assert list(lexical.to_dict()) == ["record_id", "phenomenon", "head_index", "dep_index", "distance"]
    assert reorder.to_dict()["dep_index"] == [5, 0]
    assert ChallengeInstance.from_dict(json.loads(json.dumps(reorder.to_dict()))) == reorder
    assert ChallengeInstance.from_dict(lexical.to_dict()) == lexical


def test_challenge_set_counts_sentences():
    challenge_set = ChallengeSet("particle_d1", Phenomenon.PARTICLE, 1, [
        ChallengeInstance(13, Phenomenon.PARTICLE, 2, 4, 1),
        ChallengeInstance(13, Phenomenon.PARTICLE, 6, 8, 1),
        ChallengeInstance(1, Phenomenon.PARTICLE, 2, 5, 2),
    ])
    assert len(challenge_set) == 2
    assert challenge_set.record_ids == [1, 13]
    assert challenge_set.distance_histogram() == {1: 2, 2: 1}
    assert len(challenge_set.instances_by_record()[13]) == 2


def test_write_and_read_challenge_set(records, tmp_path):
    challenge_set = ChallengeSet("particle_d1", Phenomenon.PARTICLE, 1, [
        ChallengeInstance(13, Phenomenon.PARTICLE, 6, 8, 1),
        ChallengeInstance(1, Phenomenon.PARTICLE, 2, 5, 2),
        ChallengeInstance(13, Phenomenon.PARTICLE, 2, 4, 1),
    ])
    paths = write_challenge_set(challenge_set, records, tmp_path / "set")

    assert paths["source"].read_text(encoding="utf-8").splitlines() == [
        "she looked the word up .",
        "he picked it up and threw it away .",
    ]
    assert paths["target"].read_text(encoding="utf-8").splitlines()[0] == "sie schlug das Wort nach ."
    manifest = json.loads(paths["manifest"].read_text(encoding="utf-8"))
    assert manifest["n_sentences"] == 2
    assert manifest["n_instances"] == 3
    assert manifest["distance_histogram"] == {"1": 2, "2": 1}

    loaded = read_challenge_set(tmp_path / "set")
    assert loaded.name == "particle_d1"
    assert loaded.min_distance == 1
    assert [(i.record_id, i.dep_index) for i in loaded.instances] == [(1, 5), (13, 4), (13, 8)]


def test_write_empty_set(records, tmp_path):
    paths = write_challenge_set(ChallengeSet("reorder_t5", Phenomenon.REORDER, 5), records, tmp_path)
    assert paths["source"].read_text(encoding="utf-8") == ""
    assert read_challenge_set(tmp_path).instances == []


def test_write_unknown_record(records, tmp_path):
    challenge_set = ChallengeSet("x", Phenomenon.PARTICLE, 0, [ChallengeInstance(99, Phenomenon.PARTICLE, 1, 2, 0)])
    with pytest.raises(CorpusMismatchError):
        write_challenge_set(challenge_set, records, tmp_path)


def test_write_failure_is_wrapped(records, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    with pytest.raises(LddToolkitError, match="could not write"):
        write_challenge_set(ChallengeSet("x", Phenomenon.PARTICLE, 0), records, blocker / "set")


def test_read_lines_reports_invalid_utf8(tmp_path):
    path = tmp_path / "hyp.txt"
    path.write_bytes(b"ok\n\xff\xfe\n")
    with pytest.raises(InputEncodingError) as excinfo:
        read_lines(path)
    assert excinfo.value.line_number == 2
    assert str(excinfo.value).startswith(f"{path}: line 2: invalid UTF-8")


def test_load_bitext_decodes_binary_streams():
    records = load_bitext(io.BytesIO("schön\r\n".encode("utf-8")), io.BytesIO(b"nice\n"))
    assert records[0].src_tokens == ["schön"]
