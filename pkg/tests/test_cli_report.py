import json

import pytest

from conftest import EXPECTED_SETS, write_lines
from src.cli_report import build_parser, main
from src.corpus_model import read_challenge_set
from src.reporting import BASELINE_LABEL


def extract(fixture_paths, out_dir, *extra):
    return main(["extract", "--src", str(fixture_paths["src"]), "--tgt", str(fixture_paths["tgt"]),
                 "--conllu", str(fixture_paths["conllu"]), "--align", str(fixture_paths["align"]),
                 "--output-dir", str(out_dir), *extra])


def truncated_hypothesis(tgt_path, out_path):
    lines = tgt_path.read_text(encoding="utf-8").splitlines()
    return write_lines(out_path, [" ".join(line.split()[:-1]) for line in lines])


class TestExtract:

    def test_particle_slices(self, fixture_paths, tmp_path):
        assert extract(fixture_paths, tmp_path, "--phenomena", "particle", "--thresholds", "0,1,2,3") == 0
        for threshold in range(4):
            challenge_set = read_challenge_set(tmp_path / f"particle_d{threshold}")
            assert set(challenge_set.record_ids) == EXPECTED_SETS["particle"][threshold]
        lines = (tmp_path / "sizes.tsv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "phenomenon\tAll\t≥1\t≥2\t≥3"
        assert lines[1] == f"{BASELINE_LABEL}\t20\t\t\t"
        assert lines[2] == "Particle\t8\t7\t4\t2"
        source = (tmp_path / "particle_d3" / "source.txt").read_text(encoding="utf-8").splitlines()
        assert len(source) == 2

    def test_reorder_set(self, fixture_paths, tmp_path):
        assert extract(fixture_paths, tmp_path, "--phenomena", "reorder") == 0
        challenge_set = read_challenge_set(tmp_path / "reorder_t5")
        assert challenge_set.min_distance == 5
        assert challenge_set.record_ids == [7, 17]

    def test_manifest_is_reproducible(self, fixture_paths, tmp_path):
        assert extract(fixture_paths, tmp_path / "a", "--phenomena", "reflexive") == 0
        assert extract(fixture_paths, tmp_path / "b", "--phenomena", "reflexive") == 0
        first = json.loads((tmp_path / "a" / "manifest.json").read_text(encoding="utf-8"))
        second = json.loads((tmp_path / "b" / "manifest.json").read_text(encoding="utf-8"))
        assert first["inputs"] == second["inputs"]
        assert first["outputs"] == second["outputs"]
        assert first["n_records"] == 20
        assert first["sets"]["reflexive_d1"]["n_sentences"] == 2
        assert "reflexive_d0/instances.jsonl" in first["outputs"]

    def test_validation_sample(self, fixture_paths, tmp_path):
        assert extract(fixture_paths, tmp_path, "--phenomena", "particle",
                       "--validation-per-cell", "1", "--validation-distances", "1,2") == 0
        lines = (tmp_path / "validation_sample.jsonl").read_text(encoding="utf-8").splitlines()
        assert sorted(json.loads(line)["distance"] for line in lines) == [1, 2]

    def test_reorder_without_alignment(self, fixture_paths, tmp_path, capsys):
        code = main(["extract", "--src", str(fixture_paths["src"]), "--tgt", str(fixture_paths["tgt"]),
                     "--phenomena", "reorder", "--output-dir", str(tmp_path)])
        assert code == 1
        assert "--align" in capsys.readouterr().err

    def test_empty_corpus(self, tmp_path):
        src = write_lines(tmp_path / "empty.src", [])
        tgt = write_lines(tmp_path / "empty.tgt", [])
        conllu = write_lines(tmp_path / "empty.conllu", [])
        out = tmp_path / "out"
        assert main(["extract", "--src", str(src), "--tgt", str(tgt), "--conllu", str(conllu),
                     "--phenomena", "particle", "--thresholds", "0,1", "--output-dir", str(out)]) == 0
        lines = (out / "sizes.tsv").read_text(encoding="utf-8").splitlines()
        assert lines[1] == f"{BASELINE_LABEL}\t0\t"
        assert lines[2] == "Particle\t0\t0"

    def test_empty_corpus_without_alignment(self, tmp_path, capsys):
        src = write_lines(tmp_path / "empty.src", [])
        tgt = write_lines(tmp_path / "empty.tgt", [])
        code = main(["extract", "--src", str(src), "--tgt", str(tgt), "--phenomena", "reorder",
                     "--output-dir", str(tmp_path / "out")])
        assert code == 1
        assert "--align" in capsys.readouterr().err

    def test_invalid_utf8_source_fails_cleanly(self, fixture_paths, tmp_path, capsys):
        src = tmp_path / "broken.src"
        src.write_bytes(fixture_paths["src"].read_bytes() + b"caf\xe9\n")
        tgt = write_lines(tmp_path / "broken.tgt",
                          fixture_paths["tgt"].read_text(encoding="utf-8").splitlines() + ["x"])
        code = main(["extract", "--src", str(src), "--tgt", str(tgt), "--phenomena", "particle",
                     "--output-dir", str(tmp_path / "out")])
        assert code == 1
        err = capsys.readouterr().err
        assert "line 21: invalid UTF-8" in err
        assert str(src) in err

    def test_negative_seed_is_a_usage_error(self, fixture_paths, tmp_path, capsys):
        code = main(["extract", "--src", str(fixture_paths["src"]), "--tgt", str(fixture_paths["tgt"]),
                     "--seed", "-1", "--output-dir", str(tmp_path)])
        assert code == 2
        assert "seed" in capsys.readouterr().err

    def test_missing_input_is_a_usage_error(self, tmp_path, capsys):
        code = main(["extract", "--src", str(tmp_path / "nope.src"), "--tgt", str(tmp_path / "nope.tgt"),
                     "--output-dir", str(tmp_path)])
        assert code == 2
        assert "does not exist" in capsys.readouterr().err


class TestEvaluate:

    @pytest.fixture
    def sets_dir(self, fixture_paths, tmp_path):
        out = tmp_path / "sets"
        assert extract(fixture_paths, out, "--phenomena", "particle", "--thresholds", "0") == 0
        return out

    def test_reference_as_hypothesis(self, fixture_paths, sets_dir, tmp_path):
        out = tmp_path / "eval"
        ref = str(fixture_paths["tgt"])
        assert main(["evaluate", "--hyp", ref, "--ref", ref, "--sets", str(sets_dir / "particle_d0"),
                     "--thresholds", "0,1,2,3", "--metrics", "bleu,ribes", "--output-dir", str(out)]) == 0
        lines = (out / "report.tsv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "phenomenon\tmin_distance\tn_sentences\tbleu\tribes\tspearman"
        assert lines[1] == "baseline\t0\t20\t100.00\t1.0000\t"
        assert lines[2] == "particle\t0\t8\t100.00\t1.0000\t"
        assert lines[5] == "particle\t3\t2\t100.00\t1.0000\t"
        header = (out / "bleu_table.tsv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "phenomenon\tAll\t≥1\t≥2\t≥3\tSpearman"

    def test_single_slice_has_no_spearman(self, fixture_paths, sets_dir, tmp_path):
        out = tmp_path / "eval"
        hyp = truncated_hypothesis(fixture_paths["tgt"], tmp_path / "hyp.txt")
        assert main(["evaluate", "--hyp", str(hyp), "--ref", str(fixture_paths["tgt"]),
                     "--sets", str(sets_dir / "particle_d0"), "--output-dir", str(out)]) == 0
        header = (out / "bleu_table.tsv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "phenomenon\tAll"

    def test_line_count_mismatch(self, fixture_paths, tmp_path, capsys):
        hyp = write_lines(tmp_path / "hyp.txt", ["a b c"])
        assert main(["evaluate", "--hyp", str(hyp), "--ref", str(fixture_paths["tgt"]),
                     "--output-dir", str(tmp_path / "eval")]) == 1
        assert "length mismatch" in capsys.readouterr().err

    def test_report_from_long_file(self, fixture_paths, sets_dir, tmp_path):
        ref = str(fixture_paths["tgt"])
        hyp = truncated_hypothesis(fixture_paths["tgt"], tmp_path / "hyp.txt")
        assert main(["evaluate", "--hyp", str(hyp), "--ref", ref, "--sets", str(sets_dir / "particle_d0"),
                     "--thresholds", "0,1,2", "--metrics", "bleu", "--output-dir", str(tmp_path / "eval")]) == 0
        out = tmp_path / "tables"
        assert main(["report", "--report-file", str(tmp_path / "eval" / "report.tsv"),
                     "--output-dir", str(out)]) == 0
        rendered = (out / "bleu_table.tsv").read_text(encoding="utf-8").splitlines()
        original = (tmp_path / "eval" / "bleu_table.tsv").read_text(encoding="utf-8").splitlines()
        assert rendered[0] == original[0]
        assert [line.split("\t")[:4] for line in rendered] == [line.split("\t")[:4] for line in original]
        assert not (out / "ribes_table.tsv").exists()


class TestSample:

    @pytest.fixture
    def inputs(self, fixture_paths, tmp_path):
        sets = tmp_path / "sets"
        assert extract(fixture_paths, sets, "--phenomena", "particle", "--thresholds", "1") == 0
        hyp = truncated_hypothesis(fixture_paths["tgt"], tmp_path / "hyp.txt")
        return ["--src", str(fixture_paths["src"]), "--tgt", str(fixture_paths["tgt"]), "--hyp", str(hyp),
                "--ref", str(fixture_paths["tgt"]), "--set", str(sets / "particle_d1")]

    def test_same_seed_same_report(self, inputs, tmp_path):
        for name in ("a", "b"):
            assert main(["sample", *inputs, "--n-corpora", "20", "--seed", "4",
                         "--output-dir", str(tmp_path / name)]) == 0
        for name in ("sample_report.json", "corpora.tsv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        report = json.loads((tmp_path / "a" / "sample_report.json").read_text(encoding="utf-8"))
        assert report["n_corpora"] == 20
        assert len(report["sample_scores"]) == 20
        assert report["seed"] == 4
        assert report["extra"]["subject"] == "particle_d1"

    def test_single_corpus(self, inputs, tmp_path):
        assert main(["sample", *inputs, "--n-corpora", "1", "--output-dir", str(tmp_path / "one")]) == 0
        report = json.loads((tmp_path / "one" / "sample_report.json").read_text(encoding="utf-8"))
        assert report["n_corpora"] == 1
        assert report["rank"] in (0, 1)
        assert report["extra"]["length_score_correlation"] is None

    def test_matched_mode_needs_a_set(self, fixture_paths, tmp_path, capsys):
        ref = str(fixture_paths["tgt"])
        assert main(["sample", "--src", str(fixture_paths["src"]), "--tgt", ref, "--hyp", ref, "--ref", ref,
                     "--output-dir", str(tmp_path)]) == 1
        assert "--set" in capsys.readouterr().err

    def test_random_mode(self, fixture_paths, tmp_path):
        ref = str(fixture_paths["tgt"])
        assert main(["sample", "--src", str(fixture_paths["src"]), "--tgt", ref, "--hyp", ref, "--ref", ref,
                     "--mode", "random", "--size", "5", "--n-corpora", "10", "--output-dir", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "sample_report.json").read_text(encoding="utf-8"))
        assert report["extra"]["subject"] == "baseline"
        assert report["challenge_score"] == 100.0


class TestPermute:

    @pytest.fixture
    def bitext(self, tmp_path):
        long_line = " ".join(f"t{i}" for i in range(18))
        src = write_lines(tmp_path / "in.src", [long_line] * 5 + ["a b c d e"] * 2)
        tgt = write_lines(tmp_path / "in.tgt", [f"target {i}" for i in range(7)])
        return ["--src", str(src), "--tgt", str(tgt)]

    def test_standard_sigma(self, bitext, tmp_path):
        out = tmp_path / "perm"
        assert main(["permute", *bitext, "--output-dir", str(out)]) == 0
        source = (out / "corpus.src").read_text(encoding="utf-8").splitlines()
        assert len(source) == 5
        assert source[0].split()[:3] == ["t11", "t5", "t9"]
        assert sorted(source[0].split()) == sorted(f"t{i}" for i in range(18))
        assert (out / "corpus.tgt").read_text(encoding="utf-8").splitlines()[0] == "target 0"
        assert (out / "corpus.ids").read_text(encoding="utf-8").split() == ["0", "1", "2", "3", "4"]
        assert (out / "sigma.txt").read_text(encoding="utf-8").split()[0] == "11"

    def test_holdout(self, bitext, tmp_path):
        out = tmp_path / "perm"
        assert main(["permute", *bitext, "--holdout", "2", "--seed", "3", "--output-dir", str(out)]) == 0
        train = (out / "train.ids").read_text(encoding="utf-8").split()
        test = (out / "test.ids").read_text(encoding="utf-8").split()
        assert len(test) == 2
        assert sorted(train + test, key=int) == ["0", "1", "2", "3", "4"]
        assert len((out / "test.src").read_text(encoding="utf-8").splitlines()) == 2

    def test_most_common_length_with_reverse(self, bitext, tmp_path):
        out = tmp_path / "perm"
        assert main(["permute", *bitext, "--most-common-length", "--sigma", "reverse",
                     "--output-dir", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["length"] == 18
        assert manifest["length_histogram"] == {"18": 5, "5": 2}

    def test_sigma_length_mismatch(self, bitext, tmp_path, capsys):
        assert main(["permute", *bitext, "--length", "5", "--output-dir", str(tmp_path)]) == 1
        assert "length 18" in capsys.readouterr().err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["extract", "--src", "only.src"])
    assert excinfo.value.code == 2


def test_parser_lists_subcommands():
    help_text = build_parser().format_help()
    for command in ("extract", "evaluate", "sample", "permute", "report"):
        assert command in help_text
