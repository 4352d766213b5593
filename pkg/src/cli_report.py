#!/usr/bin/env python3
"""
LDD Toolkit CLI
Subcommands tying extraction, evaluation, control sampling, corpus permutation
and table rendering into reproducible runs. Every run writes a manifest.json
next to its outputs.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import ValidationError

from . import __version__
from .corpus_model import (ChallengeSet, Phenomenon, load_bitext_files, read_challenge_set, read_lines,
                           split_tokens, write_challenge_set)
from .detectors import DetectorConfig, extract_challenge_sets, slice_by_distance
from .errors import CorpusMismatchError, LddToolkitError
from .metrics import bleu_corpus, ribes_corpus
from .permutation import (filter_by_length, format_sigma, holdout_split, permute_corpus,
                          sigma_from_name)
from .reporting import (BASELINE, SliceScore, build_score_table, build_size_table, format_table,
                        read_long_report, write_long_report, write_table)
from .sampling import (cap_record_ids, challenge_rank, length_matched_corpora, length_score_correlation,
                       mean_lengths, random_corpora, validation_sample)
from .settings import (RunConfig, default_output_dir, load_config, load_environment, setup_logging,
                       split_ints, split_list, write_manifest)

logger = logging.getLogger(__name__)

Tokens = List[str]


# ---------------------------------------------------------------------------
# extract
# ---------------------------------------------------------------------------

def run_extract(cfg: RunConfig) -> Dict:
    """Extract challenge sets, write one directory per slice and a size table."""
    records = load_bitext_files(cfg.src, cfg.tgt, cfg.conllu, cfg.align, strict=cfg.strict)
    out_dir = Path(cfg.output_dir)
    thresholds = cfg.thresholds or [0]

    configs = []
    for name in cfg.phenomena:
        phenomenon = Phenomenon(name)
        if phenomenon is Phenomenon.REORDER:
            configs.append(DetectorConfig(phenomenon, reorder_threshold=cfg.reorder_threshold))
        else:
            configs.append(DetectorConfig(phenomenon, min_distance=min(thresholds),
                                          source_language=cfg.source_language,
                                          force_prep_stranding=cfg.force_prep_stranding))

    supplied = [name for name, path in (("parse", cfg.conllu), ("alignment", cfg.align)) if path is not None]
    extracted = extract_challenge_sets(records, configs, workers=cfg.workers, supplied=supplied)

    outputs: List[Path] = []
    rows: List[SliceScore] = []
    summary = {}
    for challenge_set in extracted:
        if challenge_set.phenomenon is Phenomenon.REORDER:
            slices = [challenge_set]
        else:
            slices = slice_by_distance(challenge_set, thresholds)
        for piece in slices:
            outputs.extend(write_challenge_set(piece, records, out_dir / piece.name).values())
            rows.append(SliceScore(piece.phenomenon.value, piece.min_distance, len(piece)))
            summary[piece.name] = {
                "n_sentences": len(piece),
                "n_instances": len(piece.instances),
                "distance_histogram": {str(k): v for k, v in piece.distance_histogram().items()},
            }
    rows.append(SliceScore(BASELINE, 0, len(records)))

    size_table = build_size_table(rows)
    outputs.append(write_table(size_table, out_dir / f"sizes.{cfg.format}", cfg.format, digits=0))
    print(format_table(size_table, digits=0).to_string())

    if cfg.validation_per_cell > 0:
        lexical = [s for s in extracted if s.phenomenon.is_lexical]
        picked = validation_sample(lexical, cfg.validation_distances, cfg.validation_per_cell, cfg.seed)
        path = out_dir / "validation_sample.jsonl"
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for instance in picked:
                f.write(json.dumps(instance.to_dict(), ensure_ascii=False) + "\n")
        outputs.append(path)
        logger.info(f"Validation sample: {len(picked)} instances -> {path}")

    extra = {
        "n_records": len(records),
        "parse_mismatches": sum(1 for r in records if r.parse_mismatch),
        "skipped_parses": sum(1 for r in records if r.parse is not None and not r.parse.is_valid),
        "sets": summary,
    }
    outputs.append(write_manifest(cfg, outputs, extra))
    return {"sets": summary, "outputs": outputs}


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------

def _load_system(cfg: RunConfig) -> Tuple[List[Tokens], List[Tokens]]:
    hyp_lines = read_lines(cfg.hyp)
    ref_lines = read_lines(cfg.ref)
    if len(hyp_lines) != len(ref_lines):
        raise CorpusMismatchError(f"length mismatch {len(hyp_lines)} vs {len(ref_lines)} "
                                  f"(hypothesis vs reference lines)")
    return [split_tokens(l) for l in hyp_lines], [split_tokens(l) for l in ref_lines]


class SliceScorer:
    """Scores record subsets of one hypothesis/reference corpus."""

    def __init__(self, cfg: RunConfig, hyps: List[Tokens], refs: List[Tokens]):
        self.cfg = cfg
        self.hyps = hyps
        self.refs = refs

    def _subset(self, record_ids: Sequence[int]) -> Tuple[List[Tokens], List[Tokens]]:
        out_of_range = [rid for rid in record_ids if rid >= len(self.hyps)]
        if out_of_range:
            raise CorpusMismatchError(f"records {out_of_range[:5]} beyond the {len(self.hyps)} "
                                      f"hypothesis lines")
        return [self.hyps[rid] for rid in record_ids], [self.refs[rid] for rid in record_ids]

    def bleu(self, record_ids: Sequence[int]) -> float:
        hyps, refs = self._subset(record_ids)
        return bleu_corpus(hyps, refs, lowercase=self.cfg.lowercase).score

    def ribes(self, record_ids: Sequence[int]) -> float:
        hyps, refs = self._subset(record_ids)
        return ribes_corpus(hyps, refs, self.cfg.ribes_alpha, self.cfg.ribes_beta)

    def score(self, metric: str, record_ids: Sequence[int]) -> float:
        return self.bleu(record_ids) if metric == "bleu" else self.ribes(record_ids)

    def slice_score(self, phenomenon: str, min_distance: int, record_ids: Sequence[int]) -> SliceScore:
        ids = cap_record_ids(record_ids, self.cfg.max_sentences, self.cfg.seed)
        row = SliceScore(phenomenon, min_distance, len(ids))
        if not ids:
            logger.warning(f"{phenomenon} at distance {min_distance}: empty slice, not scored")
            return row
        hyps, refs = self._subset(ids)
        if "bleu" in self.cfg.metrics:
            report = bleu_corpus(hyps, refs, lowercase=self.cfg.lowercase)
            row.bleu = report.score
            row.details["bleu_detail"] = report.to_dict()
        if "ribes" in self.cfg.metrics:
            row.ribes = ribes_corpus(hyps, refs, self.cfg.ribes_alpha, self.cfg.ribes_beta)
        return row


def _evaluation_slices(cfg: RunConfig) -> List[ChallengeSet]:
    slices = []
    seen = set()
    for set_dir in cfg.sets:
        challenge_set = read_challenge_set(set_dir)
        usable = [t for t in cfg.thresholds if t >= challenge_set.min_distance]
        pieces = slice_by_distance(challenge_set, usable) if usable else [challenge_set]
        for piece in pieces:
            key = (piece.phenomenon, piece.min_distance)
            if key in seen:
                continue
            seen.add(key)
            slices.append(piece)
    return slices


def run_evaluate(cfg: RunConfig) -> List[SliceScore]:
    """Score the full corpus and every challenge-set slice."""
    hyps, refs = _load_system(cfg)
    scorer = SliceScorer(cfg, hyps, refs)
    out_dir = Path(cfg.output_dir)

    rows = [scorer.slice_score(BASELINE, 0, range(len(hyps)))]
    for piece in _evaluation_slices(cfg):
        rows.append(scorer.slice_score(piece.phenomenon.value, piece.min_distance, piece.record_ids))

    outputs = [write_long_report(rows, out_dir / f"report.{cfg.format}", cfg.format)]
    for metric in cfg.metrics:
        table = build_score_table(rows, metric)
        outputs.append(write_table(table, out_dir / f"{metric}_table.{cfg.format}", cfg.format))
        print(f"{metric.upper()}")
        print(format_table(table, 4 if metric == "ribes" else 2).to_string())

    outputs.append(write_manifest(cfg, outputs, {"n_slices": len(rows) - 1}))
    return rows


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def _score_corpora(scorer: SliceScorer, metric: str, corpora: List[List[int]], workers: int) -> List[float]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda ids: scorer.score(metric, ids), corpora))
    return [scorer.score(metric, ids) for ids in corpora]


def run_sample(cfg: RunConfig):
    """Compare a challenge-set score with length-matched (or random) control corpora."""
    pool = load_bitext_files(cfg.src, cfg.tgt)
    hyps, refs = _load_system(cfg)
    if len(hyps) != len(pool):
        raise CorpusMismatchError(f"length mismatch {len(pool)} vs {len(hyps)} "
                                  f"(pool lines vs hypothesis lines)")
    scorer = SliceScorer(cfg, hyps, refs)
    metric = cfg.metrics[0]
    out_dir = Path(cfg.output_dir)

    if cfg.mode == "matched":
        if len(cfg.sets) != 1:
            raise LddToolkitError("matched sampling needs exactly one challenge set (--set)")
        challenge = read_challenge_set(cfg.sets[0])
        if len(challenge) == 0:
            raise LddToolkitError(f"challenge set '{challenge.name}' is empty")
        corpora = length_matched_corpora(challenge, pool, cfg.n_corpora, cfg.tolerance, cfg.seed,
                                         workers=cfg.workers)
        challenge_score = scorer.score(metric, challenge.record_ids)
        subject = challenge.name
    else:
        corpora = random_corpora(pool, cfg.size, cfg.n_corpora, cfg.seed, workers=cfg.workers)
        challenge_score = scorer.score(metric, range(len(pool)))
        subject = BASELINE

    scores = _score_corpora(scorer, metric, corpora, cfg.workers)
    report = challenge_rank(challenge_score, scores, cfg.seed)
    report.extra = {"mode": cfg.mode, "metric": metric, "subject": subject, "tolerance": cfg.tolerance}
    try:
        report.extra["length_score_correlation"] = length_score_correlation(corpora, scores, pool)
    except LddToolkitError as e:
        logger.warning(f"Length/score correlation undefined: {e}")
        report.extra["length_score_correlation"] = None

    report_path = out_dir / "sample_report.json"
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(report_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(report.to_dict(), f, indent=2, ensure_ascii=False)
        f.write("\n")

    lengths = mean_lengths(corpora, pool)
    table = pd.DataFrame({
        "corpus_index": list(range(len(corpora))),
        "mean_length": [f"{v:.4f}" for v in lengths],
        "score": [f"{v:.4f}" for v in scores],
    })
    corpora_path = out_dir / "corpora.tsv"
    table.to_csv(corpora_path, sep="\t", index=False, lineterminator="\n")

    if report.below_all:
        print(f"{subject}: {metric} {challenge_score:.2f} is below all {report.n_corpora} control corpora")
    else:
        print(f"{subject}: {metric} {challenge_score:.2f}, {report.rank} of {report.n_corpora} "
              f"control corpora score at or below it")
    write_manifest(cfg, [report_path, corpora_path])
    return report


# ---------------------------------------------------------------------------
# permute
# ---------------------------------------------------------------------------

def _write_pairs(pairs: Sequence[Tuple[str, str]], stem: Path) -> List[Path]:
    src_path = stem.with_suffix(".src")
    tgt_path = stem.with_suffix(".tgt")
    with open(src_path, "w", encoding="utf-8", newline="\n") as src, \
            open(tgt_path, "w", encoding="utf-8", newline="\n") as tgt:
        for source, target in pairs:
            src.write(source + "\n")
            tgt.write(target + "\n")
    return [src_path, tgt_path]


def _write_ids(ids: Sequence[int], path: Path) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for i in ids:
            f.write(f"{i}\n")
    return path


def run_permute(cfg: RunConfig):
    """Filter a bitext to one source length and permute its source side."""
    src_lines = read_lines(cfg.src)
    tgt_lines = read_lines(cfg.tgt)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    length = cfg.length
    if length is None:
        length = filter_by_length(src_lines, tgt_lines, 0).most_common_length
        if length is None:
            raise LddToolkitError("cannot pick the most common length of an empty corpus")
        logger.info(f"Most common source length: {length}")
    result = filter_by_length(src_lines, tgt_lines, length)

    sigma = sigma_from_name(cfg.sigma, length, cfg.seed, cfg.sigma_file)
    permuted = permute_corpus(result.pairs, sigma)

    sigma_path = out_dir / "sigma.txt"
    with open(sigma_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_sigma(sigma) + "\n")
    outputs = [sigma_path]

    if cfg.holdout:
        train, test = holdout_split(len(permuted), cfg.holdout, cfg.seed)
        outputs += _write_pairs([permuted[i] for i in train], out_dir / "train")
        outputs += _write_pairs([permuted[i] for i in test], out_dir / "test")
        outputs.append(_write_ids([result.indices[i] for i in train], out_dir / "train.ids"))
        outputs.append(_write_ids([result.indices[i] for i in test], out_dir / "test.ids"))
    else:
        outputs += _write_pairs(permuted, out_dir / "corpus")
        outputs.append(_write_ids(result.indices, out_dir / "corpus.ids"))

    print(f"Permuted {len(permuted)} pairs of length {length} with sigma '{cfg.sigma}': {format_sigma(sigma)}")
    extra = {
        "length": length,
        "n_pairs": len(permuted),
        "sigma_map": list(sigma.map),
        "length_histogram": {str(k): v for k, v in result.histogram.items()},
    }
    write_manifest(cfg, outputs, extra)
    return result


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def run_report(cfg: RunConfig):
    """Render wide tables from an evaluate report and/or challenge-set directories."""
    if cfg.report_file is None and not cfg.sets:
        raise LddToolkitError("report needs --report-file or --sets")
    out_dir = Path(cfg.output_dir)
    outputs = []

    if cfg.report_file is not None:
        rows = read_long_report(cfg.report_file)
        for metric in ("bleu", "ribes"):
            if not any(getattr(r, metric) is not None for r in rows):
                continue
            table = build_score_table(rows, metric)
            outputs.append(write_table(table, out_dir / f"{metric}_table.{cfg.format}", cfg.format))
            print(metric.upper())
            print(format_table(table, 4 if metric == "ribes" else 2).to_string())

    if cfg.sets:
        rows = []
        for set_dir in cfg.sets:
            challenge_set = read_challenge_set(set_dir)
            rows.append(SliceScore(challenge_set.phenomenon.value, challenge_set.min_distance,
                                   len(challenge_set)))
        if cfg.src is not None:
            rows.append(SliceScore(BASELINE, 0, len(read_lines(cfg.src))))
        table = build_size_table(rows)
        outputs.append(write_table(table, out_dir / f"sizes.{cfg.format}", cfg.format, digits=0))
        print(format_table(table, digits=0).to_string())

    write_manifest(cfg, outputs)
    return outputs


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

RUNNERS: Dict[str, Callable[[RunConfig], object]] = {
    "extract": run_extract,
    "evaluate": run_evaluate,
    "sample": run_sample,
    "permute": run_permute,
    "report": run_report,
}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="INI file overriding config_template.ini")
    parser.add_argument("--output-dir", help="Output directory (default: $LDD_OUTPUT_DIR or [output] output_dir)")
    parser.add_argument("--format", choices=["tsv", "json"], help="Report format")
    parser.add_argument("--seed", type=int, help="Base seed for every random choice")
    parser.add_argument("--workers", type=int, help="Worker threads")
    parser.add_argument("--log-level", help="Logging level (default from [logging])")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ldd_toolkit", description="LDD challenge-set extraction and evaluation")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    extract = subparsers.add_parser("extract", help="Extract challenge sets from annotated bitext")
    extract.add_argument("--src", required=True, help="Tokenized source, one sentence per line")
    extract.add_argument("--tgt", required=True, help="Tokenized target, one sentence per line")
    extract.add_argument("--conllu", help="Source-side CoNLL-U parses")
    extract.add_argument("--align", help="Pharaoh word alignments")
    extract.add_argument("--phenomena", help="Comma-separated phenomena")
    extract.add_argument("--thresholds", help="Comma-separated minimum distances")
    extract.add_argument("--reorder-threshold", type=int)
    extract.add_argument("--source-language")
    extract.add_argument("--force-prep-stranding", action="store_true", default=None)
    extract.add_argument("--strict", action="store_true", default=None,
                         help="Abort on the first ill-formed CoNLL-U sentence")
    extract.add_argument("--validation-per-cell", type=int,
                         help="Instances per (phenomenon, distance) in a manual validation sample")
    extract.add_argument("--validation-distances", help="Comma-separated exact distances to sample")
    _add_common(extract)

    evaluate = subparsers.add_parser("evaluate", help="Score system output on challenge sets")
    evaluate.add_argument("--hyp", required=True, help="System output for the full corpus")
    evaluate.add_argument("--ref", required=True, help="Reference for the full corpus")
    evaluate.add_argument("--sets", nargs="*", default=None, help="Challenge-set directories")
    evaluate.add_argument("--thresholds", help="Re-slice each set at these minimum distances")
    evaluate.add_argument("--metrics", help="Comma-separated: bleu, ribes")
    evaluate.add_argument("--lowercase", action="store_true", default=None)
    evaluate.add_argument("--max-sentences", type=int, help="Seeded cap on sentences per slice")
    _add_common(evaluate)

    sample = subparsers.add_parser("sample", help="Control corpora for a challenge set")
    sample.add_argument("--src", required=True, help="Pool source side")
    sample.add_argument("--tgt", required=True, help="Pool target side")
    sample.add_argument("--hyp", required=True)
    sample.add_argument("--ref", required=True)
    sample.add_argument("--set", dest="sets", action="append", help="Challenge-set directory (matched mode)")
    sample.add_argument("--mode", choices=["matched", "random"])
    sample.add_argument("--n-corpora", type=int)
    sample.add_argument("--tolerance", type=int, help="Allowed source-length difference")
    sample.add_argument("--size", type=int, help="Corpus size in random mode")
    sample.add_argument("--metrics", help="Score metric (first of the list is used)")
    sample.add_argument("--lowercase", action="store_true", default=None)
    _add_common(sample)

    permute = subparsers.add_parser("permute", help="Fixed-length filtering and source permutation")
    permute.add_argument("--src", required=True)
    permute.add_argument("--tgt", required=True)
    permute.add_argument("--length", type=int, help="Source length to keep")
    permute.add_argument("--most-common-length", action="store_true",
                         help="Keep the most frequent source length")
    permute.add_argument("--sigma", choices=["standard", "reverse", "random", "identity", "file"])
    permute.add_argument("--sigma-file", help="Permutation as space-separated integers")
    permute.add_argument("--holdout", type=int, help="Sentences held out as a test split")
    _add_common(permute)

    report = subparsers.add_parser("report", help="Render tables from earlier runs")
    report.add_argument("--report-file", help="Long report written by evaluate")
    report.add_argument("--sets", nargs="*", default=None, help="Challenge-set directories for a size table")
    report.add_argument("--src", help="Full-corpus source, for the baseline size row")
    _add_common(report)
    return parser


def _pick(value, fallback):
    return fallback if value is None else value


def resolve_config(args: argparse.Namespace, ini) -> RunConfig:
    """Merge command-line flags over INI values into a validated RunConfig."""
    command = args.command
    def arg(name: str):
        return getattr(args, name, None)

    seed_section = "permutation" if command == "permute" else "sampling"
    max_sentences = ini.get("metrics", "max_sentences", fallback="").strip()
    ini_length = ini.get("permutation", "length", fallback="").strip()
    if arg("most_common_length"):
        length: Optional[int] = None
    else:
        length = _pick(arg("length"), int(ini_length) if ini_length else None)

    values = {
        "subcommand": command,
        "src": arg("src"),
        "tgt": arg("tgt"),
        "conllu": arg("conllu"),
        "align": arg("align"),
        "hyp": arg("hyp"),
        "ref": arg("ref"),
        "sets": arg("sets") or [],
        "report_file": arg("report_file"),
        "sigma_file": arg("sigma_file"),
        "phenomena": split_list(_pick(arg("phenomena"), ini.get("extraction", "phenomena", fallback=""))),
        "thresholds": split_ints(_pick(arg("thresholds"),
                                       ini.get("extraction", "thresholds", fallback="0")
                                       if command == "extract" else "")),
        "reorder_threshold": _pick(arg("reorder_threshold"),
                                   ini.getint("extraction", "reorder_threshold", fallback=5)),
        "source_language": _pick(arg("source_language"),
                                 ini.get("extraction", "source_language", fallback="en")),
        "force_prep_stranding": _pick(arg("force_prep_stranding"),
                                      ini.getboolean("extraction", "force_prep_stranding", fallback=False)),
        "strict": _pick(arg("strict"), ini.getboolean("extraction", "strict", fallback=False)),
        "validation_per_cell": _pick(arg("validation_per_cell"),
                                     ini.getint("extraction", "validation_per_cell", fallback=0)),
        "validation_distances": split_ints(_pick(arg("validation_distances"),
                                                 ini.get("extraction", "validation_distances",
                                                         fallback="1,2,5"))),
        "metrics": split_list(_pick(arg("metrics"), ini.get("metrics", "metrics", fallback="bleu"))),
        "lowercase": _pick(arg("lowercase"), ini.getboolean("metrics", "lowercase", fallback=False)),
        "ribes_alpha": ini.getfloat("metrics", "ribes_alpha", fallback=0.25),
        "ribes_beta": ini.getfloat("metrics", "ribes_beta", fallback=0.10),
        "max_sentences": _pick(arg("max_sentences"), int(max_sentences) if max_sentences else None),
        "mode": _pick(arg("mode"), ini.get("sampling", "mode", fallback="matched")),
        "n_corpora": _pick(arg("n_corpora"), ini.getint("sampling", "n_corpora", fallback=100)),
        "tolerance": _pick(arg("tolerance"), ini.getint("sampling", "tolerance", fallback=1)),
        "size": _pick(arg("size"), ini.getint("sampling", "size", fallback=100)),
        "sigma": _pick(arg("sigma"), ini.get("permutation", "sigma", fallback="standard")),
        "length": length,
        "holdout": _pick(arg("holdout"), ini.getint("permutation", "holdout", fallback=0)),
        "seed": _pick(arg("seed"), ini.getint(seed_section, "seed", fallback=0)),
        "workers": _pick(arg("workers"), ini.getint("extraction", "workers", fallback=1)),
        "output_dir": _pick(arg("output_dir"), default_output_dir(ini)),
        "format": _pick(arg("format"), ini.get("output", "format", fallback="tsv")),
    }
    if command != "extract" and arg("phenomena") is None:
        values["phenomena"] = []
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    load_environment()

    try:
        ini = load_config(args.config)
        setup_logging(ini, args.log_level)
        cfg = resolve_config(args, ini)
    except ValidationError as e:
        logger.error(f"Invalid arguments for {args.command}: {e}")
        return 2
    except (LddToolkitError, ValueError) as e:
        logger.error(f"Configuration error: {e}")
        return 2

    logger.info(f"Running {cfg.subcommand} (seed {cfg.seed}) -> {cfg.output_dir}")
    try:
        RUNNERS[cfg.subcommand](cfg)
    except LddToolkitError as e:
        logger.error(f"{cfg.subcommand} failed: {e}")
        return 1
    except UnicodeDecodeError as e:
        logger.error(f"{cfg.subcommand} failed: input is not valid UTF-8 ({e.reason})")
        return 1
    logger.info(f"{cfg.subcommand} finished")
    return 0


if __name__ == "__main__":
    sys.exit(main())
