"""
Settings
INI defaults, .env loading, logging setup, the validated run configuration and
the reproducibility manifest written by every subcommand.
"""

import configparser
import hashlib
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from . import TOOL_NAME, __version__
from .corpus_model import Phenomenon
from .errors import LddToolkitError
from .sampling import GENERATOR_NAME

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config_template.ini"
OUTPUT_DIR_ENV = "LDD_OUTPUT_DIR"
MANIFEST_NAME = "manifest.json"

METRICS = ("bleu", "ribes")
SIGMAS = ("standard", "reverse", "random", "identity", "file")


def load_config(path: Optional[Union[str, Path]] = None) -> configparser.ConfigParser:
    """Packaged defaults, overlaid with the user's INI file when given."""
    config = configparser.ConfigParser(interpolation=None)
    config.read(DEFAULT_CONFIG_PATH, encoding="utf-8")
    if path is not None:
        if not Path(path).is_file():
            raise LddToolkitError(f"config file not found: {path}")
        config.read(path, encoding="utf-8")
    return config


def load_environment(dotenv_path: Optional[Union[str, Path]] = None) -> bool:
    return load_dotenv(dotenv_path) if dotenv_path else load_dotenv()


def default_output_dir(config: configparser.ConfigParser) -> Path:
    """LDD_OUTPUT_DIR if set, otherwise [output] output_dir."""
    env_value = os.getenv(OUTPUT_DIR_ENV)
    if env_value:
        return Path(env_value)
    return Path(config.get("output", "output_dir", fallback="ldd_output"))


def split_list(value: Optional[str]) -> List[str]:
    if not value:
        return []
    return [item.strip() for item in value.split(",") if item.strip()]


def split_ints(value: Optional[str]) -> List[int]:
    try:
        return [int(item) for item in split_list(value)]
    except ValueError as e:
        raise LddToolkitError(f"expected comma-separated integers, got '{value}'") from e


def setup_logging(config: Optional[configparser.ConfigParser] = None, level: Optional[str] = None):
    """Configure the root logger from the [logging] section; diagnostics go to stderr."""
    section = config["logging"] if config is not None and config.has_section("logging") else {}
    log_level = (level or section.get("log_level", "INFO")).upper()
    log_format = section.get("log_format", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = section.get("log_file", "")
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(level=getattr(logging, log_level, logging.INFO), format=log_format,
                        handlers=handlers, force=True)


class RunConfig(BaseModel):
    """Validated settings of one subcommand run."""
    model_config = ConfigDict(extra="forbid")

    subcommand: Literal["extract", "evaluate", "sample", "permute", "report"]
    src: Optional[Path] = None
    tgt: Optional[Path] = None
    conllu: Optional[Path] = None
    align: Optional[Path] = None
    hyp: Optional[Path] = None
    ref: Optional[Path] = None
    sets: List[Path] = Field(default_factory=list)
    report_file: Optional[Path] = None
    sigma_file: Optional[Path] = None

    phenomena: List[str] = Field(default_factory=list)
    thresholds: List[int] = Field(default_factory=list)
    reorder_threshold: int = 5
    source_language: str = "en"
    force_prep_stranding: bool = False
    strict: bool = False
    validation_per_cell: int = 0
    validation_distances: List[int] = Field(default_factory=lambda: [1, 2, 5])

    metrics: List[str] = Field(default_factory=lambda: ["bleu"])
    lowercase: bool = False
    ribes_alpha: float = 0.25
    ribes_beta: float = 0.10
    max_sentences: Optional[int] = None

    mode: Literal["matched", "random"] = "matched"
    n_corpora: int = 100
    tolerance: int = 1
    size: int = 100

    sigma: str = "standard"
    length: Optional[int] = 18
    holdout: int = 0

    seed: int = 0
    workers: int = 1
    output_dir: Path
    format: Literal["tsv", "json"] = "tsv"

    @field_validator("src", "tgt", "conllu", "align", "hyp", "ref", "report_file", "sigma_file")
    @classmethod
    def _path_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.exists():
            raise ValueError(f"path does not exist: {value}")
        return value

    @field_validator("sets")
    @classmethod
    def _sets_exist(cls, value: List[Path]) -> List[Path]:
        for path in value:
            if not path.is_dir():
                raise ValueError(f"challenge-set directory does not exist: {path}")
        return value

    @field_validator("phenomena")
    @classmethod
    def _known_phenomena(cls, value: List[str]) -> List[str]:
        known = {p.value for p in Phenomenon}
        unknown = [p for p in value if p not in known]
        if unknown:
            raise ValueError(f"unknown phenomena {unknown}; choose from {sorted(known)}")
        return value

    @field_validator("thresholds", "validation_distances")
    @classmethod
    def _non_negative(cls, value: List[int]) -> List[int]:
        if any(t < 0 for t in value):
            raise ValueError(f"thresholds must be non-negative, got {value}")
        return sorted(set(value))

    @field_validator("metrics")
    @classmethod
    def _known_metrics(cls, value: List[str]) -> List[str]:
        unknown = [m for m in value if m not in METRICS]
        if unknown:
            raise ValueError(f"unknown metrics {unknown}; choose from {list(METRICS)}")
        return value

    @field_validator("sigma")
    @classmethod
    def _known_sigma(cls, value: str) -> str:
        if value not in SIGMAS:
            raise ValueError(f"unknown sigma '{value}'; choose from {list(SIGMAS)}")
        return value

    @field_validator("reorder_threshold", "n_corpora", "workers")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be >= 1, got {value}")
        return value

    @field_validator("tolerance", "holdout", "validation_per_cell", "size", "seed")
    @classmethod
    def _not_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"must be >= 0, got {value}")
        return value

    @model_validator(mode="after")
    def _sigma_file_given(self) -> "RunConfig":
        if self.subcommand == "permute" and self.sigma == "file" and self.sigma_file is None:
            raise ValueError("sigma 'file' needs --sigma-file")
        return self

    def input_paths(self) -> List[Path]:
        paths = [p for p in (self.src, self.tgt, self.conllu, self.align, self.hyp, self.ref,
                             self.report_file, self.sigma_file) if p is not None]
        for set_dir in self.sets:
            paths.extend(sorted(p for p in set_dir.iterdir() if p.is_file() and p.name != MANIFEST_NAME))
        return paths


def file_digest(path: Union[str, Path]) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            sha.update(chunk)
    return sha.hexdigest()


def build_manifest(config: RunConfig, outputs: Sequence[Union[str, Path]],
                   extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Everything needed to rerun a subcommand; no timestamps."""
    out_dir = Path(config.output_dir)
    manifest = {
        "tool": TOOL_NAME,
        "version": __version__,
        "subcommand": config.subcommand,
        "config": config.model_dump(mode="json"),
        "seed": config.seed,
        "generator": GENERATOR_NAME,
        "inputs": {str(p): file_digest(p) for p in config.input_paths()},
        "outputs": sorted(_relative(Path(p), out_dir) for p in outputs),
    }
    if extra:
        manifest.update(extra)
    return manifest


def _relative(path: Path, root: Path) -> str:
    try:
        return path.relative_to(root).as_posix()
    except ValueError:
        return path.as_posix()


def write_manifest(config: RunConfig, outputs: Sequence[Union[str, Path]],
                   extra: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(config.output_dir) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(build_manifest(config, outputs, extra), f, indent=2, ensure_ascii=False)
        f.write("\n")
    logger.info(f"Wrote run manifest {path}")
    return path
