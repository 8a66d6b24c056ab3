"""End-to-end batch pipeline with file-cached stages.

Each stage reads its inputs from the output directory and writes documented
artifacts back into it, so stages can run one at a time (CLI subcommands) or
all at once; both paths flow through the same files and produce identical
bytes.  ``run_pipeline`` builds everything in a temporary directory first and
only moves artifacts into place on success.
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
import tempfile
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from . import __version__
from .annotations import (
    bot_threshold_sweep,
    load_account_types,
    load_bot_scores,
    news_source_concentration,
    write_concentration_json,
    write_sweep_csv,
)
from .commnet import (
    CommNetwork,
    NetworkKind,
    all_communication,
    attach_stances,
    build_network,
    export_graph,
    group_subgraph,
    read_network_json,
    reciprocal_subnetwork,
    write_network_json,
)
from .corpus import dump_corpus, load_corpus
from .hashtag_graph import (
    PropagationConfig,
    SeedSpec,
    build_cooccurrence_graph,
    propagate_labels,
    read_graph_json,
    read_labels_csv,
    seed_labels,
    write_graph_json,
    write_labels_csv,
)
from .netmetrics import echo_chamberness, influence_base, super_friends, super_spreaders, write_influencer_csv
from .stance import Stance, classify_users, read_stance_csv, write_stance_csv
from .textlab import (
    default_stopwords,
    lda_fit,
    load_stopwords,
    tokenize,
    unigram_frequencies,
    write_frequency_csv,
    write_topics_json,
)

__all__ = [
    "PipelineConfig",
    "ConfigError",
    "StageError",
    "STAGE_ORDER",
    "run_pipeline",
    "run_stage",
]

logger = logging.getLogger(__name__)

CORPUS_FILE = "corpus.jsonl"
GRAPH_FILE = "hashtag_graph.json"
LABELS_FILE = "hashtag_labels.csv"
STANCE_FILE = "stance.csv"
NETWORKS_DIR = "networks"
METRICS_FILE = "metrics.json"
INFLUENCER_SUMMARY_FILE = "influencer_summary.json"
TEXT_DIR = "text"
SWEEP_FILE = "bot_sweep.csv"
CONCENTRATION_FILE = "concentration.json"
MANIFEST_FILE = "manifest.json"

_NETWORK_NAMES = ("retweet", "mention", "reply", "all_communication", "reciprocal")
_INFLUENCER_GROUPS = (Stance.BELIEVER, Stance.DISBELIEVER)
_DEFAULT_GRID = tuple(round(i * 0.05, 2) for i in range(21))


class ConfigError(ValueError):
    """Invalid pipeline configuration; raised before any stage runs."""


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


@dataclass
class PipelineConfig:
    """All pipeline knobs; mirrors the key=value config file one to one."""

    corpus_path: Path
    seed_file: Path
    bot_scores_path: Path
    account_types_path: Path
    output_dir: Path
    strict_ingest: bool = False
    min_cooccurrence: int = 1
    gamma: int = 100
    max_passes: int = 1_000_000
    unlabeled_as_zero: bool = False
    presence_weighting: bool = False
    include_retweet_hashtags: bool = True
    include_retweet_mentions: bool = True
    reciprocal_base: str = "all_communication"
    top_k: int = 3
    lda_topics: int = 10
    lda_alpha: float | None = None
    lda_beta: float = 0.01
    lda_iterations: int = 1000
    lda_pool_by_user: bool = False
    rng_seed: int = 0
    stopword_file: Path | None = None
    topics_include_hashtags: bool = True
    topics_exclude_hashtags_in_report: bool = False
    frequencies_include_hashtags: bool = False
    top_n_words: int = 10
    sweep_grid: tuple[float, ...] = _DEFAULT_GRID
    sweep_include_global: bool = False
    export_formats: tuple[str, ...] = ("csv",)

    def validate(self) -> None:
        for name in ("corpus_path", "seed_file", "bot_scores_path", "account_types_path"):
            path = getattr(self, name)
            if not Path(path).is_file():
                raise ConfigError(f"{name} does not exist: {path}")
        if self.stopword_file is not None and not Path(self.stopword_file).is_file():
            raise ConfigError(f"stopword_file does not exist: {self.stopword_file}")
        if self.reciprocal_base not in _NETWORK_NAMES[:4]:
            raise ConfigError(f"reciprocal_base must be one of {_NETWORK_NAMES[:4]}")
        for fmt in self.export_formats:
            if fmt not in ("csv", "dot", "gexf"):
                raise ConfigError(f"unknown export format {fmt!r}")
        if self.min_cooccurrence < 1 or self.gamma < 1 or self.max_passes < 1:
            raise ConfigError("min_cooccurrence, gamma, and max_passes must be >= 1")
        if self.top_k < 1 or self.lda_topics < 1 or self.top_n_words < 1:
            raise ConfigError("top_k, lda_topics, and top_n_words must be >= 1")
        if any(not 0.0 <= t <= 1.0 for t in self.sweep_grid):
            raise ConfigError("sweep_grid values must lie in [0, 1]")
        if any(b < a for a, b in zip(self.sweep_grid, self.sweep_grid[1:])):
            raise ConfigError("sweep_grid must be ascending")

    def to_text(self) -> str:
        """Canonical key=value dump (sorted keys); feeds the config hash and
        the manifest, and parses back via ``PipelineConfig.from_text``."""
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            value = getattr(self, f.name)
            if value is None:
                rendered = ""
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, tuple):
                rendered = ",".join(str(v) for v in value)
            else:
                rendered = str(value)
            lines.append(f"{f.name} = {rendered}")
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    @classmethod
    def from_text(cls, text: str, base_dir: Path | None = None) -> "PipelineConfig":
        raw: dict[str, str] = {}
        for line_no, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"line {line_no}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            raw[key.strip()] = value.strip()
        return cls._from_raw(raw, base_dir or Path.cwd())

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), base_dir=path.resolve().parent)

    @classmethod
    def _from_raw(cls, raw: dict[str, str], base_dir: Path) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key in ("corpus_path", "seed_file", "bot_scores_path", "account_types_path", "output_dir"):
            if key not in raw:
                raise ConfigError(f"missing required config key {key!r}")

        def path_of(value: str) -> Path:
            p = Path(value)
            return p if p.is_absolute() else (base_dir / p)

        def boolean(key: str, value: str) -> bool:
            if value.lower() in ("true", "1", "yes"):
                return True
            if value.lower() in ("false", "0", "no"):
                return False
            raise ConfigError(f"{key}: expected true/false, got {value!r}")

        kwargs: dict[str, object] = {}
        for key, value in raw.items():
            if key in ("corpus_path", "seed_file", "bot_scores_path", "account_types_path", "output_dir"):
                kwargs[key] = path_of(value)
            elif key == "stopword_file":
                kwargs[key] = path_of(value) if value else None
            elif key in (
                "strict_ingest",
                "unlabeled_as_zero",
                "presence_weighting",
                "include_retweet_hashtags",
                "include_retweet_mentions",
                "lda_pool_by_user",
                "topics_include_hashtags",
                "topics_exclude_hashtags_in_report",
                "frequencies_include_hashtags",
                "sweep_include_global",
            ):
                kwargs[key] = boolean(key, value)
            elif key in ("min_cooccurrence", "gamma", "max_passes", "top_k", "lda_topics", "lda_iterations", "rng_seed", "top_n_words"):
                kwargs[key] = int(value)
            elif key in ("lda_beta",):
                kwargs[key] = float(value)
            elif key == "lda_alpha":
                kwargs[key] = float(value) if value else None
            elif key == "sweep_grid":
                kwargs[key] = tuple(float(v) for v in value.split(",")) if value else _DEFAULT_GRID
            elif key == "export_formats":
                kwargs[key] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif key == "reciprocal_base":
                kwargs[key] = value
        return cls(**kwargs)  # type: ignore[arg-type]


def _require(workdir: Path, rel: str, stage: str, producer: str) -> Path:
    path = workdir / rel
    if not path.exists():
        raise StageError(stage, f"missing intermediate {rel!r}; run the {producer} stage first")
    return path


def _write_json(path: Path, payload: object) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def stage_ingest(cfg: PipelineConfig, workdir: Path) -> None:
    corpus = load_corpus(cfg.corpus_path, strict=cfg.strict_ingest)
    if corpus.skipped_count or corpus.duplicate_count:
        logger.warning(
            "ingest: skipped %d malformed line(s), dropped %d duplicate id(s)",
            corpus.skipped_count,
            corpus.duplicate_count,
        )
    dump_corpus(corpus, workdir / CORPUS_FILE)


def stage_hashtags(cfg: PipelineConfig, workdir: Path) -> None:
    corpus = load_corpus(_require(workdir, CORPUS_FILE, "hashtags", "ingest"))
    graph = build_cooccurrence_graph(corpus, cfg.min_cooccurrence)
    write_graph_json(graph, workdir / GRAPH_FILE)


def stage_propagate(cfg: PipelineConfig, workdir: Path) -> None:
    graph = read_graph_json(_require(workdir, GRAPH_FILE, "propagate", "hashtags"))
    seeds = SeedSpec.from_csv(cfg.seed_file)
    seeded, missing = seed_labels(graph, seeds)
    if missing:
        logger.warning("propagate: seed hashtags absent from the graph: %s", ", ".join(missing))
    labels = propagate_labels(
        seeded,
        PropagationConfig(
            gamma=cfg.gamma,
            max_passes=cfg.max_passes,
            unlabeled_as_zero=cfg.unlabeled_as_zero,
        ),
    )
    write_labels_csv(labels, workdir / LABELS_FILE)


def stage_classify(cfg: PipelineConfig, workdir: Path) -> None:
    corpus = load_corpus(_require(workdir, CORPUS_FILE, "classify", "ingest"))
    labels = read_labels_csv(_require(workdir, LABELS_FILE, "classify", "propagate"))
    table = classify_users(
        corpus,
        labels,
        count_weighting=not cfg.presence_weighting,
        include_retweet_hashtags=cfg.include_retweet_hashtags,
    )
    write_stance_csv(table, workdir / STANCE_FILE)


def stage_networks(cfg: PipelineConfig, workdir: Path) -> None:
    corpus = load_corpus(_require(workdir, CORPUS_FILE, "networks", "ingest"))
    table = read_stance_csv(_require(workdir, STANCE_FILE, "networks", "classify"))

    retweet = build_network(corpus, NetworkKind.RETWEET)
    mention = build_network(corpus, NetworkKind.MENTION, include_retweet_mentions=cfg.include_retweet_mentions)
    reply = build_network(corpus, NetworkKind.REPLY)
    combined = all_communication(retweet, mention, reply, corpus)
    bases = {
        "retweet": retweet,
        "mention": mention,
        "reply": reply,
        "all_communication": combined,
    }
    reciprocal = reciprocal_subnetwork(bases[cfg.reciprocal_base])

    nets = dict(bases)
    nets["reciprocal"] = reciprocal
    net_dir = workdir / NETWORKS_DIR
    net_dir.mkdir(parents=True, exist_ok=True)
    for name in _NETWORK_NAMES:
        net = attach_stances(nets[name], table)
        write_network_json(net, net_dir / f"{name}.json")
        for fmt in cfg.export_formats:
            suffix = "edges.csv" if fmt == "csv" else fmt
            export_graph(net, fmt, net_dir / f"{name}.{suffix}")


def _load_cached_network(workdir: Path, name: str, stage: str) -> CommNetwork:
    return read_network_json(_require(workdir, f"{NETWORKS_DIR}/{name}.json", stage, "networks"))


def stage_metrics(cfg: PipelineConfig, workdir: Path) -> None:
    table = read_stance_csv(_require(workdir, STANCE_FILE, "metrics", "classify"))
    combined = _load_cached_network(workdir, "all_communication", "metrics")
    mention = _load_cached_network(workdir, "mention", "metrics")
    retweet = _load_cached_network(workdir, "retweet", "metrics")
    reciprocal = _load_cached_network(workdir, "reciprocal", "metrics")

    echo_rows = []
    for stance in _INFLUENCER_GROUPS:
        for with_unclassified in (False, True):
            groups = {stance} | ({Stance.UNCLASSIFIED} if with_unclassified else set())
            result = echo_chamberness(group_subgraph(combined, table, groups))
            echo_rows.append(
                {
                    "group": stance.value,
                    "with_unclassified": with_unclassified,
                    "r": result.reciprocity,
                    "d": result.density,
                    "e": result.echo_chamberness,
                    "n_nodes": result.node_count,
                    "n_edges": result.edge_count,
                }
            )
    echo_rows.sort(key=lambda row: (row["group"], row["with_unclassified"]))
    _write_json(workdir / METRICS_FILE, echo_rows)

    base = influence_base(mention, retweet)
    summary: dict[str, dict] = {"k": cfg.top_k, "super_spreaders": {}, "super_friends": {}}
    for stance in _INFLUENCER_GROUPS:
        spread = super_spreaders(group_subgraph(base, table, {stance}), cfg.top_k)
        friends = super_friends(group_subgraph(reciprocal, table, {stance}), cfg.top_k)
        write_influencer_csv(spread, workdir / f"super_spreaders_{stance.value}.csv")
        write_influencer_csv(friends, workdir / f"super_friends_{stance.value}.csv")
        summary["super_spreaders"][stance.value] = {
            "super_count": len(spread.super_accounts),
            "node_count": len(spread.measures),
            "fraction": spread.fraction,
        }
        summary["super_friends"][stance.value] = {
            "super_count": len(friends.super_accounts),
            "node_count": len(friends.measures),
            "fraction": friends.fraction,
        }
    _write_json(workdir / INFLUENCER_SUMMARY_FILE, summary)


def stage_text(cfg: PipelineConfig, workdir: Path) -> None:
    corpus = load_corpus(_require(workdir, CORPUS_FILE, "text", "ingest"))
    table = read_stance_csv(_require(workdir, STANCE_FILE, "text", "classify"))
    stopwords = load_stopwords(cfg.stopword_file) if cfg.stopword_file else default_stopwords()
    hashtag_vocab = corpus.all_hashtags()

    text_dir = workdir / TEXT_DIR
    text_dir.mkdir(parents=True, exist_ok=True)
    for stance in _INFLUENCER_GROUPS:
        members = table.group(stance)
        tweets = [t for t in corpus.tweets if t.user_id in members]

        freq_docs = tokenize(tweets, stopwords, include_hashtags=cfg.frequencies_include_hashtags)
        frequencies = unigram_frequencies(freq_docs, cfg.top_n_words) if freq_docs else []
        write_frequency_csv(frequencies, text_dir / f"frequencies_{stance.value}.csv")

        topic_docs = [
            doc
            for doc in tokenize(
                tweets,
                stopwords,
                include_hashtags=cfg.topics_include_hashtags,
                pool_by_user=cfg.lda_pool_by_user,
            )
            if doc.tokens
        ]
        topics_path = text_dir / f"topics_{stance.value}.json"
        if topic_docs:
            model = lda_fit(
                topic_docs,
                cfg.lda_topics,
                alpha=cfg.lda_alpha,
                beta=cfg.lda_beta,
                iterations=cfg.lda_iterations,
                seed=cfg.rng_seed,
            )
            exclude = hashtag_vocab if cfg.topics_exclude_hashtags_in_report else None
            write_topics_json(model, topics_path, cfg.top_n_words, exclude=exclude)
        else:
            _write_json(topics_path, [])


def stage_annotations(cfg: PipelineConfig, workdir: Path) -> None:
    corpus = load_corpus(_require(workdir, CORPUS_FILE, "annotations", "ingest"))
    table = read_stance_csv(_require(workdir, STANCE_FILE, "annotations", "classify"))
    scores = load_bot_scores(cfg.bot_scores_path)
    types = load_account_types(cfg.account_types_path)
    rows = bot_threshold_sweep(corpus, table, scores, cfg.sweep_grid, include_global=cfg.sweep_include_global)
    write_sweep_csv(rows, workdir / SWEEP_FILE)
    write_concentration_json(news_source_concentration(corpus, table, types), workdir / CONCENTRATION_FILE)


def bundle_files(cfg: PipelineConfig) -> dict[str, str]:
    """Expected bundle artifacts (relative path -> producing stage)."""
    out = {
        CORPUS_FILE: "ingest",
        GRAPH_FILE: "hashtags",
        LABELS_FILE: "propagate",
        STANCE_FILE: "classify",
        METRICS_FILE: "metrics",
        INFLUENCER_SUMMARY_FILE: "metrics",
        SWEEP_FILE: "annotations",
        CONCENTRATION_FILE: "annotations",
    }
    for name in _NETWORK_NAMES:
        out[f"{NETWORKS_DIR}/{name}.json"] = "networks"
        for fmt in cfg.export_formats:
            suffix = "edges.csv" if fmt == "csv" else fmt
            out[f"{NETWORKS_DIR}/{name}.{suffix}"] = "networks"
    for stance in _INFLUENCER_GROUPS:
        out[f"super_spreaders_{stance.value}.csv"] = "metrics"
        out[f"super_friends_{stance.value}.csv"] = "metrics"
        out[f"{TEXT_DIR}/frequencies_{stance.value}.csv"] = "text"
        out[f"{TEXT_DIR}/topics_{stance.value}.json"] = "text"
    return out


def _file_sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def stage_report(cfg: PipelineConfig, workdir: Path) -> None:
    """Verify the bundle and write the manifest (the only timestamped file)."""
    expected = bundle_files(cfg)
    for rel, producer in sorted(expected.items()):
        _require(workdir, rel, "report", producer)
    inputs = {
        "corpus_path": _file_sha256(Path(cfg.corpus_path)),
        "seed_file": _file_sha256(Path(cfg.seed_file)),
        "bot_scores_path": _file_sha256(Path(cfg.bot_scores_path)),
        "account_types_path": _file_sha256(Path(cfg.account_types_path)),
    }
    if cfg.stopword_file is not None:
        inputs["stopword_file"] = _file_sha256(Path(cfg.stopword_file))
    manifest = {
        "artifact": "stancelab",
        "version": __version__,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "config_hash": cfg.config_hash(),
        "config_text": cfg.to_text(),
        "rng_seed": cfg.rng_seed,
        "input_digests": inputs,
        "outputs": {rel: _file_sha256(workdir / rel) for rel in sorted(expected)},
    }
    _write_json(workdir / MANIFEST_FILE, manifest)


_STAGES: dict[str, Callable[[PipelineConfig, Path], None]] = {
    "ingest": stage_ingest,
    "hashtags": stage_hashtags,
    "propagate": stage_propagate,
    "classify": stage_classify,
    "networks": stage_networks,
    "metrics": stage_metrics,
    "text": stage_text,
    "annotations": stage_annotations,
    "report": stage_report,
}

STAGE_ORDER = tuple(_STAGES)


def run_stage(name: str, cfg: PipelineConfig, workdir: Path | None = None) -> None:
    """Run one stage against the output directory (creates it if needed)."""
    cfg.validate()
    workdir = Path(workdir) if workdir is not None else Path(cfg.output_dir)
    workdir.mkdir(parents=True, exist_ok=True)
    try:
        _STAGES[name](cfg, workdir)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, str(exc)) from exc


def run_pipeline(cfg: PipelineConfig) -> Path:
    """Run every stage and assemble the report bundle.

    Artifacts are staged in a temporary sibling directory and moved into
    ``cfg.output_dir`` only after all stages succeed, so a failing stage
    leaves no partial outputs behind.
    """
    cfg.validate()
    out_dir = Path(cfg.output_dir)
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}-", dir=out_dir.parent))
    try:
        for name, fn in _STAGES.items():
            try:
                fn(cfg, tmp)
            except StageError:
                raise
            except Exception as exc:
                raise StageError(name, str(exc)) from exc
        out_dir.mkdir(parents=True, exist_ok=True)
        shutil.copytree(tmp, out_dir, dirs_exist_ok=True)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    return out_dir
