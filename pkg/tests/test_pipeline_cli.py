import hashlib
import json
from dataclasses import replace
from pathlib import Path

import pytest

from stancelab.cli import main
from stancelab.demo import write_demo_config, write_demo_inputs
from stancelab.pipeline import (
    STAGE_ORDER,
    ConfigError,
    PipelineConfig,
    StageError,
    bundle_files,
    run_pipeline,
    run_stage,
)


@pytest.fixture()
def demo_cfg(tmp_path):
    cfg_path = write_demo_config(tmp_path / "inputs", output_dir=tmp_path / "out")
    return cfg_path, PipelineConfig.from_file(cfg_path)


def digest_tree(root: Path, skip_manifest: bool = True) -> dict[str, str]:
    out = {}
    for p in sorted(Path(root).rglob("*")):
        if p.is_file() and not (skip_manifest and p.name == "manifest.json"):
            out[str(p.relative_to(root))] = hashlib.sha256(p.read_bytes()).hexdigest()
    return out


class TestConfig:
    def test_file_roundtrip(self, demo_cfg):
        _, cfg = demo_cfg
        again = PipelineConfig.from_text(cfg.to_text())
        assert again == cfg
        assert again.config_hash() == cfg.config_hash()

    def test_unknown_key_rejected(self, demo_cfg):
        cfg_path, _ = demo_cfg
        text = cfg_path.read_text() + "mystery_knob = 3\n"
        with pytest.raises(ConfigError, match="mystery_knob"):
            PipelineConfig.from_text(text)

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="corpus_path"):
            PipelineConfig.from_text("output_dir = /tmp/x\n")

    def test_missing_input_file_fails_validation(self, demo_cfg, tmp_path):
        _, cfg = demo_cfg
        broken = replace(cfg, corpus_path=tmp_path / "nope.jsonl")
        with pytest.raises(ConfigError, match="corpus_path"):
            broken.validate()

    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        write_demo_inputs(tmp_path)
        cfg_file = tmp_path / "c.cfg"
        cfg_file.write_text(
            "corpus_path = corpus.jsonl\nseed_file = seeds.csv\n"
            "bot_scores_path = bot_scores.csv\naccount_types_path = account_types.csv\n"
            "output_dir = out\n",
            encoding="utf-8",
        )
        cfg = PipelineConfig.from_file(cfg_file)
        assert cfg.corpus_path == tmp_path / "corpus.jsonl"
        cfg.validate()

    def test_bad_values_rejected(self, demo_cfg):
        _, cfg = demo_cfg
        with pytest.raises(ConfigError):
            replace(cfg, gamma=0).validate()
        with pytest.raises(ConfigError):
            replace(cfg, sweep_grid=(0.5, 0.1)).validate()
        with pytest.raises(ConfigError):
            replace(cfg, export_formats=("png",)).validate()
        with pytest.raises(ConfigError):
            replace(cfg, reciprocal_base="friendship").validate()


class TestRunPipeline:
    def test_bundle_is_complete(self, demo_cfg):
        _, cfg = demo_cfg
        out = run_pipeline(cfg)
        for rel in bundle_files(cfg):
            assert (out / rel).is_file(), rel
        assert (out / "manifest.json").is_file()

    def test_schemas(self, demo_cfg):
        _, cfg = demo_cfg
        out = run_pipeline(cfg)
        stance_header = (out / "stance.csv").read_text().splitlines()[0]
        assert stance_header == "user_id,polarity,stance,hashtag_count"
        metrics = json.loads((out / "metrics.json").read_text())
        assert {row["group"] for row in metrics} == {"believer", "disbeliever"}
        for row in metrics:
            assert set(row) == {"group", "with_unclassified", "r", "d", "e", "n_nodes", "n_edges"}
            assert abs(row["e"] - (row["r"] * row["d"]) ** (1 / 3)) < 1e-12
        sweep_header = (out / "bot_sweep.csv").read_text().splitlines()[0]
        assert sweep_header == "threshold,group,account_fraction,tweet_fraction,unscored_count"
        topics = json.loads((out / "text" / "topics_believer.json").read_text())
        assert isinstance(topics, list) and topics
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config_hash"] == cfg.config_hash()
        for rel, digest in manifest["outputs"].items():
            assert hashlib.sha256((out / rel).read_bytes()).hexdigest() == digest

    def test_rerun_is_byte_identical(self, demo_cfg, tmp_path):
        _, cfg = demo_cfg
        out_a = run_pipeline(replace(cfg, output_dir=tmp_path / "a"))
        out_b = run_pipeline(replace(cfg, output_dir=tmp_path / "b"))
        assert digest_tree(out_a) == digest_tree(out_b)

    def test_failure_leaves_no_partial_outputs(self, demo_cfg, tmp_path):
        cfg_path, cfg = demo_cfg
        bad_seeds = tmp_path / "bad_seeds.csv"
        bad_seeds.write_text("hashtag,label\nx,5\n", encoding="utf-8")
        cfg = replace(cfg, seed_file=bad_seeds, output_dir=tmp_path / "never")
        with pytest.raises(StageError) as info:
            run_pipeline(cfg)
        assert info.value.stage == "propagate"
        assert not (tmp_path / "never").exists()
        assert not list(tmp_path.glob(".never*"))

    def test_manifest_config_reproduces_run(self, demo_cfg, tmp_path):
        _, cfg = demo_cfg
        out = run_pipeline(cfg)
        manifest = json.loads((out / "manifest.json").read_text())
        embedded = PipelineConfig.from_text(manifest["config_text"])
        out2 = run_pipeline(replace(embedded, output_dir=tmp_path / "replay"))
        assert digest_tree(out) == digest_tree(out2)


class TestStages:
    def test_staged_equals_end_to_end(self, demo_cfg, tmp_path):
        _, cfg = demo_cfg
        e2e = run_pipeline(replace(cfg, output_dir=tmp_path / "e2e"))
        staged_cfg = replace(cfg, output_dir=tmp_path / "staged")
        for stage in STAGE_ORDER:
            run_stage(stage, staged_cfg)
        assert digest_tree(e2e) == digest_tree(tmp_path / "staged")

    def test_missing_intermediate_names_prior_stage(self, demo_cfg):
        _, cfg = demo_cfg
        with pytest.raises(StageError) as info:
            run_stage("propagate", cfg)
        assert info.value.stage == "propagate"
        assert "hashtags" in str(info.value)

    def test_report_names_missing_producer(self, demo_cfg):
        _, cfg = demo_cfg
        run_stage("ingest", cfg)
        with pytest.raises(StageError) as info:
            run_stage("report", cfg)
        # bot_sweep.csv is the alphabetically first missing artifact
        assert "annotations" in str(info.value)


class TestCli:
    def test_run_and_exit_codes(self, demo_cfg, capsys):
        cfg_path, cfg = demo_cfg
        assert main(["run", "--config", str(cfg_path)]) == 0
        out = capsys.readouterr().out
        assert "report bundle" in out
        assert (cfg.output_dir / "manifest.json").is_file()

    def test_bad_config_exits_2(self, tmp_path, capsys):
        cfg_path = tmp_path / "c.cfg"
        cfg_path.write_text("corpus_path = missing.jsonl\n", encoding="utf-8")
        assert main(["run", "--config", str(cfg_path)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_intermediate_exits_1_with_stage(self, demo_cfg, capsys):
        cfg_path, _ = demo_cfg
        assert main(["classify", "--config", str(cfg_path)]) == 1
        err = capsys.readouterr().err
        assert err.startswith("stage classify failed")
        assert "ingest" in err

    def test_staged_subcommands_match_run(self, demo_cfg, tmp_path, capsys):
        cfg_path, cfg = demo_cfg
        assert main(["run", "--config", str(cfg_path), "--output-dir", str(tmp_path / "full")]) == 0
        for stage in STAGE_ORDER:
            assert main([stage, "--config", str(cfg_path), "--output-dir", str(tmp_path / "by_stage")]) == 0
        assert digest_tree(tmp_path / "full") == digest_tree(tmp_path / "by_stage")

    def test_flag_overrides_config(self, demo_cfg, tmp_path):
        cfg_path, _ = demo_cfg
        out_default = tmp_path / "default"
        out_presence = tmp_path / "presence"
        assert main(["run", "--config", str(cfg_path), "--output-dir", str(out_default)]) == 0
        assert (
            main(
                [
                    "run",
                    "--config",
                    str(cfg_path),
                    "--output-dir",
                    str(out_presence),
                    "--presence-weighting",
                ]
            )
            == 0
        )
        default_rows = (out_default / "stance.csv").read_text().splitlines()
        presence_rows = (out_presence / "stance.csv").read_text().splitlines()
        assert default_rows != presence_rows
        d1_presence = next(r for r in presence_rows if r.startswith("d1,"))
        # presence weighting averages d1's four labeled hashtags once each
        assert float(d1_presence.split(",")[1]) == pytest.approx((-1 - 1 - 1 + 1 / 3) / 4)
