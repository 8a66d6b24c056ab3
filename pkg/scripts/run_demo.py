#!/usr/bin/env python3
"""End-to-end demo: generate the synthetic inputs, run every stage, and print
a short summary of what the bundle contains.

Usage: python scripts/run_demo.py [--workdir DIR]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from stancelab.demo import write_demo_config
from stancelab.pipeline import PipelineConfig, run_pipeline
from stancelab.stance import read_stance_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", type=Path, default=Path("demo_run"), help="scratch directory")
    args = parser.parse_args()

    config_path = write_demo_config(args.workdir / "inputs", output_dir=args.workdir / "report")
    cfg = PipelineConfig.from_file(config_path)
    out = run_pipeline(cfg)
    print(f"bundle: {out}\n")

    table = read_stance_csv(out / "stance.csv")
    counts = table.counts()
    print("stance counts:")
    for stance, count in sorted(counts.items(), key=lambda item: item[0].value):
        print(f"  {stance.value:<13} {count}")

    print("\necho-chamberness (all-communication subgraphs):")
    for row in json.loads((out / "metrics.json").read_text(encoding="utf-8")):
        scope = "with unclassified" if row["with_unclassified"] else "group only"
        print(f"  {row['group']:<13} {scope:<18} e={row['e']:.4f}  r={row['r']:.3f}  d={row['d']:.3f}")

    print("\ntop believer terms:")
    for line in (out / "text" / "frequencies_believer.csv").read_text(encoding="utf-8").splitlines()[1:6]:
        term, count = line.split(",")
        print(f"  {term:<16} {count}")

    summary = json.loads((out / "influencer_summary.json").read_text(encoding="utf-8"))
    print("\nsuper-spreader fraction per group:")
    for group, entry in sorted(summary["super_spreaders"].items()):
        print(f"  {group:<13} {entry['fraction']:.2%} ({entry['super_count']}/{entry['node_count']})")


if __name__ == "__main__":
    main()
