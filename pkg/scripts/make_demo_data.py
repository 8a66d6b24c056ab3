#!/usr/bin/env python3
"""Write the bundled demo inputs (corpus, seeds, annotations, config).

Usage: python scripts/make_demo_data.py [--dest DIR]
Afterwards: stancelab run --config DIR/config.cfg
"""

from __future__ import annotations

import argparse
from pathlib import Path

from stancelab.demo import write_demo_config


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", type=Path, default=Path("demo_data"), help="where to write the inputs")
    args = parser.parse_args()
    config_path = write_demo_config(args.dest)
    print(f"demo inputs written to {args.dest}")
    print(f"run the pipeline with: stancelab run --config {config_path}")


if __name__ == "__main__":
    main()
