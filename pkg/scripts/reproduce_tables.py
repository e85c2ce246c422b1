"""Regenerate the d4 tables and diff them against the golden CSV files."""

from __future__ import annotations

import argparse
import difflib
import sys
from dataclasses import dataclass
from pathlib import Path

from skewformats.cli import cmd_tables

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


@dataclass
class TablesConfig:
    golden_dir: Path = GOLDEN
    write: Path | None = None


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--golden-dir", type=Path, default=TablesConfig.golden_dir)
    ap.add_argument("--write", type=Path, default=None, help="also save the regenerated tables here")
    a = ap.parse_args()
    cfg = TablesConfig(a.golden_dir, a.write)

    got = cmd_tables()
    want = (cfg.golden_dir / "table_pfaffzero.csv").read_text() + "\n" + (cfg.golden_dir / "table_nss.csv").read_text()
    if cfg.write:
        cfg.write.write_text(got)
    sys.stdout.write(got)
    if got == want:
        print("\nmatches golden files")
        return 0
    sys.stdout.writelines(difflib.unified_diff(want.splitlines(True), got.splitlines(True), "golden", "regenerated"))
    return 1


if __name__ == "__main__":
    sys.exit(main())
