"""Classify random congruence translates of each format and report verification and timing.

    python scripts/orbit_roundtrip.py --seeds 50 --formats a b c d e f
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from skewformats.classify import classify_full, orbit_sample
from skewformats.formats import CATALOG, verify_format_witness


@dataclass
class RoundTripConfig:
    formats: tuple[str, ...] = ("a", "b", "c", "d", "e", "f")
    seeds: int = 50
    nvars: int = 5
    normal: bool = False


def run(cfg: RoundTripConfig) -> list[dict]:
    rows = []
    for name in cfg.formats:
        labels, routes = Counter(), Counter()
        verified = found = 0
        start = time.perf_counter()
        for k in range(cfg.seeds):
            M = orbit_sample(name, cfg.nvars, seed=k, normal=cfg.normal)
            rep = classify_full(M, seed=k, with_fingerprint=False)
            labels[rep.label] += 1
            routes[rep.route[0] if rep.route else "-"] += 1
            found += bool(rep.route) and rep.route[0].startswith("rank-2 point")
            verified += rep.verified and verify_format_witness(M, rep.witness, CATALOG[rep.label])
        elapsed = time.perf_counter() - start
        rows.append(
            {
                "format": name,
                "runs": cfg.seeds,
                "verified": verified,
                "rank2_found": found,
                "labels": dict(labels),
                "first_steps": dict(routes),
                "seconds_per_run": elapsed / cfg.seeds,
            }
        )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--formats", nargs="+", default=list(RoundTripConfig.formats))
    ap.add_argument("--seeds", type=int, default=RoundTripConfig.seeds)
    ap.add_argument("--nvars", type=int, default=RoundTripConfig.nvars)
    ap.add_argument("--normal", action="store_true", help="translate the normal forms instead of generic instances")
    a = ap.parse_args()
    cfg = RoundTripConfig(tuple(a.formats), a.seeds, a.nvars, a.normal)
    for row in run(cfg):
        print(
            f"{row['format']:>3}  verified {row['verified']}/{row['runs']}"
            f"  rank-2 point {row['rank2_found']}/{row['runs']}"
            f"  {row['seconds_per_run']:.2f}s/run  labels {row['labels']}"
        )
        for step, n in sorted(row["first_steps"].items()):
            print(f"      {n:3d}  {step}")


if __name__ == "__main__":
    main()
