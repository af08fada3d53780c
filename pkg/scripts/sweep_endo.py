#!/usr/bin/env python3
"""Sweep the endomorphism pipeline over 4 <= g <= gmax, 2 <= r <= rmax.

Usage:
    python scripts/sweep_endo.py [--gmax 10] [--rmax 4] [--seed 0] [--json OUT]
"""

import argparse
import json
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ellchain import serialize
from ellchain.pipelines import endo_build, endo_h0, onto_certificate, poin_params


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gmax", type=int, default=10)
    ap.add_argument("--rmax", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", type=Path, default=None)
    args = ap.parse_args()

    start = time.time()
    verdicts = []
    statuses = Counter()
    for g in range(4, args.gmax + 1):
        for r in range(2, args.rmax + 1):
            for d in range(g, g + r):
                p = poin_params(g, r, d)
                h0 = endo_h0(endo_build(p))
                v = onto_certificate(g, r, d, seed=args.seed)
                verdicts.append(v)
                statuses[v.status] += 1
                oracle = ",".join(str(x) for x in v.oracle.ranks)
                print(
                    f"g={g:<3}r={r:<3}d={d:<4}h={p.h:<3}h0={h0:<3}"
                    f"{v.status:<12}products={v.product_count:<5}oracle={oracle}"
                )
    elapsed = time.time() - start
    print(f"\n{len(verdicts)} tuples in {elapsed:.1f}s")
    for status, n in sorted(statuses.items()):
        print(f"  {status:<14} {n}")
    if args.json:
        payload = [serialize.to_payload(v) for v in verdicts]
        args.json.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        print(f"wrote {args.json}")
    return 0 if statuses.get("proven", 0) == len(verdicts) else 3


if __name__ == "__main__":
    sys.exit(main())
