"""Run every verification suite over a small grid of ranks and moduli.

    python scripts/run_property_suites.py --N 2 3 4 --q 0.5 0.4+0.1i
"""

import argparse
import time

from ellw.cli import parse_complex
from ellw.suites import SUITES, SuiteConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--q", nargs="+", default=["0.5", "0.4+0.1i"])
    ap.add_argument("--p", default="0.3")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    failures = 0
    for N in args.N:
        for q_text in args.q:
            cfg = SuiteConfig(N=N, q=parse_complex(q_text), p=parse_complex(args.p), samples=args.samples, seed=args.seed)
            for name in SUITES:
                start = time.perf_counter()
                rep = run_suite(name, cfg)
                worst = max(rep.checks, key=lambda c: c.max_residual / c.tolerance)
                failures += not rep.overall_pass
                print(
                    f"N={N} q={q_text:<9} {name:<10} {'PASS' if rep.overall_pass else 'FAIL'}"
                    f"  checks={len(rep.checks):>2}  tightest={worst.name} ({worst.max_residual:.1e})"
                    f"  {time.perf_counter() - start:.2f}s"
                )
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
