"""Best-of-restarts minimization of pi_ME for small qubit systems."""
import argparse
import time

from mmes.optimizer import OptimizerConfig, anneal, minimize_pime

TARGETS = {2: 1 / 2, 3: 1 / 2, 4: 1 / 3, 5: 1 / 4, 6: 1 / 8}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", default="3,4,5,6")
    ap.add_argument("--restarts", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--anneal", action="store_true")
    args = ap.parse_args()

    for n in (int(x) for x in args.ns.split(",")):
        cfg = OptimizerConfig(n=n, restarts=args.restarts, seed=args.seed, workers=args.workers)
        t = time.perf_counter()
        res = anneal(cfg) if args.anneal else minimize_pime(cfg)
        finals = sorted(tr.final_value for tr in res.traces)
        target = TARGETS.get(n)
        gap = "" if target is None else f"  gap {res.value - target:+.2e}"
        print(f"n={n}: best {res.value:.8f}{gap}  median restart {finals[len(finals) // 2]:.6f}"
              f"  ({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
