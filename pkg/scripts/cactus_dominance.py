"""Split of <H^m> into cactus and non-cactus parts across d and n."""
import argparse
import math

from mmes.moments import moment_split, qubit_f2, qubit_m2_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--n", type=int, default=2, help="qudit count for the sweep in d")
    ap.add_argument("--ds", default="2,3,5,7")
    ap.add_argument("--qubit-ns", default="4,6,8,10,12")
    args = ap.parse_args()

    print(f"m={args.m}, n={args.n}: sweep in d")
    print("   d       total      cactus    noncactus      ratio    ratio*d")
    for d in (int(x) for x in args.ds.split(",")):
        s = moment_split(args.n, d, args.m)
        print(f"{d:4d} {s.total:11.6g} {s.cactus:11.6g} {s.noncactus:12.6g} {s.ratio:10.4g} {s.ratio * d:10.4g}")

    alpha = math.log2(3) - 1
    print(f"\nqubits, m=2: ratio against f2 closed form (expected slope -(2 - alpha) = {alpha - 2:.4f})")
    prev = None
    for n in (int(x) for x in args.qubit_ns.split(",")):
        r = moment_split(n, 2, 2).ratio
        slope = "" if prev is None else f"{(math.log2(r) - math.log2(prev[1])) / (n - prev[0]):8.4f}"
        print(f"n={n:3d}  ratio {r:.6e}  f2 form {qubit_m2_ratio(n):.6e}  f2 {qubit_f2(n):10.4f}  local slope {slope}")
        prev = (n, r)


if __name__ == "__main__":
    main()
