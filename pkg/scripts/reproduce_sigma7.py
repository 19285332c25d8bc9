"""Assemble the seven-qubit state from its tabulated coefficients and print its purity profile."""
import argparse

from mmes.entanglement import potential_me
from mmes.optimizer import polish, purity_histogram, sigma7_state


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", help="write per-bipartition purities here")
    ap.add_argument("--polish", action="store_true", help="run gradient descent from the tabulated state")
    args = ap.parse_args()

    state = sigma7_state()
    hist = purity_histogram(state, bins=20)
    print(f"norm deviation of table : {state.norm_deviation:.3e}")
    print(f"pi_ME                   : {potential_me(state):.6f}")
    print(f"purity range            : {min(p for _, p in hist.entries):.5f} .. {max(p for _, p in hist.entries):.5f}")
    print(f"bimodal at 20 bins      : {hist.bimodal()}")
    for lo, hi, c in zip(hist.edges[:-1], hist.edges[1:], hist.counts):
        print(f"  [{lo:.5f}, {hi:.5f})  {'#' * int(c)}")
    if args.csv:
        hist.write_csv(args.csv)
    if args.polish:
        print(f"after descent           : {potential_me(polish(state)):.6f}")


if __name__ == "__main__":
    main()
