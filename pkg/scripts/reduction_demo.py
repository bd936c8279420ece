"""Project upstairs flows through each default reduction and compare with the downstairs flow.

Usage: python scripts/reduction_demo.py [--t1 5.0]
"""
import argparse
import time

from ckcontact.reduction import DEFAULT_REDUCTIONS, compare_flows, reduction_pair


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t1", type=float, default=5.0)
    args = ap.parse_args()
    print(f"{'system':<16}{'kappa':<14}{'downstairs':<22}{'residual':>12}{'seconds':>10}")
    for sid, k in DEFAULT_REDUCTIONS.items():
        t = time.perf_counter()
        pair = reduction_pair(sid, k)
        res, _, _ = compare_flows(pair, t1=args.t1)
        label = pair.downstairs.label or pair.downstairs.id
        ks = "-" if k is None else ",".join(str(c) for c in k)
        print(f"{sid:<16}{ks:<14}{label:<22}{res:>12.3e}{time.perf_counter() - t:>10.2f}")


if __name__ == "__main__":
    main()
