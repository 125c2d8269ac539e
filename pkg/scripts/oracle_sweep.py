"""Compare block_hodge with the brute-force oracle on random blocks."""

import argparse
import random

from cymotive.curves import builtin_curve, power
from cymotive.motives import TranscendentalBlock, block_hodge
from cymotive.oracle import bruteforce_block_hodge


def random_block(rng: random.Random) -> TranscendentalBlock:
    m = rng.choice([2, 3, 5, 7, 9])
    n = rng.randint(1, 4)
    if m == 2:
        curves = [builtin_curve("hyperelliptic_involution", g=rng.randint(1, 4)) for _ in range(n)]
    else:
        base = builtin_curve("mu_curve", m=m)
        units = [u for u in range(1, m) if u % 3 or m % 3]
        curves = [power(base, rng.choice(units)) for _ in range(n)]
    return TranscendentalBlock(tuple(curves), tuple(rng.choice([1, -1]) for _ in range(n)), m)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bad = 0
    for i in range(args.count):
        blk = random_block(rng)
        a, b = block_hodge(blk), bruteforce_block_hodge(blk)
        if a != b:
            bad += 1
            print(f"#{i} m={blk.modulus} signs={blk.signs}: formula {a} oracle {b}")
    print(f"{args.count - bad}/{args.count} blocks agree")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
