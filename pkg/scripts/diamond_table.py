"""Print transcendental numbers and h^{1,1} for a sweep of builds."""

import argparse
import time

from cymotive.motives import block_hodge
from cymotive.pipeline import ConstructionSpec, build


def specs(max_n: int):
    for n in range(2, max_n + 1):
        yield ConstructionSpec("ch-z2", n)
    for n in range(2, max_n + 1):
        yield ConstructionSpec("ch-z3", n)
    for c in (1, 2):
        for n in range(2, min(max_n, 4) + 1):
            for b in range(n):
                if n - b > b:
                    yield ConstructionSpec("schreieder", n, c=c, a=n - b, b=b)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    print(f"{'build':<28} {'h^{1,1}':>10} {'euler':>12}  transcendental  time")
    for spec in specs(args.max_n):
        t0 = time.perf_counter()
        V = build(spec)
        d = V.hodge_diamond()
        name = spec.construction + f" n={spec.n}"
        if spec.construction == "schreieder":
            name += f" c={spec.c} ({spec.a},{spec.b})"
        tr = dict(sorted(block_hodge(V.block()).items()))
        print(f"{name:<28} {d[1, 1]:>10,} {d.euler():>12,}  {tr}  {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
