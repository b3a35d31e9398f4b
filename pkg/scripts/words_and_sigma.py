"""Counts of 7-aperiodic words and the sigma invariant on random derivations."""
import argparse
import math
import random

from isospec import families
from isospec.filling import verify_derivation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--length", type=int, default=24)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    c = families.aperiodic_enumerate(7, a.length)
    for L in (7, 8, 12, 16, 20, 24):
        if L <= a.length:
            print(f"L={L:>2} count={c[L - 1]:>9} growth={c[L - 1] ** (1 / L):.4f} floor 2^ceil(L/2)={2 ** math.ceil(L / 2)}")
    base = [(1, 1, 1), (2, 2, 2), (1, 2, 1, 2, 1, 2)]
    rng = random.Random(a.seed)
    for p in (2, 3, 5, 7):
        ok = 0
        for _ in range(a.trials):
            d = families.random_central_derivation(base, p, rng.randint(1, 8), 2, rng)
            e = families.expand_relation_derivation(d, base, p)
            ok += verify_derivation(e) and all(families.sigma_of_derivation(e, A) % p == 0 for A in base)
        print(f"p={p}: {ok}/{a.trials} expansions verify with sigma = 0 mod p")


if __name__ == "__main__":
    main()
