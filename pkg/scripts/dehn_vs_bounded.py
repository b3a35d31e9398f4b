"""Dehn's algorithm against the bounded-search oracle on the genus-2 surface.

Every reduced word of length <= L that is trivial in all the permutation
quotients is decided by both backends; words outside that set are
non-trivial for both by soundness.
"""
import argparse
import collections
import time
from fractions import Fraction

from isospec import oracles, presentations, smallcancel
from isospec.filling import verify_derivation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--length", type=int, default=10)
    ap.add_argument("--group", default="data/surface2.grp")
    a = ap.parse_args()
    p = presentations.load_presentation(a.group)
    rep = smallcancel.check_metric_condition(p, Fraction(1, 6))
    print(f"C'(1/6): {rep.passed}")
    t = time.perf_counter()
    b = oracles.make_oracle("bounded", p)
    cand = oracles.quotient_kernel_words(b, a.length)
    print(f"{len(b.homs)} quotients, {len(cand)} candidate words "
          f"{dict(sorted(collections.Counter(map(len, cand)).items()))} in {time.perf_counter() - t:.1f}s")
    agree, ratio = 0, 0.0
    for w in cand:
        d = smallcancel.dehn_fill(p, w)
        v = b.decide(w)
        agree += (d is not None) == v.trivial
        if d is not None:
            assert verify_derivation(d)
            ratio = max(ratio, d.area / len(w))
    print(f"agreement {agree}/{len(cand)}, max area/|w| = {ratio:.3f}")
    print(f"hyperbolicity bound from relator length: {smallcancel.hyperbolicity_bound(p)}")


if __name__ == "__main__":
    main()
