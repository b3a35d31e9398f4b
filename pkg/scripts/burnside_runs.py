"""Graded Burnside-type presentations for small exponents."""
import argparse
import time

from isospec import families


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--stages", type=int, help="default 4, or 3 for N >= 4 where stage 4 is slow")
    ap.add_argument("--exponents", default="2,3,4")
    a = ap.parse_args()
    for N in map(int, a.exponents.split(",")):
        t = time.perf_counter()
        st = families.burnside_build(2, N, a.stages or (4 if N < 4 else 3))
        sizes = [len(st.periods(i)) for i in range(1, st.stage + 1)]
        flagged = sum(len(s.flagged) for s in st.stages)
        print(f"N={N}: |P_i| = {sizes}, flagged {flagged}, order {st.order}, "
              f"certified at {st.certified_at} [{time.perf_counter() - t:.1f}s]")


if __name__ == "__main__":
    main()
