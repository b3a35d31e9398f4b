"""Minimal r-detours around the midpoint of a^(2L) geodesics.

Prints raw (r, k, l(q)) triples and the ratio l(q) k^2 / r^2; no constant is
fitted.  k is the relator-length parameter of the presentation in use.
"""
import argparse

from isospec import cayley, oracles


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--radius", type=int, default=8)
    ap.add_argument("--k", type=int, default=4)
    a = ap.parse_args()
    for name, o in (("Z2", oracles.FreeAbelianOracle(2)), ("F2", oracles.FreeOracle(2)),
                    ("G_1", oracles.make_oracle("wreath-truncated:2,1"))):
        b = cayley.build_ball(o, a.radius)
        for L in (2, 3):
            start = b.vertex(o.normal_form((-1,) * L))
            p = b.walk(start, (1,) * (2 * L))
            for r in range(1, L + 1):
                q = cayley.min_detour(b, p, p.vertices[L], r)
                ratio = "-" if q is None else f"{q * a.k ** 2 / r ** 2:.1f}"
                print(f"{name:<4} |p|={2 * L} r={r} k={a.k} l(q)={'none' if q is None else q:<5} ratio={ratio}")


if __name__ == "__main__":
    main()
