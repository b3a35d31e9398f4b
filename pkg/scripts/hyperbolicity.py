"""Thin-triangle estimates on balls and their s-expansions."""
import argparse
import time

import numpy as np

from isospec import cayley, oracles, presentations


def probe(name, oracle, R, s_values):
    t = time.perf_counter()
    b = cayley.build_ball(oracle, R)
    r = R // 2
    d = cayley.estimate_delta(b, r).delta
    line = f"{name:<22} R={R} |B|={len(b):<6} delta={float(d):<4}"
    inner = np.nonzero(b.depth <= r)[0]
    sub = np.ix_(inner, inner)
    for s in s_values:
        e = cayley.s_expand(b, s)
        law = bool((e.dist[sub] == np.ceil(b.dist[sub] / s)).all())
        ds = cayley.estimate_delta(e, r).delta
        line += f"  s={s}: law={law} delta_s={float(ds)} (bound {float(d) / s + 7:.1f})"
    print(line + f"  [{time.perf_counter() - t:.1f}s]")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--radius", type=int, default=6)
    a = ap.parse_args()
    R = a.radius
    probe("F2", oracles.FreeOracle(2), R, (2, 3))
    probe("Z2", oracles.FreeAbelianOracle(2), R, (2, 3))
    for k in (1, 2):
        probe(f"Z2 wr Z, G_{k}", oracles.make_oracle(f"wreath-truncated:2,{k}"), R, ())
    g2 = presentations.load_presentation("data/surface2.grp")
    probe("genus 2 (Dehn)", oracles.make_oracle("dehn", g2), min(R, 4), ())


if __name__ == "__main__":
    main()
