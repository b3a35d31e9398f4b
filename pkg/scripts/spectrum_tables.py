"""Spectrum tables f(k, m, n) for Z^2 and F_2, with the linearity probe.

    python3 scripts/spectrum_tables.py --n-max 10 --out results/
"""
import argparse
import os
import time

from isospec import filling, oracles


def run(name, oracle, k, ms, ns, jobs):
    t = time.perf_counter()
    table = filling.spectrum_table(oracle, k, ms, ns, filling.SearchCaps(max_area=10), jobs=jobs, group=name)
    dt = time.perf_counter() - t
    print(f"{name}: k={k}, {len(table.entries)} entries in {dt:.1f}s")
    print("   m  " + " ".join(f"{n:>3}" for n in ns))
    for m in ms:
        row = []
        for n in ns:
            e = table.get(k, m, n)
            mark = "" if e.status is filling.Status.EXACT else "+"
            row.append(f"{e.value}{mark}".rjust(3))
        print(f"  {m:>2}  " + " ".join(row))
    bad = table.monotonicity_violations()
    print(f"  monotonicity violations: {len(bad)}")
    try:
        v = filling.linearity_probe(table)
        print(f"  smallest C with f <= C ceil(n/m) on m >= Ck: {v.C}")
    except filling.InsufficientData as e:
        print(f"  linearity probe: {e}")
    return table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    a = ap.parse_args()
    ns = list(range(2, a.n_max + 1, 2))
    tables = {
        "z2": run("z2", oracles.FreeAbelianOracle(2), 4, [4, 6, 8], ns, a.jobs),
        "f2": run("f2", oracles.FreeOracle(2), 2, [2, 4, 6], ns, a.jobs),
    }
    if a.out:
        os.makedirs(a.out, exist_ok=True)
        for name, t in tables.items():
            with open(os.path.join(a.out, f"spectrum_{name}.json"), "w") as fh:
                fh.write(t.to_json())


if __name__ == "__main__":
    main()
