"""Command-line front end: ``iso <subcommand> ...``.

Exit codes: 0 success, 1 domain error (caps, undecided, refused backend),
2 usage or parse error.  Data goes to stdout or --out; messages to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict
from fractions import Fraction

from . import cayley, families, filling, oracles, presentations, smallcancel, spectra
from .words import Alphabet, ParseError, build_word, format_word


class DomainError(Exception):
    pass


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".iso-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def parse_range(s: str) -> list[int]:
    try:
        if ".." in s:
            lo, hi = s.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(v) for v in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {s!r} (use lo..hi or a,b,c)") from None


def jobs_of(args) -> int:
    env = os.environ.get("ISO_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise argparse.ArgumentTypeError("ISO_JOBS must be an integer") from None
    return max(1, args.jobs)


def load_group(args):
    if getattr(args, "group", None):
        return presentations.load_presentation(args.group)
    return None


def get_oracle(args, p=None):
    spec = args.oracle
    if spec is None:
        if p is None:
            raise argparse.ArgumentTypeError("--oracle or --group required")
        spec = "bounded"
    caps = oracles.BoundedCaps(max_area=getattr(args, "oracle_area", 4))
    return oracles.make_oracle(spec, p, caps)


def caps_of(args) -> filling.SearchCaps:
    return filling.SearchCaps(max_area=args.max_area, max_length=args.max_length,
                              time_limit=args.time_limit, model=args.model)


# -- subcommands ------------------------------------------------------------

def cmd_spectrum(args):
    p = load_group(args)
    o = get_oracle(args, p)
    caps = caps_of(args)
    t = filling.spectrum_table(o, args.k, args.m, args.n, caps, jobs_of(args),
                               include_unreduced=not args.reduced_only, group=args.group or o.name)
    emit(args, t.to_json())
    return 0


def cmd_area(args):
    p = load_group(args)
    al = p.alphabet if p else get_oracle(args).alphabet
    w = build_word(args.word, al)
    caps = caps_of(args)
    if args.sk:
        o = get_oracle(args, p)
        rels = presentations.enumerate_null_words(o, args.sk).words
        source = f"S_{args.sk} of {o.name}"
    else:
        if p is None:
            raise argparse.ArgumentTypeError("--sk or --group required")
        rels = p.relator_words()
        source = p.name
        if args.model == "paid":
            caps = filling.SearchCaps(caps.max_area, caps.max_length, caps.time_limit, "free")
    r = filling.area_search(w, rels, caps, require_exact=args.require_exact)
    out = {"word": format_word(w, al), "relators": source, "status": r.status.value, "value": r.value,
           "caps": asdict(r.caps) if r.caps else None, "note": r.note}
    if r.certificate is not None:
        out["certificate"] = r.certificate.to_dict(al)
    emit(args, json.dumps(out, indent=1))
    return 0 if r.status in (filling.Status.EXACT, filling.Status.NOT_IN_CLOSURE) else 1


def cmd_check_sc(args):
    p = load_group(args)
    rep = smallcancel.check_metric_condition(p, Fraction(args.lam))
    emit(args, rep.to_json(p.alphabet))
    return 0


def cmd_dehn_reduce(args):
    p = load_group(args)
    if not smallcancel.check_metric_condition(p, Fraction(1, 6)).passed:
        raise DomainError("presentation fails C'(1/6)")
    w = build_word(args.word, p.alphabet)
    d = smallcancel.dehn_fill(p, w)
    if d is None:
        end, trace = smallcancel.dehn_reduce(p, w)
        out = {"verdict": "Nontrivial", "reduced": format_word(end, p.alphabet), "steps": len(trace)}
    else:
        out = {"verdict": "Trivial", "area": d.area, "certificate": d.to_dict(p.alphabet)}
    emit(args, json.dumps(out, indent=1))
    return 0


def _ball(args):
    p = load_group(args)
    o = get_oracle(args, p)
    return cayley.build_ball(o, args.radius, args.max_vertices)


def cmd_ball(args):
    emit(args, _ball(args).to_json())
    return 0


def cmd_delta(args):
    b = _ball(args)
    if args.s > 1:
        b = cayley.s_expand(b, args.s)
    est = cayley.estimate_delta(b, args.interior)
    d = json.loads(est.to_json(b))
    d.update({"radius": args.radius, "s": args.s, "backend": b.oracle.name})
    emit(args, json.dumps(d))
    return 0


def cmd_expand(args):
    b = _ball(args)
    e = cayley.s_expand(b, args.s)
    d0, ds = b.dist, e.dist
    inner = [i for i in range(len(b)) if b.depth[i] <= args.radius - args.s]
    bad = sum(1 for i in inner for j in inner
              if d0[i, j] <= args.radius - args.s and ds[i, j] != -(-d0[i, j] // args.s))
    emit(args, json.dumps({"radius": args.radius, "s": args.s, "backend": b.oracle.name,
                           "vertices": len(e), "edges": e.n_edges, "interior_violations": bad,
                           "ball": json.loads(e.to_json())}))
    return 0 if bad == 0 else 1


def cmd_detour(args):
    b = _ball(args)
    al = b.oracle.alphabet
    path = b.walk(0, build_word(args.path, al))
    if not 0 <= args.at <= path.length:
        raise argparse.ArgumentTypeError("--at must index a vertex of the path")
    o = path.vertices[args.at]
    L = cayley.min_detour(b, path, o, args.r)
    emit(args, json.dumps({"path": args.path, "at": args.at, "r": args.r, "radius": args.radius,
                           "backend": b.oracle.name, "detour": L if L is not None else "NoDetour"}))
    return 0


def cmd_wreath_cert(args):
    K = oracles.FiniteGroupTable.cyclic(args.p)
    o = oracles.WreathOracle(K)
    w = build_word(args.word, o.alphabet)
    try:
        d = families.wreath_certificate(K, w)
    except families.NotTrivial as e:
        raise DomainError(str(e)) from None
    emit(args, json.dumps({"K": f"Z_{args.p}", "area": d.area, "max_index": families.certificate_indices(K, d),
                           "certificate": d.to_dict(o.alphabet)}, indent=1))
    return 0


def cmd_burnside(args):
    st = families.burnside_build(args.rank, args.exponent, args.stages, args.conj_length, args.max_nodes)
    d = json.loads(st.to_json())
    d["caps"] = {"conj_length": args.conj_length, "max_nodes": args.max_nodes}
    emit(args, json.dumps(d, indent=1))
    return 0


def cmd_aperiodic(args):
    emit(args, families.aperiodic_csv(families.aperiodic_enumerate(args.q, args.length)))
    return 0


def cmd_sigma(args):
    with open(args.derivation, encoding="utf-8") as fh:
        data = json.load(fh)
    al = Alphabet.of(data["gens"])
    d = filling.Derivation.from_dict(data, al)
    base = [build_word(s, al) for s in data["base"]]
    e = families.expand_relation_derivation(d, base, args.p)
    sig = {format_word(A, al): families.sigma_of_derivation(e, A) for A in base}
    emit(args, json.dumps({"p": args.p, "verified": filling.verify_derivation(e), "sigma": sig,
                           "mod_p_zero": all(v % args.p == 0 for v in sig.values()),
                           "expansion": e.to_dict(al)}, indent=1))
    return 0


def cmd_compare(args):
    v = spectra.compare_monomials(args.f, args.g)
    fw = spectra.numeric_falsify(args.f, args.g, args.c_max)
    bw = spectra.numeric_falsify(args.g, args.f, args.c_max)
    emit(args, json.dumps({"f": args.f, "g": args.g, "verdict": v,
                           "falsifier": {"f<=g refuted": fw is not None, "g<=f refuted": bw is not None,
                                         "C_max": args.c_max}}))
    return 0


def cmd_check_a25m(args):
    p = load_group(args)
    if p is None:
        raise argparse.ArgumentTypeError("--group required")
    o = get_oracle(args, p)
    tri = p
    if any(len(r) > 3 for r in p.relators):
        tri, images = presentations.triangulation(p)
        o = oracles.SubstitutionOracle(o, tri.alphabet, images)
    rep = filling.check_A25m(tri, args.n0, args.m, caps_of(args), oracle=o, exact_rhs=args.exact_rhs)
    emit(args, json.dumps({"pass": rep.passed, "checked": rep.checked, "exact_rhs": rep.exact_rhs,
                           "violations": [format_word(v[0], o.alphabet) for v in rep.violations],
                           "caps": asdict(caps_of(args)), "backend": o.name}))
    return 0 if rep.passed else 1


# -- parser -------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iso", description="isoperimetric spectra workbench")
    ap.add_argument("--jobs", type=int, default=1)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp, oracle=True, search=False):
        sp.add_argument("--out")
        sp.add_argument("--group", help="presentation file")
        if oracle:
            sp.add_argument("--oracle", help="name[:params]")
            sp.add_argument("--oracle-area", type=int, default=4)
        if search:
            sp.add_argument("--max-area", type=int, default=8)
            sp.add_argument("--max-length", type=int)
            sp.add_argument("--time-limit", type=float)
            sp.add_argument("--model", choices=("paid", "free"), default="paid")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("spectrum")
    common(sp, search=True)
    sp.add_argument("--k", type=parse_range, required=True)
    sp.add_argument("--m", type=parse_range, required=True)
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--reduced-only", action="store_true")
    sp.set_defaults(fn=cmd_spectrum)

    sp = sub.add_parser("area")
    common(sp, search=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--sk", type=int, help="use S_k of the oracle as relators")
    sp.add_argument("--require-exact", action="store_true")
    sp.set_defaults(fn=cmd_area)

    sp = sub.add_parser("check-sc")
    common(sp, oracle=False)
    sp.add_argument("--lambda", dest="lam", default="1/6")
    sp.set_defaults(fn=cmd_check_sc)

    sp = sub.add_parser("dehn-reduce")
    common(sp, oracle=False)
    sp.add_argument("--word", required=True)
    sp.set_defaults(fn=cmd_dehn_reduce)

    for name, fn in (("ball", cmd_ball), ("delta", cmd_delta), ("expand", cmd_expand), ("detour", cmd_detour)):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--radius", type=int, required=True)
        sp.add_argument("--max-vertices", type=int, default=200_000)
        if name == "delta":
            sp.add_argument("--interior", type=int, required=True)
            sp.add_argument("--s", type=int, default=1)
        if name == "expand":
            sp.add_argument("--s", type=int, required=True)
        if name == "detour":
            sp.add_argument("--path", required=True, help="geodesic word read from the identity")
            sp.add_argument("--at", type=int, required=True, help="index of o along the path")
            sp.add_argument("--r", type=int, required=True)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("wreath-cert")
    common(sp, oracle=False)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--word", required=True)
    sp.set_defaults(fn=cmd_wreath_cert)

    sp = sub.add_parser("burnside")
    common(sp, oracle=False)
    sp.add_argument("--rank", type=int, default=2)
    sp.add_argument("--exponent", type=int, required=True)
    sp.add_argument("--stages", type=int, default=4)
    sp.add_argument("--conj-length", type=int, default=2)
    sp.add_argument("--max-nodes", type=int, default=20_000)
    sp.set_defaults(fn=cmd_burnside)

    sp = sub.add_parser("aperiodic")
    common(sp, oracle=False)
    sp.add_argument("--q", type=int, default=7)
    sp.add_argument("--length", type=int, required=True)
    sp.set_defaults(fn=cmd_aperiodic)

    sp = sub.add_parser("sigma")
    common(sp, oracle=False)
    sp.add_argument("--derivation", required=True,
                    help="JSON {gens, base: [words], target, factors}")
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(fn=cmd_sigma)

    sp = sub.add_parser("compare-spectra")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("--c-max", type=int, default=20)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("check-a25m")
    common(sp, search=True)
    sp.add_argument("--n0", type=int, required=True)
    sp.add_argument("--m", type=parse_range, default=[1, 2])
    sp.add_argument("--exact-rhs", action="store_true")
    sp.set_defaults(fn=cmd_check_a25m)
    return ap


_DOMAIN = (DomainError, filling.CapsUnsound, filling.InsufficientData,
           oracles.BackendUnavailable, oracles.OracleUndecided, cayley.BallTooLarge,
           cayley.TargetBallTooSmall, smallcancel.NotSmallCancellation, families.NotTrivial,
           families.UnrecognizedRelatorShape, families.ExponentOutOfRange)


def run(argv: list[str] | None = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) if e.code in (0, None) else 2
    try:
        return args.fn(args)
    except _DOMAIN as e:
        print(f"iso: {e}", file=sys.stderr)
        return 1
    except (ParseError, argparse.ArgumentTypeError, spectra.UnsupportedForm, filling.RangeError,
            smallcancel.NotReducedPresentation, oracles.InvalidTable) as e:
        print(f"iso: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as e:
        print(f"iso: {e}", file=sys.stderr)
        return 2 if isinstance(e, (OSError, KeyError)) else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
