"""Word-problem backends.

Normal-form backends (free, free-abelian, finite, wreath, wreath-truncated)
expose ``identity`` and ``step(label, letter)`` so callers can evaluate words
incrementally; labels are canonical, so label equality is group equality.
The dehn and bounded-search backends only ``decide``.
"""
from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .presentations import Presentation
from .words import Alphabet, Word, abelianize, free_reduce, inverse


class Verdict(str, Enum):
    TRIVIAL = "Trivial"
    NONTRIVIAL = "Nontrivial"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class OracleVerdict:
    status: Verdict
    witness: object = None

    @property
    def trivial(self) -> bool:
        return self.status is Verdict.TRIVIAL


class BackendUnavailable(ValueError):
    pass


class OracleUndecided(ValueError):
    pass


class _NormalFormOracle:
    """Shared decide/normal_form on top of step()."""

    name = ""
    alphabet: Alphabet
    identity: object

    def step(self, label, x: int):  # pragma: no cover - abstract
        raise NotImplementedError

    def normal_form(self, w: Sequence[int]):
        lab = self.identity
        for x in w:
            lab = self.step(lab, x)
        return lab

    def decide(self, w: Sequence[int]) -> OracleVerdict:
        lab = self.normal_form(w)
        return OracleVerdict(Verdict.TRIVIAL if lab == self.identity else Verdict.NONTRIVIAL, lab)


# -- free and free abelian --------------------------------------------------

class FreeOracle(_NormalFormOracle):
    def __init__(self, rank: int = 2, alphabet: Alphabet | None = None):
        self.alphabet = alphabet or _default_alphabet(rank)
        self.name = f"free:{self.alphabet.rank}"
        self.identity: Word = ()

    def step(self, label: Word, x: int) -> Word:
        if label and label[-1] == -x:
            return label[:-1]
        return label + (x,)

    def distance_lower_bound(self, label: Word) -> int:
        return len(label)


class FreeAbelianOracle(_NormalFormOracle):
    def __init__(self, rank: int = 2, alphabet: Alphabet | None = None):
        self.alphabet = alphabet or _default_alphabet(rank)
        self.name = f"free-abelian:{self.alphabet.rank}"
        self.identity = (0,) * self.alphabet.rank

    def step(self, label: tuple, x: int) -> tuple:
        v = list(label)
        v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def distance_lower_bound(self, label: tuple) -> int:
        return sum(map(abs, label))


class SubstitutionOracle(_NormalFormOracle):
    """A base backend seen through extra generators with known values.

    Letters of the base alphabet keep their meaning; each extra generator
    stands for a base word (as recorded by triangulation).
    """

    def __init__(self, base, alphabet: Alphabet, images: dict[int, Word]):
        if not hasattr(base, "step"):
            raise BackendUnavailable("substitution needs a base backend with normal forms")
        self.base = base
        self.alphabet = alphabet
        self.name = f"{base.name}+subst"
        self.identity = base.identity
        self.images: dict[int, Word] = {}
        for g in range(1, alphabet.rank + 1):
            img = tuple(images[g]) if g in images else (g,)
            self.images[g] = img
            self.images[-g] = inverse(img)

    def step(self, label, x: int):
        for y in self.images[x]:
            label = self.base.step(label, y)
        return label


def _default_alphabet(rank: int) -> Alphabet:
    if rank <= 26:
        return Alphabet(tuple("abcdefghijklmnopqrstuvwxyz"[:rank]))
    return Alphabet(tuple(f"x{i}" for i in range(1, rank + 1)))


# -- finite groups ------------------------------------------------------------

class InvalidTable(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroupTable:
    """Multiplication table on 0..order-1; ``gens`` are element indices."""

    order: int
    mul: tuple[tuple[int, ...], ...]
    gens: tuple[int, ...]
    names: tuple[str, ...]
    identity: int = 0
    inv: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def make(cls, mul: Sequence[Sequence[int]], gens: Sequence[int], names: Sequence[str],
             check: bool = True, seed: int = 0) -> "FiniteGroupTable":
        n = len(mul)
        mt = tuple(tuple(int(v) for v in row) for row in mul)
        if any(len(row) != n for row in mt) or any(not 0 <= v < n for row in mt for v in row):
            raise InvalidTable("table must be square with entries in range")
        ids = [e for e in range(n) if all(mt[e][x] == x and mt[x][e] == x for x in range(n))]
        if not ids:
            raise InvalidTable("no identity element")
        e = ids[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if mt[x][y] == e]
            if len(ys) != 1 or mt[ys[0]][x] != e:
                raise InvalidTable(f"element {x} has no two-sided inverse")
            inv.append(ys[0])
        if len(gens) != len(names):
            raise InvalidTable("one name per generator")
        if check:
            rng = random.Random(seed)
            trip = itertools.product(range(n), repeat=3) if n <= 24 else (
                (rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(20000))
            for a, b, c in trip:
                if mt[mt[a][b]][c] != mt[a][mt[b][c]]:
                    raise InvalidTable(f"not associative at ({a},{b},{c})")
        return cls(n, mt, tuple(gens), tuple(names), e, tuple(inv))

    @classmethod
    def cyclic(cls, p: int, name: str = "a") -> "FiniteGroupTable":
        mul = [[(i + j) % p for j in range(p)] for i in range(p)]
        return cls.make(mul, [1 % p], [name], check=False)

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], names: Sequence[str], cap: int = 5000) -> "FiniteGroupTable":
        """Close the given permutations under composition (apply left factor first)."""
        deg = len(perms[0])
        ident = tuple(range(deg))
        elems = [ident]
        index = {ident: 0}
        frontier = [ident]
        gens = [tuple(p) for p in perms]
        while frontier:
            nxt = []
            for g in frontier:
                for p in gens:
                    h = tuple(p[g[i]] for i in range(deg))
                    if h not in index:
                        if len(elems) >= cap:
                            raise InvalidTable("permutation group too large")
                        index[h] = len(elems)
                        elems.append(h)
                        nxt.append(h)
            frontier = nxt
        comp = lambda g, h: tuple(h[g[i]] for i in range(deg))
        mul = [[index[comp(g, h)] for h in elems] for g in elems]
        return cls.make(mul, [index[p] for p in gens], names, check=False)

    def product(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def evaluate(self, w: Sequence[int]) -> int:
        g = self.identity
        for x in w:
            h = self.gens[abs(x) - 1]
            g = self.mul[g][h if x > 0 else self.inv[h]]
        return g

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "mul": [v for row in self.mul for v in row],
                           "gens": list(self.gens), "names": list(self.names)})

    @classmethod
    def from_json(cls, text: str) -> "FiniteGroupTable":
        d = json.loads(text)
        n = int(d["order"])
        flat = d["mul"]
        if len(flat) != n * n:
            raise InvalidTable("mul must have order^2 entries")
        return cls.make([flat[i * n:(i + 1) * n] for i in range(n)], d["gens"], d["names"])

    @classmethod
    def load(cls, path: str) -> "FiniteGroupTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


class FiniteOracle(_NormalFormOracle):
    def __init__(self, table: FiniteGroupTable, name: str = "finite"):
        self.table = table
        self.alphabet = Alphabet(table.names)
        self.name = name
        self.identity = table.identity
        self._gen = [(g, table.inv[g]) for g in table.gens]
        self._dist = None

    def step(self, label: int, x: int) -> int:
        g, gi = self._gen[abs(x) - 1]
        return self.table.mul[label][g if x > 0 else gi]

    def distance_lower_bound(self, label: int) -> int:
        if self._dist is None:
            dist = {self.identity: 0}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for u in frontier:
                    for x in self.alphabet.letters():
                        v = self.step(u, x)
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                frontier = nxt
            self._dist = dist
        return self._dist[label]


# -- wreath products K wr Z ---------------------------------------------------

def _k_names(K: FiniteGroupTable) -> list[str]:
    """Letter names for the non-identity elements of K."""
    names = {}
    for g, n in zip(K.gens, K.names):
        names.setdefault(g, n)
    out = []
    for e in range(K.order):
        if e == K.identity:
            continue
        out.append(names.get(e, f"k{e}"))
    return out


class WreathOracle(_NormalFormOracle):
    """K wr Z with letters for K minus the identity, plus t.

    A label is (sorted nonidentity lamps, shift).  A K-letter read after
    shift s multiplies the lamp at position -s on the right, so the word
    t^-i x t^i puts x at position i.
    """

    def __init__(self, K: FiniteGroupTable, name: str | None = None):
        self.K = K
        self.elems = [e for e in range(K.order) if e != K.identity]
        self.alphabet = Alphabet(tuple(_k_names(K)) + ("t",))
        self.t = self.alphabet.rank
        self.name = name or f"wreath:{K.order}"
        self.identity = ((), 0)

    def element_of(self, x: int) -> int:
        """K index of a (signed) K-letter."""
        e = self.elems[abs(x) - 1]
        return e if x > 0 else self.K.inv[e]

    def step(self, label, x: int):
        lamps, s = label
        if abs(x) == self.t:
            return (lamps, s + (1 if x > 0 else -1))
        d = dict(lamps)
        pos = -s
        v = self.K.mul[d.get(pos, self.K.identity)][self.element_of(x)]
        if v == self.K.identity:
            d.pop(pos, None)
        else:
            d[pos] = v
        return (tuple(sorted(d.items())), s)

    def distance_lower_bound(self, label) -> int:
        lamps, s = label
        if not lamps:
            return abs(s)
        # the cursor -shift walks from 0 to -s visiting every lit lamp
        e = -s
        lo = min(min(i for i, _ in lamps), 0, e)
        hi = max(max(i for i, _ in lamps), 0, e)
        walk = min(-lo + (hi - lo) + (hi - e), hi + (hi - lo) + (e - lo))
        return len(lamps) + walk


class WreathTruncatedOracle(_NormalFormOracle):
    """The HNN truncation G_k: base A_k = K_{-k} + ... + K_k, stable letter t.

    A label is (syllables, tail).  Each syllable (r, e) stands for r t^e with
    r a coset representative (r in K_k for e=+1, in K_{-k} for e=-1); the
    tail is an element of A_k, stored per position -k..k.
    """

    def __init__(self, K: FiniteGroupTable, k: int, name: str | None = None):
        if k < 1:
            raise ValueError("k >= 1")
        self.K, self.k = K, k
        self.elems = [e for e in range(K.order) if e != K.identity]
        self.alphabet = Alphabet(tuple(_k_names(K)) + ("t",))
        self.t = self.alphabet.rank
        self.name = name or f"wreath-truncated:{K.order},{k}"
        e = K.identity
        self._one = (e,) * (2 * k + 1)
        self.identity = ((), self._one)

    def step(self, label, x: int):
        stack, tail = label
        K, k, e = self.K, self.k, self.K.identity
        if abs(x) != self.t:
            g = self.elems[abs(x) - 1]
            g = g if x > 0 else K.inv[g]
            tl = list(tail)
            tl[k] = K.mul[tl[k]][g]
            return (stack, tuple(tl))
        if x > 0:
            c = tail[-1]
            rest = tail[:-1] + (e,)
            shifted = (e,) + rest[:-1]
            if c == e and stack and stack[-1][1] == -1:
                r = stack[-1][0]
                return (stack[:-1], self._times(shifted, r, 0))
            return (stack + ((c, 1),), shifted)
        c = tail[0]
        rest = (e,) + tail[1:]
        shifted = rest[1:] + (e,)
        if c == e and stack and stack[-1][1] == 1:
            r = stack[-1][0]
            return (stack[:-1], self._times(shifted, r, 2 * k))
        return (stack + ((c, -1),), shifted)

    def _times(self, tail: tuple, r: int, idx: int) -> tuple:
        """r (at tail index idx) times tail."""
        tl = list(tail)
        tl[idx] = self.K.mul[r][tl[idx]]
        return tuple(tl)

    def stable_letters(self, label) -> int:
        return len(label[0])


# -- presentation backends ------------------------------------------------------

class DehnOracle:
    """Dehn's algorithm; refuses presentations failing C'(1/6)."""

    def __init__(self, p: Presentation):
        from .smallcancel import check_metric_condition

        rep = check_metric_condition(p, Fraction(1, 6))
        if not rep.passed:
            raise BackendUnavailable("presentation fails C'(1/6); Dehn's algorithm would mislead")
        self.p = p
        self.alphabet = p.alphabet
        self.name = f"dehn:{p.name}"
        self._homs = permutation_homs(p, (5, 6, 7), 200, limit=6)

    def fingerprint(self, w: Sequence[int]) -> tuple:
        """A hashable invariant: abelian image and a few permutation images."""
        return (abelianize(w, self.alphabet.rank),) + tuple(
            _perm_eval(h, w, len(h[1])) for h in self._homs)

    def same(self, u: Sequence[int], v: Sequence[int]) -> bool:
        from .smallcancel import dehn_reduce

        return not dehn_reduce(self.p, inverse(u) + tuple(v))[0]

    def decide(self, w: Sequence[int]) -> OracleVerdict:
        from .smallcancel import dehn_fill

        d = dehn_fill(self.p, w)
        if d is None:
            return OracleVerdict(Verdict.NONTRIVIAL, "Dehn algorithm stuck")
        return OracleVerdict(Verdict.TRIVIAL, d)


@dataclass(frozen=True)
class BoundedCaps:
    max_area: int = 4
    max_length: int | None = None
    quotient_degrees: tuple[int, ...] = (3, 4, 5, 6, 7)
    quotient_tries: int = 400
    quotient_limit: int = 40
    seed: int = 0


class BoundedSearchOracle:
    """Sound semi-decision for a finite presentation.

    Trivial: a free-model derivation of area <= max_area.  Nontrivial: the
    image in the abelianization is outside the relator lattice, or the image
    in a finite permutation quotient (the loop does not close in that
    quotient's Cayley graph) is not the identity.  Unknown otherwise.
    """

    def __init__(self, p: Presentation, caps: BoundedCaps = BoundedCaps(),
                 quotients: Sequence[FiniteGroupTable] = ()):
        self.p = p
        self.caps = caps
        self.alphabet = p.alphabet
        self.name = f"bounded:{p.name}"
        self.rank = p.alphabet.rank
        self.rel_vectors = [abelianize(r, self.rank) for r in p.relator_words()]
        self.quotients = list(quotients)
        self.homs = permutation_homs(p, caps.quotient_degrees, caps.quotient_tries, caps.seed,
                                     caps.quotient_limit)
        self._engine = None

    def fingerprint(self, w: Sequence[int]) -> tuple:
        """Images in every quotient; equal for words equal in the group."""
        return tuple(q.evaluate(w) for q in self.quotients) + tuple(
            _perm_eval(h, w, len(h[1])) for h in self.homs)

    def decide(self, w: Sequence[int]) -> OracleVerdict:
        from .filling import AreaEngine, SearchCaps, _outside_lattice

        r = free_reduce(w)
        if not r:
            return OracleVerdict(Verdict.TRIVIAL, None)
        if _outside_lattice(abelianize(r, self.rank), self.rel_vectors):
            return OracleVerdict(Verdict.NONTRIVIAL, "abelianization")
        for q in self.quotients:
            if q.evaluate(r) != q.identity:
                return OracleVerdict(Verdict.NONTRIVIAL, f"quotient of order {q.order}")
        for h in self.homs:
            deg = len(h[1])
            if _perm_eval(h, r, deg) != tuple(range(deg)):
                return OracleVerdict(Verdict.NONTRIVIAL, f"permutation quotient of degree {deg}")
        sc = SearchCaps(max_area=self.caps.max_area, max_length=self.caps.max_length, model="free")
        if self._engine is None:
            self._engine = AreaEngine(self.p.relator_words(), "free", self.caps.max_length)
        res = self._engine.search(r, sc)
        if res.certificate is not None:
            return OracleVerdict(Verdict.TRIVIAL, res.certificate)
        return OracleVerdict(Verdict.UNKNOWN, {"max_area": self.caps.max_area, "max_length": self.caps.max_length})


def _perm_eval(images: dict[int, tuple], w: Sequence[int], deg: int) -> tuple:
    g = list(range(deg))
    for x in w:
        p = images[x]
        g = [p[i] for i in g]
    return tuple(g)


def _pinv(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _conjugator(a: tuple, b: tuple, rng: random.Random) -> tuple | None:
    """Random permutation x with x^-1 a x = b (composition left to right)."""
    deg = len(a)

    def cycles(p):
        seen, out = set(), []
        for i in range(deg):
            if i in seen:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = p[j]
            out.append(c)
        return out

    ca, cb = cycles(a), cycles(b)
    if sorted(map(len, ca)) != sorted(map(len, cb)):
        return None
    by_len: dict[int, list] = {}
    for c in cb:
        by_len.setdefault(len(c), []).append(c)
    for v in by_len.values():
        rng.shuffle(v)
    x = [0] * deg
    for c in ca:
        d = by_len[len(c)].pop()
        off = rng.randrange(len(c))
        for i, v in enumerate(c):
            x[v] = d[(i + off) % len(c)]
    # with left-to-right composition, x^-1 a x maps x(i) -> x(a(i))
    return tuple(x)


def random_permutation_homs(p: Presentation, degrees: Sequence[int], tries: int, seed: int = 0):
    """Yield letter -> permutation maps killing every relator.

    Where possible one generator is solved for: if x occurs in a relator as
    x^-1 U x V, then x must conjugate U onto V^-1.
    """
    rng = random.Random(seed)
    rank = p.alphabet.rank
    rels = p.relator_words()
    solve = _solvable_generator(rels)
    for deg in degrees:
        for _ in range(tries):
            imgs: dict[int, tuple] = {}
            for g in range(1, rank + 1):
                if solve and g == solve[0]:
                    continue
                q = list(range(deg))
                rng.shuffle(q)
                imgs[g] = tuple(q)
                imgs[-g] = _pinv(q)
            if solve:
                x, u, v = solve
                a = _perm_eval(imgs, u, deg)
                b = _perm_eval(imgs, inverse(v), deg)
                c = _conjugator(a, b, rng)
                if c is None:
                    continue
                imgs[x], imgs[-x] = c, _pinv(c)
            if any(_perm_eval(imgs, r, deg) != tuple(range(deg)) for r in rels):
                continue
            yield imgs


def permutation_homs(p: Presentation, degrees: Sequence[int], tries: int, seed: int = 0,
                     limit: int = 40) -> list[dict[int, tuple]]:
    """Distinct homomorphisms to symmetric groups with non-abelian image.

    The limit is shared evenly between the degrees so that larger quotients
    are not crowded out by S_3.
    """
    rank = p.alphabet.rank
    share = max(1, limit // max(1, len(degrees)))
    out: list[dict[int, tuple]] = []
    for i, deg in enumerate(degrees):
        seen: set = set()
        kept = 0
        for imgs in random_permutation_homs(p, [deg], tries, seed + i):
            key = tuple(imgs[g] for g in range(1, rank + 1))
            if key in seen:
                continue
            seen.add(key)
            gens = [imgs[g] for g in range(1, rank + 1)]
            if all(_compose(x, y) == _compose(y, x) for x in gens for y in gens):
                continue
            out.append(imgs)
            kept += 1
            if kept >= share:
                break
    return out[:limit]


def _compose(x: tuple, y: tuple) -> tuple:
    return tuple(y[i] for i in x)


def find_permutation_quotients(p: Presentation, degrees: Sequence[int], tries: int, seed: int = 0,
                               limit: int = 40) -> list[FiniteGroupTable]:
    """Permutation quotients as multiplication tables (keep degrees small)."""
    out = []
    for imgs in permutation_homs(p, degrees, tries, seed, limit):
        perms = [imgs[g] for g in range(1, p.alphabet.rank + 1)]
        try:
            out.append(FiniteGroupTable.from_permutations(perms, p.alphabet.names))
        except InvalidTable:
            continue
    return out


def _solvable_generator(rels: list[Word]):
    """(x, U, V) with a rotation x^-1 U x V of the only relator containing x."""
    for x in range(1, 1 + max((abs(c) for r in rels for c in r), default=0)):
        using = [r for r in rels if x in r or -x in r]
        if len(using) != 1:
            continue
        r = using[0]
        if r.count(x) != 1 or r.count(-x) != 1:
            continue
        i = r.index(-x)
        rot = r[i:] + r[:i]
        j = rot.index(x)
        return (x, rot[1:j], rot[j + 1:])
    return None


# -- dispatch -------------------------------------------------------------------

def quotient_kernel_words(oracle, top: int) -> list[Word]:
    """Reduced words of length <= top whose fingerprint is that of the identity.

    Every trivial reduced word is among them.  The set is built by meeting
    reduced halves of length <= ceil(top/2) with equal fingerprints.
    """
    letters = oracle.alphabet.letters()
    fp = oracle.fingerprint
    layers = [{(): fp(())}]
    for _ in range((top + 1) // 2):
        nxt = {}
        for w in layers[-1]:
            for x in letters:
                if not w or w[-1] != -x:
                    v = w + (x,)
                    nxt[v] = fp(v)
        layers.append(nxt)
    byfp: list[dict] = []
    for layer in layers:
        d: dict = {}
        for w, f in layer.items():
            d.setdefault(f, []).append(w)
        byfp.append(d)
    out = []
    for n in range(1, top + 1):
        h = n // 2
        for f, us in byfp[n - h].items():
            for x in byfp[h].get(f, ()):
                v = inverse(x)
                for u in us:
                    if not (u and v and u[-1] == -v[0]):
                        out.append(u + v)
    return out


def make_oracle(spec: str, presentation: Presentation | None = None, caps: BoundedCaps | None = None):
    """Build a backend from ``name[:params]``."""
    caps = caps or BoundedCaps()
    name, _, arg = spec.partition(":")
    if name == "free":
        return FreeOracle(int(arg or 2), presentation.alphabet if presentation else None)
    if name == "free-abelian":
        return FreeAbelianOracle(int(arg or 2), presentation.alphabet if presentation else None)
    if name == "finite":
        return FiniteOracle(FiniteGroupTable.load(arg), f"finite:{arg}")
    if name in ("wreath", "wreath-truncated"):
        parts = arg.split(",") if arg else ["2"]
        K = FiniteGroupTable.cyclic(int(parts[0]))
        if name == "wreath":
            return WreathOracle(K, f"wreath:{parts[0]}")
        if len(parts) < 2:
            raise ValueError("wreath-truncated needs p,k")
        return WreathTruncatedOracle(K, int(parts[1]), f"wreath-truncated:{parts[0]},{parts[1]}")
    if name == "dehn":
        if presentation is None:
            raise ValueError("dehn needs a presentation")
        return DehnOracle(presentation)
    if name == "bounded":
        if presentation is None:
            raise ValueError("bounded needs a presentation")
        return BoundedSearchOracle(presentation, caps)
    raise ValueError(f"unknown oracle {name!r}")


def oracle_decide(backend, w: Sequence[int]) -> OracleVerdict:
    return backend.decide(w)
