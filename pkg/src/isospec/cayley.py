"""Finite Cayley-graph balls and the metric probes run on them."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .filling import Derivation, Factor, verify_derivation
from .words import Word, format_word, free_reduce, inverse


class BallTooLarge(ValueError):
    pass


class TargetBallTooSmall(ValueError):
    pass


@dataclass
class Ball:
    """Induced subgraph of Cay(G, X) on the elements of length <= radius.

    Vertex 0 is the identity.  ``reps[i]`` is the lex-least geodesic word for
    vertex i; ``edges`` holds (u, letter, v) for every letter, so the edge set
    is closed under inversion.  ``extra`` marks an s-expansion.
    """

    oracle: object
    radius: int
    labels: list
    reps: list[Word]
    depth: np.ndarray
    edges: list[tuple[int, int, int]]
    index: dict = field(repr=False, default_factory=dict)
    extra: int = 1
    _dist: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        """Undirected edge count."""
        return len({(min(u, v), max(u, v), min(x, -x)) for u, x, v in self.edges if x})

    def adjacency(self) -> csr_matrix:
        n = len(self)
        rows = [u for u, _, v in self.edges if u != v]
        cols = [v for u, _, v in self.edges if u != v]
        m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        m.data[:] = 1
        return m

    @property
    def dist(self) -> np.ndarray:
        if self._dist is None:
            d = shortest_path(self.adjacency(), method="D", unweighted=True, directed=False)
            d[np.isinf(d)] = -1
            self._dist = d.astype(np.int64)
        return self._dist

    def neighbors(self) -> list[list[int]]:
        nb: list[set] = [set() for _ in range(len(self))]
        for u, _, v in self.edges:
            if u != v:
                nb[u].add(v)
        return [sorted(s) for s in nb]

    def vertex(self, label) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise TargetBallTooSmall(f"{label!r} outside the ball") from None

    def walk(self, start: int, w: Sequence[int]) -> "GraphPath":
        """The path reading w from ``start``; it must stay inside the ball."""
        step = self.oracle.step
        verts = [start]
        lab = self.labels[start]
        for x in w:
            lab = step(lab, x)
            verts.append(self.vertex(lab))
        return GraphPath(tuple(verts), tuple(w))

    def geodesic(self, u: int, v: int) -> "GraphPath":
        """Lex-least geodesic in letter order a < A < b < B ..."""
        d = self.dist
        if d[u, v] < 0:
            raise TargetBallTooSmall("endpoints disconnected inside the ball")
        out = {}
        for a, x, b in self.edges:
            out.setdefault(a, []).append((x, b))
        order = {x: (2 * x - 2 if x > 0 else -2 * x - 1) for x in self.oracle.alphabet.letters()}
        verts, letters = [u], []
        cur = u
        while cur != v:
            cands = sorted((order[x], x, b) for x, b in out.get(cur, []) if d[b, v] == d[cur, v] - 1)
            _, x, cur = cands[0]
            verts.append(cur)
            letters.append(x)
        return GraphPath(tuple(verts), tuple(letters))

    def to_json(self) -> str:
        al = self.oracle.alphabet
        fw = lambda w: format_word(w, al)
        letter = lambda x: fw((x,)) if x else "s"
        return json.dumps({
            "radius": self.radius,
            "backend": getattr(self.oracle, "name", ""),
            "expansion": self.extra,
            "vertices": [fw(r) for r in self.reps],
            "edges": [[u, letter(x), v] for u, x, v in self.edges],
        })


@dataclass(frozen=True)
class GraphPath:
    vertices: tuple[int, ...]
    letters: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]


def build_ball(oracle, R: int, max_vertices: int = 200_000) -> Ball:
    """BFS ball of radius R from the identity."""
    from .oracles import OracleUndecided, Verdict

    letters = oracle.alphabet.letters()
    step = getattr(oracle, "step", None)
    if step is not None:
        labels = [oracle.identity]
        index = {oracle.identity: 0}
        reps: list[Word] = [()]
        depth = [0]
        frontier = [0]
        for r in range(1, R + 1):
            nxt = []
            for u in frontier:
                for x in letters:
                    lab = step(labels[u], x)
                    if lab not in index:
                        if len(labels) >= max_vertices:
                            raise BallTooLarge(f"more than {max_vertices} vertices")
                        index[lab] = len(labels)
                        labels.append(lab)
                        reps.append(reps[u] + (x,))
                        depth.append(r)
                        nxt.append(index[lab])
            frontier = nxt
        edges = []
        for u, lab in enumerate(labels):
            for x in letters:
                v = index.get(step(lab, x))
                if v is not None:
                    edges.append((u, x, v))
        return Ball(oracle, R, labels, reps, np.array(depth), edges, index)

    # slow path: representatives compared by deciding u^-1 v, only within
    # buckets of equal fingerprint when the oracle offers one
    fp = getattr(oracle, "fingerprint", lambda w: None)

    def same(u: Word, v: Word) -> bool:
        if hasattr(oracle, "same"):
            return oracle.same(u, v)
        st = oracle.decide(inverse(u) + v).status
        if st is Verdict.UNKNOWN:
            raise OracleUndecided(f"cannot compare {u} and {v}")
        return st is Verdict.TRIVIAL

    reps = [()]
    depth = [0]
    keys = [fp(())]
    buckets: dict = {keys[0]: [0]}
    for r in range(1, R + 1):
        for u in [i for i, d in enumerate(depth) if d == r - 1]:
            for x in letters:
                w = free_reduce(reps[u] + (x,))
                key = fp(w)
                if any(depth[v] >= r - 2 and same(reps[v], w) for v in buckets.get(key, ())):
                    continue
                if len(reps) >= max_vertices:
                    raise BallTooLarge(f"more than {max_vertices} vertices")
                reps.append(w)
                depth.append(r)
                keys.append(key)
                buckets.setdefault(key, []).append(len(reps) - 1)
    edges = []
    for u in range(len(reps)):
        for x in letters:
            w = reps[u] + (x,)
            for v in buckets.get(fp(free_reduce(w)), ()):
                if abs(depth[v] - depth[u]) <= 1 and same(reps[v], w):
                    edges.append((u, x, v))
                    break
    labels = [r for r in reps]
    index = {lab: i for i, lab in enumerate(labels)}
    return Ball(oracle, R, labels, reps, np.array(depth), edges, index)


# -- s-expansion --------------------------------------------------------------

def s_expand(ball: Ball, s: int) -> Ball:
    """Add an edge between every pair at distance 2..s (letter 0 marks them)."""
    if s < 1:
        raise ValueError("s >= 1")
    if s == 1:
        return ball
    d = ball.dist
    us, vs = np.nonzero((d > 1) & (d <= s))
    edges = list(ball.edges) + [(int(u), 0, int(v)) for u, v in zip(us, vs)]
    return Ball(ball.oracle, ball.radius, ball.labels, ball.reps, ball.depth, edges, ball.index, s * ball.extra)


# -- thin triangles ------------------------------------------------------------

@dataclass
class DeltaEstimate:
    delta: Fraction
    interior_radius: int
    witness: tuple[int, int, int] | None
    triples: int = 0

    def to_json(self, ball: Ball | None = None) -> str:
        w = None
        if self.witness is not None and ball is not None:
            w = [format_word(ball.reps[i], ball.oracle.alphabet) for i in self.witness]
        return json.dumps({"delta": float(self.delta), "interior_radius": self.interior_radius,
                           "witness": w, "triples": self.triples, "lower_bound_for_group": True})


class _Intervals:
    """Geodesic-interval DAGs and the side-distance tables of a ball.

    Tables are indexed by the hull: the vertices and edges lying on some
    geodesic between two corner candidates, since only those are queried.
    """

    def __init__(self, ball: Ball, corners: Sequence[int]):
        d = self.d = ball.dist
        self.nb = ball.neighbors()
        und = sorted({(min(u, v), max(u, v)) for u, _, v in ball.edges if u != v})
        eu = np.array([u for u, _ in und], dtype=np.int64)
        ev = np.array([v for _, v in und], dtype=np.int64)
        vmask = np.zeros(len(ball), dtype=bool)
        emask = np.zeros(len(und), dtype=bool)
        cs = list(corners)
        for i, x in enumerate(cs):
            for y in cs[i:]:
                vmask |= d[x] + d[y] == d[x, y]
                emask |= (d[x, eu] + 1 + d[ev, y] == d[x, y]) | (d[x, ev] + 1 + d[eu, y] == d[x, y])
        self.hull = np.nonzero(vmask)[0]
        self.vloc = np.full(len(ball), -1, dtype=np.int64)
        self.vloc[self.hull] = np.arange(len(self.hull))
        keep = np.nonzero(emask)[0]
        self.eu, self.ev = eu[keep], ev[keep]
        self.eid = {und[j]: i for i, j in enumerate(keep)}
        self._vert: dict = {}
        self._mid: dict = {}
        self._side: dict = {}

    def interval(self, y: int, z: int):
        """Vertices of I(y, z) sorted by distance from y, and DAG predecessors."""
        d = self.d
        dyz = d[y, z]
        verts = np.nonzero(d[y] + d[z] == dyz)[0]
        verts = verts[np.argsort(d[y, verts], kind="stable")]
        vs = set(verts.tolist())
        preds = {int(q): [p for p in self.nb[q] if p in vs and d[y, p] == d[y, q] - 1] for q in verts}
        return [int(q) for q in verts], preds

    def vertex_table(self, y: int, z: int) -> np.ndarray:
        """B[p] = max over geodesics s from y to z of d(p, s), for hull p."""
        key = (min(y, z), max(y, z))
        if key not in self._vert:
            order, preds = self.interval(*key)
            d = self.d
            F = {}
            for q in order:
                if not preds[q]:
                    F[q] = d[q, self.hull]
                else:
                    best = F[preds[q][0]]
                    for p in preds[q][1:]:
                        best = np.maximum(best, F[p])
                    F[q] = np.minimum(d[q, self.hull], best)
            self._vert[key] = F[key[1]]
        return self._vert[key]

    def midpoint_table(self, y: int, z: int) -> np.ndarray:
        """M[e] = max over geodesics s from y to z of d(mid e, s), for hull e."""
        key = (min(y, z), max(y, z))
        if key not in self._mid:
            order, preds = self.interval(*key)
            d = self.d
            neg = np.iinfo(np.int64).min // 4
            F = {}
            for q in order:
                De = np.minimum(d[self.eu, q], d[self.ev, q]).astype(np.int64)
                if not preds[q]:
                    F[q] = De
                    continue
                best = None
                for p in preds[q]:
                    cand = F[p]
                    j = self.eid.get((min(p, q), max(p, q)))
                    if j is not None:
                        cand = cand.copy()
                        cand[j] = neg
                    best = cand if best is None else np.maximum(best, cand)
                F[q] = np.minimum(De, best)
            fz = F[key[1]].astype(float)
            self._mid[key] = np.where(fz < 0, 0.0, fz + 0.5)
        return self._mid[key]

    def side(self, x: int, y: int) -> tuple[np.ndarray, np.ndarray]:
        """Hull indices of the vertices and edges on geodesics from x to y."""
        key = (min(x, y), max(x, y))
        if key not in self._side:
            d = self.d
            pts = self.vloc[np.nonzero(d[x] + d[y] == d[x, y])[0]]
            a = d[x, self.eu] + 1 + d[self.ev, y] == d[x, y]
            b = d[x, self.ev] + 1 + d[self.eu, y] == d[x, y]
            self._side[key] = (pts, np.nonzero(a | b)[0])
        return self._side[key]


def estimate_delta(ball: Ball, interior_radius: int, triples: Sequence[tuple[int, int, int]] | None = None) -> DeltaEstimate:
    """Exact thinness over all geodesic triangles with corners in the interior ball.

    The interior ball is {depth <= interior_radius}.  With 2 r <= R every
    geodesic of the graph between interior points stays inside the ball.  In
    an expansion a geodesic may leave it by s/2, so the value there is the
    thinness of the ball graph itself.

    Points of a side include edge interiors, so the value is a half-integer.
    It is a lower bound for the group's delta, never an extrapolation.
    """
    if 2 * interior_radius > ball.radius:
        raise ValueError("interior radius must be <= radius / 2")
    # corners are chosen by depth in the original graph, also for expansions
    inner = [int(v) for v in np.nonzero(ball.depth <= interior_radius)[0]]
    if triples is None:
        n = len(inner)
        triples = [(inner[i], inner[j], inner[k]) for i in range(n) for j in range(i, n) for k in range(j, n)]
    else:
        triples = [tuple(map(int, t)) for t in triples]
    iv = _Intervals(ball, sorted({v for t in triples for v in t}))
    best, wit, count = 0.0, None, 0
    for x, y, z in triples:
        count += 1
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            # side [a, b]; other sides [b, c] and [c, a]
            pts, es = iv.side(a, b)
            v = np.minimum(iv.vertex_table(b, c)[pts], iv.vertex_table(c, a)[pts]).max()
            if v > best:
                best, wit = float(v), (x, y, z)
            if len(es):
                m = np.minimum(iv.midpoint_table(b, c)[es], iv.midpoint_table(c, a)[es]).max()
                if m > best:
                    best, wit = float(m), (x, y, z)
    return DeltaEstimate(Fraction(best).limit_denominator(2), interior_radius, wit, count)


# -- coarse images and filling transport ---------------------------------------

class CoarseMap:
    """A vertex map alpha between balls, with one fixed geodesic per edge."""

    def __init__(self, source: Ball, target: Ball, alpha: Callable):
        self.source, self.target, self.alpha = source, target, alpha
        self._seg: dict = {}

    def image_vertex(self, label) -> int:
        return self.target.vertex(self.alpha(label))

    def segment(self, la, lb) -> Word:
        """Letters of the chosen geodesic from alpha(la) to alpha(lb)."""
        key = (la, lb)
        if key in self._seg:
            return self._seg[key]
        rev = (lb, la)
        if rev in self._seg:
            return inverse(self._seg[rev])
        g = self.target.geodesic(self.image_vertex(la), self.image_vertex(lb))
        self._seg[key] = g.letters
        return g.letters

    def image_word(self, start_label, w: Sequence[int]) -> tuple[Word, object]:
        """Image of the path reading w from start_label, and its end label."""
        step = self.source.oracle.step
        out: list[int] = []
        lab = start_label
        for x in w:
            nxt = step(lab, x)
            out.extend(self.segment(lab, nxt))
            lab = nxt
        return tuple(out), lab


def coarse_image(c: GraphPath, alpha: Callable, source: Ball, target: Ball,
                 cmap: CoarseMap | None = None) -> GraphPath:
    """Concatenate fixed geodesics joining the images of consecutive vertices."""
    cm = cmap or CoarseMap(source, target, alpha)
    start = cm.image_vertex(source.labels[c.start])
    word, _ = cm.image_word(source.labels[c.start], c.letters)
    return target.walk(start, word)


def transport_filling(d: Derivation, alpha: Callable, source: Ball, target: Ball,
                      base: int = 0, cmap: CoarseMap | None = None) -> Derivation:
    """Certificate for the coarse image of the loop d.target read from ``base``.

    Each factor f^-1 R^e f is a loop: the path f^-1 to a vertex q, the relator
    loop at q, and back.  Its image is the image conjugator around the image
    of R read at q; factors whose image relator is empty are dropped.
    """
    cm = cmap or CoarseMap(source, target, alpha)
    v0 = source.labels[base]
    tw, _ = cm.image_word(v0, d.target)
    factors = []
    for f in d.factors:
        back, q = cm.image_word(v0, inverse(f.conj))
        rel, _ = cm.image_word(q, f.relator)
        if not rel:
            continue
        factors.append(Factor(free_reduce(inverse(back)), rel, f.sign))
    out = Derivation(tw, tuple(factors))
    if not verify_derivation(out):  # pragma: no cover - construction invariant
        raise AssertionError("transported certificate does not verify")
    return out


# -- detours --------------------------------------------------------------------

def min_detour(ball: Ball, p: GraphPath, o: int, r: int) -> int | None:
    """Shortest path p- to p+ avoiding the closed r-ball at o; None if none."""
    d = ball.dist
    banned = d[o] <= r
    banned &= d[o] >= 0
    if banned[p.start] or banned[p.end]:
        return None
    nb = ball.neighbors()
    seen = {p.start: 0}
    frontier = [p.start]
    while frontier:
        nxt = []
        for u in frontier:
            if u == p.end:
                return seen[u]
            for v in nb[u]:
                if v not in seen and not banned[v]:
                    seen[v] = seen[u] + 1
                    nxt.append(v)
        frontier = nxt
    return None
