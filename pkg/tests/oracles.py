"""Independent reference implementations used to cross-check the engines.

Nothing here imports the search code in isospec.  Words are tuples of signed
ints (a=1, A=-1, b=2, ...), matching the library convention.
"""
from __future__ import annotations

import itertools
from collections import deque

import numpy as np


def inv(w):
    return tuple(-x for x in reversed(w))


def rot_min(w):
    """Lexicographically least rotation, by brute force."""
    if not w:
        return ()
    return min(tuple(w[i:] + w[:i]) for i in range(len(w)))


def shifts(words):
    out = set()
    for r in words:
        for v in (tuple(r), inv(r)):
            for i in range(len(v)):
                out.add(v[i:] + v[:i])
    return out


# -- free abelian null words -----------------------------------------------

def z2_null_words(k, rank=2):
    """All words of length 1..k over rank letters with zero exponent sums."""
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    out = []
    for n in range(1, k + 1):
        for w in itertools.product(letters, repeat=n):
            v = [0] * rank
            for x in w:
                v[abs(x) - 1] += 1 if x > 0 else -1
            if not any(v):
                out.append(w)
    return out


def free_null_words(k, rank=2):
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    out = []
    for n in range(1, k + 1):
        for w in itertools.product(letters, repeat=n):
            st = []
            for x in w:
                if st and st[-1] == -x:
                    st.pop()
                else:
                    st.append(x)
            if not st:
                out.append(w)
    return out


# -- paid-model area by breadth-first search ---------------------------------

def paid_area_bfs(w, relators, max_area=10):
    """Least number of moves U -> V (UV^-1 a cyclic shift of a relator or its
    inverse, U a cyclic subword) taking w to the empty word.

    States are cyclic words.  A run of at most A moves from w never exceeds
    length max_j min(|w| + g j, g (A - j)), g the longest relator, so the BFS
    for each A is cut at that length and the answer is exact.
    """
    D = shifts(relators)
    g = max(len(d) for d in D)
    splits = {}
    for d in D:
        for i in range(len(d) + 1):
            splits.setdefault(d[:i], set()).add(inv(d[i:]))
    maxu = max(len(u) for u in splits)

    def moves(x, cap):
        n = len(x)
        rots = [x[i:] + x[:i] for i in range(n)] if n else [()]
        for r in rots:
            for L in range(0, min(maxu, n) + 1):
                for v in splits.get(r[:L], ()):
                    y = v + r[L:]
                    if len(y) <= cap:
                        yield rot_min(y)

    start = rot_min(tuple(w))
    if not start:
        return 0
    for A in range(1, max_area + 1):
        cap = max(min(len(start) + g * j, g * (A - j)) for j in range(A + 1))
        seen = {start: 0}
        q = deque([start])
        while q:
            x = q.popleft()
            dx = seen[x]
            if dx == A:
                continue
            for y in moves(x, cap):
                if y not in seen:
                    if not y:
                        return dx + 1
                    seen[y] = dx + 1
                    q.append(y)
    return None


# -- Z3 * Z3 cyclic normal forms ---------------------------------------------

def z3z3_syllables(w):
    """Free-product normal form of a word in a, b with a^3 = b^3 = 1."""
    syl = []
    for x in w:
        g, e = abs(x), (1 if x > 0 else -1)
        if syl and syl[-1][0] == g:
            e2 = (syl[-1][1] + e) % 3
            syl.pop()
            if e2:
                syl.append((g, e2))
        else:
            syl.append((g, e % 3))
    return syl


def z3z3_cyclic_class(w):
    """Canonical form of the conjugacy class: the least syllable rotation."""
    syl = z3z3_syllables(w)
    # syllables alternate, so merging the ends either stops or exposes a new pair
    while len(syl) > 1 and syl[0][0] == syl[-1][0]:
        g, e = syl[0][0], (syl[0][1] + syl[-1][1]) % 3
        syl = syl[1:-1]
        if e:
            syl = [(g, e)] + syl
    syl = tuple(syl)
    if not syl:
        return ()
    return min(syl[i:] + syl[:i] for i in range(len(syl)))


def z3z3_conjugate(u, v):
    return z3z3_cyclic_class(u) == z3z3_cyclic_class(v)


def z3z3_power_classes(max_len):
    """Classes of powers B^e of words with |B| <= max_len."""
    letters = [1, -1, 2, -2]
    out = set()
    for n in range(1, max_len + 1):
        for B in itertools.product(letters, repeat=n):
            for e in (1, 2):
                out.add(z3z3_cyclic_class(B * e))
    return out


def burnside3_p2():
    """Greedy stage-2 periods for r=2, N=3, decided in Z3 * Z3."""
    letters = [1, -1, 2, -2]
    shorter = z3z3_power_classes(1)
    chosen = []
    cands = sorted((w for w in itertools.product(letters, repeat=2) if w[0] != -w[1] and w[0] != -w[-1]),
                   key=lambda w: [2 * x - 2 if x > 0 else -2 * x - 1 for x in w])
    for w in cands:
        c = z3z3_cyclic_class(w)
        if c in shorter:
            continue
        if any(c in (z3z3_cyclic_class(B), z3z3_cyclic_class(inv(B))) for B in chosen):
            continue
        chosen.append(w)
    return chosen


# -- Heisenberg group mod 3 (order 27, exponent 3) ---------------------------

def heis3_eval(w):
    """Image of a word under a -> x, b -> y in the Heisenberg group mod 3."""
    M = np.eye(3, dtype=np.int64)
    X = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]], dtype=np.int64)
    Y = np.array([[1, 0, 0], [0, 1, 1], [0, 0, 1]], dtype=np.int64)
    Xi = np.array([[1, 2, 0], [0, 1, 0], [0, 0, 1]], dtype=np.int64)
    Yi = np.array([[1, 0, 0], [0, 1, 2], [0, 0, 1]], dtype=np.int64)
    gens = {1: X, -1: Xi, 2: Y, -2: Yi}
    for x in w:
        M = (M @ gens[x]) % 3
    return M


def heis3_order():
    seen = set()
    frontier = [np.eye(3, dtype=np.int64)]
    gens = [heis3_eval((x,)) for x in (1, -1, 2, -2)]
    while frontier:
        nxt = []
        for M in frontier:
            key = M.tobytes()
            if key in seen:
                continue
            seen.add(key)
            nxt.extend((M @ G) % 3 for G in gens)
        frontier = nxt
    return len(seen)


# -- power-free binary words ---------------------------------------------------

def aperiodic_bruteforce(q, L):
    """Count binary words of length L with no factor U^q, over all 2^L words."""
    if L == 0:
        return 1
    x = np.arange(2 ** L, dtype=np.int64)
    bits = ((x[:, None] >> np.arange(L)) & 1).astype(np.int8)
    bad = np.zeros(len(x), dtype=bool)
    for p in range(1, L // q + 1):
        need = (q - 1) * p  # positions i with x[i] == x[i+p] in a row
        eq = bits[:, :-p] == bits[:, p:]
        run = np.zeros(len(x), dtype=np.int64)
        best = np.zeros(len(x), dtype=np.int64)
        for i in range(eq.shape[1]):
            run = np.where(eq[:, i], run + 1, 0)
            best = np.maximum(best, run)
        bad |= best >= need
    return int((~bad).sum())
