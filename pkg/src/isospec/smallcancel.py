"""Pieces, the metric condition C'(lambda), and Dehn's algorithm."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .filling import Derivation, Rewriter
from .presentations import Presentation
from .words import Word, free_reduce, format_word, inverse, is_cyclically_reduced


class NotReducedPresentation(ValueError):
    pass


class NotSmallCancellation(ValueError):
    pass


def _frac(lam) -> Fraction:
    if isinstance(lam, tuple):
        return Fraction(*lam)
    return Fraction(lam)


def symmetrized(p: Presentation) -> list[Word]:
    """Distinct cyclic shifts of every relator and its inverse, sorted."""
    out: set[Word] = set()
    for r in p.relator_words():
        for w in (r, inverse(r)):
            for i in range(len(w)):
                out.add(w[i:] + w[:i])
    return sorted(out, key=lambda w: (len(w), w))


def _prefix(u: Sequence[int], v: Sequence[int]) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def _is_proper_power(r: Word) -> bool:
    n = len(r)
    return any(n % d == 0 and r == r[d:] + r[:d] for d in range(1, n))


@dataclass
class PieceIndex:
    shifts: list[Word]
    max_piece: dict[Word, int]

    @classmethod
    def build(cls, p: Presentation) -> "PieceIndex":
        sh = symmetrized(p)
        best = {s: 0 for s in sh}
        for i, a in enumerate(sh):
            for b in sh[i + 1:]:
                k = _prefix(a, b)
                if k > best[a]:
                    best[a] = k
                if k > best[b]:
                    best[b] = k
        return cls(sh, best)


@dataclass
class SCReport:
    lam: Fraction
    passed: bool
    witness: tuple[Word, Word, int] | None = None

    def to_json(self, alphabet=None) -> str:
        d: dict = {"lambda": str(self.lam), "pass": self.passed}
        if self.witness is not None:
            a, b, k = self.witness
            fw = (lambda w: format_word(w, alphabet)) if alphabet else list
            d["witness"] = {"shift1": fw(a), "shift2": fw(b), "piece": k}
        return json.dumps(d)


def check_metric_condition(p: Presentation, lam) -> SCReport:
    """Pass iff every piece between distinct shifts is < lam * min length."""
    lam = _frac(lam)
    if not 0 < lam <= 1:
        raise ValueError("lambda in (0, 1]")
    for r in p.relator_words():
        if not is_cyclically_reduced(r):
            raise NotReducedPresentation("relators must be cyclically reduced")
        if _is_proper_power(r):
            warnings.warn("proper-power relator: identical shifts give no pieces", stacklevel=2)
    sh = symmetrized(p)
    worst, worst_ratio = None, Fraction(-1)
    for i, a in enumerate(sh):
        for b in sh[i + 1:]:
            k = _prefix(a, b)
            if k == 0:
                continue
            ratio = Fraction(k, min(len(a), len(b)))
            if ratio > worst_ratio:
                worst, worst_ratio = (a, b, k), ratio
    if worst is not None and worst_ratio >= lam:
        return SCReport(lam, False, worst)
    return SCReport(lam, True, None)


@dataclass(frozen=True)
class GreendlingerStep:
    word: Word
    relator: Word
    position: int
    length: int
    replacement: Word


def _index(p: Presentation) -> dict[int, list[Word]]:
    by_first: dict[int, list[Word]] = {}
    for s in symmetrized(p):
        by_first.setdefault(s[0], []).append(s)
    return by_first


def greendlinger_step(p: Presentation, w: Sequence[int], index: dict | None = None) -> GreendlingerStep | None:
    """Replace the longest (then leftmost) U with |U| > |R|/2 by its complement.

    None means no step applies.
    """
    w = free_reduce(w)
    idx = _index(p) if index is None else index
    best = None
    for i in range(len(w)):
        for s in idx.get(w[i], ()):
            k = _prefix(w[i:], s)
            if 2 * k > len(s) and (best is None or k > best[2]):
                best = (i, s, k)
    if best is None:
        return None
    i, s, k = best
    v = inverse(s[k:])
    return GreendlingerStep(free_reduce(w[:i] + v + w[i + k:]), s, i, k, v)


def dehn_fill(p: Presentation, w: Sequence[int]) -> Derivation | None:
    """Dehn's algorithm with a certificate; None means w is nontrivial."""
    idx = _index(p)
    rw = Rewriter(w)
    rw.reduce(cyclic=False)
    while rw.x:
        st = greendlinger_step(p, rw.x, idx)
        if st is None:
            return None
        rw.replace(st.position, st.length, st.replacement)
        rw.reduce(cyclic=False)
    return rw.derivation()


def dehn_reduce(p: Presentation, w: Sequence[int]) -> tuple[Word, list[GreendlingerStep]]:
    """Run Dehn's algorithm to a fixed point, returning the trace."""
    idx = _index(p)
    x = free_reduce(w)
    trace = []
    while x:
        st = greendlinger_step(p, x, idx)
        if st is None:
            break
        trace.append(st)
        x = st.word
    return x, trace


def hyperbolicity_bound(p: Presentation) -> int:
    """delta = max relator length for C'(1/6) presentations."""
    if not check_metric_condition(p, Fraction(1, 6)).passed:
        raise NotSmallCancellation("presentation fails C'(1/6)")
    return p.max_relator_length
