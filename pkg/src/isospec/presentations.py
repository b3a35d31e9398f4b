"""Presentations, the file format, triangulation and null-word sets S_k."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import (
    Alphabet,
    CyclicWord,
    ParseError,
    Word,
    build_word,
    cyclic_reduce,
    format_word,
    free_reduce,
    inverse,
    is_reduced,
    word_key,
)


class DuplicateGenerator(ParseError):
    pass


class EmptyRelator(ParseError):
    pass


@dataclass(frozen=True)
class Presentation:
    """``<alphabet | relators>`` with relators stored as canonical cyclic words.

    ``written`` keeps each relator as it was declared (same order), which the
    triangulation uses.  ``sentinels`` lists generators with the relation z = 1.
    """

    alphabet: Alphabet
    relators: tuple[CyclicWord, ...]
    name: str = ""
    written: tuple[Word, ...] = ()
    sentinels: tuple[int, ...] = ()

    @classmethod
    def make(cls, alphabet: Alphabet, words: Iterable[Sequence[int]], name: str = "",
             sentinels: Sequence[int] = ()) -> "Presentation":
        rels: list[CyclicWord] = []
        written: list[Word] = []
        for w in words:
            c = CyclicWord.of(w)
            if not c.letters:
                raise EmptyRelator("relator reduces to the empty word")
            if c not in rels:
                rels.append(c)
                written.append(free_reduce(w))
        return cls(alphabet, tuple(rels), name, tuple(written), tuple(sentinels))

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def relator_words(self) -> list[Word]:
        return [r.letters for r in self.relators]

    def format(self) -> str:
        lines = [f"# {self.name}"] if self.name else []
        lines.append("gens " + " ".join(self.alphabet.names))
        for w in self.written or self.relator_words():
            if len(w) == 1 and abs(w[0]) in self.sentinels:
                lines.append("sentinel " + self.alphabet.names[abs(w[0]) - 1])
            else:
                lines.append("rel " + format_word(w, self.alphabet))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GradedPresentation:
    """A presentation whose relators carry positive ranks."""

    presentation: Presentation
    ranks: tuple[int, ...]

    def __post_init__(self):
        if len(self.ranks) != len(self.presentation.relators):
            raise ValueError("one rank per relator")
        if any(r < 1 for r in self.ranks):
            raise ValueError("ranks are positive")

    def prefix(self, i: int) -> Presentation:
        """R_{<=i}."""
        p = self.presentation
        keep = [j for j, r in enumerate(self.ranks) if r <= i]
        return Presentation(
            p.alphabet,
            tuple(p.relators[j] for j in keep),
            f"{p.name}[<={i}]",
            tuple(p.written[j] for j in keep) if p.written else (),
            p.sentinels,
        )

    @property
    def max_rank(self) -> int:
        return max(self.ranks, default=0)

    def format(self) -> str:
        p = self.presentation
        lines = ["gens " + " ".join(p.alphabet.names)]
        for w, r in zip(p.written or p.relator_words(), self.ranks):
            lines.append(f"rank {r} " + format_word(w, p.alphabet))
        return "\n".join(lines) + "\n"


def parse_graded(text: str, name: str = "") -> GradedPresentation:
    """Parse the line-oriented presentation format.

    Lines: ``gens a b ...``, ``rel <word>``, ``rank <i> <word>``,
    ``sentinel <z>`` (adds z if new, plus the relator z) and ``# comment``.
    """
    alphabet: Alphabet | None = None
    entries: list[tuple[Word, int]] = []
    sentinels: list[int] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        col = raw.index(head) + len(head) + 1
        if head == "gens":
            if alphabet is not None:
                raise ParseError("second 'gens' line", 0, ln)
            names = rest.split()
            if not names:
                raise ParseError("'gens' needs at least one name", col, ln)
            seen = set()
            for n in names:
                if n in seen:
                    raise DuplicateGenerator(f"duplicate generator {n!r}", raw.index(n), ln)
                seen.add(n)
            try:
                alphabet = Alphabet(tuple(names))
            except ValueError as e:
                raise ParseError(str(e), col, ln) from None
            continue
        if alphabet is None:
            raise ParseError("'gens' must come first", 0, ln)
        if head == "sentinel":
            if rest not in alphabet.names:
                alphabet = alphabet.extend(rest)
            z = alphabet.letter(rest)
            sentinels.append(z)
            entries.append(((z,), 1))
            continue
        if head == "rel":
            rank, expr, off = 1, rest, col
        elif head == "rank":
            num, _, expr = rest.partition(" ")
            if not num.isdigit() or int(num) < 1:
                raise ParseError("rank must be a positive integer", col, ln)
            rank, off = int(num), col + len(num) + 1
        else:
            raise ParseError(f"unknown line type {head!r}", 0, ln)
        try:
            w = build_word(expr, alphabet)
        except ParseError as e:
            raise type(e)(str(e.args[0]).split(" (")[0], (e.pos or 0) + off, ln) from None
        if not cyclic_reduce(w)[0]:
            raise EmptyRelator("relator is trivial in the free group", off, ln)
        entries.append((w, rank))
    if alphabet is None:
        raise ParseError("missing 'gens' line", 0, 1)
    rels: list[CyclicWord] = []
    written: list[Word] = []
    ranks: list[int] = []
    for w, r in entries:
        c = CyclicWord.of(w)
        if c in rels:
            k = rels.index(c)
            ranks[k] = min(ranks[k], r)
            continue
        rels.append(c)
        written.append(free_reduce(w))
        ranks.append(r)
    p = Presentation(alphabet, tuple(rels), name, tuple(written), tuple(sentinels))
    return GradedPresentation(p, tuple(ranks))


def parse_presentation(text: str, name: str = "") -> Presentation:
    return parse_graded(text, name).presentation


def load_presentation(path: str) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read(), name=path.rsplit("/", 1)[-1])


def triangulate(p: Presentation, add_sentinel: bool = False) -> Presentation:
    """Split long relators left-associatively so every relator has length <= 3.

    A relator x1 x2 ... xn with n > 3 gets fresh generators y1..y(n-2) and
    relators y1^-1 x1 x2, y(j)^-1 y(j-1) x(j+1), and y(n-2) xn.
    """
    return triangulation(p, add_sentinel)[0]


def triangulation(p: Presentation, add_sentinel: bool = False) -> tuple[Presentation, dict[int, Word]]:
    """triangulate() plus the value of each new generator as an old word."""
    names = list(p.alphabet.names)
    counter = 0

    def fresh(stem: str) -> int:
        nonlocal counter
        while True:
            counter += 1
            n = f"{stem}{counter}"
            if n not in names:
                names.append(n)
                return len(names)

    out: list[Word] = []
    images: dict[int, Word] = {}
    for w in p.written or p.relator_words():
        if len(w) <= 3:
            out.append(w)
            continue
        ys = [fresh("y") for _ in range(len(w) - 2)]
        out.append((-ys[0], w[0], w[1]))
        images[ys[0]] = free_reduce(w[:2])
        for j in range(1, len(ys)):
            out.append((-ys[j], ys[j - 1], w[j + 1]))
            images[ys[j]] = free_reduce(w[:j + 2])
        out.append((ys[-1], w[-1]))
    sentinels = list(p.sentinels)
    if add_sentinel:
        if "z" in names:
            z = fresh("z")
        else:
            names.append("z")
            z = len(names)
        out.append((z,))
        sentinels.append(z)
        images[z] = ()
    tri = Presentation.make(Alphabet(tuple(names)), out, name=f"tri({p.name})", sentinels=sentinels)
    return tri, images


# -- null words -----------------------------------------------------------

@dataclass(frozen=True)
class NullWordSet:
    """The words of length <= k certified trivial (S_k), sorted by (length, lex)."""

    k: int
    words: tuple[Word, ...]
    complete: bool = True
    undecided: tuple[Word, ...] = ()
    include_unreduced: bool = True

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def to_json(self, alphabet: Alphabet) -> str:
        return json.dumps([format_word(w, alphabet) for w in self.words])

    @classmethod
    def from_json(cls, text: str, alphabet: Alphabet, k: int | None = None) -> "NullWordSet":
        words = tuple(build_word(s, alphabet) for s in json.loads(text))
        return cls(k if k is not None else max(map(len, words), default=0), words)


def enumerate_null_words(oracle, k: int, include_unreduced: bool = True) -> NullWordSet:
    """All non-empty words of length <= k that the oracle certifies trivial."""
    if k < 1:
        raise ValueError("k >= 1")
    letters = oracle.alphabet.letters()
    found: list[Word] = []
    undecided: list[Word] = []
    step = getattr(oracle, "step", None)
    if step is not None:
        # meet in the middle: u v is trivial iff label(u) = label(v^-1)
        half = (k + 1) // 2
        layers: list[dict] = [{oracle.identity: [()]}]
        for _ in range(half):
            nxt: dict = {}
            for lab, ws in layers[-1].items():
                for x in letters:
                    nxt.setdefault(step(lab, x), []).extend(w + (x,) for w in ws)
            layers.append(nxt)
        for n in range(1, k + 1):
            h = n // 2
            left, right = layers[n - h], layers[h]
            for lab, us in left.items():
                xs = right.get(lab)
                if not xs:
                    continue
                vs = [inverse(x) for x in xs]
                for u in us:
                    found.extend(u + v for v in vs)
        if not include_unreduced:
            found = [w for w in found if is_reduced(w)]
    else:
        from .oracles import Verdict

        for n in range(1, k + 1):
            for w in itertools.product(letters, repeat=n):
                if not include_unreduced and any(w[i] == -w[i + 1] for i in range(n - 1)):
                    continue
                v = oracle.decide(w).status
                if v is Verdict.TRIVIAL:
                    found.append(w)
                elif v is Verdict.UNKNOWN:
                    undecided.append(w)
    found.sort(key=word_key)
    return NullWordSet(k, tuple(found), not undecided, tuple(undecided), include_unreduced)
