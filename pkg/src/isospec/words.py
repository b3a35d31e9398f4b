"""Free-group word arithmetic and the word-expression grammar.

Letters are signed integers: generator ``i`` (0-based) is ``i + 1`` and its
inverse is ``-(i + 1)``.  Words are plain tuples of letters.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()


class ParseError(ValueError):
    """Grammar violation in a word expression or presentation file."""

    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"col {pos + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UnknownGenerator(ParseError):
    pass


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names; position ``i`` is the letter ``i + 1``."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for n in self.names:
            if not _IDENT.match(n):
                raise ValueError(f"bad generator name {n!r}")

    @classmethod
    def of(cls, names: Iterable[str] | str) -> "Alphabet":
        if isinstance(names, str):
            names = names.split()
        return cls(tuple(names))

    @property
    def rank(self) -> int:
        return len(self.names)

    def letters(self) -> list[int]:
        """All letters in the fixed order a < A < b < B < ..."""
        out = []
        for i in range(self.rank):
            out += [i + 1, -(i + 1)]
        return out

    def letter(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def extend(self, *names: str) -> "Alphabet":
        return Alphabet(self.names + tuple(names))

    def parse(self, text: str) -> Word:
        return build_word(text, self)

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self)


# -- letter order ---------------------------------------------------------

def code(x: int) -> int:
    """Rank of a letter in the order a < A < b < B < ..."""
    return 2 * x - 2 if x > 0 else -2 * x - 1


def letter_of_code(c: int) -> int:
    return c // 2 + 1 if c % 2 == 0 else -(c // 2 + 1)


def word_key(w: Sequence[int]) -> tuple:
    """Sort key: length first, then lexicographic in letter order."""
    return (len(w), tuple(code(x) for x in w))


# -- basic arithmetic -----------------------------------------------------

def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Return (core, conjugator) with ``w = conjugator^-1 core conjugator``."""
    r = free_reduce(w)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == -r[j - 1]:
        i += 1
        j -= 1
    return r[i:j], inverse(r[:i])


def power(w: Sequence[int], k: int) -> Word:
    w = tuple(w)
    return w * k if k >= 0 else inverse(w) * (-k)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u^-1 v^-1 u v (unreduced)."""
    return inverse(u) + inverse(v) + tuple(u) + tuple(v)


def conjugate(u: Sequence[int], v: Sequence[int]) -> Word:
    """u^v = v^-1 u v (unreduced)."""
    return inverse(v) + tuple(u) + tuple(v)


def abelianize(w: Sequence[int], rank: int) -> tuple[int, ...]:
    vec = [0] * rank
    for x in w:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def min_rotation(w: Sequence[int]) -> tuple[Word, int]:
    """Least rotation in letter order, with its offset (smallest on ties)."""
    w = tuple(w)
    if not w:
        return (), 0
    c = tuple(code(x) for x in w)
    best, at = c, 0
    for i in range(1, len(c)):
        r = c[i:] + c[:i]
        if r < best:
            best, at = r, i
    return w[at:] + w[:at], at


def canonical_cyclic(w: Sequence[int], inverse_closed: bool = True) -> Word:
    """Least rotation of ``w`` (or of ``w^-1`` when inverse_closed); no reduction."""
    a, _ = min_rotation(w)
    if not inverse_closed:
        return a
    b, _ = min_rotation(inverse(w))
    return a if word_key(a) <= word_key(b) else b


@dataclass(frozen=True)
class CyclicWord:
    """Cyclically reduced word standing for its class of cyclic shifts."""

    letters: Word
    inverse_closed: bool = True

    @classmethod
    def of(cls, w: Sequence[int], inverse_closed: bool = True) -> "CyclicWord":
        core, _ = cyclic_reduce(w)
        return cls(canonical_cyclic(core, inverse_closed), inverse_closed)

    def __len__(self) -> int:
        return len(self.letters)

    def shifts(self) -> list[Word]:
        """All distinct cyclic shifts, with inverses if inverse-closed."""
        out = dict.fromkeys(rotations(self.letters))
        if self.inverse_closed:
            out.update(dict.fromkeys(rotations(inverse(self.letters))))
        return list(out)


# -- expression grammar ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(-?\d+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("id", m.group(1), start))
        elif m.group(2):
            toks.append(("int", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "^()[],":
                raise ParseError(f"unexpected character {ch!r}", start)
            toks.append((ch, ch, start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.toks = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet
        self.end = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", self.end)

    def take(self, kind: str):
        t = self.peek()
        if t[0] != kind:
            want = {"eof": "end of input"}.get(kind, repr(kind))
            raise ParseError(f"expected {want}, got {t[1] or 'end of input'!r}", t[2])
        self.i += 1
        return t

    def word(self) -> Word:
        out: Word = ()
        if self.peek()[0] not in ("id", "(", "["):
            t = self.peek()
            raise ParseError(f"expected a term, got {t[1] or 'end of input'!r}", t[2])
        while self.peek()[0] in ("id", "(", "["):
            out += self.term()
        return out

    def term(self) -> Word:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take("^")
            if self.peek()[0] == "int":
                return power(base, int(self.take("int")[1]))
            return conjugate(base, self.atom())
        return base

    def atom(self) -> Word:
        kind, val, pos = self.peek()
        if kind == "id":
            self.i += 1
            try:
                return (self.alphabet.letter(val),)
            except UnknownGenerator as e:
                raise UnknownGenerator(str(e.args[0]), pos) from None
        if kind == "(":
            self.take("(")
            w = self.word()
            self.take(")")
            return w
        if kind == "[":
            self.take("[")
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            return commutator(u, v)
        raise ParseError(f"expected a generator, '(' or '[', got {val or 'end of input'!r}", pos)


def build_word(text: str, alphabet: Alphabet) -> Word:
    """Expand a word expression, unreduced.  Blank text is the empty word."""
    if not text.strip():
        return ()
    p = _Parser(text, alphabet)
    w = p.word()
    p.take("eof")
    return w


def format_word(w: Sequence[int], alphabet: Alphabet) -> str:
    """Render with run-length powers; parses back to the same letters."""
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = alphabet.names[abs(w[i]) - 1]
        e = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return " ".join(parts)
