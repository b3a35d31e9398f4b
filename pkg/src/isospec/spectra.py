"""Comparison of monomial spectra k^a n^c / m^b under the spectrum order.

f <= g means: for some C, f(k, Cm, n) <= C g(Ck, m, Cn) + C n/m + C whenever
m >= Ck.  For monomials this is a statement about exponents.  In log
coordinates x = log k, y = log m, z = log n the admissible region is the cone
x >= 0, y >= x, z >= 0, every term is linear and C only shifts constants, so

    f <= g  iff  L_f <= max(L_g, z - y, 0) on the whole cone,

where L_f = a x - b y + c z.  Both sides are positively homogeneous, so it is
enough to check the triangle cut out by x + y + z = 1.  The difference is a
concave piecewise-linear function whose pieces change only along the lines
where two of L_g, z - y, 0 agree, so checking the vertices of that
subdivision decides the question exactly (in rationals).  If the inequality
fails at a point, scaling along that ray makes the gap exceed any constant.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np


class UnsupportedForm(ValueError):
    pass


@dataclass(frozen=True)
class MonomialSpectrum:
    """f(k, m, n) = k^alpha n^gamma / m^beta with non-negative exponents."""

    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = Fraction(getattr(self, name))
            object.__setattr__(self, name, v)
            if v < 0:
                raise UnsupportedForm(f"{name} < 0 leaves the monotone class")

    @classmethod
    def parse(cls, text: str) -> "MonomialSpectrum":
        a, b, c = _parse_monomial(text)
        return cls(a, -b, c)

    def __call__(self, k: float, m: float, n: float) -> float:
        return k ** float(self.alpha) * n ** float(self.gamma) / m ** float(self.beta)

    def log(self, x, y, z):
        return float(self.alpha) * x - float(self.beta) * y + float(self.gamma) * z

    def __str__(self) -> str:
        def part(sym, e):
            if e == 0:
                return ""
            return sym if e == 1 else f"{sym}^{e}" if e.denominator == 1 else f"{sym}^({e})"

        num = " ".join(p for p in (part("k", self.alpha), part("n", self.gamma)) if p) or "1"
        den = part("m", self.beta)
        return f"{num} / {den}" if den else num


_TOK = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([kmn])|(.))")


def _parse_monomial(text: str) -> tuple[Fraction, Fraction, Fraction]:
    """Exponent vector (k, m, n) of a product/quotient/power expression."""
    toks = []
    for m in _TOK.finditer(text):
        if m.group(0).strip() == "":
            continue
        if m.group(1):
            toks.append(("num", Fraction(m.group(1))))
        elif m.group(2):
            toks.append(("var", m.group(2)))
        elif m.group(3) in "*/^()-":
            toks.append((m.group(3), None))
        else:
            raise UnsupportedForm(f"unsupported symbol {m.group(3)!r}")
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else "eof"

    def take(kind):
        nonlocal pos
        if peek() != kind:
            raise UnsupportedForm(f"expected {kind}, got {peek()}")
        pos += 1
        return toks[pos - 1][1]

    def expr():
        v = factor()
        while peek() in ("*", "/", "var", "(", "num"):
            if peek() == "*":
                take("*")
                v = _add(v, factor())
            elif peek() == "/":
                take("/")
                v = _add(v, _scale(factor(), -1))
            else:
                v = _add(v, factor())
        return v

    def exponent():
        sign = 1
        if peek() == "-":
            take("-")
            sign = -1
        if peek() == "(":
            take("(")
            s2 = 1
            if peek() == "-":
                take("-")
                s2 = -1
            e = take("num") * s2
            take(")")
            return sign * e
        return sign * take("num")

    def factor():
        if peek() == "var":
            name = take("var")
            v = tuple(Fraction(int(name == s)) for s in "kmn")
        elif peek() == "num":
            val = take("num")
            if val != 1:
                raise UnsupportedForm("only the constant 1 is allowed")
            v = (Fraction(0),) * 3
        elif peek() == "(":
            take("(")
            v = expr()
            take(")")
        else:
            raise UnsupportedForm(f"unexpected {peek()}")
        if peek() == "^":
            take("^")
            v = _scale(v, exponent())
        return v

    v = expr()
    if peek() != "eof":
        raise UnsupportedForm(f"trailing input at {peek()}")
    return v


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _scale(u, s):
    return tuple(a * s for a in u)


def _as_monomial(f) -> MonomialSpectrum:
    if isinstance(f, MonomialSpectrum):
        return f
    if isinstance(f, str):
        return MonomialSpectrum.parse(f)
    raise UnsupportedForm(f"not a monomial: {f!r}")


# -- exact rule ------------------------------------------------------------

_TRI = (
    (Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(1, 2), Fraction(1, 2), Fraction(0)),
)


def _lin(f: MonomialSpectrum):
    return (f.alpha, -f.beta, f.gamma)


def _dot(c, p):
    return sum(a * b for a, b in zip(c, p))


@lru_cache(maxsize=4096)
def _candidates(g: MonomialSpectrum) -> list[tuple]:
    pieces = [_lin(g), (Fraction(0), Fraction(-1), Fraction(1)), (Fraction(0),) * 3]
    pts = list(_TRI)
    for (p, q) in combinations(range(3), 2):
        d = tuple(a - b for a, b in zip(pieces[p], pieces[q]))
        for u, v in combinations(_TRI, 2):
            du, dv = _dot(d, u), _dot(d, v)
            if du != dv and (du <= 0 <= dv or dv <= 0 <= du):
                s = du / (du - dv)
                pts.append(tuple(a + s * (b - a) for a, b in zip(u, v)))
    # the common point of the three switching lines, if inside the triangle
    d1 = tuple(a - b for a, b in zip(pieces[0], pieces[1]))
    d2 = tuple(a - b for a, b in zip(pieces[1], pieces[2]))
    M = [list(d1), list(d2), [Fraction(1)] * 3]
    sol = _solve3(M, [Fraction(0), Fraction(0), Fraction(1)])
    if sol is not None and _inside(sol):
        pts.append(sol)
    return pts


def _solve3(M, b):
    M = [row[:] + [bb] for row, bb in zip(M, b)]
    for c in range(3):
        piv = next((r for r in range(c, 3) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(3):
            if r != c and M[r][c] != 0:
                q = M[r][c] / M[c][c]
                M[r] = [a - q * bb for a, bb in zip(M[r], M[c])]
    return tuple(M[i][3] / M[i][i] for i in range(3))


def _inside(p) -> bool:
    # barycentric coordinates w.r.t. _TRI: x = w3/2, y = w1 + w3/2, z = w2
    x, y, z = p
    w3 = 2 * x
    w1 = y - x
    w2 = z
    return min(w1, w2, w3) >= 0 and w1 + w2 + w3 == 1


def precedes(f, g) -> bool:
    """Exact decision of f <= g for monomials."""
    f, g = _as_monomial(f), _as_monomial(g)
    lf, lg = _lin(f), _lin(g)
    for p in _candidates(g):
        rhs = max(_dot(lg, p), p[2] - p[1], Fraction(0))
        if _dot(lf, p) > rhs:
            return False
    return True


def compare_monomials(f, g) -> str:
    """'equivalent', 'strictly-below' (f < g), 'strictly-above' or 'incomparable'."""
    a, b = precedes(f, g), precedes(g, f)
    if a and b:
        return "equivalent"
    if a:
        return "strictly-below"
    if b:
        return "strictly-above"
    return "incomparable"


# -- numeric falsifier -------------------------------------------------------

def direction_grid(step: int = 24) -> np.ndarray:
    """Rays (x, y, z) through the section triangle, spaced 1/step."""
    pts = []
    V = np.array([[float(c) for c in v] for v in _TRI])
    for i in range(step + 1):
        for j in range(step + 1 - i):
            w = np.array([i, j, step - i - j]) / step
            pts.append(w @ V)
    pts.append(np.array([0.0, 1 / 3, 2 / 3]))  # the (1, t, t^2) family
    return np.array(pts)


def numeric_falsify(f, g, C_max: int = 10, grid: np.ndarray | None = None, scale: float = 2000.0):
    """A family (k, m, n) = (t^x, t^y, t^z), t = e^scale, violating the inequality.

    Returns the direction and per-C log margins when every C <= C_max fails at
    that direction, else None.  A witness refutes f <= g only up to C_max.
    """
    f, g = _as_monomial(f), _as_monomial(g)
    G = direction_grid() if grid is None else np.asarray(grid, dtype=float)
    x, y, z = G[:, 0] * scale, G[:, 1] * scale, G[:, 2] * scale
    lc = np.log(np.arange(1, C_max + 1, dtype=float))[:, None]
    ly = np.maximum(y, lc + x)  # enforce m >= Ck
    lhs = f.log(x, ly + lc, z)
    t1 = lc + g.log(x + lc, ly, z + lc)
    t2 = lc + z - ly
    rhs = np.logaddexp(np.logaddexp(t1, t2), lc)
    margins = lhs - rhs
    ok_any = (margins <= 0).any(axis=0)
    bad = np.nonzero(~ok_any)[0]
    if not len(bad):
        return None
    best = bad[int(np.argmax(margins[:, bad].min(axis=0)))]
    return {"direction": G[best].tolist(), "C_max": C_max,
            "min_log_margin": float(margins[:, best].min()), "semi_decision": True}


def verdict_json(f, g) -> str:
    v = compare_monomials(f, g)
    return json.dumps({"f": str(_as_monomial(f)), "g": str(_as_monomial(g)), "verdict": v})
