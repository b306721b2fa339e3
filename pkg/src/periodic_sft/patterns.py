"""Alphabets, 2x2 patterns, basic sets and the word encodings chi / sigma.

Coordinate conventions (fixed globally):

* a pattern cell is addressed by ``(x, y)`` with ``x`` increasing to the
  right and ``y`` increasing upward, origin at the bottom-left;
* a *row word* lists the symbols of a row left to right;
* a *column word* lists the symbols of a column bottom to top.

With these conventions the pattern matrices X, Y and the skew transfer
matrices can be read off literally from their index formulas.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import IndexRangeError, InvalidSymbolError, ParseError


class Pattern2x2(NamedTuple):
    """A 2x2 block of symbols, stored bottom row first."""

    bl: int
    br: int
    tl: int
    tr: int

    def at(self, x: int, y: int) -> int:
        return self[2 * y + x]

    @classmethod
    def from_columns(cls, left: Sequence[int], right: Sequence[int]) -> "Pattern2x2":
        """Build from two column words (bottom, top)."""
        return cls(left[0], right[0], left[1], right[1])

    @classmethod
    def from_rows(cls, bottom: Sequence[int], top: Sequence[int]) -> "Pattern2x2":
        """Build from two row words (left, right)."""
        return cls(bottom[0], bottom[1], top[0], top[1])

    @property
    def left(self) -> tuple[int, int]:
        return (self.bl, self.tl)

    @property
    def right(self) -> tuple[int, int]:
        return (self.br, self.tr)

    @property
    def bottom(self) -> tuple[int, int]:
        return (self.bl, self.br)

    @property
    def top(self) -> tuple[int, int]:
        return (self.tl, self.tr)

    def transpose(self) -> "Pattern2x2":
        """Swap x and y."""
        return Pattern2x2(self.bl, self.tl, self.br, self.tr)


def _check_alphabet(r: int) -> None:
    if not isinstance(r, int) or r < 2:
        raise ValueError(f"alphabet size must be an integer >= 2, got {r!r}")


@dataclass(frozen=True)
class BasicSet:
    """Alphabet size ``r`` and the admissible 2x2 patterns over ``0..r-1``."""

    r: int
    patterns: frozenset[Pattern2x2]

    def __init__(self, r: int, patterns: Iterable[Sequence[int]] = ()):
        _check_alphabet(r)
        pats = set()
        for p in patterns:
            p = Pattern2x2(*p)
            for s in p:
                if not isinstance(s, int) or not 0 <= s < r:
                    raise InvalidSymbolError(f"symbol {s!r} not in alphabet of size {r}")
            pats.add(p)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "patterns", frozenset(pats))

    def __contains__(self, p) -> bool:
        return Pattern2x2(*p) in self.patterns

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(sorted(self.patterns))

    @classmethod
    def full(cls, r: int) -> "BasicSet":
        return cls(r, itertools.product(range(r), repeat=4))

    @classmethod
    def empty(cls, r: int) -> "BasicSet":
        return cls(r, ())

    @classmethod
    def from_h2(cls, h2: Sequence[Sequence[int]], r: int = 2) -> "BasicSet":
        """Basic set whose horizontal matrix H2 is ``h2`` (entry (i1, i2) admits
        left column ``unchi(i1)`` beside right column ``unchi(i2)``)."""
        n = r * r
        if len(h2) != n or any(len(row) != n for row in h2):
            raise ValueError(f"H2 must be {n}x{n} for r={r}")
        pats = []
        for i1 in range(n):
            for i2 in range(n):
                if h2[i1][i2]:
                    pats.append(Pattern2x2.from_columns(unchi(i1 + 1, 2, r), unchi(i2 + 1, 2, r)))
        return cls(r, pats)

    @classmethod
    def from_v2(cls, v2: Sequence[Sequence[int]], r: int = 2) -> "BasicSet":
        """Basic set whose vertical matrix V2 is ``v2`` (entry (j1, j2) admits
        bottom row ``unchi(j1)`` under top row ``unchi(j2)``)."""
        n = r * r
        if len(v2) != n or any(len(row) != n for row in v2):
            raise ValueError(f"V2 must be {n}x{n} for r={r}")
        pats = []
        for j1 in range(n):
            for j2 in range(n):
                if v2[j1][j2]:
                    pats.append(Pattern2x2.from_rows(unchi(j1 + 1, 2, r), unchi(j2 + 1, 2, r)))
        return cls(r, pats)

    @classmethod
    def random(cls, r: int, density: float = 0.5, seed: int | None = None) -> "BasicSet":
        rng = random.Random(seed)
        return cls(r, [p for p in itertools.product(range(r), repeat=4) if rng.random() < density])

    # --- serialization -------------------------------------------------

    def to_text(self) -> str:
        lines = [f"r={self.r}"]
        for p in self:
            lines.append(f"{p.tl} {p.tr} / {p.bl} {p.br}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"r": self.r, "patterns": [[p.tl, p.tr, p.bl, p.br] for p in self]})


def parse_basic_set(text: str) -> BasicSet:
    """Parse either the line format (``r=<int>`` then ``tl tr / bl br``) or
    the JSON format ``{"r": .., "patterns": [[tl, tr, bl, br], ...]}``."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
            r = data["r"]
            pats = [Pattern2x2(bl, br, tl, tr) for tl, tr, bl, br in data["patterns"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"bad JSON basic set: {exc}") from exc
        return _build(r, pats)

    lines = [ln.split("#", 1)[0].strip() for ln in stripped.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].replace(" ", "").startswith("r="):
        raise ParseError("first line must be 'r=<int>'")
    try:
        r = int(lines[0].replace(" ", "")[2:])
    except ValueError as exc:
        raise ParseError(f"bad alphabet line {lines[0]!r}") from exc
    pats = []
    for ln in lines[1:]:
        top, sep, bottom = ln.partition("/")
        try:
            tl, tr = (int(t) for t in top.split())
            bl, br = (int(t) for t in bottom.split())
        except ValueError as exc:
            raise ParseError(f"bad pattern line {ln!r}") from exc
        if not sep:
            raise ParseError(f"bad pattern line {ln!r}")
        pats.append(Pattern2x2(bl, br, tl, tr))
    return _build(r, pats)


def _build(r, pats) -> BasicSet:
    if not isinstance(r, int) or r < 2:
        raise ParseError(f"bad alphabet size {r!r}")
    try:
        return BasicSet(r, pats)
    except InvalidSymbolError as exc:
        raise ParseError(str(exc)) from exc


def load_basic_set(path: str | Path) -> BasicSet:
    return parse_basic_set(Path(path).read_text())


# --- word encodings ------------------------------------------------------

def chi(word: Sequence[int], r: int = 2) -> int:
    """1-based index ``1 + sum_j u_j r**(n-j)`` of a word."""
    idx = 0
    for u in word:
        if not 0 <= u < r:
            raise InvalidSymbolError(f"symbol {u!r} not in alphabet of size {r}")
        idx = idx * r + u
    return idx + 1


def unchi(index: int, n: int, r: int = 2) -> tuple[int, ...]:
    if not 1 <= index <= r**n:
        raise IndexRangeError(f"index {index} outside [1, {r}^{n}]")
    v = index - 1
    out = [0] * n
    for pos in range(n - 1, -1, -1):
        v, out[pos] = divmod(v, r)
    return tuple(out)


def sigma(index: int, n: int, r: int = 2) -> int:
    """Index of the cyclic left shift of the word with index ``index``."""
    if not 1 <= index <= r**n:
        raise IndexRangeError(f"index {index} outside [1, {r}^{n}]")
    v = index - 1
    head, tail = divmod(v, r ** (n - 1))
    return tail * r + head + 1


def sigma_power(index: int, n: int, r: int, power: int) -> int:
    """``sigma`` applied ``power`` times (negative powers shift right)."""
    power %= n
    v = index - 1
    base = r**power
    head, tail = divmod(v, r ** (n - power))
    return tail * base + head + 1


def reflect(bs: BasicSet) -> BasicSet:
    """Swap the roles of x and y in every pattern."""
    return BasicSet(bs.r, (p.transpose() for p in bs.patterns))
