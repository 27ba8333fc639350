"""Bikei words, presentations, and short-form presentation matrices.

Text grammar::

    # comment
    gens 2;
    (x1 ^ x2) _ x1 = x2 ^ x2

``_`` is the underbar operation and ``^`` the overbar operation. Relations are
separated by ``;`` or newlines. Operators do not associate, so nested words
need parentheses; the outermost pair on each side may be dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Union

import numpy as np

from .algebra import BikeiTable, format_table, parse_table


class Kind(IntEnum):
    UNDER = 0
    OVER = 1

    @property
    def symbol(self) -> str:
        return "_" if self is Kind.UNDER else "^"


@dataclass(frozen=True)
class Gen:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Op:
    kind: Kind
    left: "Word"
    right: "Word"


Word = Union[Gen, Op]


def generators_in(w: Word) -> set[int]:
    if isinstance(w, Gen):
        return {w.index}
    return generators_in(w.left) | generators_in(w.right)


def format_word(w: Word, top: bool = True) -> str:
    if isinstance(w, Gen):
        return f"x{w.index}"
    body = f"{format_word(w.left, False)} {w.kind.symbol} {format_word(w.right, False)}"
    return body if top else f"({body})"


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relations: tuple[tuple[Word, Word], ...] = ()

    def __post_init__(self):
        if self.generator_count < 1:
            raise ValueError("a presentation needs at least one generator")
        for lhs, rhs in self.relations:
            top = max(generators_in(lhs) | generators_in(rhs))
            if top > self.generator_count:
                raise ValueError(f"x{top} exceeds the {self.generator_count} declared generators")

    def __str__(self):
        lines = [f"gens {self.generator_count};"]
        lines += [f"{format_word(l)} = {format_word(r)};" for l, r in self.relations]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Relation:
    """``result = x _ y`` (UNDER) or ``result = x ^ y`` (OVER)."""

    kind: Kind
    x: int
    y: int
    result: int

    def __str__(self):
        return f"x{self.result} = x{self.x} {self.kind.symbol} x{self.y}"


@dataclass(frozen=True, eq=False)
class PresentationMatrix:
    """Partial operation table on ``n`` generators, 0 marking an unknown cell.

    ``seeds`` lists generator pairs already known to be equal; the matrix has
    no cell that can say ``x_a = x_b``, so the completion engine merges them
    first.
    """

    under: np.ndarray
    over: np.ndarray
    seeds: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        under = np.array(self.under, dtype=np.int64)
        over = np.array(self.over, dtype=np.int64)
        if under.ndim != 2 or under.shape[0] != under.shape[1] or under.shape[0] == 0:
            raise ValueError(f"blocks must be non-empty square arrays, got shape {under.shape}")
        if over.shape != under.shape:
            raise ValueError(f"block shapes differ: {under.shape} vs {over.shape}")
        n = under.shape[0]
        if ((under < 0) | (under > n)).any() or ((over < 0) | (over > n)).any():
            raise ValueError(f"entries must lie in 0..{n}")
        for a, b in self.seeds:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"seed ({a}, {b}) outside 1..{n}")
        under.setflags(write=False)
        over.setflags(write=False)
        object.__setattr__(self, "under", under)
        object.__setattr__(self, "over", over)
        object.__setattr__(self, "seeds", tuple((int(a), int(b)) for a, b in self.seeds))

    @classmethod
    def empty(cls, n: int) -> PresentationMatrix:
        z = np.zeros((n, n), dtype=np.int64)
        return cls(z, z)

    @classmethod
    def from_matrix(cls, rows, seeds=()) -> PresentationMatrix:
        m = np.array(rows, dtype=np.int64)
        if m.ndim != 2 or m.shape[1] != 2 * m.shape[0]:
            raise ValueError(f"expected an n x 2n matrix, got shape {m.shape}")
        n = m.shape[0]
        return cls(m[:, :n], m[:, n:], seeds)

    @classmethod
    def from_table(cls, t: BikeiTable) -> PresentationMatrix:
        return cls(t.under, t.over)

    @property
    def n(self) -> int:
        return self.under.shape[0]

    def block(self, kind: Kind) -> np.ndarray:
        return self.over if kind == Kind.OVER else self.under

    def matrix(self) -> np.ndarray:
        return np.hstack([self.under, self.over])

    def zero_count(self) -> int:
        return int((self.under == 0).sum() + (self.over == 0).sum())

    def is_complete(self) -> bool:
        return self.zero_count() == 0

    def to_table(self) -> BikeiTable:
        return BikeiTable(self.under, self.over)

    def __eq__(self, other):
        if not isinstance(other, PresentationMatrix):
            return NotImplemented
        return (
            np.array_equal(self.under, other.under)
            and np.array_equal(self.over, other.over)
            and self.seeds == other.seeds
        )

    def __repr__(self):
        return f"PresentationMatrix(n={self.n}, unknown={self.zero_count()}, seeds={self.seeds})"


def matrix_to_relations(m: PresentationMatrix) -> list[Relation]:
    """One relation per known cell, under block first, then row-major."""
    rels = []
    for kind in Kind:
        block = m.block(kind)
        for j, k in np.argwhere(block):
            rels.append(Relation(kind, int(j) + 1, int(k) + 1, int(block[j, k])))
    return rels


def relations_to_matrix(n: int, relations: Iterable[Relation], seeds=()) -> PresentationMatrix:
    """Encode short-form relations; a second value for a filled cell becomes a seed."""
    blocks = np.zeros((2, n, n), dtype=np.int64)
    seeds = list(seeds)
    for r in relations:
        cur = blocks[r.kind, r.x - 1, r.y - 1]
        if cur == 0:
            blocks[r.kind, r.x - 1, r.y - 1] = r.result
        elif cur != r.result:
            seeds.append((int(cur), r.result))
    return PresentationMatrix(blocks[0], blocks[1], tuple(seeds))


def to_short_form(p: Presentation) -> PresentationMatrix:
    """Rewrite a presentation into short form by adjoining defined generators.

    Every compound subword gets a fresh generator ``x_{n+1}, x_{n+2}, ...``
    innermost first, left side before right side. A relation between two bare
    generators is returned as a seed.
    """
    count = p.generator_count
    relations: list[Relation] = []
    seeds: list[tuple[int, int]] = []

    def name(w: Word) -> int:
        nonlocal count
        if isinstance(w, Gen):
            return w.index
        a, b = name(w.left), name(w.right)
        count += 1
        relations.append(Relation(w.kind, a, b, count))
        return count

    for lhs, rhs in p.relations:
        if isinstance(lhs, Gen) and isinstance(rhs, Gen):
            if lhs.index != rhs.index:
                seeds.append((lhs.index, rhs.index))
        elif isinstance(lhs, Gen):
            a, b = name(rhs.left), name(rhs.right)
            relations.append(Relation(rhs.kind, a, b, lhs.index))
        else:
            a, b = name(lhs.left), name(lhs.right)
            g = name(rhs)
            relations.append(Relation(lhs.kind, a, b, g))
    return relations_to_matrix(count, relations, seeds)


# --- parsing ----------------------------------------------------------------

class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(?P<gen>x\d+)|(?P<int>\d+)|(?P<kw>gens)|(?P<sym>[()_^=;]))")


def _tokenize(text: str):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip().startswith("#"):
            tokens.append(("nl", "", lineno, 1))
            continue
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m:
                col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                raise PresentationSyntaxError(f"unexpected character {line[col - 1]!r}", lineno, col)
            kind = m.lastgroup
            col = m.start(kind) + 1
            tokens.append((kind, m.group(kind), lineno, col))
            pos = m.end()
        tokens.append(("nl", "", lineno, len(line) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        last = self.tokens[-1] if self.tokens else ("nl", "", 1, 1)
        return ("eof", "", last[2], last[3])

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise PresentationSyntaxError(message, tok[2], tok[3])

    def skip_separators(self):
        while self.peek()[0] == "nl" or self.peek()[1] == ";":
            self.take()

    def parse(self) -> Presentation:
        self.skip_separators()
        tok = self.take()
        if tok[0] != "kw":
            self.fail("expected header 'gens <n>;'", tok)
        tok = self.take()
        if tok[0] != "int" or int(tok[1]) < 1:
            self.fail("expected a positive generator count after 'gens'", tok)
        self.n = int(tok[1])
        relations = []
        while True:
            self.skip_separators()
            if self.peek()[0] == "eof":
                break
            lhs = self.side()
            tok = self.take()
            if tok[1] != "=":
                self.fail("expected '='", tok)
            rhs = self.side()
            tok = self.peek()
            if tok[0] not in ("nl", "eof") and tok[1] != ";":
                self.fail("expected ';' or end of line after relation", tok)
            relations.append((lhs, rhs))
        return Presentation(self.n, tuple(relations))

    def side(self) -> Word:
        left = self.atom()
        if self.peek()[1] in ("_", "^"):
            kind = Kind.UNDER if self.take()[1] == "_" else Kind.OVER
            right = self.atom()
            if self.peek()[1] in ("_", "^"):
                self.fail("operators are not associative; add parentheses")
            return Op(kind, left, right)
        return left

    def atom(self) -> Word:
        tok = self.take()
        if tok[0] == "gen":
            index = int(tok[1][1:])
            if index < 1:
                self.fail("generator indices start at 1", tok)
            if index > self.n:
                self.fail(f"x{index} exceeds the {self.n} declared generators", tok)
            return Gen(index)
        if tok[1] == "(":
            left = self.atom()
            op = self.take()
            if op[1] not in ("_", "^"):
                self.fail("expected '_' or '^' inside parentheses", op)
            right = self.atom()
            close = self.take()
            if close[1] != ")":
                self.fail("expected ')'; operators are not associative", close)
            return Op(Kind.UNDER if op[1] == "_" else Kind.OVER, left, right)
        self.fail("expected a generator x<k> or '('", tok)


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).parse()


def read_matrix(text: str) -> PresentationMatrix:
    """Parse a presentation-matrix file (bikei table format, zeros allowed)."""
    _, under, over = parse_table(text, allow_zero=True)
    return PresentationMatrix(under, over)


def format_matrix(m: PresentationMatrix) -> str:
    return format_table(m.under, m.over)
