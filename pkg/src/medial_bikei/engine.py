"""Completion of a presentation matrix into a finite bikei table.

The engine alternates three steps on a partial table:

* propagate through the bikei axioms (and, by default, the medial
  identities), filling a cell whenever one side of an instance is known and
  the other side lacks only its outermost cell. Only instances reading a cell
  that changed since the last fixpoint are re-examined, so the result is a
  state on which a full ``propagate_once`` sweep changes nothing;
* merge generators shown equal and collapse their rows and columns;
* when propagation stalls with unknown cells left, adjoin a fresh generator
  as the value of one unknown cell.

Zero selection: ``lex`` takes the first unknown cell in the order
``(max(row, col), row, col, block)``, which finishes older generators first;
``block`` is the plain ``(block, row, col)`` order; ``score`` scores the
unknown cells in the oldest unfinished row/column pair by one-step lookahead
and takes the best, ties by ``lex``.

It stops with a complete table or when the table reaches ``max_size``
generators. A size-bound stop says nothing about finiteness.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .algebra import BikeiTable, check_bikei_axioms, check_medial
from .presentation import Kind, PresentationMatrix

log = logging.getLogger(__name__)

DEFAULT_MAX_SIZE = 500


class ZeroStrategy(str, Enum):
    SCORE = "score"
    LEX = "lex"
    BLOCK = "block"


class Status(str, Enum):
    FINITE = "FINITE"
    BOUND_EXCEEDED = "BOUND_EXCEEDED"


class BoundExceeded(Exception):
    def __init__(self, size: int, bound: int):
        super().__init__(f"table has {size} generators; bound is {bound}")
        self.size = size
        self.bound = bound


class EngineError(RuntimeError):
    """A completed table failed verification. Always a bug."""


@dataclass(frozen=True)
class EngineConfig:
    max_size: int = DEFAULT_MAX_SIZE
    zero_strategy: ZeroStrategy = ZeroStrategy.SCORE
    trace: bool = False
    medial: bool = True

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        object.__setattr__(self, "zero_strategy", ZeroStrategy(self.zero_strategy))


# --- trace events -----------------------------------------------------------

_BLOCK_NAMES = ("under", "over")


@dataclass(frozen=True)
class Fill:
    block: int
    row: int
    col: int
    value: int

    def __str__(self):
        return f"FILL {_BLOCK_NAMES[self.block]} {self.row} {self.col} {self.value}"


@dataclass(frozen=True)
class Merge:
    a: int
    b: int

    def __str__(self):
        return f"MERGE {self.a} {self.b}"


@dataclass(frozen=True)
class Reduce:
    def __str__(self):
        return "REDUCE"


@dataclass(frozen=True)
class Adjoin:
    block: int
    row: int
    col: int

    def __str__(self):
        return f"ADJOIN {_BLOCK_NAMES[self.block]} {self.row} {self.col}"


def format_trace(events: Iterable) -> str:
    return "".join(f"{e}\n" for e in events)


def parse_trace(text: str) -> list:
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        tag = parts[0]
        try:
            if tag == "FILL":
                events.append(Fill(_BLOCK_NAMES.index(parts[1]), *map(int, parts[2:5])))
            elif tag == "MERGE":
                events.append(Merge(int(parts[1]), int(parts[2])))
            elif tag == "REDUCE":
                events.append(Reduce())
            elif tag == "ADJOIN":
                events.append(Adjoin(_BLOCK_NAMES.index(parts[1]), int(parts[2]), int(parts[3])))
            else:
                raise ValueError(tag)
        except (ValueError, IndexError, TypeError):
            raise ValueError(f"trace line {lineno}: cannot parse {line!r}") from None
    return events


# --- equivalence tracking -----------------------------------------------------

class EquivalenceTracker:
    """Union-find over generator indices; the smaller index is the root."""

    def __init__(self, size: int = 0):
        self.parent = np.arange(size + 1, dtype=np.int64)
        self.pending: list[tuple[int, int]] = []

    def grow(self, size: int) -> None:
        old = len(self.parent)
        if size + 1 > old:
            self.parent = np.concatenate([self.parent, np.arange(old, size + 1, dtype=np.int64)])

    def find(self, a: int) -> int:
        return int(K.find(self.parent, a))

    def merge(self, a: int, b: int) -> bool:
        self.grow(max(a, b))
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        self.pending.append((min(a, b), max(a, b)))
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    @property
    def has_pending(self) -> bool:
        return bool(self.pending)

    def reset(self, size: int) -> None:
        self.parent = np.arange(size + 1, dtype=np.int64)
        self.pending = []


# --- working state ------------------------------------------------------------

class _Work:
    """Padded mutable copy of a partial table: ``T[b, i, j]`` for ``i, j`` in 1..n.

    Row and column 0 stay zero so that lookups through an unknown entry give 0.
    """

    def __init__(self, m: PresentationMatrix, capacity: int = 0):
        n = m.n
        cap = max(capacity, n, 1)
        self.T = np.zeros((2, cap + 1, cap + 1), dtype=np.int64)
        self.T[0, 1:n + 1, 1:n + 1] = m.under
        self.T[1, 1:n + 1, 1:n + 1] = m.over
        self.n = n
        # original generator -> current index
        self.origin = np.arange(n + 1, dtype=np.int64)

    def reserve(self, n: int) -> None:
        cap = self.T.shape[1] - 1
        if n <= cap:
            return
        new_cap = max(n, 2 * cap)
        T = np.zeros((2, new_cap + 1, new_cap + 1), dtype=np.int64)
        T[:, :cap + 1, :cap + 1] = self.T
        self.T = T

    def view(self) -> np.ndarray:
        return self.T[:, 1:self.n + 1, 1:self.n + 1]

    def matrix(self) -> PresentationMatrix:
        v = self.view()
        return PresentationMatrix(v[0].copy(), v[1].copy())

    def zeros(self) -> np.ndarray:
        """Unknown cells as rows ``(block, row, col)``, 1-based, block-major."""
        z = np.argwhere(self.view() == 0)
        z[:, 1:] += 1
        return z

    def sweep(self, tracker: EquivalenceTracker, medial: bool, trace: list | None):
        n = self.n
        tracker.grow(n)
        flog, mlog, counts = K.new_logs(n)
        K.sweep_all(self.T, n, medial, tracker.parent, flog, mlog, counts)
        fills, merges = int(counts[0]), int(counts[1])
        for a, b in mlog[:merges]:
            tracker.pending.append((int(a), int(b)))
        if trace is not None:
            trace.extend(Fill(*map(int, row)) for row in flog[:fills])
            trace.extend(Merge(int(a), int(b)) for a, b in mlog[:merges])
        return fills, merges

    def drain(self, cells: np.ndarray, tracker: EquivalenceTracker, medial: bool, trace: list | None):
        """Propagate from ``cells`` until no instance reading a changed cell fires."""
        n = self.n
        tracker.grow(n)
        flog, mlog, counts = K.new_logs(n)
        K.drain(self.T, n, medial, np.ascontiguousarray(cells, dtype=np.int64),
                tracker.parent, flog, mlog, counts, np.empty(1, dtype=np.int64))
        fills, merges = int(counts[0]), int(counts[1])
        for a, b in mlog[:merges]:
            tracker.pending.append((int(a), int(b)))
        if trace is not None:
            trace.extend(Fill(*map(int, row)) for row in flog[:fills])
            trace.extend(Merge(int(a), int(b)) for a, b in mlog[:merges])
        return fills, merges

    def known(self) -> np.ndarray:
        z = np.argwhere(self.view() != 0)
        z[:, 1:] += 1
        return z

    def reduce(self, tracker: EquivalenceTracker) -> np.ndarray:
        """Apply pending merges; return the known cells that involve a merged class."""
        n = self.n
        tracker.grow(n)
        parent = tracker.parent
        size = n + 1
        while True:
            f = np.array([K.find(parent, i) for i in range(size)], dtype=np.int64)
            fresh = False
            for blk in range(2):
                B = self.T[blk, :size, :size]
                i, j = np.nonzero(B)
                v = f[B[i, j]]
                target = f[i] * size + f[j]
                order = np.lexsort((v, target))
                target, v = target[order], v[order]
                clash = (target[1:] == target[:-1]) & (v[1:] != v[:-1])
                for a, b in zip(v[:-1][clash].tolist(), v[1:][clash].tolist()):
                    ra, rb = K.find(parent, a), K.find(parent, b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
                        fresh = True
            if not fresh:
                break
        f = np.array([K.find(parent, i) for i in range(size)], dtype=np.int64)
        reps = np.unique(f[1:])
        renumber = np.zeros(size, dtype=np.int64)
        renumber[reps] = np.arange(1, len(reps) + 1)
        g = renumber[f]
        T = np.zeros_like(self.T)
        for blk in range(2):
            B = self.T[blk, :size, :size]
            i, j = np.nonzero(B)
            T[blk, g[i], g[j]] = g[B[i, j]]
        self.T = T
        self.n = len(reps)
        self.origin = g[self.origin]
        tracker.reset(self.T.shape[1] - 1)
        sizes = np.bincount(g[1:], minlength=self.n + 1)
        merged = sizes > 1
        v = self.view()
        b, i, j = np.nonzero(v)
        touched = merged[i + 1] | merged[j + 1] | merged[v[b, i, j]]
        return np.column_stack([b[touched], i[touched] + 1, j[touched] + 1])

    def adjoin(self, block: int, row: int, col: int) -> None:
        if self.T[block, row, col] != 0:
            raise ValueError(f"cell ({_BLOCK_NAMES[block]}, {row}, {col}) is already known")
        self.reserve(self.n + 1)
        self.n += 1
        self.T[block, row, col] = self.n


def _frontier(zeros: np.ndarray) -> np.ndarray:
    """Indices of the unknown cells in the oldest unfinished row/column pair."""
    m = np.maximum(zeros[:, 1], zeros[:, 2])
    return np.flatnonzero(m == m.min())


def _frontier_scores(w: _Work, zeros: np.ndarray, medial: bool) -> np.ndarray:
    w.reserve(w.n + 1)
    flog, mlog, counts = K.new_logs(w.n)
    parent = np.arange(w.n + 2, dtype=np.int64)
    return K.dry_scores(w.T, w.n, np.ascontiguousarray(zeros, dtype=np.int64),
                        medial, parent, flog, mlog, np.zeros(3, dtype=np.int64))


def _padded_work(m: PresentationMatrix) -> _Work:
    return _Work(m, m.n + 1)


# --- public operations ----------------------------------------------------------

def propagate_once(
    m: PresentationMatrix, tracker: EquivalenceTracker, medial: bool = True
) -> tuple[PresentationMatrix, bool]:
    """One sweep over all axiom instances in fixed order.

    Fills are visible to later instances in the same sweep. Conflicting values
    are never overwritten; they are queued on ``tracker`` as merges.
    """
    w = _Work(m)
    fills, merges = w.sweep(tracker, medial, None)
    return w.matrix(), bool(fills or merges)


def reduce(m: PresentationMatrix, tracker: EquivalenceTracker) -> PresentationMatrix:
    """Apply the pending merges, cascading through collapsed rows and columns.

    Each class keeps its smallest index and the survivors are renumbered
    ``1..n'`` in order.
    """
    if not tracker.has_pending and all(tracker.find(i) == i for i in range(1, m.n + 1)):
        return m
    w = _Work(m)
    w.reduce(tracker)
    return w.matrix()


def saturate(
    m: PresentationMatrix, medial: bool = True, seeds: Sequence[tuple[int, int]] | None = None
) -> tuple[PresentationMatrix, tuple[int, ...]]:
    """Propagate and merge until stable, without adjoining generators.

    Returns the closed matrix and the map from input generators to its
    indices. The result is the same as alternating ``propagate_once`` and
    ``reduce`` until nothing changes.
    """
    w = _Work(m, m.n + 1)
    tracker = EquivalenceTracker(w.T.shape[1] - 1)
    for a, b in (m.seeds if seeds is None else seeds):
        tracker.merge(a, b)
    if tracker.has_pending:
        w.reduce(tracker)
    dirty = w.known()
    while True:
        _, merges = w.drain(dirty, tracker, medial, None)
        if not merges:
            break
        dirty = w.reduce(tracker)
    return w.matrix(), tuple(int(v) for v in w.origin[1:])


def score_zeros(m: PresentationMatrix, medial: bool = True) -> dict[tuple[int, int, int], int]:
    """Lookahead score of every unknown cell ``(block, row, col)``.

    The score counts the distinct cells filled in one step by axiom
    instances that read the cell once it holds a fresh generator.
    """
    w = _Work(m)
    zeros = w.zeros()
    if len(zeros) == 0:
        raise ValueError("matrix has no unknown cells")
    return dict(zip(map(tuple, zeros.tolist()), _scores(w, zeros, medial).tolist()))


def _scores(w: _Work, zeros: np.ndarray, medial: bool) -> np.ndarray:
    n = w.n
    keys, M2 = K.lookahead_pairs(w.T, n, medial)
    S = n + 2
    counts = np.zeros(2 * S * S, dtype=np.int64)
    if len(keys):
        keys = np.unique(keys)
        np.add.at(counts, keys // M2, 1)
    ids = (zeros[:, 0] * S + zeros[:, 1]) * S + zeros[:, 2]
    return counts[ids]


def _lex_order(zeros: np.ndarray) -> np.ndarray:
    # oldest generators first: (max(row, col), row, col, block)
    b, r, c = zeros[:, 0], zeros[:, 1], zeros[:, 2]
    return np.lexsort((b, c, r, np.maximum(r, c)))


def _choose(w: _Work, strategy: ZeroStrategy, medial: bool) -> tuple[int, int, int]:
    zeros = w.zeros()
    if strategy is ZeroStrategy.BLOCK:
        pick = 0
    elif strategy is ZeroStrategy.LEX:
        pick = _lex_order(zeros)[0]
    else:
        front = _frontier(zeros)
        order = front[_lex_order(zeros[front])]
        scores = _frontier_scores(w, zeros[order], medial)
        pick = order[int(np.argmax(scores))]
    return tuple(int(v) for v in zeros[pick])


def adjoin_generator(m: PresentationMatrix, config: EngineConfig = EngineConfig()) -> PresentationMatrix:
    """Give one unknown cell the value ``n + 1`` and grow both blocks by one."""
    if m.is_complete():
        raise ValueError("matrix has no unknown cells")
    if m.n >= config.max_size:
        raise BoundExceeded(m.n, config.max_size)
    w = _Work(m, m.n + 1)
    w.adjoin(*_choose(w, config.zero_strategy, config.medial))
    return w.matrix()


@dataclass
class CompletionOutcome:
    status: Status
    table: BikeiTable | None
    final_size: int
    bound: int
    generator_map: tuple[int, ...] = ()
    adjoined: int = 0
    sweeps: int = 0
    trace: list | None = field(default=None, repr=False)

    @property
    def finite(self) -> bool:
        return self.status is Status.FINITE


def complete(
    m: PresentationMatrix,
    seeds: Sequence[tuple[int, int]] | None = None,
    config: EngineConfig = EngineConfig(),
) -> CompletionOutcome:
    """Complete ``m`` to a bikei table or stop at ``config.max_size``.

    ``seeds`` defaults to ``m.seeds``. ``generator_map[i-1]`` is the element
    that input generator ``i`` became.
    """
    seeds = m.seeds if seeds is None else seeds
    trace: list | None = [] if config.trace else None
    w = _Work(m, min(max(config.max_size, m.n), 64))
    tracker = EquivalenceTracker(w.T.shape[1] - 1)
    for a, b in seeds:
        if trace is not None:
            trace.append(Merge(min(a, b), max(a, b)))
        tracker.merge(a, b)
    if tracker.has_pending:
        w.reduce(tracker)
        if trace is not None:
            trace.append(Reduce())
    sweeps = adjoined = 0
    dirty = w.known()
    while True:
        while True:
            fills, merges = w.drain(dirty, tracker, config.medial, trace)
            sweeps += 1
            if not merges:
                break
            dirty = w.reduce(tracker)
            if trace is not None:
                trace.append(Reduce())
        if not (w.view() == 0).any():
            break
        if w.n >= config.max_size:
            log.info("bound %d reached after %d adjoined generators", config.max_size, adjoined)
            return CompletionOutcome(
                Status.BOUND_EXCEEDED, None, w.n, config.max_size,
                tuple(int(v) for v in w.origin[1:]), adjoined, sweeps, trace,
            )
        cell = _choose(w, config.zero_strategy, config.medial)
        w.adjoin(*cell)
        dirty = np.array([cell], dtype=np.int64)
        adjoined += 1
        if trace is not None:
            trace.append(Adjoin(*cell))
        log.debug("adjoined x%d at %s", w.n, cell)

    v = w.view()
    table = BikeiTable(v[0].copy(), v[1].copy())
    violations = check_bikei_axioms(table)
    if config.medial:
        violations += check_medial(table)
    if violations:
        raise EngineError(f"completed table fails {violations[0]}")
    return CompletionOutcome(
        Status.FINITE, table, table.n, config.max_size,
        tuple(int(v) for v in w.origin[1:]), adjoined, sweeps, trace,
    )


def replay_trace(m: PresentationMatrix, events: Iterable) -> PresentationMatrix:
    """Re-apply a completion trace to its input matrix."""
    w = _Work(m, m.n + 1)
    tracker = EquivalenceTracker(w.T.shape[1] - 1)
    for e in events:
        if isinstance(e, Fill):
            cur = w.T[e.block, e.row, e.col]
            if cur not in (0, e.value):
                raise ValueError(f"trace overwrites a known cell: {e}")
            w.T[e.block, e.row, e.col] = e.value
        elif isinstance(e, Merge):
            tracker.merge(e.a, e.b)
        elif isinstance(e, Reduce):
            w.reduce(tracker)
        elif isinstance(e, Adjoin):
            w.adjoin(e.block, e.row, e.col)
        else:
            raise TypeError(f"unknown trace event {e!r}")
    return w.matrix()


def cell_name(cell: tuple[int, int, int]) -> str:
    block, row, col = cell
    return f"{Kind(block).name.lower()}[{row}][{col}]"
