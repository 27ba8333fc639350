"""Finite bikei: operation tables, axiom checks, standard families, isomorphism.

Elements are numbered ``1..n``. A table stores two ``n x n`` blocks: ``under``
with ``under[j-1, k-1] = x_j _ x_k`` and ``over`` with ``over[j-1, k-1] =
x_j ^ x_k``. Printed side by side they form the ``n x 2n`` bikei matrix.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AXIOMS",
    "BIKEI_AXIOMS",
    "MEDIAL_AXIOMS",
    "AxiomViolation",
    "BikeiTable",
    "InvalidGroupError",
    "InvalidParametersError",
    "Isomorphism",
    "MalformedTableError",
    "alexander_bikei",
    "cartesian_product",
    "check_bikei_axioms",
    "check_medial",
    "core_kei",
    "cyclic_group",
    "format_table",
    "read_table",
    "invariant_profile",
    "is_isomorphic",
    "parse_table",
    "permutation_group",
    "takasaki_kei",
    "trivial_bikei",
    "unknot_bikei",
    "vertical_mirror",
]


class MalformedTableError(ValueError):
    """A table has the wrong shape or an entry outside ``1..n``."""


class InvalidParametersError(ValueError):
    pass


class InvalidGroupError(ValueError):
    pass


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BikeiTable:
    """A complete pair of operation tables on ``{1, ..., n}``.

    Only totality is enforced here; use :func:`check_bikei_axioms` and
    :func:`check_medial` to test the identities.
    """

    under: np.ndarray
    over: np.ndarray

    def __post_init__(self):
        under, over = _frozen(self.under), _frozen(self.over)
        if under.ndim != 2 or under.shape[0] != under.shape[1] or under.shape[0] == 0:
            raise MalformedTableError(f"under block must be a non-empty square array, got shape {under.shape}")
        if over.shape != under.shape:
            raise MalformedTableError(f"block shapes differ: {under.shape} vs {over.shape}")
        n = under.shape[0]
        for name, block in (("under", under), ("over", over)):
            bad = np.argwhere((block < 1) | (block > n))
            if len(bad):
                j, k = bad[0] + 1
                raise MalformedTableError(
                    f"{name}[{j}][{k}] = {block[j - 1, k - 1]} is outside 1..{n}"
                )
        object.__setattr__(self, "under", under)
        object.__setattr__(self, "over", over)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> BikeiTable:
        """Build from an ``n x 2n`` bikei matrix (under block first)."""
        m = np.array(rows, dtype=np.int64)
        if m.ndim != 2 or m.shape[1] != 2 * m.shape[0]:
            raise MalformedTableError(f"expected an n x 2n matrix, got shape {m.shape}")
        n = m.shape[0]
        return cls(m[:, :n], m[:, n:])

    @property
    def n(self) -> int:
        return self.under.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, BikeiTable):
            return NotImplemented
        return np.array_equal(self.under, other.under) and np.array_equal(self.over, other.over)

    def __hash__(self):
        return hash((self.under.tobytes(), self.over.tobytes()))

    def __repr__(self):
        return f"BikeiTable(n={self.n})"

    def ud(self, x: int, y: int) -> int:
        """``x _ y``"""
        return int(self.under[x - 1, y - 1])

    def ov(self, x: int, y: int) -> int:
        """``x ^ y``"""
        return int(self.over[x - 1, y - 1])

    def matrix(self) -> np.ndarray:
        return np.hstack([self.under, self.over])

    def relabel(self, perm: Sequence[int]) -> BikeiTable:
        """Image of the table under the bijection ``i -> perm[i-1]``."""
        p = np.asarray(perm, dtype=np.int64)
        if sorted(p.tolist()) != list(range(1, self.n + 1)):
            raise ValueError("perm must be a permutation of 1..n")
        inv = np.empty_like(p)
        inv[p - 1] = np.arange(1, self.n + 1)
        src = inv - 1
        return BikeiTable(p[self.under[np.ix_(src, src)] - 1], p[self.over[np.ix_(src, src)] - 1])


# --- axioms -----------------------------------------------------------------
#
# Terms are variable names or ``(op, left, right)`` with op "_" (under) or "^"
# (over). Each axiom is ``(id, variables, lhs, rhs)``.

def _u(a, b):
    return ("_", a, b)


def _o(a, b):
    return ("^", a, b)


BIKEI_AXIOMS = (
    ("i", "x", _u("x", "x"), _o("x", "x")),
    ("ii.i", "xy", _u("x", _o("y", "x")), _u("x", "y")),
    ("ii.ii", "xy", _o("x", _u("y", "x")), _o("x", "y")),
    ("ii.iii", "xy", _o(_o("x", "y"), "y"), "x"),
    ("ii.iv", "xy", _u(_u("x", "y"), "y"), "x"),
    ("iii.i", "xyz", _o(_o("x", "y"), _u("z", "y")), _o(_o("x", "z"), _o("y", "z"))),
    ("iii.ii", "xyz", _u(_o("x", "y"), _o("z", "y")), _o(_u("x", "z"), _u("y", "z"))),
    ("iii.iii", "xyz", _u(_u("x", "y"), _o("z", "y")), _u(_u("x", "z"), _u("y", "z"))),
)

MEDIAL_AXIOMS = (
    ("m.i", "xyzw", _u(_u("x", "y"), _u("z", "w")), _u(_u("x", "z"), _u("y", "w"))),
    ("m.ii", "xyzw", _o(_u("x", "y"), _u("z", "w")), _u(_o("x", "z"), _o("y", "w"))),
    ("m.iii", "xyzw", _o(_o("x", "y"), _o("z", "w")), _o(_o("x", "z"), _o("y", "w"))),
)

AXIOMS = BIKEI_AXIOMS + MEDIAL_AXIOMS


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple[int, ...]
    lhs: int
    rhs: int

    def __str__(self):
        names = "xyzw"
        binding = ", ".join(f"{names[i]}={v}" for i, v in enumerate(self.witness))
        return f"({self.axiom}) fails at {binding}: {self.lhs} != {self.rhs}"


def evaluate(t: BikeiTable, term, env: dict) -> int:
    """Evaluate a term on a table with variables bound by ``env``."""
    if isinstance(term, str):
        return env[term]
    op, left, right = term
    a, b = evaluate(t, left, env), evaluate(t, right, env)
    return t.ud(a, b) if op == "_" else t.ov(a, b)


def _eval_grid(blocks, term, grids):
    if isinstance(term, str):
        return grids[term]
    op, left, right = term
    block = blocks[op]
    return block[_eval_grid(blocks, left, grids), _eval_grid(blocks, right, grids)]


def _check(t: BikeiTable, axioms) -> list[AxiomViolation]:
    n = t.n
    blocks = {"_": t.under - 1, "^": t.over - 1}
    found = []
    for axiom_id, variables, lhs, rhs in axioms:
        k = len(variables)
        # slice on the first variable so arity-4 checks stay at n^3 memory
        rest = np.indices((n,) * (k - 1)) if k > 1 else []
        for first in range(n):
            grids = {variables[0]: np.full((n,) * (k - 1), first) if k > 1 else np.int64(first)}
            for name, grid in zip(variables[1:], rest):
                grids[name] = grid
            lv = np.asarray(_eval_grid(blocks, lhs, grids))
            rv = np.asarray(_eval_grid(blocks, rhs, grids))
            bad = np.argwhere(lv != rv)
            for idx in bad:
                idx = tuple(int(i) for i in idx)
                witness = (first + 1,) + tuple(i + 1 for i in idx)
                found.append(AxiomViolation(axiom_id, witness, int(lv[idx]) + 1, int(rv[idx]) + 1))
    return found


def check_bikei_axioms(t: BikeiTable) -> list[AxiomViolation]:
    """All instances of axioms (i), (ii.*) and the exchange laws that fail."""
    return _check(t, BIKEI_AXIOMS)


def check_medial(t: BikeiTable) -> list[AxiomViolation]:
    """All instances of the medial identities (m.i)-(m.iii) that fail."""
    return _check(t, MEDIAL_AXIOMS)


# --- constructions ----------------------------------------------------------

def _index(residues: np.ndarray, n: int) -> np.ndarray:
    # residue 0 is element n
    r = np.mod(residues, n)
    return np.where(r == 0, n, r)


def alexander_bikei(n: int, s: int, t: int) -> BikeiTable:
    """``Z_n`` with ``x _ y = tx + (s-t)y`` and ``x ^ y = sx``."""
    if n < 1:
        raise InvalidParametersError(f"modulus must be positive, got {n}")
    if (s * s - 1) % n:
        raise InvalidParametersError(f"s^2 = 1 fails: {s}^2 = {s * s % n} mod {n}")
    if (t * t - 1) % n:
        raise InvalidParametersError(f"t^2 = 1 fails: {t}^2 = {t * t % n} mod {n}")
    if ((1 - s) * (s - t)) % n:
        raise InvalidParametersError(f"(1-s)(s-t) = 0 fails: got {(1 - s) * (s - t) % n} mod {n}")
    x = np.arange(1, n + 1)[:, None]
    y = np.arange(1, n + 1)[None, :]
    under = _index(t * x + (s - t) * y, n)
    over = _index(np.broadcast_to(s * x, (n, n)), n)
    return BikeiTable(under, over)


def takasaki_kei(n: int) -> BikeiTable:
    """``Z_n`` with ``x _ y = 2y - x`` and trivial overbar."""
    if n < 1:
        raise InvalidParametersError(f"modulus must be positive, got {n}")
    x = np.arange(1, n + 1)[:, None]
    y = np.arange(1, n + 1)[None, :]
    return BikeiTable(_index(2 * y - x, n), np.broadcast_to(x, (n, n)))


def unknot_bikei() -> BikeiTable:
    """The two-element bikei with ``x _ y = x ^ y = x + 1`` on ``Z_2``."""
    return BikeiTable([[2, 2], [1, 1]], [[2, 2], [1, 1]])


def trivial_bikei(n: int) -> BikeiTable:
    """Both operations are projection onto the left argument."""
    x = np.broadcast_to(np.arange(1, n + 1)[:, None], (n, n))
    return BikeiTable(x, x)


def _check_group(mul: np.ndarray) -> tuple[int, np.ndarray]:
    n = mul.shape[0]
    if mul.shape != (n, n) or n == 0:
        raise InvalidGroupError(f"multiplication table must be square, got shape {mul.shape}")
    if ((mul < 1) | (mul > n)).any():
        raise InvalidGroupError(f"entries must lie in 1..{n}")
    m = mul - 1
    idx = np.arange(n)
    ids = [e for e in range(n) if (m[e] == idx).all() and (m[:, e] == idx).all()]
    if not ids:
        raise InvalidGroupError("no identity element")
    e = ids[0]
    # a[b[c]] == [ab][c] for all a, b, c
    if not np.array_equal(m[m[:, :, None], idx[None, None, :]], m[idx[:, None, None], m[None, :, :]]):
        raise InvalidGroupError("multiplication is not associative")
    inv = np.full(n, -1)
    for a in range(n):
        hits = np.flatnonzero(m[a] == e)
        if len(hits) != 1 or m[hits[0], a] != e:
            raise InvalidGroupError(f"element {a + 1} has no two-sided inverse")
        inv[a] = hits[0]
    return e, inv


def core_kei(group_mul) -> BikeiTable:
    """Core kei of a group: ``x _ y = y x^-1 y`` and ``x ^ y = x``.

    ``group_mul`` is a 1-based Cayley table, ``group_mul[a-1][b-1] = ab``.
    """
    mul = np.array(group_mul, dtype=np.int64)
    _, inv = _check_group(mul)
    m = mul - 1
    n = m.shape[0]
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    under = m[m[y, inv[x]], y] + 1
    return BikeiTable(under, np.broadcast_to(x + 1, (n, n)))


def cyclic_group(n: int) -> np.ndarray:
    """Cayley table of ``Z_n`` with element ``k`` standing for residue ``k - 1``."""
    r = np.arange(n)
    return (r[:, None] + r[None, :]) % n + 1


def permutation_group(perms: Sequence[Sequence[int]]) -> np.ndarray:
    """Cayley table of a list of permutations closed under composition.

    Permutations are images of ``1..d``; the product ``ab`` applies ``b``
    first, then ``a``.
    """
    elems = [tuple(p) for p in perms]
    pos = {p: i for i, p in enumerate(elems)}
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            ab = tuple(a[b[k] - 1] for k in range(len(b)))
            if ab not in pos:
                raise InvalidGroupError("permutations are not closed under composition")
            mul[i, j] = pos[ab] + 1
    return mul


def cartesian_product(a: BikeiTable, b: BikeiTable) -> BikeiTable:
    """Componentwise operations; pair ``(i, j)`` is element ``(i-1)*|b| + j``."""
    nb = b.n

    def block(pa, pb):
        # rows (i1, j1), columns (i2, j2), both row-major
        res = (pa[:, None, :, None] - 1) * nb + pb[None, :, None, :]
        return res.reshape(a.n * nb, a.n * nb)

    return BikeiTable(block(a.under, b.under), block(a.over, b.over))


def vertical_mirror(t: BikeiTable) -> BikeiTable:
    """Swap the two operations."""
    return BikeiTable(t.over, t.under)


# --- isomorphism --------------------------------------------------------------

@dataclass(frozen=True)
class Isomorphism:
    """Bijection ``i -> map[i-1]`` from one table onto another."""

    map: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.map[i - 1]

    def inverse(self) -> Isomorphism:
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map, 1):
            inv[j - 1] = i
        return Isomorphism(tuple(inv))

    def verifies(self, a: BikeiTable, b: BikeiTable) -> bool:
        p = np.asarray(self.map, dtype=np.int64)
        if a.n != b.n or sorted(self.map) != list(range(1, a.n + 1)):
            return False
        pi = p - 1
        return bool(
            np.array_equal(p[a.under - 1], b.under[np.ix_(pi, pi)])
            and np.array_equal(p[a.over - 1], b.over[np.ix_(pi, pi)])
        )


def _digest(obj) -> int:
    return int.from_bytes(hashlib.blake2b(repr(obj).encode(), digest_size=8).digest(), "big")


def _orbit_shape(f: np.ndarray, x: int) -> tuple[int, int]:
    """Steps before ``x`` enters a cycle under ``f``, and that cycle's length.

    In a bikei ``x -> x _ x`` is a bijection and the tail is 0, but the
    colouring must also work for arbitrary tables.
    """
    seen: dict[int, int] = {}
    y, k = int(x), 0
    while y not in seen:
        seen[y] = k
        y = int(f[y])
        k += 1
    return seen[y], k - seen[y]


def element_colors(t: BikeiTable) -> list[int]:
    """Isomorphism-invariant colour of each element (0-based list).

    Starts from local data (orbit of ``x -> x _ x``, fixed points in rows and
    columns) and refines by the colours of everything ``x`` touches in both
    tables until the partition stops splitting.
    """
    n = t.n
    U, O = t.under - 1, t.over - 1
    square = U[np.arange(n), np.arange(n)]
    idx = np.arange(n)
    colors = []
    for x in range(n):
        colors.append(_digest((
            _orbit_shape(square, x),
            int(square[x] == x),
            int((U[:, x] == idx).sum()),
            int((O[:, x] == idx).sum()),
            int((U[x] == x).sum()),
            int((O[x] == x).sum()),
            tuple(sorted(Counter(U[x].tolist()).values())),
            tuple(sorted(Counter(O[x].tolist()).values())),
        )))
    classes = len(set(colors))
    for _ in range(n):
        new = []
        for x in range(n):
            nbhd = sorted(
                (colors[y], colors[U[x, y]], colors[O[x, y]], colors[U[y, x]], colors[O[y, x]])
                for y in range(n)
            )
            new.append(_digest((colors[x], tuple(nbhd))))
        colors = new
        k = len(set(colors))
        if k == classes:
            break
        classes = k
    return colors


def invariant_profile(t: BikeiTable) -> tuple:
    """Fingerprint equal for isomorphic tables; cheap pre-filter for iso tests."""
    return (t.n, tuple(sorted(element_colors(t))))


def is_isomorphic(a: BikeiTable, b: BikeiTable) -> Isomorphism | None:
    """Return a witness isomorphism ``a -> b`` or ``None`` if there is none.

    Backtracking over colour classes; each choice is closed under both
    operations before branching again.
    """
    if a.n != b.n:
        return None
    ca, cb = element_colors(a), element_colors(b)
    if sorted(ca) != sorted(cb):
        return None
    n = a.n
    Ua, Oa, Ub, Ob = a.under - 1, a.over - 1, b.under - 1, b.over - 1
    by_color: dict[int, list[int]] = {}
    for y, c in enumerate(cb):
        by_color.setdefault(c, []).append(y)
    order = sorted(range(n), key=lambda x: (len(by_color[ca[x]]), x))
    img = [-1] * n
    used = [False] * n
    assigned: list[int] = []

    def assign(x, y, trail):
        if img[x] == y:
            return True
        if img[x] != -1 or used[y] or ca[x] != cb[y]:
            return False
        img[x], used[y] = y, True
        trail.append(x)
        return True

    def close(start, trail):
        # push forced images through x op z and z op x for every assigned z
        queue = [start]
        while queue:
            x = queue.pop()
            for z in list(assigned):
                for Ta, Tb in ((Ua, Ub), (Oa, Ob)):
                    for p, q in ((x, z), (z, x)):
                        before = len(trail)
                        if not assign(Ta[p, q], Tb[img[p], img[q]], trail):
                            return False
                        if len(trail) > before:
                            assigned.append(trail[-1])
                            queue.append(trail[-1])
        return True

    def undo(trail):
        for x in trail:
            used[img[x]] = False
            img[x] = -1
        del assigned[len(assigned) - len(trail):]

    def search(pos):
        while pos < n and img[order[pos]] != -1:
            pos += 1
        if pos == n:
            return True
        x = order[pos]
        for y in by_color[ca[x]]:
            if used[y]:
                continue
            trail: list[int] = []
            assign(x, y, trail)
            assigned.append(x)
            if close(x, trail) and search(pos + 1):
                return True
            undo(trail)
        return False

    if not search(0):
        return None
    iso = Isomorphism(tuple(int(y) + 1 for y in img))
    if not iso.verifies(a, b):
        raise AssertionError("isomorphism search produced a non-homomorphism")
    return iso


# --- text format ------------------------------------------------------------

def parse_table(text: str, allow_zero: bool = False) -> tuple[int, np.ndarray, np.ndarray]:
    """Parse the ``n`` header plus ``n`` rows of ``2n`` integers.

    Returns ``(n, under, over)``. With ``allow_zero`` entries may be 0
    (unknown), as in a presentation matrix.
    """
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values = [int(v) for v in line.split()]
        except ValueError:
            raise MalformedTableError(f"line {lineno}: non-integer entry in {line!r}") from None
        if header is None:
            if len(values) != 1 or values[0] < 1:
                raise MalformedTableError(f"line {lineno}: expected a positive size, got {line!r}")
            header = values[0]
            continue
        if len(values) != 2 * header:
            raise MalformedTableError(f"line {lineno}: expected {2 * header} entries, got {len(values)}")
        lo = 0 if allow_zero else 1
        for v in values:
            if not lo <= v <= header:
                raise MalformedTableError(f"line {lineno}: entry {v} outside {lo}..{header}")
        rows.append(values)
    if header is None:
        raise MalformedTableError("empty table")
    if len(rows) != header:
        raise MalformedTableError(f"expected {header} rows, got {len(rows)}")
    m = np.array(rows, dtype=np.int64)
    return header, m[:, :header], m[:, header:]


def format_table(under: np.ndarray, over: np.ndarray) -> str:
    n = under.shape[0]
    width = len(str(n))
    lines = [str(n)]
    for j in range(n):
        left = " ".join(f"{v:>{width}}" for v in under[j])
        right = " ".join(f"{v:>{width}}" for v in over[j])
        lines.append(f"{left}  {right}")
    return "\n".join(lines) + "\n"


def read_table(text: str) -> BikeiTable:
    _, under, over = parse_table(text)
    return BikeiTable(under, over)


