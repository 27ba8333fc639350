"""Signed Gauss codes for virtual links and their crossing relations.

A code lists, per component, the classical crossings met along the strand:
``O1+U2+U1+O2+`` passes over crossing 1, under crossing 2, and so on.
Components are separated by ``;``. Virtual crossings are not recorded; they
neither split semiarcs nor contribute relations.

Walking a component with passes ``p_1 .. p_m``, semiarc ``i`` runs from pass
``i`` to pass ``i + 1`` (cyclically). At a crossing with under strand
``a -> b`` and over strand ``c -> d`` the relations are ``b = a _ c`` and
``d = c ^ a``. Signs are accepted and kept but play no part in the relations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .presentation import Kind, PresentationMatrix, Relation, relations_to_matrix

_PASS = re.compile(r"([OU])(\d+)([+\-−])")


class GaussCodeError(ValueError):
    pass


@dataclass(frozen=True)
class Pass:
    label: int
    over: bool
    sign: int  # +1 or -1

    def __str__(self):
        return f"{'O' if self.over else 'U'}{self.label}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class DiagramCode:
    components: tuple[tuple[Pass, ...], ...]

    def __str__(self):
        return ";".join("".join(map(str, comp)) for comp in self.components)

    @property
    def crossings(self) -> list[int]:
        return sorted({p.label for comp in self.components for p in comp})

    def signs(self) -> dict[int, int]:
        return {p.label: p.sign for comp in self.components for p in comp}


def _validate(components) -> None:
    seen: dict[int, list[Pass]] = {}
    for comp in components:
        for p in comp:
            seen.setdefault(p.label, []).append(p)
    for label, passes in sorted(seen.items()):
        if len(passes) != 2:
            raise GaussCodeError(f"crossing {label} occurs {len(passes)} time(s); expected exactly 2")
        if passes[0].over == passes[1].over:
            role = "over" if passes[0].over else "under"
            raise GaussCodeError(f"crossing {label} has two {role} passes")
        if passes[0].sign != passes[1].sign:
            raise GaussCodeError(f"crossing {label} has mismatched signs")


def parse_gauss_code(text: str) -> DiagramCode:
    """Parse and validate a signed Gauss code.

    An empty component (for instance the whole string ``""``) is a
    crossingless circle.
    """
    components = []
    for k, chunk in enumerate(text.strip().split(";"), 1):
        chunk = re.sub(r"\s+", "", chunk)
        passes = []
        pos = 0
        while pos < len(chunk):
            m = _PASS.match(chunk, pos)
            if not m:
                raise GaussCodeError(f"component {k}: cannot parse pass at {chunk[pos:]!r}")
            label = int(m.group(2))
            if label < 1:
                raise GaussCodeError(f"component {k}: crossing labels must be positive")
            passes.append(Pass(label, m.group(1) == "O", 1 if m.group(3) == "+" else -1))
            pos = m.end()
        components.append(tuple(passes))
    _validate(components)
    return DiagramCode(tuple(components))


@dataclass(frozen=True)
class CrossingPorts:
    under_in: int
    under_out: int
    over_in: int
    over_out: int


@dataclass(frozen=True)
class SemiarcLabeling:
    semiarc_count: int
    ports: dict[int, CrossingPorts]


def label_semiarcs(d: DiagramCode) -> SemiarcLabeling:
    ends: dict[int, dict[bool, tuple[int, int]]] = {}
    base = 0
    for comp in d.components:
        m = len(comp)
        for i, p in enumerate(comp):
            incoming = base + (i - 1) % m + 1
            outgoing = base + i + 1
            ends.setdefault(p.label, {})[p.over] = (incoming, outgoing)
        base += max(m, 1)
    ports = {
        label: CrossingPorts(*e[False], *e[True]) for label, e in sorted(ends.items())
    }
    return SemiarcLabeling(base, ports)


def crossing_relations(d: DiagramCode) -> tuple[int, list[Relation]]:
    """Generator count and the two relations contributed by each crossing."""
    lab = label_semiarcs(d)
    rels = []
    for p in lab.ports.values():
        rels.append(Relation(Kind.UNDER, p.under_in, p.over_in, p.under_out))
        rels.append(Relation(Kind.OVER, p.over_in, p.under_in, p.over_out))
    return lab.semiarc_count, rels


def diagram_to_presentation(d: DiagramCode) -> PresentationMatrix:
    n, rels = crossing_relations(d)
    return relations_to_matrix(n, rels)


# --- code transformations used for invariance checks ---------------------------

def rotate_component(d: DiagramCode, index: int, shift: int) -> DiagramCode:
    comps = list(d.components)
    c = comps[index]
    if c:
        shift %= len(c)
        comps[index] = c[shift:] + c[:shift]
    return DiagramCode(tuple(comps))


def reverse_component(d: DiagramCode, index: int) -> DiagramCode:
    comps = list(d.components)
    comps[index] = tuple(reversed(comps[index]))
    return DiagramCode(tuple(comps))


def relabel_crossings(d: DiagramCode, mapping: dict[int, int]) -> DiagramCode:
    return DiagramCode(tuple(
        tuple(Pass(mapping[p.label], p.over, p.sign) for p in comp) for comp in d.components
    ))


# --- corpus files ---------------------------------------------------------------

def read_corpus(path) -> list[tuple[str, str]]:
    """Read ``name: code`` lines; ``#`` lines and blank lines are skipped."""
    entries = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, code = line.partition(":")
        if not sep or not name.strip():
            raise ValueError(f"{path}:{lineno}: expected 'name: code'")
        entries.append((name.strip(), code.strip()))
    return entries
