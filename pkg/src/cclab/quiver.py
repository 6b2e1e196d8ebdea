"""Acyclic quivers: parsing, admissible orders, the Euler form and the Ext matrix.

Vertices are 1-indexed in files and in user-facing labels, 0-indexed
everywhere inside the library.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence


class QuiverError(ValueError):
    pass


class QuiverSyntaxError(QuiverError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class CycleError(QuiverError):
    def __init__(self, cycle: list[int]):
        path = " -> ".join(str(v + 1) for v in cycle + cycle[:1])
        super().__init__(f"cycle detected: {path}")
        self.cycle = cycle


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[Arrow, ...] = ()
    name: str = ""
    order: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise QuiverError("vertex count must be nonnegative")
        seen = set()
        for a in self.arrows:
            if a.name in seen:
                raise QuiverError(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            for v in (a.source, a.target):
                if not 0 <= v < self.n:
                    raise QuiverError(f"arrow {a.name!r}: vertex {v + 1} out of range 1..{self.n}")
        object.__setattr__(self, "order", _topological_order(self.n, self.arrows))

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]], name: str = "") -> "Quiver":
        """Build from 1-indexed ``(source, target)`` pairs; arrows are named a1, a2, ..."""
        arrows = tuple(Arrow(f"a{k + 1}", s - 1, t - 1) for k, (s, t) in enumerate(edges))
        return cls(n, arrows, name)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def arrows_into(self, i: int) -> list[int]:
        return [k for k, a in enumerate(self.arrows) if a.target == i]

    def arrows_out_of(self, i: int) -> list[int]:
        return [k for k, a in enumerate(self.arrows) if a.source == i]

    def arrow_index(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise KeyError(name)

    def opposite(self) -> "Quiver":
        return Quiver(self.n, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows), self.name + "^op")

    def ext_matrix(self) -> "ExtMatrix":
        return ext_matrix(self)

    def euler_form(self, d: Sequence[int], e: Sequence[int]) -> int:
        return euler_form(self, d, e)

    def to_text(self) -> str:
        lines = [f"vertices: {self.n}"]
        lines += [f"arrow {a.name}: {a.source + 1} -> {a.target + 1}" for a in self.arrows]
        return "\n".join(lines) + "\n"


def _topological_order(n: int, arrows: Sequence[Arrow]) -> tuple[int, ...]:
    """Vertices ordered so every arrow's target precedes its source.

    Ties go to the smallest index, so the order is deterministic.
    """
    out_deg = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    for a in arrows:
        out_deg[a.source] += 1
        preds[a.target].append(a.source)
    heap = [v for v in range(n) if out_deg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for u in preds[v]:
            out_deg[u] -= 1
            if out_deg[u] == 0:
                heapq.heappush(heap, u)
    if len(order) < n:
        raise CycleError(_find_cycle(n, arrows, set(order)))
    return tuple(order)


def _find_cycle(n: int, arrows: Sequence[Arrow], done: set[int]) -> list[int]:
    succ: dict[int, list[int]] = {v: [] for v in range(n)}
    for a in arrows:
        succ[a.source].append(a.target)
    start = min(v for v in range(n) if v not in done)
    path, pos = [], {}
    v = start
    while v not in pos:
        pos[v] = len(path)
        path.append(v)
        v = next(w for w in succ[v] if w not in done)
    return path[pos[v]:]


def admissible_order(Q: Quiver) -> tuple[int, ...]:
    """Every arrow's source sits strictly after its target (sinks first)."""
    return Q.order


_VERTICES = re.compile(r"^vertices\s*:\s*(\d+)$")
_ARROW = re.compile(r"^arrow\s+([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(\d+)\s*->\s*(\d+)$")


def parse_quiver(text: str, name: str = "") -> Quiver:
    n = None
    arrows: list[Arrow] = []
    names: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _VERTICES.match(line)
            if not m:
                raise QuiverSyntaxError(lineno, "expected 'vertices: <n>'")
            n = int(m.group(1))
            continue
        m = _ARROW.match(line)
        if not m:
            raise QuiverSyntaxError(lineno, f"cannot parse {line!r}")
        aname, s, t = m.group(1), int(m.group(2)), int(m.group(3))
        if aname in names:
            raise QuiverSyntaxError(lineno, f"duplicate arrow name {aname!r}")
        for v in (s, t):
            if not 1 <= v <= n:
                raise QuiverSyntaxError(lineno, f"vertex {v} out of range 1..{n}")
        names.add(aname)
        arrows.append(Arrow(aname, s - 1, t - 1))
    if n is None:
        raise QuiverSyntaxError(0, "missing 'vertices: <n>' line")
    return Quiver(n, tuple(arrows), name)


def load_quiver(path: str | Path) -> Quiver:
    path = Path(path)
    return parse_quiver(path.read_text(encoding="utf-8"), name=path.stem)


class ExtMatrix:
    """``R[i][j]`` = number of arrows i -> j, with its transpose cached."""

    __slots__ = ("R", "Rtr")

    def __init__(self, R: tuple[tuple[int, ...], ...]):
        self.R = R
        self.Rtr = tuple(zip(*R)) if R else ()

    def __eq__(self, other) -> bool:
        if isinstance(other, ExtMatrix):
            return self.R == other.R
        return [list(r) for r in self.R] == [list(r) for r in other]

    def __repr__(self) -> str:
        return f"ExtMatrix({[list(r) for r in self.R]})"

    def row_times(self, v: Sequence[int]) -> tuple[int, ...]:
        """``v R`` for a row vector ``v``."""
        n = len(self.R)
        return tuple(sum(v[i] * self.R[i][j] for i in range(n)) for j in range(n))

    def row_times_tr(self, v: Sequence[int]) -> tuple[int, ...]:
        """``v R^tr``."""
        n = len(self.R)
        return tuple(sum(v[i] * self.R[j][i] for i in range(n)) for j in range(n))


def ext_matrix(Q: Quiver) -> ExtMatrix:
    R = [[0] * Q.n for _ in range(Q.n)]
    for a in Q.arrows:
        R[a.source][a.target] += 1
    return ExtMatrix(tuple(tuple(r) for r in R))


def euler_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    if len(d) != Q.n or len(e) != Q.n:
        raise ValueError(f"dimension vectors must have length {Q.n}")
    return sum(a * b for a, b in zip(d, e)) - sum(d[a.source] * e[a.target] for a in Q.arrows)


def simple_root(Q: Quiver, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(Q.n))


# --- standard quivers --------------------------------------------------------

def linear_quiver(n: int) -> Quiver:
    """Type A_n oriented 1 -> 2 -> ... -> n."""
    return Quiver.from_edges(n, [(i, i + 1) for i in range(1, n)], name=f"A{n}")


def kronecker_quiver() -> Quiver:
    return Quiver(2, (Arrow("a", 0, 1), Arrow("b", 0, 1)), name="kronecker")


def d4_quiver() -> Quiver:
    """D_4 with the three outer vertices 1, 2, 3 pointing to the centre 4."""
    return Quiver.from_edges(4, [(1, 4), (2, 4), (3, 4)], name="D4")


def dynkin_type(Q: Quiver) -> str | None:
    """'A<n>', 'D<n>', 'E6/7/8' if the underlying graph is simply-laced Dynkin."""
    n = Q.n
    if n == 0:
        return None
    edges = set()
    for a in Q.arrows:
        key = (min(a.source, a.target), max(a.source, a.target))
        if key in edges:
            return None
        edges.add(key)
    if len(edges) != n - 1:
        return None
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    if len(seen) != n:
        return None
    branch = [v for v in range(n) if len(adj[v]) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or len(adj[branch[0]]) > 3:
        return None
    c = branch[0]
    arms = []
    for w in adj[c]:
        length, prev, cur = 1, c, w
        while len(adj[cur]) == 2:
            nxt = next(x for x in adj[cur] if x != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def is_kronecker(Q: Quiver) -> bool:
    return Q.n == 2 and len(Q.arrows) == 2 and len({(a.source, a.target) for a in Q.arrows}) == 1
