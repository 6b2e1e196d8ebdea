"""Euler characteristics of quiver Grassmannians from torus fixed points.

When the nonzero matrix entries of M form a forest (one node per basis
vector, one edge per entry), rescaling basis vectors compensates any
rescaling of the arrows.  A one-parameter torus then acts on every
Gr_e(M).  Give arrow k the weight B^k and propagate weights along the
forest.  If the basis vectors at each vertex end up with pairwise
distinct weights, the fixed points are exactly the coordinate
subrepresentations.  So chi(Gr_e M) counts the subsets of basis vectors
that are closed under following entries.
"""

from __future__ import annotations

from collections import defaultdict

from .rep import Representation

SUBSET_LIMIT = 1 << 22


class NotApplicable(ValueError):
    """The module has no basis in which the torus argument applies."""


def coefficient_graph(M: Representation) -> tuple[list[tuple[int, int]], list[tuple[int, int, int]]]:
    """Nodes (vertex, basis index) and directed edges (source node, target node, arrow)."""
    nodes = [(v, i) for v in M.quiver.vertices for i in range(M.dims[v])]
    index = {x: k for k, x in enumerate(nodes)}
    edges = []
    for k, (a, mat) in enumerate(zip(M.quiver.arrows, M.mats)):
        for r, row in enumerate(mat.rows):
            for c, x in enumerate(row):
                if x:
                    edges.append((index[(a.source, c)], index[(a.target, r)], k))
    return nodes, edges


def torus_weights(M: Representation) -> list[int]:
    """Integer weight of every basis vector; raises NotApplicable if none separates them."""
    nodes, edges = coefficient_graph(M)
    n = len(nodes)
    base = 2 * n + 3
    step = [base ** k for k in range(len(M.quiver.arrows))]
    adj = defaultdict(list)
    for s, t, k in edges:
        adj[s].append((t, step[k]))
        adj[t].append((s, -step[k]))
    weight: list[int | None] = [None] * n
    spread = base ** len(M.quiver.arrows)
    comp = 0
    for root in range(n):
        if weight[root] is not None:
            continue
        # components sit far apart so their weights never collide
        weight[root] = comp * 2 * n * spread
        comp += 1
        stack = [root]
        while stack:
            x = stack.pop()
            for y, dw in adj[x]:
                w = weight[x] + dw
                if weight[y] is None:
                    weight[y] = w
                    stack.append(y)
                elif weight[y] != w:
                    raise NotApplicable("the nonzero entries contain a cycle")
    seen = set()
    for (v, _), w in zip(nodes, weight):
        if (v, w) in seen:
            raise NotApplicable("two basis vectors at one vertex share a torus weight")
        seen.add((v, w))
    return weight


def is_applicable(M: Representation) -> bool:
    try:
        torus_weights(M)
    except NotApplicable:
        return False
    return True


def euler_profile(M: Representation, limit: int = SUBSET_LIMIT) -> dict[tuple[int, ...], int]:
    """chi(Gr_e M) for every e with a nonzero value, by counting closed subsets."""
    torus_weights(M)
    nodes, edges = coefficient_graph(M)
    succ = defaultdict(set)
    for s, t, _ in edges:
        succ[s].add(t)
    # targets before sources, so a node's successors are decided first
    order = sorted(range(len(nodes)), key=lambda k: M.quiver.order.index(nodes[k][0]))
    out: dict[tuple[int, ...], int] = defaultdict(int)
    dims = [0] * M.quiver.n
    chosen = [False] * len(nodes)
    visits = 0

    def rec(pos: int) -> None:
        nonlocal visits
        visits += 1
        if visits > limit:
            raise NotApplicable(f"more than {limit} closed subsets to visit")
        if pos == len(order):
            out[tuple(dims)] += 1
            return
        x = order[pos]
        rec(pos + 1)
        if all(chosen[y] for y in succ[x]):
            chosen[x] = True
            dims[nodes[x][0]] += 1
            rec(pos + 1)
            dims[nodes[x][0]] -= 1
            chosen[x] = False

    rec(0)
    return dict(out)
