"""The un-fold of an X-network into a MUL-tree, with path bookkeeping.

Every vertex of the un-fold is a directed path of the network that starts at
the root and ends in a tree vertex.  :class:`PathIndex` keeps that
correspondence (``psi``), its inverse, the end-vertex map and the labelling.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .core import Arc, MulTree, PseudoDag, XNetwork
from .errors import InvalidInputError, PathCapExceeded

__all__ = [
    "DEFAULT_PATH_CAP",
    "RootPath",
    "PathIndex",
    "ReticulationCycle",
    "path_cap",
    "count_root_paths",
    "enumerate_paths",
    "unfold_star",
    "unfold",
    "find_reticulation_cycle",
]

DEFAULT_PATH_CAP = 10**6


def path_cap(cap: Optional[int] = None) -> int:
    """Resolve the path cap: explicit value, else $STABLENET_PATH_CAP, else the default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("STABLENET_PATH_CAP")
    return int(env) if env else DEFAULT_PATH_CAP


@dataclass(frozen=True, order=True)
class RootPath:
    """A directed path starting at the root; ``end`` is its last vertex."""

    arcs: Tuple[Arc, ...]
    end: int

    def __len__(self) -> int:
        return len(self.arcs)

    @property
    def vertices(self) -> Tuple[int, ...]:
        if not self.arcs:
            return (self.end,)
        return (self.arcs[0].tail,) + tuple(a.head for a in self.arcs)

    def extend(self, arc: Arc) -> "RootPath":
        if arc.tail != self.end:
            raise InvalidInputError("arc does not continue the path")
        return RootPath(self.arcs + (arc,), arc.head)

    def prefix(self, k: int) -> "RootPath":
        """The subpath made of the first ``k`` arcs."""
        if k == 0:
            return RootPath((), self.vertices[0])
        return RootPath(self.arcs[:k], self.arcs[k - 1].head)


def count_root_paths(n: XNetwork) -> Dict[int, int]:
    """Number of root paths ending at each vertex."""
    g = n.graph
    counts = {v: 0 for v in g.vertices}
    counts[g.root] = 1
    for v in g.topological_order():
        for a in g.out_arcs(v):
            counts[a.head] += counts[v]
    return counts


def _check_cap(n: XNetwork, cap: Optional[int]) -> None:
    total = sum(count_root_paths(n).values())
    limit = path_cap(cap)
    if total > limit:
        raise PathCapExceeded(f"network has {total} root paths, cap is {limit}", count=total)


def enumerate_paths(n: XNetwork, mode: str = "all", taxon: Optional[str] = None,
                    cap: Optional[int] = None) -> Iterator[RootPath]:
    """Yield root paths in lexicographic order of their arc sequences.

    ``mode`` is ``"all"`` (every root path), ``"tree"`` (paths ending in a
    tree vertex), ``"leaves"`` (paths ending in a leaf) or ``"taxon"``
    (paths ending in the leaf of ``taxon``).
    """
    g = n.graph
    if mode not in ("all", "tree", "leaves", "taxon"):
        raise ValueError(f"unknown mode {mode!r}")
    target = None
    if mode == "taxon":
        if taxon not in n.leaf_of:
            raise InvalidInputError(f"unknown taxon {taxon!r}")
        target = n.leaf_of[taxon]
    _check_cap(n, cap)
    reach = g.ancestors(target) if target is not None else None

    def keep(p: RootPath) -> bool:
        if mode == "all":
            return True
        if mode == "tree":
            return g.indegree(p.end) <= 1
        if mode == "leaves":
            return g.outdegree(p.end) == 0
        return p.end == target

    stack = [RootPath((), g.root)]
    while stack:
        p = stack.pop()
        if keep(p):
            yield p
        for a in reversed(g.out_arcs(p.end)):
            if reach is None or a.head in reach:
                stack.append(p.extend(a))


def unfold_star(n: XNetwork, cap: Optional[int] = None) -> Tuple[PseudoDag, List[RootPath]]:
    """The tree U*(N): one vertex per root path, numbered in lexicographic path order."""
    paths = list(enumerate_paths(n, "all", cap=cap))
    index = {p: i for i, p in enumerate(paths)}
    arcs = [(index[p.prefix(len(p) - 1)], i) for i, p in enumerate(paths) if p.arcs]
    return PseudoDag(range(len(paths)), arcs), paths


@dataclass(frozen=True)
class PathIndex:
    """Correspondence between un-fold vertices and root paths of N.

    ``paths[u]`` is the path of un-fold vertex ``u`` (the inverse of Psi_N);
    ``psi`` maps a path back to its vertex; ``end_of[u]`` is the tree vertex
    of N in which ``paths[u]`` ends; ``phi`` is the labelling of the un-fold.
    """

    paths: Tuple[RootPath, ...]
    psi: Mapping[RootPath, int]
    end_of: Tuple[int, ...]
    phi: Mapping[str, frozenset]

    def path_of(self, u: int) -> RootPath:
        return self.paths[u]

    def vertex_of(self, path: RootPath) -> int:
        try:
            return self.psi[path]
        except KeyError:
            raise InvalidInputError("path does not end in a tree vertex of the network") from None

    def fibre(self, v: int) -> Tuple[int, ...]:
        """Un-fold vertices whose path ends at network vertex ``v``."""
        return tuple(u for u, e in enumerate(self.end_of) if e == v)


def unfold(n: XNetwork, cap: Optional[int] = None) -> Tuple[MulTree, PathIndex]:
    """Un-fold ``n`` into the MUL-tree U(N) together with its :class:`PathIndex`.

    U*(N) is built first and the vertices whose path ends in a hybrid vertex
    are then suppressed.  Vertices of U(N) are numbered in BFS order with
    children visited in path order.
    """
    g = n.graph
    star, paths = unfold_star(n, cap)
    keep = [i for i, p in enumerate(paths) if g.indegree(p.end) <= 1]
    kept = set(keep)

    def kept_children(i: int) -> List[int]:
        out = []
        stack = list(reversed(star.children(i)))
        while stack:
            c = stack.pop()
            if c in kept:
                out.append(c)
            else:
                stack.extend(reversed(star.children(c)))
        return out

    root = 0
    order = [root]
    kid_map: Dict[int, List[int]] = {}
    queue = deque([root])
    while queue:
        i = queue.popleft()
        kids = kept_children(i)
        kid_map[i] = kids
        order.extend(kids)
        queue.extend(kids)
    number = {i: k for k, i in enumerate(order)}
    arcs = [(number[i], number[c]) for i, kids in kid_map.items() for c in kids]
    tree = PseudoDag(range(len(order)), arcs)
    upaths = tuple(paths[i] for i in order)
    phi: Dict[str, set] = {x: set() for x in n.taxa}
    for u, p in enumerate(upaths):
        x = n.label_of(p.end)
        if x is not None:
            phi[x].add(u)
    m = MulTree(tree, phi)
    index = PathIndex(
        paths=upaths,
        psi={p: u for u, p in enumerate(upaths)},
        end_of=tuple(p.end for p in upaths),
        phi={x: frozenset(v) for x, v in m.mu.items()},
    )
    return m, index


@dataclass(frozen=True)
class ReticulationCycle:
    """Two arc-disjoint directed paths with a common start and a common end."""

    first: Tuple[Arc, ...]
    second: Tuple[Arc, ...]

    @property
    def start(self) -> int:
        return self.first[0].tail

    @property
    def end(self) -> int:
        return self.first[-1].head


def _simple_paths(out: Mapping[int, List[Arc]], s: int, t: int) -> Iterator[Tuple[Arc, ...]]:
    stack = [(s, ())]
    while stack:
        v, arcs = stack.pop()
        if v == t and arcs:
            yield arcs
            continue
        for a in out.get(v, ()):
            stack.append((a.head, arcs + (a,)))


def find_reticulation_cycle(n: XNetwork, p1: RootPath, p2: RootPath) -> Optional[ReticulationCycle]:
    """A reticulation cycle inside the union of two root paths, if any."""
    g = n.graph
    for p in (p1, p2):
        if p.end not in g or g.indegree(p.end) > 1:
            raise InvalidInputError("paths must end in tree vertices")
        if p.vertices[0] != g.root or any(a not in set(g.out_arcs(a.tail)) for a in p.arcs):
            raise InvalidInputError("argument is not a root path of the network")
    if p1 == p2:
        raise InvalidInputError("paths must be distinct")
    union = sorted(set(p1.arcs) | set(p2.arcs))
    out: Dict[int, List[Arc]] = {}
    for a in union:
        out.setdefault(a.tail, []).append(a)
    verts = sorted({a.tail for a in union} | {a.head for a in union})
    for s in verts:
        for t in verts:
            if s == t:
                continue
            found = list(_simple_paths(out, s, t))
            for q1, q2 in combinations(found, 2):
                if not set(q1) & set(q2):
                    return ReticulationCycle(*sorted((q1, q2)))
    return None
