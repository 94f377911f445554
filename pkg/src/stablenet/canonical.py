"""Canonical codes for labelled rooted trees and isomorphism tests.

A canonical code is a Newick-like string built bottom-up: a leaf contributes
its (quoted if necessary) label, an interior vertex the sorted, comma-joined
codes of its children inside parentheses.  Equal codes mean isomorphic
rooted subtrees.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .core import MulTree, PseudoDag, XNetwork
from .errors import InvalidInputError

__all__ = [
    "label_token",
    "canon_codes",
    "canon_code",
    "tree_code",
    "dag_codes",
    "EquivPartition",
    "equiv_partition",
    "compare_multrees",
    "multree_isomorphic",
    "find_xnetwork_isomorphism",
    "xnetwork_isomorphic",
]

_PLAIN = re.compile(r"^[A-Za-z0-9_.\-+*/|!?@$%&=~]+$")


def label_token(label: str) -> str:
    """Return ``label`` as it is written inside a code or a Newick string."""
    if _PLAIN.match(label) and not label.startswith("#"):
        return label
    return "'" + label.replace("'", "''") + "'"


def canon_codes(tree) -> Dict[int, str]:
    """Canonical code of every vertex of a rooted labelled tree.

    ``tree`` is a :class:`MulTree` or a tree-shaped :class:`XNetwork`.
    """
    g = tree.graph
    codes: Dict[int, str] = {}
    for v in reversed(g.topological_order()):
        kids = g.children(v)
        if not kids:
            label = tree.label_of(v)
            codes[v] = label_token(label) if label is not None else "?"
        else:
            codes[v] = "(" + ",".join(sorted(codes[c] for c in kids)) + ")"
    return codes


def canon_code(tree, v: Optional[int] = None) -> str:
    """Canonical code of the subtree rooted at ``v`` (default: the root)."""
    g = tree.graph
    if v is None:
        v = g.root
    if v not in g:
        raise InvalidInputError(f"unknown vertex {v}")
    codes: Dict[int, str] = {}
    stack = [(v, False)]
    while stack:
        u, done = stack.pop()
        kids = g.children(u)
        if done or not kids:
            if not kids:
                label = tree.label_of(u)
                codes[u] = label_token(label) if label is not None else "?"
            else:
                codes[u] = "(" + ",".join(sorted(codes[c] for c in kids)) + ")"
        else:
            stack.append((u, True))
            stack.extend((c, False) for c in kids)
    return codes[v]


def tree_code(tree) -> str:
    """Code of the whole tree; equal codes iff isomorphic (labels preserved)."""
    return canon_code(tree)


def dag_codes(net: XNetwork) -> Dict[int, str]:
    """Code of the tree obtained by unfolding the network below each vertex.

    This is an isomorphism invariant of the rooted subnetwork below ``v``;
    it is used to order children deterministically when printing.
    """
    return canon_codes(net)


@dataclass(frozen=True)
class EquivPartition:
    """The quotient of the vertex set of a MUL-tree by subtree isomorphism."""

    classes: Tuple[Tuple[int, ...], ...]
    class_of: Mapping[int, int]
    codes: Mapping[int, str]

    def class_size(self, index: int) -> int:
        return len(self.classes[index])

    def size_of(self, v: int) -> int:
        """Size of the class containing vertex ``v``."""
        return len(self.classes[self.class_of[v]])

    def same(self, u: int, v: int) -> bool:
        return self.class_of[u] == self.class_of[v]

    def __len__(self) -> int:
        return len(self.classes)


def equiv_partition(m: MulTree) -> EquivPartition:
    """Group vertices with isomorphic rooted subMUL-trees.

    Classes are numbered in order of their smallest vertex id.
    """
    codes = canon_codes(m)
    groups: Dict[str, List[int]] = {}
    for v in m.graph.vertices:
        groups.setdefault(codes[v], []).append(v)
    classes = sorted(tuple(sorted(vs)) for vs in groups.values())
    class_of = {v: i for i, cls in enumerate(classes) for v in cls}
    return EquivPartition(tuple(classes), class_of, codes)


def compare_multrees(m1: MulTree, m2: MulTree) -> Tuple[bool, str]:
    """Return ``(isomorphic, reason)``."""
    if set(m1.taxa) != set(m2.taxa):
        return False, f"taxa differ: {sorted(m1.taxa)} vs {sorted(m2.taxa)}"
    c1, c2 = canon_code(m1), canon_code(m2)
    if c1 != c2:
        return False, "canonical codes differ"
    return True, "canonical codes agree"


def multree_isomorphic(m1: MulTree, m2: MulTree) -> bool:
    return compare_multrees(m1, m2)[0]


# --------------------------------------------------------------------------
# network isomorphism: colour refinement followed by backtracking


def _refine(graphs: Tuple[PseudoDag, PseudoDag], colour: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], int]:
    while True:
        sigs = {}
        for key in colour:
            side, v = key
            g = graphs[side]
            kids = tuple(sorted(colour[(side, c)] for c in g.children(v)))
            pars = tuple(sorted(colour[(side, p)] for p in g.parents(v)))
            sigs[key] = (colour[key], kids, pars)
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {k: ranks[s] for k, s in sigs.items()}
        if len(ranks) == len(set(colour.values())):
            return new
        colour = new


def _balanced(colour: Dict[Tuple[int, int], int]) -> bool:
    c0 = Counter(c for (s, _), c in colour.items() if s == 0)
    c1 = Counter(c for (s, _), c in colour.items() if s == 1)
    return c0 == c1


def _arc_multiset(g: PseudoDag, mapping: Optional[Mapping[int, int]] = None) -> Counter:
    if mapping is None:
        return Counter((a.tail, a.head) for a in g.arcs)
    return Counter((mapping[a.tail], mapping[a.head]) for a in g.arcs)


def find_xnetwork_isomorphism(n1: XNetwork, n2: XNetwork) -> Optional[Dict[int, int]]:
    """A vertex bijection n1 -> n2 preserving arcs (with multiplicity) and taxa, or None."""
    if set(n1.taxa) != set(n2.taxa):
        return None
    g1, g2 = n1.graph, n2.graph
    if len(g1.vertices) != len(g2.vertices) or len(g1.arcs) != len(g2.arcs):
        return None
    graphs = (g1, g2)
    nets = (n1, n2)
    init = {}
    for side, g in enumerate(graphs):
        for v in g.vertices:
            init[(side, v)] = (nets[side].label_of(v) or "", g.indegree(v), g.outdegree(v))
    ranks = {s: i for i, s in enumerate(sorted(set(init.values())))}
    colour = _refine(graphs, {k: ranks[s] for k, s in init.items()})
    target = _arc_multiset(g2)

    def search(colour):
        if not _balanced(colour):
            return None
        cells: Dict[int, List[Tuple[int, int]]] = {}
        for key, c in colour.items():
            cells.setdefault(c, []).append(key)
        open_cells = [c for c, ks in cells.items() if len(ks) > 2]
        if not open_cells:
            mapping = {}
            for ks in cells.values():
                a = next(v for s, v in ks if s == 0)
                b = next(v for s, v in ks if s == 1)
                mapping[a] = b
            return mapping if _arc_multiset(g1, mapping) == target else None
        cell = min(open_cells, key=lambda c: (len(cells[c]), c))
        v1 = min(v for s, v in cells[cell] if s == 0)
        fresh = max(colour.values()) + 1
        for v2 in sorted(v for s, v in cells[cell] if s == 1):
            trial = dict(colour)
            trial[(0, v1)] = fresh
            trial[(1, v2)] = fresh
            found = search(_refine(graphs, trial))
            if found is not None:
                return found
        return None

    return search(colour)


def xnetwork_isomorphic(n1: XNetwork, n2: XNetwork) -> bool:
    """True iff a digraph isomorphism fixing every taxon exists."""
    return find_xnetwork_isomorphism(n1, n2) is not None
