"""Fold-up of MUL-trees, soundness, stability and the kappa bijection."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .canonical import EquivPartition, canon_codes, equiv_partition, label_token, xnetwork_isomorphic
from .core import MulTree, PseudoDag, XNetwork, _compact
from .errors import NotStableError
from .unfold import PathIndex, unfold

__all__ = [
    "FoldStep",
    "FoldTrace",
    "maximal_inextendible_classes",
    "fold_up",
    "is_sound",
    "is_sound_structural",
    "is_stable",
    "Kappa",
    "kappa",
]


class _Work:
    """Mutable labelled pseudoDAG used while folding."""

    def __init__(self, m: MulTree):
        g = m.graph
        self.out: Dict[int, List[int]] = {v: list(g.children(v)) for v in g.vertices}
        self.inn: Dict[int, List[int]] = {v: list(g.parents(v)) for v in g.vertices}
        self.label: Dict[int, str] = {v: m.label_of(v) for v in g.leaves}
        self.root = g.root
        self.next_id = g.next_vertex_id()

    def hanging_heads(self) -> Dict[int, str]:
        """Heads of cut arcs whose hanging component is a rooted tree, with codes."""
        tree_below: Dict[int, bool] = {}
        codes: Dict[int, str] = {}
        for v in self._postorder():
            kids = self.out[v]
            if not kids:
                tree_below[v] = True
                codes[v] = label_token(self.label[v])
            else:
                tree_below[v] = all(len(self.inn[c]) == 1 and tree_below[c] for c in kids)
                if tree_below[v]:
                    codes[v] = "(" + ",".join(sorted(codes[c] for c in kids)) + ")"
        return {v: codes[v] for v in self.out if v != self.root and len(self.inn[v]) == 1 and tree_below[v]}

    def _postorder(self) -> List[int]:
        order: List[int] = []
        seen: Set[int] = set()
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
                continue
            if v in seen:
                continue
            seen.add(v)
            stack.append((v, True))
            stack.extend((c, False) for c in self.out[v] if c not in seen)
        return order

    def delete_subtree(self, v: int) -> None:
        stack = [v]
        while stack:
            u = stack.pop()
            stack.extend(self.out.pop(u))
            self.inn.pop(u)
            self.label.pop(u, None)


def _inextendible(heads: Dict[int, str]) -> Dict[str, List[int]]:
    groups: Dict[str, List[int]] = {}
    for v, code in heads.items():
        groups.setdefault(code, []).append(v)
    return {code: sorted(vs) for code, vs in groups.items() if len(vs) >= 2}


def _maximal(work: _Work, heads: Dict[int, str], groups: Dict[str, List[int]]) -> List[str]:
    inext_heads = {v for vs in groups.values() for v in vs}
    blocked = set()
    for code, vs in groups.items():
        for v in vs:
            u = v
            while True:
                ps = work.inn[u]
                if len(ps) != 1 or ps[0] not in heads:
                    break
                u = ps[0]
                if u in inext_heads:
                    blocked.add(code)
                    break
            if code in blocked:
                break
    return sorted(code for code in groups if code not in blocked)


def maximal_inextendible_classes(m) -> List[Tuple[str, Tuple[int, ...]]]:
    """Maximal inextendible subMUL-tree classes as ``(code, member roots)`` pairs.

    ``m`` is a :class:`MulTree`; member roots are vertex ids of ``m``.
    """
    work = _Work(m)
    heads = work.hanging_heads()
    groups = _inextendible(heads)
    return [(code, tuple(groups[code])) for code in _maximal(work, heads, groups)]


@dataclass(frozen=True)
class FoldStep:
    code: str
    subdivided: Tuple[Tuple[int, int], ...]
    merged: int
    kept_root: int


@dataclass(frozen=True)
class FoldTrace:
    """Fold steps in working ids; ``vertex_map`` sends working ids to ids of ``final``."""

    steps: Tuple[FoldStep, ...]
    final: XNetwork
    vertex_map: Dict[int, int]


def fold_up(m: MulTree, rng: Optional[random.Random] = None) -> Tuple[XNetwork, FoldTrace]:
    """Fold ``m`` into the X-network F(M).

    Maximal inextendible classes are processed smallest code first; with
    ``rng`` the next class is drawn at random instead (the result does not
    depend on the order).  The returned network may contain parallel arcs and
    is not validated.
    """
    work = _Work(m)
    steps: List[FoldStep] = []
    while True:
        heads = work.hanging_heads()
        groups = _inextendible(heads)
        if not groups:
            break
        maximal = _maximal(work, heads, groups)
        code = rng.choice(maximal) if rng is not None else maximal[0]
        members = groups[code]
        keep = members[0]
        s = work.next_id
        work.next_id += 1
        tails = []
        work.out[s] = [keep]
        work.inn[s] = []
        for h in members:
            (t,) = work.inn[h]
            tails.append((t, h))
            work.out[t].remove(h)
            work.out[t].append(s)
            work.inn[s].append(t)
            if h != keep:
                work.delete_subtree(h)
        work.inn[keep] = [s]
        steps.append(FoldStep(code, tuple(tails), s, keep))
    ids = sorted(work.out)
    raw = PseudoDag(ids, [(t, h) for t in ids for h in work.out[t]])
    net = XNetwork(raw, {x: v for v, x in work.label.items()})
    vertex_map = _compact(raw)
    final = XNetwork(raw.relabelled(vertex_map), {x: vertex_map[v] for x, v in net.leaf_of.items()})
    return final, FoldTrace(tuple(steps), final, vertex_map)


def is_sound(m: MulTree) -> bool:
    """True iff the fold-up of ``m`` has no parallel arcs."""
    net, _ = fold_up(m)
    return net.is_phylogenetic


def is_sound_structural(m: MulTree) -> bool:
    """True iff no two isomorphic subMUL-trees have roots sharing a parent."""
    codes = canon_codes(m)
    g = m.graph
    for v in g.vertices:
        kid_codes = [codes[c] for c in g.children(v)]
        if len(kid_codes) != len(set(kid_codes)):
            return False
    return True


def is_stable(n: XNetwork, cap: Optional[int] = None) -> bool:
    """True iff ``n`` is isomorphic to the fold-up of its un-fold."""
    m, _ = unfold(n, cap)
    folded, _ = fold_up(m)
    return xnetwork_isomorphic(n, folded)


@dataclass(frozen=True)
class Kappa:
    """The bijection between tree vertices of a stable N and classes of U(N)/~."""

    forward: Dict[int, int]
    inverse: Dict[int, int]
    multree: MulTree
    index: PathIndex
    partition: EquivPartition

    def __call__(self, v: int) -> int:
        return self.forward[v]


def kappa(n: XNetwork, cap: Optional[int] = None, m: Optional[MulTree] = None,
          index: Optional[PathIndex] = None) -> Kappa:
    """Map every tree vertex of ``n`` to the class of U(N)-vertices whose path ends there.

    Raises :class:`NotStableError` when that correspondence is not a
    well-defined bijection, naming the side that fails.
    """
    if m is None or index is None:
        m, index = unfold(n, cap)
    part = equiv_partition(m)
    forward: Dict[int, int] = {}
    inverse: Dict[int, int] = {}
    for v in n.tree_vertices:
        classes = {part.class_of[u] for u in index.fibre(v)}
        if len(classes) != 1:
            raise NotStableError(f"kappa not well defined: tree vertex {v} meets {len(classes)} classes")
        (c,) = classes
        if c in inverse:
            raise NotStableError(f"kappa not injective: tree vertices {inverse[c]} and {v} share class {c}")
        if set(index.fibre(v)) != set(part.classes[c]):
            raise NotStableError(f"kappa not injective: class {c} extends beyond the paths ending at {v}")
        forward[v] = c
        inverse[c] = v
    if len(inverse) != len(part.classes):
        raise NotStableError("kappa not surjective")
    return Kappa(forward, inverse, m, index, part)
