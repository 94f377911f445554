"""X-sets of a MUL-tree, the trees they span, and the maps into the MUL-tree.

An X-set picks one leaf per taxon.  For an X-set C the spanning tree
``M_C+`` is made of every vertex of M on a path from lca(C) to a leaf of C;
suppressing its vertices of indegree and outdegree one gives the
phylogenetic tree ``M_C``.  ``xi_plus`` sends vertices of ``M_C+`` back to M
and ``xi_bar_plus`` composes it with the projection onto V(M)/~.

This module also holds the brute-force display search
(:func:`iter_display_witnesses`), which embeds a tree in a network without
any reference to the un-fold.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Set, Tuple

from .canonical import EquivPartition, canon_code, equiv_partition, label_token
from .core import Arc, MulTree, PseudoDag, XNetwork, _compact
from .errors import BudgetExceeded, InvalidInputError
from .unfold import PathIndex, RootPath, enumerate_paths, unfold

__all__ = [
    "XSet",
    "XSetMaps",
    "DisplayWitness",
    "count_xsets",
    "enumerate_xsets",
    "span",
    "restrict_to_xset",
    "xset_code",
    "endorsing_xsets",
    "endorsed_codes",
    "xi_bar_plus_image",
    "v_m_c",
    "v_m_c_classes",
    "iter_display_witnesses",
    "display_witness",
    "witness_xset",
    "check_witness_paths",
]

DEFAULT_SEARCH_BUDGET = 10**6


@dataclass(frozen=True)
class XSet:
    """One chosen leaf per taxon; ``chosen`` maps taxon -> leaf id."""

    chosen: Tuple[Tuple[str, int], ...]

    @classmethod
    def from_mapping(cls, chosen: Mapping[str, int]) -> "XSet":
        return cls(tuple(sorted((str(x), int(v)) for x, v in chosen.items())))

    @property
    def mapping(self) -> Dict[str, int]:
        return dict(self.chosen)

    @property
    def leaves(self) -> FrozenSet[int]:
        return frozenset(v for _, v in self.chosen)

    def validate_for(self, m: MulTree) -> None:
        taxa = [x for x, _ in self.chosen]
        if sorted(taxa) != sorted(m.taxa):
            raise InvalidInputError("X-set does not pick exactly one leaf per taxon")
        for x, v in self.chosen:
            if v not in m.mu[x]:
                raise InvalidInputError(f"leaf {v} is not labelled {x!r}")

    def as_json(self, m: Optional[MulTree] = None) -> Dict[str, int]:
        """Taxon -> index of the chosen leaf among the sorted leaves of that taxon."""
        if m is None:
            return self.mapping
        return {x: sorted(m.mu[x]).index(v) for x, v in self.chosen}


def count_xsets(m: MulTree) -> int:
    total = 1
    for leaves in m.mu.values():
        total *= len(leaves)
    return total


def enumerate_xsets(m: MulTree, limit: Optional[int] = None) -> Iterator[XSet]:
    """Every X-set of ``m``: taxa in sorted order, leaves by increasing id.

    Raises :class:`BudgetExceeded` up front when there are more than
    ``limit`` X-sets.
    """
    total = count_xsets(m)
    if limit is not None and total > limit:
        raise BudgetExceeded(f"{total} X-sets exceed the limit {limit}", count=total)
    taxa = sorted(m.taxa)
    for pick in product(*(sorted(m.mu[x]) for x in taxa)):
        yield XSet(tuple(zip(taxa, pick)))


def span(m: MulTree, leaves) -> Tuple[int, Set[int]]:
    """``(r_C, V(M_C+))`` for a set of leaves of ``m``."""
    g = m.graph
    leaves = list(leaves)
    if not leaves:
        raise InvalidInputError("empty leaf set")
    count: Dict[int, int] = {}
    chains: List[List[int]] = []
    for leaf in leaves:
        chain = [leaf]
        while g.indegree(chain[-1]):
            chain.append(g.parents(chain[-1])[0])
        chains.append(chain)
        for v in chain:
            count[v] = count.get(v, 0) + 1
    k = len(leaves)
    # the shared vertices form the root chain; the lca is its lowest member
    shared = [v for v in chains[0] if count[v] == k]
    r = shared[0]
    above = set(shared[1:])
    return r, {v for v in count if v not in above}


@dataclass(frozen=True)
class XSetMaps:
    """``M_C+``, ``M_C`` and the maps between them and M.

    ``m_c_plus`` is renumbered from 0 in BFS order; ``xi_plus`` sends its
    vertices to M.  ``m_c`` keeps the vertex ids of ``m_c_plus`` so that
    ``iota1`` is the identity on its vertices.
    """

    xset: XSet
    m_c_plus: XNetwork
    m_c: XNetwork
    xi_plus: Dict[int, int]
    xi: Dict[int, int]
    iota1: Dict[int, int]
    r_c: int
    xi_bar_plus: Dict[int, int]

    @property
    def image(self) -> FrozenSet[int]:
        return frozenset(self.xi_bar_plus.values())

    @property
    def injective(self) -> bool:
        return len(self.image) == len(self.xi_bar_plus)


def restrict_to_xset(m: MulTree, c: XSet, partition: Optional[EquivPartition] = None) -> XSetMaps:
    c.validate_for(m)
    if partition is None:
        partition = equiv_partition(m)
    g = m.graph
    r, verts = span(m, c.leaves)
    arcs = [(p, v) for v in verts if v != r for p in g.parents(v)]
    sub = PseudoDag(verts, arcs)
    order = _compact(sub)
    plus_graph = sub.relabelled(order)
    back = {new: old for old, new in order.items()}
    leaf_of = {x: order[v] for x, v in c.chosen}
    m_c_plus = XNetwork(plus_graph, leaf_of)
    keep = [v for v in plus_graph.vertices if plus_graph.outdegree(v) != 1]
    m_c = XNetwork(_suppress_all(plus_graph, keep), leaf_of)
    xi_plus = {v: back[v] for v in plus_graph.vertices}
    return XSetMaps(
        xset=c,
        m_c_plus=m_c_plus,
        m_c=m_c,
        xi_plus=xi_plus,
        xi={v: xi_plus[v] for v in keep},
        iota1={v: v for v in keep},
        r_c=r,
        xi_bar_plus={v: partition.class_of[u] for v, u in xi_plus.items()},
    )


def _suppress_all(tree: PseudoDag, keep) -> PseudoDag:
    keep = set(keep)
    arcs = []
    for v in keep:
        for c in tree.children(v):
            while c not in keep:
                (c,) = tree.children(c)
            arcs.append((v, c))
    return PseudoDag(keep, arcs)


def xset_code(m: MulTree, c: XSet) -> str:
    """Canonical code of ``M_C`` without building the maps."""
    g = m.graph
    r, verts = span(m, c.leaves)
    codes: Dict[int, str] = {}
    stack = [(r, False)]
    while stack:
        v, done = stack.pop()
        kids = [k for k in g.children(v) if k in verts]
        if not kids:
            codes[v] = label_token(m.label_of(v))
        elif done:
            parts = [codes[k] for k in kids]
            codes[v] = parts[0] if len(parts) == 1 else "(" + ",".join(sorted(parts)) + ")"
        else:
            stack.append((v, True))
            stack.extend((k, False) for k in kids)
    return codes[r]


def endorsing_xsets(m: MulTree, t: XNetwork, limit: Optional[int] = None) -> List[XSet]:
    """All X-sets C with ``M_C`` isomorphic to the phylogenetic tree ``t``."""
    if sorted(t.taxa) != sorted(m.taxa):
        raise InvalidInputError("tree and MUL-tree have different taxa")
    target = canon_code(t)
    return [c for c in enumerate_xsets(m, limit) if xset_code(m, c) == target]


def endorsed_codes(m: MulTree, limit: Optional[int] = None) -> Set[str]:
    """Codes of every phylogenetic tree endorsed by ``m``."""
    return {xset_code(m, c) for c in enumerate_xsets(m, limit)}


def xi_bar_plus_image(xm: XSetMaps) -> FrozenSet[int]:
    return xm.image


def v_m_c(m: MulTree, c: XSet, partition: Optional[EquivPartition] = None) -> Set[int]:
    """V(M)^C: r_C plus every vertex with no vertex ~ r_C at or below it."""
    if partition is None:
        partition = equiv_partition(m)
    r, _ = span(m, c.leaves)
    g = m.graph
    blocked: Set[int] = set()
    for w in partition.classes[partition.class_of[r]]:
        u: Optional[int] = w
        while u is not None and u not in blocked:
            blocked.add(u)
            ps = g.parents(u)
            u = ps[0] if ps else None
    return (set(g.vertices) - blocked) | {r}


def v_m_c_classes(m: MulTree, c: XSet, partition: Optional[EquivPartition] = None) -> FrozenSet[int]:
    if partition is None:
        partition = equiv_partition(m)
    return frozenset(partition.class_of[v] for v in v_m_c(m, c, partition))


# --------------------------------------------------------------------------
# brute-force display search


@dataclass(frozen=True)
class DisplayWitness:
    """An embedding of a subdivision of ``tree`` into a network.

    ``vertex_map`` sends tree vertices to network vertices, ``arc_paths``
    sends each tree arc to the network path realising it, ``subgraph`` is
    the union of those paths and ``p_map`` sends each tree vertex to a root
    path of the network ending at its image (all sharing one path from the
    network root to the image of the tree root).
    """

    tree: XNetwork
    vertex_map: Dict[int, int]
    arc_paths: Dict[Tuple[int, int], Tuple[Arc, ...]]
    subgraph: FrozenSet[Arc]
    p_map: Dict[int, RootPath]


def _reach_sets(g: PseudoDag) -> Dict[int, FrozenSet[int]]:
    below: Dict[int, FrozenSet[int]] = {}
    for v in reversed(g.topological_order()):
        acc = {v}
        for c in g.children(v):
            acc |= below[c]
        below[v] = frozenset(acc)
    return below


def iter_display_witnesses(n: XNetwork, t: XNetwork, budget: int = DEFAULT_SEARCH_BUDGET,
                           partial: bool = False) -> Iterator[DisplayWitness]:
    """Yield every embedding of a subdivision of ``t`` into ``n`` (distinct subgraphs).

    Tree arcs are realised as directed paths that are internally disjoint
    from each other and from the images of tree vertices.  The search
    backtracks over images and paths, pruning any choice that cannot reach
    the leaves still to be placed.  With ``partial`` the taxa of ``t`` may
    be any subset of those of ``n``.
    """
    if partial:
        if not set(t.taxa) <= set(n.taxa):
            raise InvalidInputError("tree has taxa missing from the network")
    elif sorted(t.taxa) != sorted(n.taxa):
        raise InvalidInputError("tree and network have different taxa")
    g, tg = n.graph, t.graph
    reach = _reach_sets(g)
    tree_leaves_below: Dict[int, FrozenSet[int]] = {}
    for v in reversed(tg.topological_order()):
        if tg.is_leaf(v):
            tree_leaves_below[v] = frozenset({n.leaf_of[t.label_of(v)]})
        else:
            tree_leaves_below[v] = frozenset().union(*(tree_leaves_below[c] for c in tg.children(v)))
    expansions = [0]
    seen_subgraphs: Set[FrozenSet[Arc]] = set()

    def tick():
        expansions[0] += 1
        if expansions[0] > budget:
            raise BudgetExceeded(f"display search exceeded {budget} expansions", count=expansions[0])

    def candidates(tv: int, start: Arc, used: Set[int]):
        """Paths from ``start`` to a valid image of tree vertex ``tv``."""
        need = tree_leaves_below[tv]
        want_leaf = tg.is_leaf(tv)
        kids = tg.outdegree(tv)
        stack = [(start, (start,))]
        while stack:
            arc, path = stack.pop()
            tick()
            v = arc.head
            if v in used or not need <= reach[v]:
                continue
            if want_leaf:
                if v in need:
                    yield v, path
                    continue
            elif g.outdegree(v) >= kids:
                yield v, path
            for a in reversed(g.out_arcs(v)):
                stack.append((a, path + (a,)))

    def assign(pending, vmap, paths, used):
        if not pending:
            yield dict(vmap), dict(paths)
            return
        (tp, tv), rest = pending[0], pending[1:]
        src = vmap[tp]
        taken = {p[0] for (a, _), p in paths.items() if a == tp}
        for arc in g.out_arcs(src):
            if arc in taken:
                continue
            for v, path in candidates(tv, arc, used):
                inner = {a.head for a in path[:-1]}
                newly = inner | {v}
                if newly & used:
                    continue
                vmap[tv] = v
                paths[(tp, tv)] = path
                used |= newly
                more = [(tv, c) for c in tg.children(tv)]
                yield from assign(more + rest, vmap, paths, used)
                used -= newly
                del vmap[tv]
                del paths[(tp, tv)]

    troot = tg.root
    need_root = tree_leaves_below[troot]
    root_paths = None
    for r in g.topological_order():
        tick()
        if not need_root <= reach[r]:
            continue
        if tg.is_leaf(troot):
            if r not in need_root:
                continue
        elif g.outdegree(r) < tg.outdegree(troot):
            continue
        vmap = {troot: r}
        for vm, ps in assign([(troot, c) for c in tg.children(troot)], vmap, {}, {r}):
            sub = frozenset(a for p in ps.values() for a in p)
            if sub in seen_subgraphs:
                continue
            seen_subgraphs.add(sub)
            if root_paths is None:
                root_paths = {}
            if r not in root_paths:
                root_paths[r] = _first_root_path(n, r)
            yield DisplayWitness(t, vm, ps, sub, _p_map(tg, vm, ps, root_paths[r]))


def _first_root_path(n: XNetwork, v: int) -> RootPath:
    g = n.graph
    arcs: List[Arc] = []
    u = v
    while g.indegree(u):
        a = g.in_arcs(u)[0]
        arcs.append(a)
        u = a.tail
    return RootPath(tuple(reversed(arcs)), v)


def _p_map(tg: PseudoDag, vmap, paths, base: RootPath) -> Dict[int, RootPath]:
    out = {tg.root: base}
    for v in tg.topological_order():
        for c in tg.children(v):
            p = out[v]
            for a in paths[(v, c)]:
                p = p.extend(a)
            out[c] = p
    return out


def display_witness(n: XNetwork, t: XNetwork, budget: int = DEFAULT_SEARCH_BUDGET,
                    partial: bool = False) -> Optional[DisplayWitness]:
    """First witness that ``n`` displays ``t``, or None."""
    return next(iter_display_witnesses(n, t, budget, partial), None)


def witness_xset(index: PathIndex, w: DisplayWitness) -> XSet:
    """The X-set of U(N) picked out by the leaf paths of a witness."""
    tg = w.tree.graph
    return XSet.from_mapping({w.tree.label_of(v): index.vertex_of(w.p_map[v]) for v in tg.leaves})


def check_witness_paths(m: MulTree, index: PathIndex, w: DisplayWitness) -> bool:
    """Psi(P_T(v)) equals xi_C(v) for every tree vertex, C taken from the witness.

    ``xi_C(v)`` is the lca in M of the chosen leaves below the matching
    vertex of ``M_C``; the tree is also checked to be isomorphic to ``M_C``.
    """
    c = witness_xset(index, w)
    if xset_code(m, c) != canon_code(w.tree):
        return False
    tg = w.tree.graph
    chosen = c.mapping
    for v in tg.vertices:
        leaves = [chosen[w.tree.label_of(u)] for u in tg.descendants(v) if tg.is_leaf(u)]
        r, _ = span(m, leaves)
        if index.vertex_of(w.p_map[v]) != r:
            return False
    return True
