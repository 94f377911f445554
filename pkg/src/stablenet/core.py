"""Rooted pseudoDAGs, X-networks and MUL-trees.

All graph values are immutable: editing primitives such as :func:`subdivide`
and :func:`suppress` return new values and never reuse a vertex id.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import InvalidInputError

__all__ = [
    "Arc",
    "PseudoDag",
    "XNetwork",
    "MulTree",
    "Violation",
    "ValidationReport",
    "validate",
    "subdivide",
    "suppress",
    "below",
    "lca",
]


class Arc(NamedTuple):
    tail: int
    head: int
    key: int = 0


def _normalise_arcs(arcs: Iterable) -> List[Arc]:
    seen: Counter = Counter()
    out = []
    for a in arcs:
        if len(a) == 3:
            arc = Arc(int(a[0]), int(a[1]), int(a[2]))
        else:
            t, h = int(a[0]), int(a[1])
            arc = Arc(t, h, seen[(t, h)])
        seen[(arc.tail, arc.head)] = max(seen[(arc.tail, arc.head)], arc.key + 1)
        out.append(arc)
    return out


class PseudoDag:
    """A directed multigraph on integer vertex ids.

    Acyclicity, a unique root and connectivity are *not* enforced at
    construction; :func:`validate` reports them.  Arcs are ``(tail, head,
    key)`` triples where ``key`` only disambiguates parallel arcs.
    """

    __slots__ = ("_vertices", "_arcs", "_out", "_in", "_roots", "_topo")

    def __init__(self, vertices: Iterable[int], arcs: Iterable = ()):
        verts = tuple(sorted(set(int(v) for v in vertices)))
        arcs = _normalise_arcs(arcs)
        vset = set(verts)
        out: Dict[int, List[Arc]] = {v: [] for v in verts}
        inn: Dict[int, List[Arc]] = {v: [] for v in verts}
        if len(set(arcs)) != len(arcs):
            raise InvalidInputError("duplicate arc (tail, head, key) triple")
        for a in arcs:
            if a.tail not in vset or a.head not in vset:
                raise InvalidInputError(f"arc {tuple(a)} references an unknown vertex")
            out[a.tail].append(a)
            inn[a.head].append(a)
        self._vertices = verts
        self._arcs = tuple(sorted(arcs))
        self._out = {v: tuple(sorted(x)) for v, x in out.items()}
        self._in = {v: tuple(sorted(x)) for v, x in inn.items()}
        self._roots = tuple(v for v in verts if not inn[v])
        self._topo: Optional[Tuple[int, ...]] = None

    # basic queries -------------------------------------------------------
    @property
    def vertices(self) -> Tuple[int, ...]:
        return self._vertices

    @property
    def arcs(self) -> Tuple[Arc, ...]:
        return self._arcs

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v) -> bool:
        return v in self._out

    def out_arcs(self, v: int) -> Tuple[Arc, ...]:
        return self._out[v]

    def in_arcs(self, v: int) -> Tuple[Arc, ...]:
        return self._in[v]

    def children(self, v: int) -> Tuple[int, ...]:
        """Heads of the outgoing arcs of ``v`` (repeated for parallel arcs)."""
        return tuple(a.head for a in self._out[v])

    def parents(self, v: int) -> Tuple[int, ...]:
        return tuple(a.tail for a in self._in[v])

    def indegree(self, v: int) -> int:
        return len(self._in[v])

    def outdegree(self, v: int) -> int:
        return len(self._out[v])

    @property
    def roots(self) -> Tuple[int, ...]:
        return self._roots

    @property
    def root(self) -> int:
        if len(self._roots) != 1:
            raise InvalidInputError(f"expected exactly one root, found {len(self._roots)}")
        return self._roots[0]

    @property
    def leaves(self) -> Tuple[int, ...]:
        return tuple(v for v in self._vertices if not self._out[v])

    def is_leaf(self, v: int) -> bool:
        return not self._out[v]

    def is_hybrid(self, v: int) -> bool:
        return len(self._in[v]) >= 2

    def is_tree_vertex(self, v: int) -> bool:
        return len(self._in[v]) <= 1

    def has_arc(self, tail: int, head: int) -> bool:
        return any(a.head == head for a in self._out[tail])

    def parallel_arcs(self) -> List[Tuple[int, int]]:
        c = Counter((a.tail, a.head) for a in self._arcs)
        return sorted(k for k, n in c.items() if n > 1)

    def topological_order(self) -> Tuple[int, ...]:
        """Kahn order (smallest id first among ready vertices).

        Raises :class:`InvalidInputError` when a directed cycle exists.
        """
        if self._topo is None:
            import heapq

            indeg = {v: len(self._in[v]) for v in self._vertices}
            heap = [v for v in self._vertices if indeg[v] == 0]
            heapq.heapify(heap)
            order = []
            while heap:
                v = heapq.heappop(heap)
                order.append(v)
                for a in self._out[v]:
                    indeg[a.head] -= 1
                    if indeg[a.head] == 0:
                        heapq.heappush(heap, a.head)
            if len(order) != len(self._vertices):
                raise InvalidInputError("graph contains a directed cycle")
            self._topo = tuple(order)
        return self._topo

    def descendants(self, v: int) -> FrozenSet[int]:
        """All vertices below ``v``, including ``v`` itself."""
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for a in self._out[u]:
                if a.head not in seen:
                    seen.add(a.head)
                    stack.append(a.head)
        return frozenset(seen)

    def ancestors(self, v: int) -> FrozenSet[int]:
        """All ancestors of ``v``, including ``v`` itself."""
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for a in self._in[u]:
                if a.tail not in seen:
                    seen.add(a.tail)
                    stack.append(a.tail)
        return frozenset(seen)

    def is_weakly_connected(self) -> bool:
        if not self._vertices:
            return False
        start = self._vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self.children(u) + self.parents(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self._vertices)

    def next_vertex_id(self) -> int:
        return self._vertices[-1] + 1 if self._vertices else 0

    def relabelled(self, mapping: Mapping[int, int]) -> "PseudoDag":
        return PseudoDag(
            (mapping[v] for v in self._vertices),
            ((mapping[a.tail], mapping[a.head]) for a in self._arcs),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, PseudoDag) and self._vertices == other._vertices and self._arcs == other._arcs

    def __hash__(self) -> int:
        return hash((self._vertices, self._arcs))

    def __repr__(self) -> str:
        return f"PseudoDag(|V|={len(self._vertices)}, |A|={len(self._arcs)})"


def _compact(graph: PseudoDag) -> Dict[int, int]:
    """Map vertex ids to 0..n-1 in BFS order from the root(s)."""
    order: List[int] = []
    seen = set()
    queue = deque(graph.roots)
    seen.update(graph.roots)
    while queue:
        v = queue.popleft()
        order.append(v)
        for c in graph.children(v):
            if c not in seen:
                seen.add(c)
                queue.append(c)
    order.extend(v for v in graph.vertices if v not in seen)
    return {v: i for i, v in enumerate(order)}


class _Labelled:
    """Shared behaviour of graphs whose leaves carry taxon labels."""

    graph: PseudoDag

    @property
    def root(self) -> int:
        return self.graph.root

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self.graph.vertices

    @property
    def arcs(self) -> Tuple[Arc, ...]:
        return self.graph.arcs

    def children(self, v: int) -> Tuple[int, ...]:
        return self.graph.children(v)

    def parents(self, v: int) -> Tuple[int, ...]:
        return self.graph.parents(v)

    @property
    def leaves(self) -> Tuple[int, ...]:
        return self.graph.leaves

    def label_of(self, v: int) -> Optional[str]:
        raise NotImplementedError


class XNetwork(_Labelled):
    """A rooted pseudoDAG whose leaves are bijectively labelled by ``taxa``.

    Phylogenetic networks are the X-networks without parallel arcs and
    phylogenetic trees the ones without hybrid vertices; both are plain
    ``XNetwork`` values, see :attr:`is_phylogenetic` and :attr:`is_tree`.
    Pass ``check=True`` to raise on any violated axiom.
    """

    __slots__ = ("graph", "leaf_of", "_label_of")

    def __init__(self, graph: PseudoDag, leaf_of: Mapping[str, int], check: bool = False):
        self.graph = graph
        self.leaf_of: Dict[str, int] = dict(sorted((str(k), int(v)) for k, v in leaf_of.items()))
        self._label_of = {v: k for k, v in self.leaf_of.items()}
        if len(self._label_of) != len(self.leaf_of):
            raise InvalidInputError("two taxa are mapped to the same vertex")
        if check:
            validate(self, "xnetwork").raise_if_invalid()

    @classmethod
    def from_arcs(cls, arcs: Iterable[Tuple[Hashable, Hashable]], labels: Optional[Mapping[Hashable, str]] = None,
                  check: bool = True) -> "XNetwork":
        """Build a network from arcs between arbitrary hashable vertex names.

        Leaves are labelled by ``labels[name]`` when given, otherwise by
        ``str(name)``.  Vertex ids are assigned in BFS order from the root.
        """
        arcs = list(arcs)
        names = _ordered_names(arcs)
        index = {n: i for i, n in enumerate(names)}
        g = PseudoDag(range(len(names)), [(index[t], index[h]) for t, h in arcs])
        leaf_of = {}
        for v in g.leaves:
            name = names[v]
            leaf_of[str(labels[name]) if labels and name in labels else str(name)] = v
        net = cls(g, leaf_of)
        net = net.compacted()
        if check:
            validate(net, "xnetwork").raise_if_invalid()
        return net

    @property
    def taxa(self) -> Tuple[str, ...]:
        return tuple(self.leaf_of)

    def label_of(self, v: int) -> Optional[str]:
        return self._label_of.get(v)

    @property
    def hybrids(self) -> Tuple[int, ...]:
        return tuple(v for v in self.graph.vertices if self.graph.indegree(v) >= 2)

    @property
    def tree_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in self.graph.vertices if self.graph.indegree(v) <= 1)

    @property
    def interior(self) -> Tuple[int, ...]:
        return tuple(v for v in self.graph.vertices if self.graph.outdegree(v) > 0)

    @property
    def has_parallel_arcs(self) -> bool:
        return bool(self.graph.parallel_arcs())

    @property
    def is_phylogenetic(self) -> bool:
        return not self.has_parallel_arcs

    @property
    def is_tree(self) -> bool:
        return not self.hybrids and self.is_phylogenetic

    @property
    def is_binary(self) -> bool:
        return all(self.graph.indegree(h) == 2 for h in self.hybrids)

    @property
    def reticulation_number(self) -> int:
        return sum(self.graph.indegree(h) - 1 for h in self.hybrids)

    def compacted(self) -> "XNetwork":
        """Same network with vertex ids renumbered 0..n-1 in BFS order."""
        m = _compact(self.graph)
        return XNetwork(self.graph.relabelled(m), {x: m[v] for x, v in self.leaf_of.items()})

    def with_graph(self, graph: PseudoDag) -> "XNetwork":
        return XNetwork(graph, {x: v for x, v in self.leaf_of.items() if v in graph})

    def __eq__(self, other) -> bool:
        return isinstance(other, XNetwork) and self.graph == other.graph and self.leaf_of == other.leaf_of

    def __hash__(self) -> int:
        return hash((self.graph, tuple(self.leaf_of.items())))

    def __repr__(self) -> str:
        kind = "tree" if self.is_tree else ("network" if self.is_phylogenetic else "X-network")
        return f"XNetwork({kind}, taxa={list(self.taxa)}, |V|={len(self.graph)}, hybrids={len(self.hybrids)})"


class MulTree(_Labelled):
    """A rooted tree with a labelling map ``mu``: taxon -> set of leaves."""

    __slots__ = ("graph", "mu", "_label_of")

    def __init__(self, graph: PseudoDag, mu: Mapping[str, Iterable[int]], check: bool = False):
        self.graph = graph
        self.mu: Dict[str, FrozenSet[int]] = {str(k): frozenset(v) for k, v in sorted(mu.items())}
        self._label_of = {}
        for x, ls in self.mu.items():
            for leaf in ls:
                self._label_of[leaf] = x
        if check:
            validate(self, "multree").raise_if_invalid()

    @classmethod
    def from_arcs(cls, arcs: Iterable[Tuple[Hashable, Hashable]], labels: Mapping[Hashable, str],
                  check: bool = True) -> "MulTree":
        arcs = list(arcs)
        names = _ordered_names(arcs)
        index = {n: i for i, n in enumerate(names)}
        g = PseudoDag(range(len(names)), [(index[t], index[h]) for t, h in arcs])
        mu: Dict[str, set] = {}
        for v in g.leaves:
            mu.setdefault(str(labels[names[v]]), set()).add(v)
        m = cls(g, mu).compacted()
        if check:
            validate(m, "multree").raise_if_invalid()
        return m

    @property
    def taxa(self) -> Tuple[str, ...]:
        return tuple(self.mu)

    def label_of(self, v: int) -> Optional[str]:
        return self._label_of.get(v)

    def parent(self, v: int) -> Optional[int]:
        ps = self.graph.parents(v)
        return ps[0] if ps else None

    def compacted(self) -> "MulTree":
        m = _compact(self.graph)
        return MulTree(self.graph.relabelled(m), {x: {m[v] for v in ls} for x, ls in self.mu.items()})

    def is_singly_labelled(self) -> bool:
        return all(len(ls) == 1 for ls in self.mu.values())

    def __repr__(self) -> str:
        sizes = {x: len(ls) for x, ls in self.mu.items()}
        return f"MulTree(|V|={len(self.graph)}, mu-sizes={sizes})"


def _ordered_names(arcs: Sequence[Tuple[Hashable, Hashable]]) -> List[Hashable]:
    names: List[Hashable] = []
    seen = set()
    for t, h in arcs:
        for n in (t, h):
            if n not in seen:
                seen.add(n)
                names.append(n)
    return names


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    vertices: Tuple[int, ...] = ()


@dataclass
class ValidationReport:
    kind: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]

    def add(self, code: str, message: str, vertices: Iterable[int] = ()) -> None:
        self.violations.append(Violation(code, message, tuple(vertices)))

    def raise_if_invalid(self) -> None:
        if self.violations:
            lines = "; ".join(f"{v.code}: {v.message}" for v in self.violations)
            raise InvalidInputError(f"invalid {self.kind}: {lines}", report=self)


KINDS = ("pseudodag", "xnetwork", "phylonetwork", "binary", "phylotree", "multree")


def _check_pseudodag(g: PseudoDag, report: ValidationReport) -> bool:
    if not g.vertices:
        report.add("empty", "graph has no vertices")
        return False
    if len(g.roots) != 1:
        report.add("root-count", f"expected exactly one vertex of indegree 0, found {len(g.roots)}", g.roots)
    try:
        g.topological_order()
    except InvalidInputError:
        report.add("cycle", "graph contains a directed cycle")
        return False
    if not g.is_weakly_connected():
        report.add("disconnected", "graph is not connected")
    return report.ok


def validate(obj, kind: Optional[str] = None) -> ValidationReport:
    """Check ``obj`` against the axioms of ``kind`` and list every violation.

    ``kind`` defaults to ``"pseudodag"``, ``"xnetwork"`` or ``"multree"``
    depending on the type of ``obj``.  Stricter network kinds are
    ``"phylonetwork"`` (no parallel arcs), ``"binary"`` (hybrid indegree
    two) and ``"phylotree"`` (no hybrids).
    """
    if kind is None:
        kind = "multree" if isinstance(obj, MulTree) else "xnetwork" if isinstance(obj, XNetwork) else "pseudodag"
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    report = ValidationReport(kind)
    g = obj if isinstance(obj, PseudoDag) else obj.graph
    if not _check_pseudodag(g, report) or kind == "pseudodag":
        return report
    if kind == "multree":
        if not isinstance(obj, MulTree):
            report.add("type", "expected a MulTree")
            return report
        _check_multree(obj, report)
        return report
    if not isinstance(obj, XNetwork):
        report.add("type", "expected an XNetwork")
        return report
    _check_xnetwork(obj, report)
    if kind in ("phylonetwork", "binary", "phylotree"):
        for t, h in g.parallel_arcs():
            report.add("parallel-arcs", f"parallel arcs between {t} and {h}", (t, h))
    if kind == "binary":
        for h in obj.hybrids:
            if g.indegree(h) != 2:
                report.add("hybrid-indegree", f"hybrid {h} has indegree {g.indegree(h)} != 2", (h,))
    if kind == "phylotree":
        for h in obj.hybrids:
            report.add("hybrid", f"vertex {h} is a hybrid vertex", (h,))
    return report


def _check_xnetwork(n: XNetwork, report: ValidationReport) -> None:
    g = n.graph
    leaves = set(g.leaves)
    image = set(n.leaf_of.values())
    if not n.leaf_of:
        report.add("no-taxa", "taxon set is empty")
    for v in sorted(image - leaves):
        report.add("label-not-leaf", f"labelled vertex {v} ({n.label_of(v)}) is not a leaf", (v,))
    for v in sorted(leaves - image):
        report.add("unlabelled-leaf", f"leaf {v} carries no taxon", (v,))
    unknown = image - set(g.vertices)
    for v in sorted(unknown):
        report.add("unknown-vertex", f"taxon mapped to unknown vertex {v}", (v,))
    for v in g.vertices:
        indeg, outdeg = g.indegree(v), g.outdegree(v)
        if outdeg == 0:
            if indeg != 1 and len(g.vertices) > 1:
                report.add("leaf-degree", f"leaf {v} has degree {indeg} != 1", (v,))
        elif indeg >= 2:
            if outdeg != 1:
                report.add("hybrid-outdegree", f"hybrid outdegree != 1 at vertex {v} (outdegree {outdeg})", (v,))
        elif outdeg != 2:
            report.add("tree-outdegree", f"non-leaf tree vertex {v} has outdegree {outdeg} != 2", (v,))


def _check_multree(m: MulTree, report: ValidationReport) -> None:
    g = m.graph
    for v in g.vertices:
        if g.indegree(v) > 1:
            report.add("not-a-tree", f"vertex {v} has indegree {g.indegree(v)}", (v,))
        if g.indegree(v) == 1 and g.outdegree(v) == 1:
            report.add("degree-two", f"vertex {v} has indegree and outdegree one", (v,))
    leaves = set(g.leaves)
    seen: Dict[int, str] = {}
    for x, ls in m.mu.items():
        if not ls:
            report.add("empty-label-set", f"mu({x}) is empty")
        for leaf in ls:
            if leaf not in leaves:
                report.add("label-not-leaf", f"mu({x}) contains non-leaf {leaf}", (leaf,))
            if leaf in seen:
                report.add("label-clash", f"leaf {leaf} labelled by both {seen[leaf]} and {x}", (leaf,))
            seen[leaf] = x
    for leaf in sorted(leaves - set(seen)):
        report.add("unlabelled-leaf", f"leaf {leaf} carries no taxon", (leaf,))


# --------------------------------------------------------------------------
# editing primitives


def subdivide(g: PseudoDag, arc) -> Tuple[PseudoDag, int]:
    """Replace ``arc`` by the path tail, w, head; return the new graph and w."""
    arc = Arc(*arc) if len(arc) == 3 else Arc(arc[0], arc[1], 0)
    if arc not in set(g.arcs):
        raise InvalidInputError(f"unknown arc {tuple(arc)}")
    w = g.next_vertex_id()
    arcs = [a for a in g.arcs if a != arc] + [Arc(arc.tail, w, 0), Arc(w, arc.head, 0)]
    return PseudoDag(g.vertices + (w,), arcs), w


def suppress(g: PseudoDag, v: int) -> PseudoDag:
    """Remove ``v`` (indegree = outdegree = 1) and join its parent to its child.

    The new arc may be parallel to an existing one.
    """
    if v not in g:
        raise InvalidInputError(f"unknown vertex {v}")
    if g.indegree(v) != 1 or g.outdegree(v) != 1:
        raise InvalidInputError(f"vertex {v} does not have indegree and outdegree one")
    p, c = g.parents(v)[0], g.children(v)[0]
    arcs = [a for a in g.arcs if v not in (a.tail, a.head)]
    key = 1 + max((a.key for a in arcs if a.tail == p and a.head == c), default=-1)
    arcs.append(Arc(p, c, key))
    return PseudoDag((u for u in g.vertices if u != v), arcs)


def below(g, u: int, v: int) -> bool:
    """True iff ``v`` is below ``u`` (a directed path u -> v exists; u is below itself)."""
    g = g if isinstance(g, PseudoDag) else g.graph
    if u not in g or v not in g:
        raise InvalidInputError("unknown vertex")
    return v in g.descendants(u)


def lca(tree, leaves: Iterable[int]) -> int:
    """Last common ancestor of at least two vertices of a rooted tree."""
    g = tree if isinstance(tree, PseudoDag) else tree.graph
    ys = list(dict.fromkeys(leaves))
    if len(ys) < 2:
        raise InvalidInputError("lca needs at least two vertices")
    paths = []
    for y in ys:
        if y not in g:
            raise InvalidInputError(f"unknown vertex {y}")
        path = [y]
        while g.indegree(path[-1]):
            if g.indegree(path[-1]) > 1:
                raise InvalidInputError("lca is defined on trees only")
            path.append(g.parents(path[-1])[0])
        paths.append(path[::-1])
    best = None
    for level in zip(*paths):
        if all(x == level[0] for x in level):
            best = level[0]
        else:
            break
    if best is None:
        raise InvalidInputError("vertices lie in different components")
    return best
