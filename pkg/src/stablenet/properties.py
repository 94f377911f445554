"""Deciders for displayed trees, base trees, tree-child and reticulation-visible.

The deciders for stable networks work entirely on the un-fold: a tree T is
displayed iff some X-set C endorsing T has an injective ``xi_bar_plus``,
and a base tree iff that map is also onto V(M)/~.  Tree-child and
reticulation-visibility are read off the images of ``xi_bar_plus`` over
all X-sets.  Direct graph scans are provided alongside for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from .canonical import EquivPartition, canon_code, equiv_partition, xnetwork_isomorphic
from .core import MulTree, XNetwork
from .errors import InvalidInputError, NotStableError
from .foldup import Kappa, fold_up, kappa
from .unfold import PathIndex, unfold
from .xsets import XSet, XSetMaps, enumerate_xsets, restrict_to_xset, span, v_m_c_classes, xset_code

__all__ = [
    "PropertyVerdict",
    "StableContext",
    "stable_context",
    "is_compressed",
    "displays_stable",
    "strongly_displays",
    "is_base_tree",
    "is_tree_based_stable",
    "vertex_stable_ancestor",
    "is_tree_child",
    "is_reticulation_visible",
    "prstan_check",
    "strong_display_check",
    "stable_profile",
]


@dataclass
class PropertyVerdict:
    """Outcome of a decider.

    ``witness`` backs a positive answer and ``counterexample`` a negative
    one; ``details`` carries method-specific extras.
    """

    holds: bool
    witness: Any = None
    counterexample: Any = None
    method: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _check_network(n: XNetwork, allow_xnetwork: bool) -> None:
    if n.has_parallel_arcs and not allow_xnetwork:
        raise InvalidInputError("network has parallel arcs; pass allow_xnetwork=True to analyse X-networks")


class StableContext:
    """Un-fold, partition, kappa and per-X-set maps of a stable network.

    Building the context checks stability; it raises
    :class:`NotStableError` otherwise.  X-set maps are computed lazily and
    cached.
    """

    def __init__(self, n: XNetwork, cap: Optional[int] = None, limit: Optional[int] = None,
                 allow_xnetwork: bool = False):
        _check_network(n, allow_xnetwork)
        self.network = n
        self.limit = limit
        m, index = unfold(n, cap)
        folded, _ = fold_up(m)
        if not xnetwork_isomorphic(n, folded):
            raise NotStableError("network is not stable: it is not isomorphic to the fold-up of its un-fold")
        self.multree: MulTree = m
        self.index: PathIndex = index
        self.kappa: Kappa = kappa(n, m=m, index=index)
        self.partition: EquivPartition = self.kappa.partition
        self.root_class = self.partition.class_of[m.graph.root]
        self._maps: Dict[XSet, XSetMaps] = {}
        self._xsets: Optional[List[XSet]] = None
        self._by_code: Optional[Dict[str, List[XSet]]] = None

    @property
    def xsets(self) -> List[XSet]:
        if self._xsets is None:
            self._xsets = list(enumerate_xsets(self.multree, self.limit))
        return self._xsets

    def maps(self, c: XSet) -> XSetMaps:
        xm = self._maps.get(c)
        if xm is None:
            xm = restrict_to_xset(self.multree, c, self.partition)
            self._maps[c] = xm
        return xm

    def image(self, c: XSet) -> FrozenSet[int]:
        return self.maps(c).image

    def all_classes(self) -> FrozenSet[int]:
        return frozenset(range(len(self.partition)))

    @property
    def by_code(self) -> Dict[str, List[XSet]]:
        """X-sets grouped by the code of the tree they endorse."""
        if self._by_code is None:
            groups: Dict[str, List[XSet]] = {}
            for c in self.xsets:
                groups.setdefault(xset_code(self.multree, c), []).append(c)
            self._by_code = groups
        return self._by_code

    def endorsing(self, t: XNetwork) -> List[XSet]:
        if sorted(t.taxa) != sorted(self.network.taxa):
            raise InvalidInputError("tree and network have different taxa")
        if not t.is_tree:
            raise InvalidInputError("expected a phylogenetic tree")
        return list(self.by_code.get(canon_code(t), ()))


def stable_context(n: XNetwork, cap: Optional[int] = None, limit: Optional[int] = None,
                   allow_xnetwork: bool = False) -> StableContext:
    return StableContext(n, cap, limit, allow_xnetwork)


def _ctx(n: XNetwork, ctx: Optional[StableContext], **kw) -> StableContext:
    if ctx is not None:
        return ctx
    return StableContext(n, **kw)


# --------------------------------------------------------------------------


def is_compressed(n: XNetwork) -> PropertyVerdict:
    """No arc joins two hybrid vertices."""
    g = n.graph
    for a in g.arcs:
        if g.is_hybrid(a.tail) and g.is_hybrid(a.head):
            return PropertyVerdict(False, counterexample=(a.tail, a.head), method="scan")
    return PropertyVerdict(True, method="scan")


def displays_stable(n: XNetwork, t: XNetwork, ctx: Optional[StableContext] = None, **kw) -> PropertyVerdict:
    """Display test for a stable network via injectivity of ``xi_bar_plus``."""
    ctx = _ctx(n, ctx, **kw)
    endorsing = ctx.endorsing(t)
    for c in endorsing:
        if ctx.maps(c).injective:
            return PropertyVerdict(True, witness=c, method="xi-injective")
    return PropertyVerdict(False, counterexample=endorsing, method="xi-injective",
                           details={"endorsed": bool(endorsing)})


def strongly_displays(n: XNetwork, t: XNetwork, ctx: Optional[StableContext] = None, **kw) -> PropertyVerdict:
    """Display with the tree root at the network root: r_C must be the root of U(N)."""
    ctx = _ctx(n, ctx, **kw)
    root = ctx.multree.graph.root
    endorsing = ctx.endorsing(t)
    for c in endorsing:
        xm = ctx.maps(c)
        if xm.injective and xm.r_c == root:
            return PropertyVerdict(True, witness=c, method="xi-injective-at-root")
    return PropertyVerdict(False, counterexample=endorsing, method="xi-injective-at-root")


def is_base_tree(n: XNetwork, t: XNetwork, ctx: Optional[StableContext] = None, **kw) -> PropertyVerdict:
    """Base-tree test for a stable network via bijectivity of ``xi_bar_plus``."""
    ctx = _ctx(n, ctx, **kw)
    _root_guard(ctx.network)
    everything = ctx.all_classes()
    endorsing = ctx.endorsing(t)
    for c in endorsing:
        xm = ctx.maps(c)
        if xm.injective and xm.image == everything:
            return PropertyVerdict(True, witness=c, method="xi-bijective")
    return PropertyVerdict(False, counterexample=endorsing, method="xi-bijective")


def _root_guard(n: XNetwork) -> None:
    g = n.graph
    kids = g.children(g.root)
    if len(kids) != len(set(kids)):
        raise InvalidInputError("the root is the tail of parallel arcs; the base-tree criterion does not apply")


def is_tree_based_stable(n: XNetwork, ctx: Optional[StableContext] = None, **kw) -> PropertyVerdict:
    """Tree-based test: some X-set has a bijective ``xi_bar_plus``."""
    ctx = _ctx(n, ctx, **kw)
    _root_guard(ctx.network)
    everything = ctx.all_classes()
    for c in ctx.xsets:
        xm = ctx.maps(c)
        if xm.injective and xm.image == everything:
            return PropertyVerdict(True, witness=(c, canon_code(xm.m_c)), method="xi-bijective")
    return PropertyVerdict(False, method="xi-bijective")


def vertex_stable_ancestor(n: XNetwork, v: int, x: str) -> bool:
    """True iff every root path to the leaf of ``x`` visits ``v``.

    Counts the root paths to the leaf that avoid ``v``.
    """
    g = n.graph
    if v not in g:
        raise InvalidInputError(f"unknown vertex {v}")
    if g.is_leaf(v):
        raise InvalidInputError(f"vertex {v} is a leaf")
    if x not in n.leaf_of:
        raise InvalidInputError(f"unknown taxon {x!r}")
    avoiding = {u: 0 for u in g.vertices}
    root = g.root
    if root == v:
        return True
    avoiding[root] = 1
    for u in g.topological_order():
        if u == v:
            continue
        for c in g.children(u):
            if c != v:
                avoiding[c] += avoiding[u]
    return avoiding[n.leaf_of[x]] == 0


def _visible(n: XNetwork, v: int) -> Optional[str]:
    for x in n.taxa:
        if vertex_stable_ancestor(n, v, x):
            return x
    return None


def _tree_child_structural(n: XNetwork) -> PropertyVerdict:
    g = n.graph
    for v in n.interior:
        if not any(g.is_tree_vertex(c) for c in g.children(v)):
            return PropertyVerdict(False, counterexample=v, method="a")
    return PropertyVerdict(True, method="a")


def _tree_child_visibility(n: XNetwork) -> PropertyVerdict:
    witness = {}
    for v in n.interior:
        x = _visible(n, v)
        if x is None:
            return PropertyVerdict(False, counterexample=v, method="b")
        witness[v] = x
    return PropertyVerdict(True, witness=witness, method="b")


def _tree_child_xsets(ctx: StableContext) -> PropertyVerdict:
    m, part = ctx.multree, ctx.partition
    for c in ctx.xsets:
        if ctx.image(c) != v_m_c_classes(m, c, part):
            return PropertyVerdict(False, counterexample=c, method="c")
    return PropertyVerdict(True, method="c")


def _combine(verdicts: Dict[str, PropertyVerdict], primary: str) -> PropertyVerdict:
    main = verdicts[primary]
    agree = len({v.holds for v in verdicts.values()}) == 1
    details = {k: v.holds for k, v in verdicts.items()}
    details["agree"] = agree
    details["verdicts"] = verdicts
    return PropertyVerdict(main.holds, main.witness, main.counterexample, "+".join(verdicts), details)


def is_tree_child(n: XNetwork, method: str = "a", ctx: Optional[StableContext] = None, **kw) -> PropertyVerdict:
    """Tree-child test.

    ``method`` is ``"a"`` (every interior vertex has a tree-vertex child),
    ``"b"`` (every interior vertex is a vertex-stable ancestor of a leaf),
    ``"c"`` (stable networks only: image of ``xi_bar_plus`` equals
    V(M)^C/~ for every X-set) or ``"all"``.

    Method ``"c"`` can accept a stable network that is not tree-child:
    if every X-set either reaches the offending vertex or spans below it,
    the equality holds anyway (``figures/tree_child_xset_counterexample.enwk``).
    The verdict of ``"all"`` is that of ``"a"``.
    """
    if method == "a":
        return _tree_child_structural(n)
    if method == "b":
        return _tree_child_visibility(n)
    if method == "c":
        return _tree_child_xsets(_ctx(n, ctx, **kw))
    if method == "all":
        return _combine({"a": _tree_child_structural(n), "b": _tree_child_visibility(n),
                         "c": _tree_child_xsets(_ctx(n, ctx, **kw))}, "a")
    raise ValueError(f"unknown method {method!r}")


def _retvis_scan(n: XNetwork) -> PropertyVerdict:
    witness = {}
    for h in n.hybrids:
        x = _visible(n, h)
        if x is None:
            return PropertyVerdict(False, counterexample=h, method="a")
        witness[h] = x
    return PropertyVerdict(True, witness=witness, method="a")


def _retvis_xsets(ctx: StableContext) -> PropertyVerdict:
    m, part = ctx.multree, ctx.partition
    g = m.graph
    jumps = set()
    for v in g.vertices:
        ps = g.parents(v)
        if ps and part.size_of(ps[0]) < part.size_of(v):
            jumps.add(part.class_of[v])
    for c in ctx.xsets:
        missing = jumps - ctx.image(c)
        if missing:
            return PropertyVerdict(False, counterexample=(c, min(missing)), method="b")
    return PropertyVerdict(True, method="b")


def is_reticulation_visible(n: XNetwork, method: str = "a", ctx: Optional[StableContext] = None,
                            **kw) -> PropertyVerdict:
    """Reticulation-visibility test.

    ``method`` is ``"a"`` (every hybrid is a vertex-stable ancestor of a
    leaf), ``"b"`` (stable networks only: every class entered with a jump
    in class size lies in every image of ``xi_bar_plus``) or ``"all"``.

    Method ``"b"`` can reject a reticulation-visible network when an
    X-set spans strictly below the child of a hybrid; see
    ``figures/retvis_xset_counterexample.enwk``.
    """
    if method == "a":
        return _retvis_scan(n)
    if method == "b":
        return _retvis_xsets(_ctx(n, ctx, **kw))
    if method == "all":
        return _combine({"a": _retvis_scan(n), "b": _retvis_xsets(_ctx(n, ctx, **kw))}, "a")
    raise ValueError(f"unknown method {method!r}")


def prstan_check(n: XNetwork, v: int, ctx: Optional[StableContext] = None, literal: bool = False,
                 **kw) -> PropertyVerdict:
    """X-set criterion for a tree vertex being a vertex-stable ancestor of some leaf.

    Holds iff for every X-set C the class of ``v`` lies in the image of
    ``xi_bar_plus`` (clause i) or ``v`` lies on the root path of N that
    corresponds to r_C (clause ii).  With ``literal=True`` clause ii only
    asks that ``v`` be an ancestor of the end vertex of that path; this
    weaker form accepts some vertices that are not vertex-stable ancestors
    of any leaf.  ``details["clauses"]`` lists which clause each X-set
    satisfied.
    """
    ctx = _ctx(n, ctx, **kw)
    g = n.graph
    if v not in g or g.is_hybrid(v) or g.is_leaf(v):
        raise InvalidInputError(f"vertex {v} is not an interior tree vertex")
    cls = ctx.kappa(v)
    below_v = g.descendants(v) if literal else None
    clauses = []
    for c in ctx.xsets:
        xm = ctx.maps(c)
        if cls in xm.image:
            clauses.append((c, "i"))
            continue
        path = ctx.index.path_of(xm.r_c)
        hit = path.end in below_v if literal else v in path.vertices
        if hit:
            clauses.append((c, "ii"))
            continue
        return PropertyVerdict(False, counterexample=c, method="xsets", details={"clauses": clauses})
    return PropertyVerdict(True, method="xsets", details={"clauses": clauses})


def strong_display_check(n: XNetwork, ctx: Optional[StableContext] = None, **kw) -> PropertyVerdict:
    """Every tree strongly displayed by a stable tree-child network is a base tree."""
    ctx = _ctx(n, ctx, **kw)
    if not _tree_child_structural(n).holds:
        raise InvalidInputError("network is not tree-child")
    return _strong_implies_base(ctx)


def _strong_implies_base(ctx: StableContext) -> PropertyVerdict:
    m = ctx.multree
    root = m.graph.root
    everything = ctx.all_classes()
    strong: Dict[str, XSet] = {}
    base = set()
    for c in ctx.xsets:
        xm = ctx.maps(c)
        if not xm.injective:
            continue
        code = xset_code(m, c)
        if xm.image == everything:
            base.add(code)
        if xm.r_c == root:
            strong.setdefault(code, c)
    for code in sorted(strong):
        if code not in base:
            return PropertyVerdict(False, counterexample=code, method="xsets")
    return PropertyVerdict(True, witness=sorted(strong), method="xsets")


def stable_profile(n: XNetwork, ctx: Optional[StableContext] = None, **kw) -> Dict[str, Any]:
    """Everything the X-set deciders say about a stable network, in one pass.

    Returns code sets for displayed, strongly displayed, base and endorsed
    trees, the tree-child and reticulation-visible verdicts of every
    method, and the set of interior tree vertices passing the
    vertex-stable-ancestor criterion.
    """
    ctx = _ctx(n, ctx, **kw)
    m = ctx.multree
    root = m.graph.root
    everything = ctx.all_classes()
    endorsed, displayed, strong, base = set(), set(), set(), set()
    for c in ctx.xsets:
        xm = ctx.maps(c)
        code = xset_code(m, c)
        endorsed.add(code)
        if xm.injective:
            displayed.add(code)
            if xm.image == everything:
                base.add(code)
            if xm.r_c == root:
                strong.add(code)
    g = n.graph
    anchored = {v for v in n.interior if g.is_tree_vertex(v) and prstan_check(n, v, ctx).holds}
    return {
        "endorsed": endorsed,
        "displayed": displayed,
        "strongly_displayed": strong,
        "base": base,
        "tree_child": is_tree_child(n, "all", ctx),
        "reticulation_visible": is_reticulation_visible(n, "all", ctx),
        "anchored_tree_vertices": anchored,
    }
