"""Brute-force reference implementations and random instance generators.

Nothing here uses the un-fold/fold-up machinery or the theorem-based
deciders except :func:`gen_network` with ``ensure_stable`` (which has to
stabilise the draw).  The display and base-tree oracles enumerate
*switchings*: one chosen incoming arc per hybrid vertex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Set, Tuple

from .canonical import label_token
from .core import Arc, MulTree, PseudoDag, XNetwork, validate
from .errors import BudgetExceeded, InvalidInputError

__all__ = [
    "DEFAULT_BUDGET",
    "GenConfig",
    "random_tree_arcs",
    "gen_tree",
    "gen_network",
    "gen_multree",
    "switchings",
    "displayed_tree_codes",
    "base_tree_codes",
    "oracle_displays",
    "oracle_strongly_displays",
    "oracle_base_tree",
    "oracle_tree_based",
    "oracle_visible",
    "oracle_stable_ancestor",
    "brute_subtree_isomorphic",
    "brute_partition",
]

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class GenConfig:
    taxa_count: int
    reticulation_count: int = 0
    seed: int = 0
    ensure_stable: bool = False
    max_attempts: int = 1000

    def __post_init__(self):
        if self.taxa_count < 3:
            raise InvalidInputError("taxa_count must be at least 3")
        if self.reticulation_count < 0:
            raise InvalidInputError("reticulation_count must be non-negative")


def random_tree_arcs(taxa: List[str], rng: random.Random) -> List[Tuple[object, object]]:
    """Arcs of a random rooted binary tree; leaves are named by their taxa.

    Taxa are inserted one by one, either onto a random arc or above the root.
    """
    arcs = [("v0", taxa[0]), ("v0", taxa[1])]
    root = "v0"
    for k, x in enumerate(taxa[2:], start=1):
        w = f"v{k}"
        slot = rng.randrange(len(arcs) + 1)
        if slot == len(arcs):
            arcs += [(w, root), (w, x)]
            root = w
        else:
            t, h = arcs.pop(slot)
            arcs += [(t, w), (w, h), (w, x)]
    return arcs


def gen_tree(taxa_count: int, seed: int = 0) -> XNetwork:
    rng = random.Random(seed)
    taxa = [str(i + 1) for i in range(taxa_count)]
    return XNetwork.from_arcs(random_tree_arcs(taxa, rng))


def _add_reticulation(arcs: List[Tuple[int, int]], rng: random.Random, next_id: int) -> Optional[List[Tuple[int, int]]]:
    out: Dict[int, List[int]] = {}
    for t, h in arcs:
        out.setdefault(t, []).append(h)

    def reaches(a, b):
        stack, seen = [a], {a}
        while stack:
            u = stack.pop()
            if u == b:
                return True
            for w in out.get(u, []):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    i, j = rng.sample(range(len(arcs)), 2)
    (t1, h1), (t2, h2) = arcs[i], arcs[j]
    if reaches(h2, t1):
        return None
    s1, s2 = next_id, next_id + 1
    rest = [a for k, a in enumerate(arcs) if k not in (i, j)]
    return rest + [(t1, s1), (s1, h1), (t2, s2), (s2, h2), (s1, s2)]


def gen_network(cfg: GenConfig) -> XNetwork:
    """A random phylogenetic network (stabilised when ``cfg.ensure_stable``)."""
    rng = random.Random(cfg.seed)
    taxa = [str(i + 1) for i in range(cfg.taxa_count)]
    for _ in range(cfg.max_attempts):
        tree = XNetwork.from_arcs(random_tree_arcs(taxa, rng))
        arcs = [(a.tail, a.head) for a in tree.arcs]
        next_id = tree.graph.next_vertex_id()
        ok = True
        for _ in range(cfg.reticulation_count):
            new = None
            for _ in range(50):
                new = _add_reticulation(arcs, rng, next_id)
                if new is not None:
                    break
            if new is None:
                ok = False
                break
            arcs = new
            next_id += 2
        if not ok:
            continue
        labels = {v: x for x, v in tree.leaf_of.items()}
        net = XNetwork.from_arcs(arcs, labels=labels, check=False)
        if not validate(net, "phylonetwork").ok:
            continue
        if cfg.ensure_stable:
            from .foldup import fold_up
            from .unfold import unfold

            folded, _ = fold_up(unfold(net)[0])
            if not validate(folded, "phylonetwork").ok:
                continue
            net = folded
        return net
    raise BudgetExceeded(f"no valid network after {cfg.max_attempts} attempts")


def gen_multree(cfg: GenConfig) -> MulTree:
    """A random binary MUL-tree: a random tree plus ``reticulation_count`` duplications.

    Each duplication copies a random non-root subtree and grafts the copy onto
    a random arc outside it, so repeated subtrees of every size occur.
    """
    rng = random.Random(cfg.seed)
    taxa = [str(i + 1) for i in range(cfg.taxa_count)]
    tree = XNetwork.from_arcs(random_tree_arcs(taxa, rng))
    out: Dict[int, List[int]] = {v: list(tree.graph.children(v)) for v in tree.graph.vertices}
    label: Dict[int, str] = {v: x for x, v in tree.leaf_of.items()}
    root = tree.root
    nxt = tree.graph.next_vertex_id()
    for _ in range(cfg.reticulation_count):
        parent = {c: v for v, cs in out.items() for c in cs}
        src = rng.choice(sorted(parent))
        inside = set()
        stack = [src]
        while stack:
            u = stack.pop()
            inside.add(u)
            stack.extend(out[u])
        candidates = sorted((p, c) for c, p in parent.items() if c not in inside)
        if rng.random() < 0.2 or not candidates:
            candidates.append((None, root))
        t, h = rng.choice(candidates)
        copy: Dict[int, int] = {}
        for u in sorted(inside):
            copy[u] = nxt
            nxt += 1
        for u in inside:
            out[copy[u]] = [copy[c] for c in out[u]]
            if u in label:
                label[copy[u]] = label[u]
        w = nxt
        nxt += 1
        if t is None:
            out[w] = [root, copy[src]]
            root = w
        else:
            out[t][out[t].index(h)] = w
            out[w] = [h, copy[src]]
    arcs = [(t, h) for t, hs in out.items() for h in hs]
    g = PseudoDag(out.keys(), arcs)
    mu: Dict[str, set] = {}
    for v, x in label.items():
        mu.setdefault(x, set()).add(v)
    return MulTree(g, mu, check=True).compacted()


# --------------------------------------------------------------------------
# switching-based oracles


def switchings(n: XNetwork, budget: int = DEFAULT_BUDGET) -> Iterator[Dict[int, int]]:
    """Yield every choice of one parent per hybrid vertex."""
    g = n.graph
    hybrids = n.hybrids
    total = 1
    for h in hybrids:
        total *= g.indegree(h)
    if total > budget:
        raise BudgetExceeded(f"{total} switchings exceed the budget {budget}", count=total)
    choices = [g.parents(h) for h in hybrids]
    for pick in product(*choices):
        yield dict(zip(hybrids, pick))


def _switching_children(n: XNetwork, sw: Dict[int, int]) -> Dict[int, List[int]]:
    g = n.graph
    kids: Dict[int, List[int]] = {v: [] for v in g.vertices}
    for a in g.arcs:
        if g.indegree(a.head) <= 1 or sw[a.head] == a.tail:
            kids[a.tail].append(a.head)
    return kids


def _restricted_code(n: XNetwork, kids: Dict[int, List[int]], v: int, strong: bool = False) -> Optional[str]:
    """Code of the tree spanned by the taxa below ``v`` in a switching tree."""
    memo: Dict[int, Optional[str]] = {}
    for u in reversed(n.graph.topological_order()):
        if not kids[u]:
            x = n.label_of(u)
            memo[u] = label_token(x) if x is not None else None
            continue
        parts = [memo[c] for c in kids[u] if memo[c] is not None]
        if not parts:
            memo[u] = None
        elif len(parts) == 1:
            memo[u] = parts[0]
        else:
            memo[u] = "(" + ",".join(sorted(parts)) + ")"
    if strong:
        parts = [memo[c] for c in kids[v] if memo[c] is not None]
        if len(parts) < 2:
            return None
    return memo[v]


def displayed_tree_codes(n: XNetwork, strong: bool = False, budget: int = DEFAULT_BUDGET) -> Set[str]:
    """Codes of all trees on X displayed (``strong``: with root at the root of N)."""
    out = set()
    for sw in switchings(n, budget):
        code = _restricted_code(n, _switching_children(n, sw), n.root, strong)
        if code is not None:
            out.add(code)
    return out


def base_tree_codes(n: XNetwork, budget: int = DEFAULT_BUDGET) -> Set[str]:
    """Codes of all base trees: switchings whose tree is a subdivision of a tree on X."""
    out = set()
    for sw in switchings(n, budget):
        kids = _switching_children(n, sw)
        if any(not kids[v] and n.label_of(v) is None for v in n.graph.vertices):
            continue
        if len(kids[n.root]) != 2:
            continue
        out.add(_restricted_code(n, kids, n.root))
    return out


def _code_of(t: XNetwork) -> str:
    from .canonical import tree_code

    return tree_code(t)


def oracle_displays(n: XNetwork, t: XNetwork, budget: int = DEFAULT_BUDGET) -> bool:
    return _code_of(t) in displayed_tree_codes(n, budget=budget)


def oracle_strongly_displays(n: XNetwork, t: XNetwork, budget: int = DEFAULT_BUDGET) -> bool:
    return _code_of(t) in displayed_tree_codes(n, strong=True, budget=budget)


def oracle_base_tree(n: XNetwork, t: XNetwork, budget: int = DEFAULT_BUDGET) -> bool:
    return _code_of(t) in base_tree_codes(n, budget)


def oracle_tree_based(n: XNetwork, budget: int = DEFAULT_BUDGET) -> bool:
    return bool(base_tree_codes(n, budget))


def oracle_stable_ancestor(n: XNetwork, v: int, x: str) -> bool:
    """True iff every root path to leaf ``x`` passes through ``v``."""
    g = n.graph
    target = n.leaf_of[x]
    if v == g.root or v == target:
        return True
    seen = {g.root}
    stack = [g.root]
    while stack:
        u = stack.pop()
        for c in g.children(u):
            if c != v and c not in seen:
                seen.add(c)
                stack.append(c)
    return target not in seen


def oracle_visible(n: XNetwork, v: int) -> bool:
    """True iff ``v`` is a vertex-stable ancestor of some leaf."""
    return any(oracle_stable_ancestor(n, v, x) for x in n.taxa)


# --------------------------------------------------------------------------
# MUL-tree isomorphism by brute force


def brute_subtree_isomorphic(m1: MulTree, v1: int, m2: MulTree, v2: int) -> bool:
    """Recursive isomorphism test trying every matching of children."""
    k1, k2 = m1.graph.children(v1), m2.graph.children(v2)
    if len(k1) != len(k2):
        return False
    if not k1:
        return m1.label_of(v1) == m2.label_of(v2)

    def match(i: int, used: frozenset) -> bool:
        if i == len(k1):
            return True
        for j, c in enumerate(k2):
            if j not in used and brute_subtree_isomorphic(m1, k1[i], m2, c) and match(i + 1, used | {j}):
                return True
        return False

    return match(0, frozenset())


def brute_partition(m: MulTree) -> Set[frozenset]:
    """Partition of V(M) into classes of pairwise isomorphic rooted subtrees."""
    classes: List[List[int]] = []
    for v in m.graph.vertices:
        for cls in classes:
            if brute_subtree_isomorphic(m, cls[0], m, v):
                cls.append(v)
                break
        else:
            classes.append([v])
    return {frozenset(c) for c in classes}
