"""Leaf removal, induced subnetworks, trinets, triplets and MUL-triplets."""

from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .canonical import canon_code, label_token, multree_isomorphic
from .core import MulTree, PseudoDag, XNetwork, _compact, validate
from .errors import InvalidInputError
from .unfold import unfold

__all__ = [
    "remove_leaf",
    "induced_subnetwork",
    "trinets",
    "triplets",
    "triplet_name",
    "restrict_multree",
    "mul_triplets",
    "displays_mul_triplet",
    "usupp_check",
]


class _Editable:
    """Multigraph with parallel arcs kept as repeated list entries."""

    def __init__(self, graph: PseudoDag, label: Dict[int, str]):
        self.out: Dict[int, List[int]] = {v: list(graph.children(v)) for v in graph.vertices}
        self.inn: Dict[int, List[int]] = {v: list(graph.parents(v)) for v in graph.vertices}
        self.label = dict(label)
        self.root = graph.root

    def drop(self, v: int) -> None:
        for c in self.out.pop(v):
            self.inn[c].remove(v)
        for p in self.inn.pop(v):
            self.out[p].remove(v)
        self.label.pop(v, None)

    def tidy(self) -> None:
        """Delete unlabelled sinks, suppress pass-through vertices and contract the root."""
        changed = True
        while changed:
            changed = False
            for v in sorted(self.out):
                if v not in self.out:
                    continue
                outs, ins = self.out[v], self.inn[v]
                if not outs and v not in self.label:
                    if v == self.root:
                        raise InvalidInputError("leaf removal leaves no labelled vertex")
                    self.drop(v)
                    changed = True
                elif len(ins) == 1 and len(outs) == 1:
                    (p,), (c,) = ins, outs
                    self.out[p][self.out[p].index(v)] = c
                    self.inn[c][self.inn[c].index(v)] = p
                    del self.out[v], self.inn[v]
                    changed = True
                elif v == self.root and len(outs) == 1:
                    (c,) = outs
                    self.inn[c].remove(v)
                    del self.out[v], self.inn[v]
                    self.root = c
                    changed = True

    def graph(self) -> Tuple[PseudoDag, Dict[int, int]]:
        ids = sorted(self.out)
        raw = PseudoDag(ids, [(t, h) for t in ids for h in self.out[t]])
        m = _compact(raw)
        return raw.relabelled(m), m


def remove_leaf(n: XNetwork, label: str) -> XNetwork:
    """Remove the leaf ``label`` and clean up until a valid network remains.

    Removes the leaf and its arc, then repeatedly deletes unlabelled
    vertices of outdegree zero, suppresses vertices of indegree and
    outdegree one, and identifies a root of outdegree one with its child.
    The result may have parallel arcs.
    """
    if label not in n.leaf_of:
        raise InvalidInputError(f"unknown taxon {label!r}")
    if len(n.taxa) < 2:
        raise InvalidInputError("cannot remove the only taxon")
    work = _Editable(n.graph, {v: x for x, v in n.leaf_of.items()})
    work.drop(n.leaf_of[label])
    work.tidy()
    g, m = work.graph()
    out = XNetwork(g, {x: m[v] for v, x in work.label.items()})
    report = validate(out, "xnetwork")
    if not report.ok:
        raise InvalidInputError(f"leaf removal produced an invalid network: {report.codes}", report)
    return out


def induced_subnetwork(n: XNetwork, y: Iterable[str]) -> XNetwork:
    """N_Y: remove every leaf outside ``y`` (in sorted order)."""
    y = set(y)
    unknown = y - set(n.taxa)
    if unknown:
        raise InvalidInputError(f"unknown taxa {sorted(unknown)}")
    if len(y) < 3:
        raise InvalidInputError("an induced subnetwork needs at least three taxa")
    out = n
    for x in sorted(set(n.taxa) - y):
        out = remove_leaf(out, x)
    return out


def trinets(n: XNetwork) -> Dict[Tuple[str, str, str], XNetwork]:
    if len(n.taxa) < 3:
        raise InvalidInputError("trinets need at least three taxa")
    return {y: induced_subnetwork(n, y) for y in combinations(sorted(n.taxa), 3)}


def _triplet(a: str, b: str, c: str) -> str:
    pair = sorted((label_token(a), label_token(b)))
    return "(" + ",".join(sorted(["(" + ",".join(pair) + ")", label_token(c)])) + ")"


def triplet_name(code_or_labels) -> str:
    """``"ab|c"`` form of a triplet given as ``(a, b, c)``."""
    a, b, c = code_or_labels
    a, b = sorted((a, b))
    return f"{a}{b}|{c}"


def _resolved_triples(t) -> Set[Tuple[str, str, str]]:
    """Label triples ``(a, b, c)`` with lca(a, b) strictly below lca(a, b, c)."""
    g = t.graph
    leaves: Dict[int, List[int]] = {}
    for v in reversed(g.topological_order()):
        leaves[v] = [v] if g.is_leaf(v) else [u for c in g.children(v) for u in leaves[c]]
    out = set()
    for v in g.vertices:
        kids = g.children(v)
        for i, j in combinations(range(len(kids)), 2):
            for k, other in ((i, j), (j, i)):
                for a, b in combinations(leaves[kids[k]], 2):
                    for c in leaves[kids[other]]:
                        out.add((t.label_of(a), t.label_of(b), t.label_of(c)))
    return out


def triplets(n, budget: Optional[int] = None) -> Set[str]:
    """Codes of all triplets on three distinct taxa displayed by a tree, MUL-tree or network."""
    if isinstance(n, XNetwork) and n.hybrids:
        from .xsets import DEFAULT_SEARCH_BUDGET, display_witness

        out = set()
        for a, b, c in combinations(sorted(n.taxa), 3):
            for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
                t = XNetwork.from_arcs([("r", "s"), ("s", x), ("s", y), ("r", z)], check=False)
                if display_witness(n, t, budget or DEFAULT_SEARCH_BUDGET, partial=True) is not None:
                    out.add(_triplet(x, y, z))
        return out
    return {_triplet(a, b, c) for a, b, c in _resolved_triples(n) if len({a, b, c}) == 3}


def restrict_multree(m: MulTree, y: Iterable[str]) -> MulTree:
    """M_Y: drop every leaf whose label is outside ``y`` and tidy up."""
    y = set(y)
    if not y:
        raise InvalidInputError("restriction needs at least one taxon")
    unknown = y - set(m.taxa)
    if unknown:
        raise InvalidInputError(f"unknown taxa {sorted(unknown)}")
    work = _Editable(m.graph, {v: m.label_of(v) for v in m.graph.leaves})
    for x in sorted(set(m.taxa) - y):
        for v in sorted(m.mu[x]):
            work.drop(v)
    work.tidy()
    g, mp = work.graph()
    mu: Dict[str, set] = {}
    for v, x in work.label.items():
        mu.setdefault(x, set()).add(mp[v])
    return MulTree(g, mu)


def mul_triplets(m: MulTree) -> Set[str]:
    """Codes of every MUL-triplet displayed by ``m`` (one per choice of three leaves)."""
    g = m.graph
    depth: Dict[int, int] = {}
    for v in g.topological_order():
        ps = g.parents(v)
        depth[v] = depth[ps[0]] + 1 if ps else 0
    chains = {}
    for leaf in g.leaves:
        chain = [leaf]
        while g.indegree(chain[-1]):
            chain.append(g.parents(chain[-1])[0])
        chains[leaf] = set(chain)

    def lca_depth(a, b):
        return max(depth[v] for v in chains[a] & chains[b])

    out = set()
    for a, b, c in combinations(sorted(g.leaves), 3):
        ab, ac, bc = lca_depth(a, b), lca_depth(a, c), lca_depth(b, c)
        la, lb, lc = m.label_of(a), m.label_of(b), m.label_of(c)
        if ab > ac:
            out.add(_triplet(la, lb, lc))
        elif ac > ab:
            out.add(_triplet(la, lc, lb))
        else:
            out.add(_triplet(lb, lc, la))
    return out


def displays_mul_triplet(m: MulTree, tau: MulTree) -> bool:
    if len(tau.graph.leaves) != 3:
        raise InvalidInputError("a MUL-triplet has exactly three leaves")
    return canon_code(tau) in mul_triplets(m)


def usupp_check(n: XNetwork, y: Iterable[str]) -> bool:
    """U(N_Y) and U(N)_Y are isomorphic."""
    y = list(y)
    left, _ = unfold(induced_subnetwork(n, y))
    right = restrict_multree(unfold(n)[0], y)
    return multree_isomorphic(left, right)
