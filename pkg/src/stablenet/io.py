"""Extended Newick, MUL-Newick, JSON and DOT serialisation.

Extended Newick marks a hybrid vertex with a ``#Hk`` tag: the vertex is
written once with its subtree and every further occurrence is the bare tag.
The number of occurrences gives the indegree, so parallel arcs are written
as two tags under the same parent.  Branch lengths, supports and comments
in square brackets are accepted and discarded.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from .canonical import canon_codes, label_token
from .core import MulTree, PseudoDag, XNetwork, validate
from .errors import InvalidInputError, ParseError

__all__ = [
    "ENewickDoc",
    "parse_enewick",
    "print_enewick",
    "parse_mulnewick",
    "print_mulnewick",
    "network_to_json",
    "network_from_json",
    "multree_to_json",
    "multree_from_json",
    "to_dot",
    "load",
    "loads",
    "dumps",
]

JSON_VERSION = 1
_HYBRID = re.compile(r"^#H(\w+)$")


@dataclass(frozen=True)
class ENewickDoc:
    """Extended Newick text plus the degree check applied when parsing."""

    text: str
    strict: bool = True

    def parse(self) -> XNetwork:
        return parse_enewick(self.text, strict=self.strict)


# --------------------------------------------------------------------------
# tokenizer and tree parser shared by both Newick dialects


@dataclass
class _Node:
    label: Optional[str]
    children: List["_Node"]
    line: int
    column: int


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self.advance()
            elif ch == "[":
                line, col = self.line, self.col
                while self.pos < len(self.text) and self.text[self.pos] != "]":
                    self.advance()
                if self.pos >= len(self.text):
                    raise ParseError("unterminated comment", line, col)
                self.advance()
            else:
                break

    def label(self) -> Optional[str]:
        """A bare or single-quoted label, or None if none is present."""
        self.skip()
        if self.pos >= len(self.text):
            return None
        if self.text[self.pos] == "'":
            line, col = self.line, self.col
            self.advance()
            out = []
            while True:
                if self.pos >= len(self.text):
                    raise ParseError("unterminated quoted label", line, col)
                ch = self.advance()
                if ch == "'":
                    if self.pos < len(self.text) and self.text[self.pos] == "'":
                        out.append(self.advance())
                        continue
                    break
                out.append(ch)
            return "".join(out)
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in "(),:;[]' \t\r\n":
            self.advance()
        return self.text[start:self.pos] if self.pos > start else None

    def branch_info(self) -> None:
        """Skip ``:length``, ``:length:support:probability`` and the like."""
        while self.peek() == ":":
            self.advance()
            self.skip()
            while self.pos < len(self.text) and self.text[self.pos] not in "(),:;[] \t\r\n":
                self.advance()


def _parse_tree(text: str) -> _Node:
    r = _Reader(text)
    if not r.peek():
        raise r.error("empty input")
    root = _parse_node(r, 0)
    if r.peek() != ";":
        raise r.error("expected ';'" if r.peek() else "missing ';' at end of input")
    r.advance()
    if r.peek():
        raise r.error("unexpected text after ';'")
    return root


def _parse_node(r: _Reader, depth: int) -> _Node:
    if depth > 10000:
        raise r.error("nesting too deep")
    r.skip()
    line, col = r.line, r.col
    children: List[_Node] = []
    if r.peek() == "(":
        r.advance()
        while True:
            children.append(_parse_node(r, depth + 1))
            ch = r.peek()
            if ch == ",":
                r.advance()
            elif ch == ")":
                r.advance()
                break
            else:
                raise r.error("expected ',' or ')'" if ch else "unexpected end of input")
    label = r.label()
    r.branch_info()
    if not children and label is None:
        raise ParseError("missing leaf label", line, col)
    return _Node(label, children, line, col)


# --------------------------------------------------------------------------
# extended Newick


def _split_hybrid(label: Optional[str]) -> Tuple[Optional[str], Optional[str]]:
    """``"a#H1"`` -> ``("a", "H1")``; other labels have no tag."""
    if label is None or "#" not in label:
        return label, None
    name, _, tag = label.rpartition("#")
    if not re.fullmatch(r"[A-Za-z]*\w+", tag):
        return label, None
    return (name or None), tag


def parse_enewick(text: str, strict: bool = True) -> XNetwork:
    """Parse extended Newick into an :class:`XNetwork`.

    Interior labels other than hybrid tags are ignored.  With ``strict``
    the result must satisfy the X-network degree axioms; otherwise only the
    rooted-DAG axioms and the leaf labelling are checked.
    """
    root = _parse_tree(text)
    ids: Dict[int, int] = {}
    hybrid_id: Dict[str, int] = {}
    hybrid_body: Dict[str, _Node] = {}
    arcs: List[Tuple[int, int]] = []
    leaf_of: Dict[str, int] = {}
    counter = [0]

    def new_id() -> int:
        counter[0] += 1
        return counter[0] - 1

    def visit(node: _Node) -> int:
        name, tag = _split_hybrid(node.label)
        if tag is not None:
            if tag not in hybrid_id:
                hybrid_id[tag] = new_id()
            v = hybrid_id[tag]
            if node.children or (name is not None and tag not in hybrid_body):
                if tag in hybrid_body:
                    raise ParseError(f"hybrid #{tag} is defined twice", node.line, node.column)
                hybrid_body[tag] = node
                _attach(v, node, name)
            return v
        v = new_id()
        _attach(v, node, name)
        return v

    def _attach(v: int, node: _Node, name: Optional[str]) -> None:
        if not node.children:
            if name is None:
                raise ParseError("missing leaf label", node.line, node.column)
            if name in leaf_of:
                raise ParseError(f"taxon {name!r} occurs twice", node.line, node.column)
            leaf_of[name] = v
            return
        for child in node.children:
            arcs.append((v, visit(child)))

    visit(root)
    for tag in hybrid_id:
        if tag not in hybrid_body:
            raise InvalidInputError(f"hybrid #{tag} never has a body or a label")
    g = PseudoDag(range(counter[0]), arcs)
    net = XNetwork(g, leaf_of)
    report = validate(net, "xnetwork" if strict else "pseudodag")
    if not report.ok:
        raise InvalidInputError("; ".join(f"{v.code}: {v.message} (vertices {list(v.vertices)})"
                                          for v in report.violations), report)
    return net.compacted()


def print_enewick(n: XNetwork) -> str:
    """Extended Newick for ``n`` with children in canonical order.

    Children are sorted by the code of the tree obtained by unfolding the
    network below them, so isomorphic inputs print the same text up to
    the numbering of hybrid tags.
    """
    g = n.graph
    codes = canon_codes(n)
    tags: Dict[int, str] = {}
    written = set()

    def ordered(v: int) -> List[int]:
        return sorted(g.children(v), key=lambda c: (codes[c], g.indegree(c)))

    def write(v: int) -> str:
        if g.indegree(v) >= 2:
            if v not in tags:
                tags[v] = f"#H{len(tags) + 1}"
            if v in written:
                return tags[v]
            written.add(v)
            suffix = tags[v]
        else:
            suffix = ""
        kids = ordered(v)
        if not kids:
            label = n.label_of(v)
            return (label_token(label) if label is not None else "") + suffix
        return "(" + ",".join(write(c) for c in kids) + ")" + suffix

    return write(g.root) + ";"


# --------------------------------------------------------------------------
# MUL-Newick


def parse_mulnewick(text: str) -> MulTree:
    """Parse Newick with repeated leaf labels into a :class:`MulTree`."""
    root = _parse_tree(text)
    arcs: List[Tuple[int, int]] = []
    mu: Dict[str, set] = {}
    stack = [(root, 0)]
    nxt = 1
    while stack:
        node, v = stack.pop()
        if not node.children:
            mu.setdefault(node.label, set()).add(v)
            continue
        for child in node.children:
            if child.label is not None and child.label.startswith("#") and not child.children:
                raise ParseError("hybrid tags are not allowed in a MUL-tree", child.line, child.column)
            arcs.append((v, nxt))
            stack.append((child, nxt))
            nxt += 1
    m = MulTree(PseudoDag(range(nxt), arcs), mu)
    report = validate(m, "multree")
    if not report.ok:
        raise InvalidInputError("; ".join(f"{v.code}: {v.message}" for v in report.violations), report)
    return m.compacted()


def print_mulnewick(m: MulTree) -> str:
    """Newick for ``m``; this is its canonical code followed by ``;``."""
    return canon_codes(m)[m.graph.root] + ";"


# --------------------------------------------------------------------------
# JSON


def network_to_json(n: XNetwork) -> Dict[str, Any]:
    return {
        "type": "xnetwork",
        "version": JSON_VERSION,
        "vertices": list(n.graph.vertices),
        "arcs": [[a.tail, a.head] for a in n.graph.arcs],
        "leaves": dict(n.leaf_of),
    }


def network_from_json(data: Dict[str, Any], strict: bool = True) -> XNetwork:
    try:
        g = PseudoDag(data["vertices"], [tuple(a) for a in data["arcs"]])
        net = XNetwork(g, data["leaves"])
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed network JSON: {exc}") from exc
    validate(net, "xnetwork" if strict else "pseudodag").raise_if_invalid()
    return net


def multree_to_json(m: MulTree) -> Dict[str, Any]:
    return {
        "type": "multree",
        "version": JSON_VERSION,
        "vertices": list(m.graph.vertices),
        "arcs": [[a.tail, a.head] for a in m.graph.arcs],
        "mu": {x: sorted(ls) for x, ls in m.mu.items()},
    }


def multree_from_json(data: Dict[str, Any]) -> MulTree:
    try:
        g = PseudoDag(data["vertices"], [tuple(a) for a in data["arcs"]])
        m = MulTree(g, data["mu"])
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed MUL-tree JSON: {exc}") from exc
    validate(m, "multree").raise_if_invalid()
    return m


# --------------------------------------------------------------------------
# DOT


def to_dot(obj: Union[XNetwork, MulTree], highlight: Iterable[Tuple[int, int]] = (),
           dotted: Iterable[Tuple[int, int]] = (), name: str = "G") -> str:
    """Graphviz source.

    Interior tree vertices are filled black dots and hybrid vertices empty
    dots.  Arcs in ``highlight`` are drawn dashed and red, arcs in
    ``dotted`` dotted and blue.
    """
    g = obj.graph
    hi = {tuple(a) for a in highlight}
    lo = {tuple(a) for a in dotted}
    lines = [f"digraph {name} {{", "  node [shape=point, width=0.12];"]
    for v in g.vertices:
        label = obj.label_of(v)
        if label is not None:
            lines.append(f'  {v} [shape=plaintext, label={json.dumps(label)}];')
        elif g.indegree(v) >= 2:
            lines.append(f"  {v} [shape=circle, style=solid, fillcolor=white, width=0.15, label=\"\"];")
        else:
            lines.append(f"  {v} [style=filled, fillcolor=black];")
    for a in g.arcs:
        key = (a.tail, a.head)
        attrs = ""
        if key in hi:
            attrs = " [style=dashed, color=red]"
        elif key in lo:
            attrs = " [style=dotted, color=blue]"
        lines.append(f"  {a.tail} -> {a.head}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# format dispatch


def loads(text: str, kind: str = "network", strict: bool = True) -> Union[XNetwork, MulTree]:
    """Read a network (``kind="network"``) or MUL-tree from Newick or JSON text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
        declared = data.get("type") if isinstance(data, dict) else None
        if declared == "multree" or (declared is None and kind == "multree"):
            return multree_from_json(data)
        return network_from_json(data, strict=strict)
    if kind == "multree":
        return parse_mulnewick(text)
    return parse_enewick(text, strict=strict)


def load(path: str, kind: str = "network", strict: bool = True) -> Union[XNetwork, MulTree]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), kind, strict)


def dumps(obj: Union[XNetwork, MulTree], fmt: str = "enewick") -> str:
    """Serialise as ``enewick`` (MUL-Newick for MUL-trees), ``json`` or ``dot``."""
    if fmt == "json":
        data = multree_to_json(obj) if isinstance(obj, MulTree) else network_to_json(obj)
        return json.dumps(data, indent=2, sort_keys=True)
    if fmt == "dot":
        return to_dot(obj)
    if fmt in ("enewick", "newick"):
        return print_mulnewick(obj) if isinstance(obj, MulTree) else print_enewick(obj)
    raise ValueError(f"unknown format {fmt!r}")
