"""Hand-transcribed example networks and MUL-trees shipped with the package.

``*.enwk`` files hold extended Newick networks, ``*.nwk`` phylogenetic
trees and ``*.mnwk`` MUL-trees.  See ``figures/TRANSCRIPTION.md``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Union

from .core import MulTree, XNetwork
from .io import parse_enewick, parse_mulnewick

__all__ = ["FIGURE_DIR", "fixture_names", "fixture_path", "load_fixture", "fig1_marked_vertices"]

FIGURE_DIR = Path(__file__).with_name("figures")
_SUFFIXES = (".enwk", ".nwk", ".mnwk")


def fixture_names() -> List[str]:
    return sorted(p.stem for p in FIGURE_DIR.iterdir() if p.suffix in _SUFFIXES)


def fixture_path(name: str) -> Path:
    for suffix in _SUFFIXES:
        p = FIGURE_DIR / (name + suffix)
        if p.exists():
            return p
    raise KeyError(f"no fixture named {name!r}")


def load_fixture(name: str) -> Union[XNetwork, MulTree]:
    p = fixture_path(name)
    text = p.read_text(encoding="utf-8")
    return parse_mulnewick(text) if p.suffix == ".mnwk" else parse_enewick(text)


def fig1_marked_vertices(n: XNetwork) -> Dict[str, int]:
    """The marked tree vertices of the ``fig1`` network.

    ``v`` is the tree vertex that is a parent of both the hybrid above
    leaf 2 and the hybrid above leaf 3; ``u`` is the other parent of the
    hybrid above leaf 3.
    """
    g = n.graph
    (h2,) = g.parents(n.leaf_of["2"])
    (h3,) = g.parents(n.leaf_of["3"])
    (v,) = set(g.parents(h2)) & set(g.parents(h3))
    (u,) = set(g.parents(h3)) - {v}
    return {"v": v, "u": u}
