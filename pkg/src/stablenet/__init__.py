"""Stable phylogenetic networks: un-fold, fold-up and theorem-based deciders.

The submodules are importable on their own; the names below are the ones
most code needs.
"""

__version__ = "0.1.0"

from .canonical import canon_code, equiv_partition, multree_isomorphic, xnetwork_isomorphic
from .core import Arc, MulTree, PseudoDag, XNetwork, validate
from .errors import (BudgetExceeded, InvalidInputError, NotStableError, ParseError, PathCapExceeded,
                     StablenetError)
from .foldup import fold_up, is_sound, is_stable, kappa
from .io import parse_enewick, parse_mulnewick, print_enewick, print_mulnewick
from .properties import (PropertyVerdict, displays_stable, is_base_tree, is_compressed,
                         is_reticulation_visible, is_tree_based_stable, is_tree_child, prstan_check,
                         stable_context, strongly_displays)
from .subnetworks import induced_subnetwork, mul_triplets, remove_leaf, restrict_multree, trinets, triplets
from .unfold import unfold
from .xsets import XSet, display_witness, endorsing_xsets, enumerate_xsets, restrict_to_xset

__all__ = [
    "__version__",
    "Arc", "PseudoDag", "XNetwork", "MulTree", "validate",
    "StablenetError", "InvalidInputError", "ParseError", "BudgetExceeded", "PathCapExceeded", "NotStableError",
    "canon_code", "equiv_partition", "multree_isomorphic", "xnetwork_isomorphic",
    "unfold", "fold_up", "is_sound", "is_stable", "kappa",
    "XSet", "enumerate_xsets", "restrict_to_xset", "endorsing_xsets", "display_witness",
    "PropertyVerdict", "stable_context", "is_compressed", "displays_stable", "strongly_displays",
    "is_base_tree", "is_tree_based_stable", "is_tree_child", "is_reticulation_visible", "prstan_check",
    "remove_leaf", "induced_subnetwork", "trinets", "triplets", "restrict_multree", "mul_triplets",
    "parse_enewick", "print_enewick", "parse_mulnewick", "print_mulnewick",
]
