"""Command-line front end: ``stablenet <command> [options] FILE ...``.

Exit codes: 0 the property holds or the operation succeeded, 1 the property
fails, 2 input error, 3 a budget or cap was exceeded, 4 the decider and the
brute-force oracle disagree (``--both``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from . import __version__
from .canonical import equiv_partition, find_xnetwork_isomorphism, multree_isomorphic
from .core import MulTree, XNetwork, validate
from .errors import BudgetExceeded, InvalidInputError, NotStableError, StablenetError
from .foldup import fold_up, is_sound, is_sound_structural, is_stable
from .io import dumps, loads, network_to_json, multree_to_json, print_enewick, print_mulnewick, to_dot
from .oracles import DEFAULT_BUDGET, oracle_base_tree, oracle_tree_based, oracle_visible
from .properties import (PropertyVerdict, StableContext, is_base_tree, is_reticulation_visible,
                         is_tree_based_stable, is_tree_child, stable_context, displays_stable, is_compressed)
from .subnetworks import induced_subnetwork, mul_triplets, restrict_multree, trinets, triplets
from .unfold import unfold
from .xsets import DisplayWitness, XSet, count_xsets, iter_display_witnesses

EXIT_HOLDS, EXIT_FAILS, EXIT_INPUT, EXIT_BUDGET, EXIT_DISAGREE = 0, 1, 2, 3, 4
SCHEMA_NAME = "stablenet-report"
SCHEMA_VERSION = 1


class Disagreement(StablenetError):
    pass


@dataclass
class Outcome:
    """What a command produced: a verdict (``holds``) and/or an object to print."""

    holds: Optional[bool] = None
    lines: List[str] = field(default_factory=list)
    result: Dict[str, Any] = field(default_factory=dict)
    obj: Union[XNetwork, MulTree, None] = None
    dot: Optional[str] = None


# --------------------------------------------------------------------------
# input helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc


class Inputs:
    def __init__(self):
        self.seen: List[Dict[str, str]] = []

    def text(self, path: str) -> str:
        text = _read(path)
        self.seen.append({"path": path, "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()})
        return text

    def network(self, path: str, strict: bool = True) -> XNetwork:
        obj = loads(self.text(path), "network", strict)
        if not isinstance(obj, XNetwork):
            raise InvalidInputError(f"{path}: expected a network, found a MUL-tree")
        return obj

    def multree(self, path: str) -> MulTree:
        obj = loads(self.text(path), "multree")
        if not isinstance(obj, MulTree):
            raise InvalidInputError(f"{path}: expected a MUL-tree")
        return obj

    def tree(self, path: str) -> XNetwork:
        t = self.network(path)
        if not t.is_tree:
            raise InvalidInputError(f"{path}: expected a phylogenetic tree")
        return t

    def any(self, path: str) -> Union[XNetwork, MulTree]:
        """A network if the text parses as one, otherwise a MUL-tree."""
        text = self.text(path)
        try:
            return loads(text, "network")
        except InvalidInputError as first:
            try:
                return loads(text, "multree")
            except InvalidInputError:
                raise first


def _jsonable(obj: Any, m: Optional[MulTree] = None) -> Any:
    if isinstance(obj, XSet):
        return {"xset": obj.as_json(m)}
    if isinstance(obj, PropertyVerdict):
        return {
            "holds": obj.holds,
            "method": obj.method,
            "witness": _jsonable(obj.witness, m),
            "counterexample": _jsonable(obj.counterexample, m),
            "details": _jsonable(obj.details, m),
        }
    if isinstance(obj, DisplayWitness):
        return {"vertex_map": {str(k): v for k, v in sorted(obj.vertex_map.items())},
                "arcs": sorted([a.tail, a.head] for a in obj.subgraph)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, m) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        items = [_jsonable(v, m) for v in obj]
        try:
            return sorted(items)
        except TypeError:
            return items
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, m) for v in obj]
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def _ctx(args, n: XNetwork) -> Optional[StableContext]:
    """Stable context, or None when the network is not stable."""
    try:
        return stable_context(n, cap=args.path_cap, limit=args.limit_xsets)
    except NotStableError:
        return None


def _pair(args, name: str, decider: Optional[Callable[[], PropertyVerdict]],
          oracle: Callable[[], bool], m: Optional[MulTree] = None, out: Optional[Outcome] = None) -> Outcome:
    """Run the decider and/or the oracle as requested by --oracle / --both."""
    out = out or Outcome()
    use_decider = decider is not None and not args.oracle
    use_oracle = args.oracle or args.both or decider is None
    verdict = decider() if use_decider else None
    oracle_holds = oracle() if use_oracle else None
    if verdict is not None:
        out.holds = verdict.holds
        out.result["decider"] = _jsonable(verdict, m)
        out.lines.append(f"{name}\t{str(verdict.holds).lower()}\tmethod={verdict.method}")
        if verdict.holds and verdict.witness is not None:
            out.lines.append(f"witness\t{_describe(verdict.witness, m)}")
        if not verdict.holds and verdict.counterexample not in (None, [], ()):
            out.lines.append(f"counterexample\t{_describe(verdict.counterexample, m)}")
    if oracle_holds is not None:
        out.result["oracle"] = {"holds": oracle_holds}
        out.lines.append(f"oracle\t{str(oracle_holds).lower()}")
        if out.holds is None:
            out.holds = oracle_holds
    if decider is None and not args.oracle:
        out.lines.append("note\tnetwork is not stable; used the brute-force oracle")
        out.result["note"] = "network is not stable; used the brute-force oracle"
    if verdict is not None and oracle_holds is not None:
        agree = verdict.holds == oracle_holds
        out.result["agree"] = agree
        out.lines.append(f"agree\t{str(agree).lower()}")
        if not agree:
            raise Disagreement(f"{name}: decider says {verdict.holds}, oracle says {oracle_holds}")
    out.result.setdefault("holds", out.holds)
    out.result["holds"] = out.holds
    return out


def _describe(obj: Any, m: Optional[MulTree]) -> str:
    return json.dumps(_jsonable(obj, m), sort_keys=True)


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, inp: Inputs) -> Outcome:
    text = inp.text(args.file)
    kind = args.kind
    obj = loads(text, "multree" if kind == "multree" else "network", strict=False)
    report = validate(obj, kind)
    out = Outcome(holds=report.ok)
    out.lines.append(f"valid\t{str(report.ok).lower()}\tkind={kind}")
    for v in report.violations:
        out.lines.append(f"violation\t{v.code}\t{v.message}\tvertices={list(v.vertices)}")
    out.result = {"holds": report.ok, "kind": kind,
                  "violations": [{"code": v.code, "message": v.message, "vertices": list(v.vertices)}
                                 for v in report.violations]}
    return out


def cmd_unfold(args, inp: Inputs) -> Outcome:
    n = inp.network(args.file)
    m, _ = unfold(n, args.path_cap)
    return Outcome(obj=m, result={"leaves": len(m.graph.leaves)})


def cmd_foldup(args, inp: Inputs) -> Outcome:
    m = inp.multree(args.file)
    rng = random.Random(args.seed) if args.seed is not None else None
    net, trace = fold_up(m, rng)
    return Outcome(obj=net, result={"steps": len(trace.steps), "phylogenetic": net.is_phylogenetic})


def cmd_is_stable(args, inp: Inputs) -> Outcome:
    n = inp.network(args.file)
    holds = is_stable(n, args.path_cap)
    out = Outcome(holds=holds, result={"holds": holds})
    out.lines.append(f"stable\t{str(holds).lower()}")
    if not holds:
        folded, _ = fold_up(unfold(n, args.path_cap)[0])
        out.lines.append(f"foldup_of_unfold\t{print_enewick(folded)}")
        out.result["foldup_of_unfold"] = print_enewick(folded)
    return out


def cmd_is_sound(args, inp: Inputs) -> Outcome:
    m = inp.multree(args.file)

    def decider():
        return PropertyVerdict(is_sound_structural(m), method="no-isomorphic-siblings")

    return _pair(args, "sound", decider, lambda: is_sound(m))


def cmd_displays(args, inp: Inputs) -> Outcome:
    n = inp.network(args.network)
    t = inp.tree(args.tree)
    ctx = None if args.oracle else _ctx(args, n)
    decider = (lambda: displays_stable(n, t, ctx)) if ctx is not None else None
    witnesses: List[DisplayWitness] = []

    def oracle():
        witnesses.extend(iter_display_witnesses(n, t, DEFAULT_BUDGET))
        return bool(witnesses)

    out = _pair(args, "displays", decider, oracle, ctx.multree if ctx else None)
    if args.oracle or args.both or ctx is None:
        out.result["witness_count"] = len(witnesses)
        out.lines.append(f"witness_count\t{len(witnesses)}")
        if witnesses:
            out.result["witnesses"] = [_jsonable(w) for w in witnesses]
            out.dot = to_dot(n, highlight=[(a.tail, a.head) for a in witnesses[0].subgraph])
    if out.dot is None:
        out.dot = to_dot(n)
    return out


def cmd_is_base_tree(args, inp: Inputs) -> Outcome:
    n = inp.network(args.network)
    t = inp.tree(args.tree)
    ctx = None if args.oracle else _ctx(args, n)
    decider = (lambda: is_base_tree(n, t, ctx)) if ctx is not None else None
    return _pair(args, "base_tree", decider, lambda: oracle_base_tree(n, t), ctx.multree if ctx else None)


def cmd_is_tree_based(args, inp: Inputs) -> Outcome:
    n = inp.network(args.file)
    ctx = None if args.oracle else _ctx(args, n)
    decider = (lambda: is_tree_based_stable(n, ctx)) if ctx is not None else None
    return _pair(args, "tree_based", decider, lambda: oracle_tree_based(n), ctx.multree if ctx else None)


def _xset_criterion(out: Outcome, verdict: PropertyVerdict, m: MulTree) -> None:
    """Report the X-set characterisation next to the answer; it is not used to decide."""
    out.result["xset_criterion"] = _jsonable(verdict, m)
    out.lines.append(f"xset_criterion\t{str(verdict.holds).lower()}\tmethod={verdict.method}")


def cmd_is_tree_child(args, inp: Inputs) -> Outcome:
    n = inp.network(args.file)
    decider = None if args.oracle else (lambda: is_tree_child(n, "b"))
    structural = is_tree_child(n, "a")
    out = _pair(args, "tree_child", decider, lambda: structural.holds)
    if not structural.holds:
        out.result["counterexample_vertex"] = structural.counterexample
        out.lines.append(f"counterexample_vertex\t{structural.counterexample}")
    ctx = None if args.oracle else _ctx(args, n)
    if ctx is not None:
        _xset_criterion(out, is_tree_child(n, "c", ctx), ctx.multree)
    return out


def cmd_is_reticulation_visible(args, inp: Inputs) -> Outcome:
    n = inp.network(args.file)
    decider = None if args.oracle else (lambda: is_reticulation_visible(n, "a"))
    invisible = [h for h in n.hybrids if not oracle_visible(n, h)]
    out = _pair(args, "reticulation_visible", decider, lambda: not invisible)
    if invisible:
        out.result["invisible_hybrids"] = invisible
        out.lines.append(f"invisible_hybrids\t{','.join(map(str, invisible))}")
    ctx = None if args.oracle else _ctx(args, n)
    if ctx is not None:
        _xset_criterion(out, is_reticulation_visible(n, "b", ctx), ctx.multree)
    return out


def cmd_trinets(args, inp: Inputs) -> Outcome:
    n = inp.network(args.file)
    nets = trinets(n)
    out = Outcome()
    out.result["trinets"] = {",".join(y): print_enewick(t) for y, t in nets.items()}
    out.lines = [f"{','.join(y)}\t{print_enewick(t)}" for y, t in nets.items()]
    return out


def cmd_triplets(args, inp: Inputs) -> Outcome:
    obj = inp.any(args.file)
    codes = sorted(triplets(obj))
    out = Outcome(result={"triplets": codes, "count": len(codes)})
    out.lines = codes
    return out


def cmd_mul_triplets(args, inp: Inputs) -> Outcome:
    m = inp.multree(args.file)
    codes = sorted(mul_triplets(m))
    out = Outcome(result={"mul_triplets": codes, "count": len(codes)})
    out.lines = codes
    return out


def cmd_restrict(args, inp: Inputs) -> Outcome:
    obj = inp.any(args.file)
    y = [x for x in args.taxa.split(",") if x]
    if isinstance(obj, MulTree):
        return Outcome(obj=restrict_multree(obj, y))
    return Outcome(obj=induced_subnetwork(obj, y))


def cmd_compare(args, inp: Inputs) -> Outcome:
    a, b = inp.any(args.first), inp.any(args.second)
    if isinstance(a, MulTree) != isinstance(b, MulTree):
        raise InvalidInputError("cannot compare a network with a MUL-tree")
    if isinstance(a, MulTree):
        holds = multree_isomorphic(a, b)
        mapping = None
    else:
        mapping = find_xnetwork_isomorphism(a, b)
        holds = mapping is not None
    out = Outcome(holds=holds, result={"holds": holds})
    out.lines.append(f"isomorphic\t{str(holds).lower()}")
    if mapping is not None:
        out.result["mapping"] = {str(k): v for k, v in sorted(mapping.items())}
    return out


def cmd_report(args, inp: Inputs) -> Outcome:
    from .plotting import save_class_sizes_png, save_network_png

    n = inp.network(args.file)
    trees = [(p, inp.tree(p)) for p in args.tree or []]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    m, _ = unfold(n, args.path_cap)
    ctx = _ctx(args, n)
    rows: List[tuple] = []
    rows.append(("stable", ctx is not None, "fold-up of un-fold"))
    rows.append(("compressed", is_compressed(n).holds, "scan"))
    tc = is_tree_child(n, "all", ctx) if ctx else is_tree_child(n, "a")
    rv = is_reticulation_visible(n, "all", ctx) if ctx else is_reticulation_visible(n, "a")
    rows.append(("tree_child", tc.holds, tc.method))
    rows.append(("reticulation_visible", rv.holds, rv.method))
    if ctx is not None:
        rows.append(("tree_based", is_tree_based_stable(n, ctx).holds, "xi-bijective"))
    else:
        rows.append(("tree_based", oracle_tree_based(n), "oracle"))
    for path, t in trees:
        if ctx is not None:
            rows.append((f"displays:{path}", displays_stable(n, t, ctx).holds, "xi-injective"))
            rows.append((f"base_tree:{path}", is_base_tree(n, t, ctx).holds, "xi-bijective"))
        else:
            found = next(iter_display_witnesses(n, t, DEFAULT_BUDGET), None) is not None
            rows.append((f"displays:{path}", found, "oracle"))
            rows.append((f"base_tree:{path}", oracle_base_tree(n, t), "oracle"))
    files = {}
    files["network_png"] = str(save_network_png(n, outdir / "network.png", "network"))
    files["unfold_png"] = str(save_network_png(m, outdir / "unfold.png", "un-fold"))
    if ctx is None:
        folded, _ = fold_up(m)
        files["foldup_png"] = str(save_network_png(folded, outdir / "foldup.png", "fold-up of un-fold"))

    part = ctx.partition if ctx else equiv_partition(m)
    files["class_sizes_png"] = str(save_class_sizes_png(part, outdir / "class_sizes.png"))
    verdicts_tsv = outdir / "verdicts.tsv"
    verdicts_tsv.write_text("property\tholds\tmethod\n" +
                            "".join(f"{p}\t{str(h).lower()}\t{meth}\n" for p, h, meth in rows), encoding="utf-8")
    classes_tsv = outdir / "classes.tsv"
    classes_tsv.write_text("class\tsize\tcode\n" + "".join(
        f"{i}\t{len(c)}\t{part.codes[i]}\n" for i, c in enumerate(part.classes)), encoding="utf-8")
    files["verdicts_tsv"] = str(verdicts_tsv)
    files["classes_tsv"] = str(classes_tsv)
    result = {
        "network": print_enewick(n),
        "unfold": print_mulnewick(m),
        "classes": len(part.classes),
        "xsets": count_xsets(m),
        "verdicts": [{"property": p, "holds": h, "method": meth} for p, h, meth in rows],
        "files": files,
    }
    (outdir / "report.json").write_text(json.dumps(result, indent=2, sort_keys=True), encoding="utf-8")
    out = Outcome(result=result)
    out.lines = [f"{p}\t{str(h).lower()}\t{meth}" for p, h, meth in rows]
    out.lines += [f"file\t{v}" for v in files.values()]
    return out


COMMANDS = {
    "validate": (cmd_validate, "check a network or MUL-tree against the axioms of a kind"),
    "unfold": (cmd_unfold, "print the un-fold U(N) of a network"),
    "foldup": (cmd_foldup, "print the fold-up F(M) of a MUL-tree"),
    "is-stable": (cmd_is_stable, "is N isomorphic to F(U(N))?"),
    "is-sound": (cmd_is_sound, "is the fold-up of a MUL-tree free of parallel arcs?"),
    "displays": (cmd_displays, "does a network display a phylogenetic tree?"),
    "is-base-tree": (cmd_is_base_tree, "is a phylogenetic tree a base tree of a network?"),
    "is-tree-based": (cmd_is_tree_based, "does a network have a base tree?"),
    "is-tree-child": (cmd_is_tree_child, "is every interior vertex the parent of a tree vertex?"),
    "is-reticulation-visible": (cmd_is_reticulation_visible, "is every hybrid a vertex-stable ancestor of a leaf?"),
    "trinets": (cmd_trinets, "list the induced networks on all 3-subsets"),
    "triplets": (cmd_triplets, "list the triplets displayed by a tree, network or MUL-tree"),
    "mul-triplets": (cmd_mul_triplets, "list the MUL-triplets displayed by a MUL-tree"),
    "restrict": (cmd_restrict, "restrict a network or MUL-tree to a subset of taxa"),
    "compare": (cmd_compare, "test two networks or two MUL-trees for isomorphism"),
    "report": (cmd_report, "analyse a network and write TSV, JSON and PNG files"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["enewick", "json", "dot"], default="enewick",
                        help="output format (default: enewick / plain text)")
    common.add_argument("--oracle", action="store_true", help="use only the brute-force oracle")
    common.add_argument("--both", action="store_true", help="run decider and oracle and compare them")
    common.add_argument("--path-cap", type=int, default=None, metavar="N",
                        help="maximum number of root paths when unfolding")
    common.add_argument("--seed", type=int, default=None, metavar="S", help="seed for randomised choices")
    common.add_argument("--limit-xsets", type=int, default=None, metavar="K",
                        help="give up when the un-fold has more than K X-sets")
    parser = argparse.ArgumentParser(prog="stablenet", description="Stable phylogenetic networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name in ("displays", "is-base-tree"):
            p.add_argument("network")
            p.add_argument("tree")
        elif name == "compare":
            p.add_argument("first")
            p.add_argument("second")
        else:
            p.add_argument("file")
        if name == "validate":
            p.add_argument("--kind", default="xnetwork",
                           choices=["pseudodag", "xnetwork", "phylonetwork", "binary", "phylotree", "multree"])
        if name == "restrict":
            p.add_argument("taxa", help="comma-separated taxa to keep")
        if name == "report":
            p.add_argument("--out", default="stablenet-report", help="output directory")
            p.add_argument("--tree", action="append", help="tree file to test for display (repeatable)")
    return parser


def _emit(args, out: Outcome, inp: Inputs, started: float, error: Optional[str] = None,
          code: int = 0) -> None:
    if args.format == "json":
        result = dict(out.result)
        if out.obj is not None:
            result["object"] = multree_to_json(out.obj) if isinstance(out.obj, MulTree) else network_to_json(out.obj)
            result["newick"] = dumps(out.obj)
        report = {
            "schema": SCHEMA_NAME,
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "exit_code": code,
            "inputs": inp.seen,
            "result": _jsonable(result),
            "error": error,
            "timings": {"seconds": round(time.perf_counter() - started, 6)},
        }
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    if error is not None:
        return
    if args.format == "dot":
        if out.obj is not None:
            print(dumps(out.obj, "dot"), end="")
            return
        if out.dot is not None:
            print(out.dot, end="")
            return
    if out.obj is not None:
        print(dumps(out.obj))
    for line in out.lines:
        print(line)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    if args.oracle and args.both:
        parser.print_usage(sys.stderr)
        print("stablenet: error: --oracle and --both are mutually exclusive", file=sys.stderr)
        return EXIT_INPUT
    handler = COMMANDS[args.command][0]
    inp = Inputs()
    started = time.perf_counter()
    out = Outcome()
    try:
        out = handler(args, inp)
    except Disagreement as exc:
        print(f"stablenet: DISAGREEMENT: {exc}", file=sys.stderr)
        _emit(args, out, inp, started, str(exc), EXIT_DISAGREE)
        return EXIT_DISAGREE
    except BudgetExceeded as exc:
        print(f"stablenet: budget exceeded: {exc}", file=sys.stderr)
        _emit(args, out, inp, started, str(exc), EXIT_BUDGET)
        return EXIT_BUDGET
    except (InvalidInputError, NotStableError) as exc:
        print(f"stablenet: input error: {exc}", file=sys.stderr)
        _emit(args, out, inp, started, str(exc), EXIT_INPUT)
        return EXIT_INPUT
    code = EXIT_HOLDS if out.holds in (None, True) else EXIT_FAILS
    _emit(args, out, inp, started, None, code)
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
