"""Command-line interface.

Exit codes: 0 found or verified, 1 exhaustive negative answer, 2 usage or
input error, 3 search budget or time limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import designs, free_product as fp, gadgets, sequencing, zero_sum
from .errors import (
    ArtifactError,
    Budget,
    BudgetExceeded,
    DEFAULT_BUDGET,
    NoProjection,
    NotAGroup,
    NotFound,
)
from .group_core import (
    DEFAULT_MAX_ORDER,
    Group,
    default_tau,
    describe,
    hall_paige_product,
    hall_paige_sylow,
    make_family,
    read_cayley_file,
)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _ids(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    text = text.strip()
    return [int(t) for t in text.replace(",", " ").split()] if text else []


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tau", type=int, default=d(None), help="genericity threshold (default n//16)")
    p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="search node budget")
    p.add_argument("--seed", type=int, default=d(0), help="random seed")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--time-limit", type=float, default=d(None), help="wall-clock limit in seconds")


def _add_group(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--group", help="family descriptor, e.g. sym:4 or product(cyclic:4,elem2:2)")
    g.add_argument("--cayley", help="Cayley table file")


def _load_group(args) -> Group:
    if getattr(args, "cayley", None):
        return read_cayley_file(args.cayley)
    return make_family(args.group, DEFAULT_MAX_ORDER)


class Context:
    def __init__(self, args):
        self.args = args
        self.budget = Budget(args.budget, args.time_limit)
        self.group: Optional[Group] = None

    @property
    def G(self) -> Group:
        if self.group is None:
            self.group = _load_group(self.args)
        return self.group

    @property
    def tau(self) -> int:
        return default_tau(self.G.order) if self.args.tau is None else self.args.tau


# handlers return (verdict, witness, exit code)

def cmd_group(ctx):
    try:
        G = ctx.G
    except NotAGroup as exc:
        return f"not a group: {exc}", None, EXIT_NO
    return True, describe(G), EXIT_OK


def cmd_hall_paige(ctx):
    G = ctx.G
    prod, syl = hall_paige_product(G), hall_paige_sylow(G)
    witness: Dict[str, object] = {"product_condition": prod, "sylow_condition": syl}
    if ctx.args.solve:
        phi = designs.complete_mapping(G, budget=ctx.budget)
        witness["complete_mapping"] = None if phi is None else sorted(phi.items())
    return prod, witness, EXIT_OK if prod else EXIT_NO


def _mapping(ctx, fn):
    a = ctx.args
    phi = fn(ctx.G, _ids(a.X), _ids(a.Y), _ids(a.Z), budget=ctx.budget)
    if phi is None:
        return None, None, EXIT_NO
    return True, sorted(phi.items()), EXIT_OK


def cmd_complete_mapping(ctx):
    return _mapping(ctx, designs.complete_mapping)


def cmd_orthomorphism(ctx):
    return _mapping(ctx, designs.orthomorphism)


def cmd_transversal(ctx):
    cells = designs.subsquare_transversal(ctx.G, _ids(ctx.args.rows), _ids(ctx.args.cols),
                                          budget=ctx.budget)
    if cells is None:
        return None, None, EXIT_NO
    return True, [list(c) for c in cells], EXIT_OK


def cmd_classify(ctx):
    res = designs.classify_subsquare(ctx.G, _ids(ctx.args.rows), _ids(ctx.args.cols),
                                     budget=ctx.budget)
    w = {k: v for k, v in vars(res).items() if v not in (None, [])}
    w.pop("verdict", None)
    if "transversal" in w:
        w["transversal"] = [list(c) for c in w["transversal"]]
    code = EXIT_BUDGET if res.verdict == "Unresolved" else EXIT_OK
    return res.verdict, w, code


def cmd_near_transversal(ctx):
    cells = designs.near_transversal(ctx.G, budget=ctx.budget)
    return True, [list(c) for c in cells], EXIT_OK


def _ordering(ctx, fn):
    w = fn(ctx.G, budget=ctx.budget)
    if w is None:
        return None, None, EXIT_NO
    return True, {"sequence": w.sequence, "derived": w.derived}, EXIT_OK


def cmd_sequencing(ctx):
    return _ordering(ctx, sequencing.find_sequencing)


def cmd_r_sequencing(ctx):
    return _ordering(ctx, sequencing.find_r_sequencing)


def cmd_harmonious(ctx):
    return _ordering(ctx, sequencing.find_harmonious)


def cmd_rainbow_path(ctx):
    a = ctx.args
    D = sequencing.colored_digraph(ctx.G, a.kind, _ids(a.vertices), _ids(a.colors))
    path = sequencing.rainbow_hamilton_path(D, a.start, a.end, budget=ctx.budget)
    if path is None:
        return None, None, EXIT_NO
    return True, {"path": path, "colors": sequencing.path_colors(D, path)}, EXIT_OK


def cmd_zero_sum(ctx):
    a, G = ctx.args, ctx.G
    if a.action == "decide":
        d = zero_sum.decide_partition(G, a.parts)
        if d.verdict == "No":
            return "No", {"reason": d.reason, "conditions": d.conditions}, EXIT_NO
        if d.verdict == "Yes" and not a.solve:
            return "Yes", {"reason": d.reason, "conditions": d.conditions}, EXIT_OK
    P = zero_sum.find_partition(G, a.parts, budget=ctx.budget)
    if P is None:
        return "No", {"reason": "exhaustive search found no partition"}, EXIT_NO
    return "Yes", {"sets": [list(s) for s in P.sets]}, EXIT_OK


def cmd_word(ctx):
    a, G = ctx.args, ctx.G
    words = [fp.parse_word(G, t) for t in a.words]
    k = max([w.k for w in words] + [a.k or 0])
    words = [fp.parse_word(G, t, k) for t in a.words]
    if a.action == "normalize":
        return True, [fp.format_word(w) for w in words], EXIT_OK
    if a.action == "separable":
        if len(words) != 2:
            raise ArtifactError("separable needs exactly two words")
        v = fp.weakly_separable(G, words[0], words[1], tau=ctx.tau)
        return v.relation, {"case": v.case, "certificate": v.certificate}, EXIT_OK if v else EXIT_NO
    found = []
    count = 0
    for pi in fp.enumerate_separating_projections(G, words, tau=ctx.tau, U=_ids(a.avoid)):
        count += 1
        if len(found) < a.limit:
            found.append(list(pi))
    return count, {"count": count, "first": found}, EXIT_OK if count else EXIT_NO


def _net_dump(net):
    return {"m": net.m, "depth": net.depth, "uniform": net.uniform,
            "layers": [[list(net.comparators[i]) for i in layer] for layer in net.layers]}


def cmd_gadget(ctx):
    a = ctx.args
    if a.action == "network":
        net = gadgets.build_sorting_network(a.m, pad_uniform=a.pad)
        ok = gadgets.network_sorts(net)
        return ok, _net_dump(net), EXIT_OK if ok else EXIT_NO
    G = ctx.G
    if a.action == "absorber":
        inst = gadgets.build_commutator_absorber(G, a.a, a.b, a.c, tau=ctx.tau, seed=a.seed,
                                                 budget=ctx.budget)
        ok = bool(gadgets.verify_m_absorber(G, inst.R, inst.F, 1))
        return ok, {"R": sorted(map(list, inst.R)), "F": [sorted(map(list, f)) for f in inst.F],
                    "projection": None if inst.projection is None else list(inst.projection)}, \
            EXIT_OK if ok else EXIT_NO
    if a.action == "wire":
        w = gadgets.build_wire_gadget(G, a.kind, a.x, a.y, U=_ids(a.avoid) or ())
        return True, {"path": list(w.path), "colors": list(w.colors)}, EXIT_OK
    if a.action == "comparator":
        g = gadgets.build_comparator_gadget(G, a.kind, U=_ids(a.avoid) or (), seed=a.seed,
                                            tau=ctx.tau)
        ok = bool(gadgets.verify_comparator(G, g))
        return ok, {"vertices": dict(g.vertices), "colors": dict(g.colors),
                    "paths": {"/".join(k): list(v) for k, v in g.paths.items()}}, \
            EXIT_OK if ok else EXIT_NO
    # route
    net = gadgets.build_sorting_network(a.m, pad_uniform=True)
    A, B = _ids(a.A), _ids(a.B)
    if len(A) != a.m or len(B) != a.m:
        raise ArtifactError(f"--A and --B need {a.m} ids each")
    perm = _ids(a.phi) or list(range(a.m))
    phi = {A[i]: B[perm[i]] for i in range(a.m)}
    pool = gadgets.build_gadget_pool(G, a.kind, net, A, B, seed=a.seed)
    ps = gadgets.route_path_system(G, a.kind, net, pool, A, B, phi)
    return True, {"length": ps.length, "paths": {str(k): v for k, v in ps.paths.items()},
                  "active": ps.active}, EXIT_OK


def cmd_verify_suite(ctx):
    res = run_suite(ctx.args.suite, ctx.args.cap)
    return res.ok, res.summary(), EXIT_OK if res.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description="Exact small-group search toolkit.")
    _add_globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, group=True, **kw):
        sp = sub.add_parser(name, **kw)
        _add_globals(sp, suppress=True)
        if group:
            _add_group(sp)
        sp.set_defaults(handler=fn)
        return sp

    add("group", cmd_group, help="validate and describe a group")
    sp = add("hall-paige", cmd_hall_paige, help="both forms of the Hall-Paige condition")
    sp.add_argument("--solve", action="store_true", help="also run the complete-mapping solver")
    for name, fn in (("complete-mapping", cmd_complete_mapping), ("orthomorphism", cmd_orthomorphism)):
        sp = add(name, fn)
        sp.add_argument("--X")
        sp.add_argument("--Y")
        sp.add_argument("--Z")
    for name, fn in (("transversal", cmd_transversal), ("classify-subsquare", cmd_classify)):
        sp = add(name, fn)
        sp.add_argument("--rows", required=True)
        sp.add_argument("--cols", required=True)
    add("near-transversal", cmd_near_transversal)
    add("sequencing", cmd_sequencing)
    add("r-sequencing", cmd_r_sequencing)
    add("harmonious", cmd_harmonious)
    sp = add("rainbow-path", cmd_rainbow_path)
    sp.add_argument("--kind", choices=(sequencing.MULTIPLICATION, sequencing.DIVISION),
                    default=sequencing.DIVISION)
    sp.add_argument("--vertices")
    sp.add_argument("--colors")
    sp.add_argument("--start", type=int, required=True)
    sp.add_argument("--end", type=int, required=True)
    sp = add("zero-sum", cmd_zero_sum)
    sp.add_argument("action", choices=("decide", "find"))
    sp.add_argument("--parts", required=True, type=zero_sum.PartitionSpec.parse)
    sp.add_argument("--solve", action="store_true", help="attach a witness to a Yes decision")
    sp = add("word", cmd_word)
    sp.add_argument("action", choices=("normalize", "separable", "projections"))
    sp.add_argument("words", nargs="+", help='words such as "g:1 v1 g:0 v2^-1"')
    sp.add_argument("--k", type=int, help="number of variables")
    sp.add_argument("--avoid", help="ids no image may hit")
    sp.add_argument("--limit", type=int, default=10)

    gp = sub.add_parser("gadget", help="absorber, wire, comparator, network and routing gadgets")
    _add_globals(gp, suppress=True)
    gsub = gp.add_subparsers(dest="action", required=True)

    def gadd(name):
        sp = gsub.add_parser(name)
        _add_globals(sp, suppress=True)
        sp.set_defaults(handler=cmd_gadget)
        return sp

    kinds = (sequencing.MULTIPLICATION, sequencing.DIVISION)
    sp = gadd("absorber")
    _add_group(sp)
    for v in ("a", "b", "c"):
        sp.add_argument(f"--{v}", type=int, required=True)
    sp = gadd("wire")
    _add_group(sp)
    sp.add_argument("--kind", choices=kinds, default=sequencing.MULTIPLICATION)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--y", type=int, required=True)
    sp.add_argument("--avoid")
    sp = gadd("comparator")
    _add_group(sp)
    sp.add_argument("--kind", choices=kinds, default=sequencing.MULTIPLICATION)
    sp.add_argument("--avoid")
    sp = gadd("network")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--pad", action="store_true", help="pad to uniform path length")
    sp = gadd("route")
    _add_group(sp)
    sp.add_argument("--kind", choices=kinds, default=sequencing.MULTIPLICATION)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--phi", help="permutation: position i of A goes to B[phi[i]]")

    sp = add("verify-suite", cmd_verify_suite, group=False)
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--cap", type=int)
    return p


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "item"):
        return x.item()
    return x


def render(report: Dict[str, object], fmt: str) -> str:
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True)
    lines = []
    for key in ("command", "group", "verdict", "witness", "error", "stats", "params"):
        if key in report:
            val = report[key]
            lines.append(f"{key}: {val if isinstance(val, str) else json.dumps(val, sort_keys=True)}")
    return "\n".join(lines)


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    ctx = Context(args)
    report: Dict[str, object] = {"command": " ".join(argv if argv is not None else sys.argv[1:])}
    if getattr(args, "group", None) or getattr(args, "cayley", None):
        report["group"] = args.group or args.cayley
    code = EXIT_OK
    try:
        verdict, witness, code = args.handler(ctx)
        report["verdict"] = verdict
        if witness is not None:
            report["witness"] = witness
    except BudgetExceeded as exc:
        report["verdict"] = "BudgetExceeded"
        report["error"] = str(exc)
        code = EXIT_BUDGET
    except (NoProjection, NotFound) as exc:
        report["verdict"] = None
        report["error"] = str(exc)
        code = EXIT_NO
    except ArtifactError as exc:
        report["verdict"] = "error"
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_USAGE
    except ValueError as exc:
        report["verdict"] = "error"
        report["error"] = str(exc)
        code = EXIT_USAGE
    report["stats"] = {"nodes": ctx.budget.nodes, "complete": code == EXIT_NO}
    report["params"] = {"tau": args.tau, "budget": args.budget, "seed": args.seed,
                        "time_limit": args.time_limit}
    print(render(report, args.format), file=out)
    return code


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
