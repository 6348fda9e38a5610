"""Command-line front end.

Subcommands: update, check, bisim, induce, minimize, iunf, search, dot.
Exit codes are a stable contract: 0 for a positive answer, 1 for a
negative one, 2 for any error (bad references, syntax errors, empty
products where a pointed result was required).
"""
from __future__ import annotations

import argparse
import json
import sys

from .actions import induced_action_model, MultiPointedActionModel, announce, whether_announce
from .bisim import bisimilar, isomorphic, minimize, models_bisimilar, n_bisimilar
from .dot import model_dot
from .errors import EpiupdateError
from .formulas import format_formula
from .history import history_atoms_below, history_start, history_update
from .iunf import iunf_translate
from .models import world_name
from .search import ActionUpdate, PatternUpdate
from .semantics import satisfies, valid_on
from .workspace import (
    Workspace, action_model_to_json, default_workspace, load_workspace,
    model_to_json, resolve_model_expr,
)
from .models import PointedModel


class _Step(argparse.Action):
    """Collect --with/--with-action occurrences into one ordered step list."""

    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, "steps", None) or []
        kind = "pattern" if option_string == "--with" else "action"
        steps.append((kind, values))
        namespace.steps = steps


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="epiupdate",
                                description="epistemic model update workbench")
    p.add_argument("--workspace", metavar="FILE",
                   help="workspace JSON file (default: built-in fixtures)")
    sub = p.add_subparsers(dest="command", required=True)

    up = sub.add_parser("update", help="apply a pipeline of updates to a model")
    up.add_argument("model")
    up.add_argument("--with", dest="steps", metavar="PATTERN", action=_Step,
                    help="pattern update step (repeatable)")
    up.add_argument("--with-action", dest="steps", metavar="ACTION", action=_Step,
                    help="action model update step (repeatable)")
    up.add_argument("--history", action="store_true",
                    help="record history variables round by round")
    up.add_argument("--rounds", type=int, default=1,
                    help="repeat the whole step sequence this many times")
    up.add_argument("-o", "--output", metavar="FILE")

    ck = sub.add_parser("check", help="evaluate a formula")
    ck.add_argument("model", help="model name or expression (odot/otimes)")
    ck.add_argument("world", nargs="?", help="evaluation point (omit with --valid)")
    ck.add_argument("formula")
    ck.add_argument("--valid", action="store_true",
                    help="check truth at every world instead of one point")

    bs = sub.add_parser("bisim", help="compare two models")
    bs.add_argument("left")
    bs.add_argument("right")
    bs.add_argument("--point1")
    bs.add_argument("--point2")
    bs.add_argument("--bound", type=int)
    bs.add_argument("--iso", action="store_true", help="check isomorphism instead")
    bs.add_argument("--witness", action="store_true",
                    help="print the witness relation when bisimilar")

    ind = sub.add_parser("induce", help="emit the action model induced by a pattern")
    ind.add_argument("pattern")
    ind.add_argument("--round", type=int, default=1,
                     help="induced model for this round of iterated execution")
    ind.add_argument("--atoms", help="comma-separated atom names (default: workspace)")
    ind.add_argument("-o", "--output", metavar="FILE")

    mn = sub.add_parser("minimize", help="quotient by the coarsest bisimulation")
    mn.add_argument("model")
    mn.add_argument("-o", "--output", metavar="FILE")

    iu = sub.add_parser("iunf", help="translate to iterated update normal form")
    iu.add_argument("formula")

    se = sub.add_parser("search", help="search for an update-equivalent pattern")
    se.add_argument("--bases", required=True, metavar="MODEL:WORLD,...",
                    help="comma-separated pointed base models")
    se.add_argument("--target", required=True, metavar="SPEC",
                    help="one of announce:FORMULA, whether:FORMULA, "
                         "action:NAME, pattern:NAME[:GRAPH]")
    se.add_argument("--max-pattern-size", type=int)
    se.add_argument("--dump-dot", metavar="DIR",
                    help="write DOT renderings of the target's update results")

    dt = sub.add_parser("dot", help="emit a DOT rendering of a model")
    dt.add_argument("model")
    dt.add_argument("-o", "--output", metavar="FILE")

    return p


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_point(ws, model, name):
    return model.world_named(name)


def cmd_update(ws: Workspace, args) -> int:
    steps = (getattr(args, "steps", None) or []) * max(args.rounds, 1)
    if args.model not in ws.models:
        raise EpiupdateError(f"unknown model {args.model!r}")
    current = ws.models[args.model]
    if args.history:
        h = history_start(current)
        for kind, name in steps:
            if kind != "pattern":
                raise EpiupdateError("--history pipelines accept pattern steps only")
            if name not in ws.patterns:
                raise EpiupdateError(f"unknown pattern {name!r}")
            h = history_update(h, ws.patterns[name])
        current = h.model
    else:
        from .actions import action_update
        from .comm import pattern_update
        for kind, name in steps:
            if kind == "pattern":
                if name not in ws.patterns:
                    raise EpiupdateError(f"unknown pattern {name!r}")
                current = pattern_update(current, ws.patterns[name])
            else:
                if name not in ws.action_models:
                    raise EpiupdateError(f"unknown action model {name!r}")
                current = action_update(current, ws.action_models[name])
                if current.is_empty:
                    raise EpiupdateError(
                        f"update with {name!r} produced an empty model")
    _emit(json.dumps(model_to_json(current), indent=2) + "\n", args.output)
    return 0


def cmd_check(ws: Workspace, args) -> int:
    model = resolve_model_expr(ws, args.model)
    f = ws.parse(args.formula)
    if args.valid:
        result = valid_on(model, f)
    else:
        if args.world is None:
            raise EpiupdateError("a world is required unless --valid is given")
        w = model.world_named(args.world)
        result = satisfies(model, w, f)
    print("true" if result else "false")
    return 0 if result else 1


def cmd_bisim(ws: Workspace, args) -> int:
    left = resolve_model_expr(ws, args.left)
    right = resolve_model_expr(ws, args.right)
    if args.iso:
        ok = isomorphic(left, right)
        print("isomorphic" if ok else "not isomorphic")
        return 0 if ok else 1
    if (args.point1 is None) != (args.point2 is None):
        raise EpiupdateError("give both points or neither")
    if args.point1 is not None:
        w = left.world_named(args.point1)
        v = right.world_named(args.point2)
        if args.bound is not None:
            ok = n_bisimilar(left, w, right, v, args.bound)
            print(f"{args.bound}-bisimilar" if ok else f"not {args.bound}-bisimilar")
            return 0 if ok else 1
        res = bisimilar(left, w, right, v, want_witness=args.witness)
        if res.related:
            print("bisimilar")
            if args.witness and res.witness is not None:
                for u, x in sorted(res.witness,
                                   key=lambda p: (world_name(p[0]), world_name(p[1]))):
                    print(f"  {world_name(u)} ~ {world_name(x)}")
            return 0
        msg = "not bisimilar"
        if res.distinguishing_bound is not None:
            msg += f" (distinguished at depth {res.distinguishing_bound})"
        print(msg)
        return 1
    ok = models_bisimilar(left, right)
    print("bisimilar" if ok else "not bisimilar")
    return 0 if ok else 1


def cmd_induce(ws: Workspace, args) -> int:
    if args.pattern not in ws.patterns:
        raise EpiupdateError(f"unknown pattern {args.pattern!r}")
    pattern = ws.patterns[args.pattern]
    if args.atoms is not None:
        atoms = set()
        for name in filter(None, (s.strip() for s in args.atoms.split(","))):
            if name not in ws.atoms:
                raise EpiupdateError(f"unknown atom {name!r}")
            atoms.add(ws.atoms[name])
    else:
        atoms = set(ws.atom_set)
    if args.round < 1:
        raise EpiupdateError("--round must be at least 1")
    if args.round > 1:
        from .models import full_interpreted_system
        base = full_interpreted_system(atoms, agents=ws.agents)
        atoms |= history_atoms_below([pattern] * (args.round - 1), base)
    model = induced_action_model(pattern, atoms)
    _emit(json.dumps(action_model_to_json(model), indent=2) + "\n", args.output)
    return 0


def cmd_minimize(ws: Workspace, args) -> int:
    model = resolve_model_expr(ws, args.model)
    _emit(json.dumps(model_to_json(minimize(model)), indent=2) + "\n", args.output)
    return 0


def cmd_iunf(ws: Workspace, args) -> int:
    print(format_formula(iunf_translate(ws.parse(args.formula))))
    return 0


def _parse_target(ws: Workspace, spec: str):
    kind, _, rest = spec.partition(":")
    if not rest:
        raise EpiupdateError(
            "target must be announce:FORMULA, whether:FORMULA, action:NAME "
            "or pattern:NAME[:GRAPH]")
    if kind == "announce":
        u = announce(ws.parse(rest), ws.agents)
        return ActionUpdate(MultiPointedActionModel(u, frozenset(u.actions)))
    if kind == "whether":
        u = whether_announce(ws.parse(rest), ws.agents)
        return ActionUpdate(MultiPointedActionModel(u, frozenset(u.actions)))
    if kind == "action":
        if rest not in ws.action_models:
            raise EpiupdateError(f"unknown action model {rest!r}")
        u = ws.action_models[rest]
        return ActionUpdate(MultiPointedActionModel(u, frozenset(u.actions)))
    if kind == "pattern":
        pname, _, gname = rest.partition(":")
        if pname not in ws.patterns:
            raise EpiupdateError(f"unknown pattern {pname!r}")
        pattern = ws.patterns[pname]
        graph = pattern.graph_named(gname) if gname else None
        return PatternUpdate(pattern, graph)
    raise EpiupdateError(f"unknown target kind {kind!r}")


def cmd_search(ws: Workspace, args) -> int:
    from .search import candidate_patterns, default_pattern_size_cap, update_equivalent_on
    from .search import update_results

    bases = []
    for ref in filter(None, (s.strip() for s in args.bases.split(","))):
        if ":" not in ref:
            raise EpiupdateError("base references have the form MODEL:WORLD")
        mname, wname = ref.rsplit(":", 1)
        model = resolve_model_expr(ws, mname.strip())
        bases.append(PointedModel(model, model.world_named(wname.strip())))
    if not bases:
        raise EpiupdateError("at least one base is required")

    target = _parse_target(ws, args.target)
    agents = bases[0].model.agents
    cap = args.max_pattern_size
    if cap is None:
        cap = default_pattern_size_cap(len(agents))

    print(f"target: {args.target}")
    print(f"bases:  {len(bases)}")
    print("pattern                      equivalent")
    found = None
    for pattern in candidate_patterns(agents, cap):
        ok = update_equivalent_on(bases, PatternUpdate(pattern), target)
        label = "{" + ", ".join(g.name for g in pattern.graphs) + "}"
        print(f"{label:28} {'yes' if ok else 'no'}")
        if ok and found is None:
            found = pattern

    if args.dump_dot:
        import os
        os.makedirs(args.dump_dot, exist_ok=True)
        for i, base in enumerate(bases):
            for j, res in enumerate(update_results(target, base)):
                path = os.path.join(args.dump_dot, f"target-base{i}-result{j}.dot")
                with open(path, "w") as fh:
                    fh.write(model_dot(res.model))

    if found is not None:
        print("result: equivalent pattern found: "
              + ", ".join(g.name for g in found.graphs))
        return 0
    scope = f"patterns of size <= {cap}" if cap else "all patterns"
    print(f"result: no equivalent found within search space ({scope})")
    return 1


def cmd_dot(ws: Workspace, args) -> int:
    model = resolve_model_expr(ws, args.model)
    _emit(model_dot(model), args.output)
    return 0


_COMMANDS = {
    "update": cmd_update,
    "check": cmd_check,
    "bisim": cmd_bisim,
    "induce": cmd_induce,
    "minimize": cmd_minimize,
    "iunf": cmd_iunf,
    "search": cmd_search,
    "dot": cmd_dot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ws = load_workspace(args.workspace) if args.workspace else default_workspace()
        return _COMMANDS[args.command](ws, args)
    except EpiupdateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
