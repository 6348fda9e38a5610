"""Workspaces: named agents, atoms, models, patterns, action models, formulas.

A workspace file is a single JSON document::

    {
      "agents": ["a", "b"],
      "atoms": [{"base": "p", "owner": "a"}, ...],
      "models": {
        "M": {"worlds": [{"id": "w1", "val": ["p_a"]}, ...],
              "relations": {"a": [["w1"], ["w2"]], "b": [["w1", "w2"]]}}
      },
      "patterns": {"IS": ["{a->b}", "{b->a}", "{a->b, b->a}"]},
      "action_models": {
        "reveal": {"actions": [{"id": "yes", "pre": "p_a"}, ...],
                   "relations": {"a": [["yes"], ["no"]], ...}}
      },
      "formulas": {"goal": "K b p_a"}
    }

Relations are given as block lists.  All names must be unique across the
workspace so that ``[NAME]`` in formulas resolves unambiguously.
"""
from __future__ import annotations

import json

from .actions import ActionModel
from .comm import CommPattern, parse_graph_literal
from .errors import UnknownNameError
from .fixtures import (
    byz_initial_model, byz_pattern, identity_pattern, immediate_snapshot,
    skip, sq_model, universal_pattern, P_A, P_B, Q_A, AGENTS_AB,
)
from .models import Atom, EpistemicModel, atom_key, world_name
from .parser import ParserContext, parse_formula


class Workspace:
    def __init__(self, agents, atoms, models=None, patterns=None,
                 action_models=None, formulas=None):
        self.agents = tuple(sorted(agents))
        self.atoms = {str(p): p for p in sorted(set(atoms), key=atom_key)}
        self.models = dict(models or {})
        self.patterns = dict(patterns or {})
        self.action_models = dict(action_models or {})
        self.formulas = dict(formulas or {})
        self._check_names()

    def _check_names(self):
        names = (list(self.models) + list(self.patterns)
                 + list(self.action_models) + list(self.formulas))
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise UnknownNameError(f"duplicate workspace names: {sorted(dupes)}")

    @property
    def atom_set(self) -> frozenset:
        return frozenset(self.atoms.values())

    def parser_context(self) -> ParserContext:
        return ParserContext(agents=self.agents, atoms=dict(self.atoms),
                             patterns=dict(self.patterns),
                             action_models=dict(self.action_models))

    def parse(self, text: str):
        return parse_formula(text, self.parser_context())


def default_workspace() -> Workspace:
    """The built-in workspace: Sq, the send-maybe base model M, Byz, IS, skip."""
    return Workspace(
        agents=AGENTS_AB,
        atoms=[P_A, P_B, Q_A],
        models={"Sq": sq_model(), "M": byz_initial_model()},
        patterns={
            "I": identity_pattern(),
            "U": universal_pattern(),
            "Byz": byz_pattern(),
            "IS": immediate_snapshot(),
        },
        action_models={"skip": skip()},
    )


# -- JSON (de)serialization ---------------------------------------------------


def _atom_from_json(obj) -> Atom:
    return Atom(obj["base"], obj["owner"])


def _resolve_atom_name(name: str, atoms_by_name: dict) -> Atom:
    try:
        return atoms_by_name[name]
    except KeyError:
        raise UnknownNameError(f"unknown atom {name!r} in model file") from None


def model_from_json(obj, agents, atoms_by_name) -> EpistemicModel:
    worlds = [w["id"] for w in obj["worlds"]]
    valuation = {
        w["id"]: {_resolve_atom_name(s, atoms_by_name) for s in w.get("val", [])}
        for w in obj["worlds"]
    }
    relations = {a: [list(blk) for blk in blocks]
                 for a, blocks in obj["relations"].items()}
    return EpistemicModel(worlds, relations, valuation, agents=agents)


def model_to_json(model: EpistemicModel) -> dict:
    base_atoms = sorted(
        {p for val in model.valuation.values() for p in val if isinstance(p, Atom)},
        key=atom_key)
    history_atoms = sorted(
        {str(p) for val in model.valuation.values()
         for p in val if not isinstance(p, Atom)})
    out = {
        "agents": list(model.agents),
        "atoms": [{"base": p.base, "owner": p.owner} for p in base_atoms],
        "worlds": [
            {"id": world_name(w),
             "val": sorted(str(p) for p in model.valuation[w])}
            for w in model.worlds
        ],
        "relations": {
            a: [sorted(world_name(w) for w in blk) for blk in model.relations[a]]
            for a in model.agents
        },
    }
    if history_atoms:
        out["history_atoms"] = history_atoms
    return out


def action_model_from_json(obj, agents, workspace: Workspace | None = None,
                           name=None) -> ActionModel:
    context = workspace.parser_context() if workspace is not None else None
    actions = [e["id"] for e in obj["actions"]]
    pre = {e["id"]: parse_formula(e["pre"], context) for e in obj["actions"]}
    relations = {a: [list(blk) for blk in blocks]
                 for a, blocks in obj["relations"].items()}
    return ActionModel(actions, relations, pre, agents=agents, name=name)


def action_model_to_json(model: ActionModel) -> dict:
    from .formulas import format_formula
    from .models import _component_name
    return {
        "agents": list(model.agents),
        "actions": [
            {"id": _component_name(e), "pre": format_formula(model.pre[e])}
            for e in model.actions
        ],
        "relations": {
            a: [sorted(_component_name(e) for e in blk) for blk in model.relations[a]]
            for a in model.agents
        },
    }


def load_workspace(path) -> Workspace:
    with open(path) as fh:
        doc = json.load(fh)
    agents = tuple(sorted(doc["agents"]))
    atoms = [_atom_from_json(o) for o in doc.get("atoms", [])]
    atoms_by_name = {str(p): p for p in atoms}

    models = {
        name: model_from_json(obj, agents, atoms_by_name)
        for name, obj in doc.get("models", {}).items()
    }
    patterns = {
        name: CommPattern([parse_graph_literal(lit, agents) for lit in literals],
                          name=name)
        for name, literals in doc.get("patterns", {}).items()
    }
    ws = Workspace(agents, atoms, models=models, patterns=patterns,
                   formulas=doc.get("formulas", {}))
    for name, obj in doc.get("action_models", {}).items():
        ws.action_models[name] = action_model_from_json(obj, agents, ws, name=name)
    ws._check_names()
    return ws


# -- model reference expressions ----------------------------------------------


def resolve_model_expr(ws: Workspace, text: str) -> EpistemicModel:
    """Evaluate references like ``Sq odot IS odot IS`` or ``M otimes U(Byz)``.

    ``odot NAME`` applies a pattern update, ``otimes NAME`` an action
    model, and ``otimes U(NAME)`` the action model induced by pattern
    NAME over the workspace atoms.
    """
    from .actions import induced_action_model
    from .comm import pattern_update
    from .actions import action_update

    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise UnknownNameError("empty model expression")

    def take_operand(i):
        if tokens[i] == "U" and i + 1 < len(tokens) and tokens[i + 1] == "(":
            if i + 3 >= len(tokens) or tokens[i + 3] != ")":
                raise UnknownNameError("malformed induced-model reference")
            pname = tokens[i + 2]
            if pname not in ws.patterns:
                raise UnknownNameError(f"unknown pattern {pname!r}")
            return induced_action_model(ws.patterns[pname], ws.atom_set), i + 4
        return tokens[i], i + 1

    name = tokens[0]
    if name not in ws.models:
        raise UnknownNameError(f"unknown model {name!r}")
    current = ws.models[name]
    i = 1
    while i < len(tokens):
        op = tokens[i]
        if op not in ("odot", "otimes"):
            raise UnknownNameError(f"expected 'odot' or 'otimes', found {op!r}")
        operand, i = take_operand(i + 1)
        if op == "odot":
            if not isinstance(operand, str) or operand not in ws.patterns:
                raise UnknownNameError(f"unknown pattern {operand!r}")
            current = pattern_update(current, ws.patterns[operand])
        else:
            if isinstance(operand, str):
                if operand not in ws.action_models:
                    raise UnknownNameError(f"unknown action model {operand!r}")
                operand = ws.action_models[operand]
            current = action_update(current, operand)
    return current
