"""Deterministic DOT export for models and action models.

Per agent, every pair of worlds inside a non-singleton block yields one
undirected edge labeled with the agent's name; reflexive edges are
omitted.  Nodes and edges are emitted in sorted order so that repeated
runs diff cleanly.
"""
from __future__ import annotations

from itertools import combinations

from .formulas import format_formula
from .models import EpistemicModel, world_name, _component_name


def _quote(s: str) -> str:
    return '"' + s.replace('"', r'\"').replace("\n", r"\n") + '"'


def model_dot(model: EpistemicModel) -> str:
    lines = ["graph model {", "  node [shape=box];"]
    for w in sorted(model.worlds, key=world_name):
        label = world_name(w)
        vals = " ".join(sorted(str(p) for p in model.valuation[w]))
        text = label + ("\n" + vals if vals else "")
        lines.append(f"  {_quote(label)} [label={_quote(text)}];")
    edges = []
    for a in model.agents:
        for blk in model.relations[a]:
            if len(blk) < 2:
                continue
            for u, v in combinations(sorted(blk, key=world_name), 2):
                edges.append((world_name(u), world_name(v), a))
    for u, v, a in sorted(edges):
        lines.append(f"  {_quote(u)} -- {_quote(v)} [label={_quote(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def action_model_dot(model) -> str:
    lines = ["graph actions {", "  node [shape=ellipse];"]
    for e in sorted(model.actions, key=_component_name):
        label = _component_name(e)
        text = label + "\npre: " + format_formula(model.pre[e])
        lines.append(f"  {_quote(label)} [label={_quote(text)}];")
    edges = []
    for a in model.agents:
        for blk in model.relations[a]:
            if len(blk) < 2:
                continue
            for u, v in combinations(sorted(blk, key=_component_name), 2):
                edges.append((_component_name(u), _component_name(v), a))
    for u, v, a in sorted(edges):
        lines.append(f"  {_quote(u)} -- {_quote(v)} [label={_quote(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
