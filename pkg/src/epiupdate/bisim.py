"""Collective and bounded collective bisimulation, minimization, isomorphism.

The forth/back conditions of a collective bisimulation range over the
group relation of every nonempty agent subset, not only over individual
agents.  All checks run as partition refinement: start from blocks of
equal valuation and split a block whenever two members see different sets
of current blocks along some group relation.  Checks between two models
run on their disjoint union, so one refinement engine serves both.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .models import EpistemicModel, group_relation


@dataclass
class BisimResult:
    """Outcome of a bisimilarity check.

    ``witness`` is a set of world pairs realizing the bisimulation when
    related; ``distinguishing_bound`` is the least refinement depth that
    separates the points when not (best effort).
    """

    related: bool
    witness: frozenset | None = None
    distinguishing_bound: int | None = None

    def __bool__(self):
        return self.related


def _agent_groups(agents):
    for k in range(1, len(agents) + 1):
        yield from combinations(agents, k)


def _refine(models, max_rounds=None):
    """Coarsest partition of the disjoint union stable under all group relations.

    Returns (labels, rounds_used) where labels maps (model_index, world)
    to a block id.  With ``max_rounds`` set, refinement stops early, which
    yields the depth-bounded layers.
    """
    agents = models[0].agents
    for m in models[1:]:
        if m.agents != agents:
            raise ValueError("bisimulation checks require a shared agent set")

    nodes = [(i, w) for i, m in enumerate(models) for w in m.worlds]
    pos = {node: k for k, node in enumerate(nodes)}
    n = len(nodes)

    # fixed group-relation block ids per node, one array per agent group
    group_arrays = []
    for group in _agent_groups(agents):
        arr = [0] * n
        offset = 0
        for i, m in enumerate(models):
            blocks = group_relation(m, group)
            for j, blk in enumerate(blocks):
                for w in blk:
                    arr[pos[(i, w)]] = offset + j
            offset += len(blocks)
        group_arrays.append(arr)

    # initial partition: equal valuation
    val_ids: dict[frozenset, int] = {}
    labels = [0] * n
    for k, (i, w) in enumerate(nodes):
        val = models[i].valuation[w]
        labels[k] = val_ids.setdefault(val, len(val_ids))

    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        signatures = [labels]
        for arr in group_arrays:
            touched: dict[int, set] = {}
            for k in range(n):
                touched.setdefault(arr[k], set()).add(labels[k])
            frozen = {b: frozenset(s) for b, s in touched.items()}
            signatures.append([frozen[arr[k]] for k in range(n)])
        sig_ids: dict[tuple, int] = {}
        new = [0] * n
        for k in range(n):
            key = tuple(sig[k] for sig in signatures)
            new[k] = sig_ids.setdefault(key, len(sig_ids))
        rounds += 1
        if new == labels:
            break
        labels = new

    return {node: labels[pos[node]] for node in nodes}, rounds


def max_collective_bisimulation(model: EpistemicModel) -> tuple:
    """Coarsest auto-bisimulation of a model, as a partition of its worlds."""
    labels, _ = _refine([model])
    cells: dict[int, list] = {}
    for w in model.worlds:
        cells.setdefault(labels[(0, w)], []).append(w)
    return tuple(sorted((frozenset(c) for c in cells.values()),
                        key=lambda blk: min(model._index[w] for w in blk)))


def bisimilar(model, world, other, other_world, want_witness=False) -> BisimResult:
    """Are two pointed models collectively bisimilar?"""
    model.require_world(world)
    other.require_world(other_world)
    labels, _ = _refine([model, other])
    related = labels[(0, world)] == labels[(1, other_world)]
    witness = None
    if related and want_witness:
        witness = frozenset(
            (w, v)
            for w in model.worlds
            for v in other.worlds
            if labels[(0, w)] == labels[(1, v)]
        )
    bound = None
    if not related:
        bound = _distinguishing_bound(model, world, other, other_world)
    return BisimResult(related, witness, bound)


def _distinguishing_bound(model, world, other, other_world, limit=64):
    for k in range(limit):
        labels, rounds = _refine([model, other], max_rounds=k)
        if labels[(0, world)] != labels[(1, other_world)]:
            return k
        if rounds < k:
            break
    return None


def models_bisimilar(model: EpistemicModel, other: EpistemicModel) -> bool:
    """Whole-model check: every world of each model has a partner in the other."""
    if model.is_empty or other.is_empty:
        return model.is_empty and other.is_empty
    labels, _ = _refine([model, other])
    mine = {labels[(0, w)] for w in model.worlds}
    theirs = {labels[(1, v)] for v in other.worlds}
    return mine <= theirs and theirs <= mine


def n_bisimilar(model, world, other, other_world, n: int) -> bool:
    """Bounded check: valuation agreement refined n times."""
    model.require_world(world)
    other.require_world(other_world)
    if n < 0:
        raise ValueError("bound must be a natural number")
    labels, _ = _refine([model, other], max_rounds=n)
    return labels[(0, world)] == labels[(1, other_world)]


def minimize(model: EpistemicModel) -> EpistemicModel:
    """Quotient by the coarsest auto-bisimulation.

    The result is whole-model bisimilar to the input and no two of its
    worlds are bisimilar to each other; each quotient world is named by
    its first representative.
    """
    if model.is_empty:
        return model
    blocks = max_collective_bisimulation(model)
    rep = {}
    rep_of_world = {}
    for blk in blocks:
        r = min(blk, key=lambda w: model._index[w])
        rep[blk] = r
        for w in blk:
            rep_of_world[w] = r

    worlds = [rep[blk] for blk in blocks]
    valuation = {r: model.valuation[r] for r in worlds}
    relations = {}
    for a in model.agents:
        new_blocks = {frozenset(rep_of_world[w] for w in blk)
                      for blk in model.relations[a]}
        relations[a] = list(new_blocks)
    return EpistemicModel(worlds, relations, valuation, agents=model.agents)


def isomorphic(model: EpistemicModel, other: EpistemicModel) -> bool:
    """Exact isomorphism respecting valuations and every agent's partition.

    Backtracking search over colour classes; colours start from the
    valuation and per-agent block sizes and are refined until stable.
    Intended for desk-scale models.
    """
    if model.agents != other.agents:
        return False
    if len(model.worlds) != len(other.worlds):
        return False
    if model.is_empty:
        return True

    colours_m = _stable_colours(model)
    colours_o = _stable_colours(other)
    if sorted(colours_m.values()) != sorted(colours_o.values()):
        return False

    by_colour: dict[int, list] = {}
    for v in other.worlds:
        by_colour.setdefault(colours_o[v], []).append(v)

    order = sorted(model.worlds, key=lambda w: (len(by_colour[colours_m[w]]),
                                                model._index[w]))
    mapping: dict = {}
    used: set = set()

    def compatible(w, v):
        for a in model.agents:
            wmap = model.block_map(a)
            vmap = other.block_map(a)
            for w2, v2 in mapping.items():
                if (wmap[w] == wmap[w2]) != (vmap[v] == vmap[v2]):
                    return False
        return True

    def extend(k):
        if k == len(order):
            return True
        w = order[k]
        for v in by_colour[colours_m[w]]:
            if v in used or not compatible(w, v):
                continue
            mapping[w] = v
            used.add(v)
            if extend(k + 1):
                return True
            del mapping[w]
            used.discard(v)
        return False

    return extend(0)


def _stable_colours(model: EpistemicModel) -> dict:
    val_key = {w: model.valuation[w] for w in model.worlds}
    colour = {}
    seen: dict[tuple, int] = {}
    for w in model.worlds:
        key = (val_key[w], tuple(len(model.block_of(a, w)) for a in model.agents))
        colour[w] = seen.setdefault(key, len(seen))
    while True:
        seen2: dict[tuple, int] = {}
        new = {}
        for w in model.worlds:
            neigh = tuple(
                frozenset((colour[v], sum(1 for u in model.block_of(a, w)
                                          if colour[u] == colour[v]))
                          for v in model.block_of(a, w))
                for a in model.agents
            )
            key = (colour[w], neigh)
            new[w] = seen2.setdefault(key, len(seen2))
        if len(set(new.values())) == len(set(colour.values())):
            return new
        colour = new
