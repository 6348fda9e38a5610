"""Finite epistemic models over agents and agent-owned atoms.

Each agent's indistinguishability relation is stored as a partition of the
worlds, so reflexivity, symmetry and transitivity hold by construction.
Models are immutable after construction; every operation here is a pure
function of its inputs and results can be shared freely across tasks.

Locality is enforced: two worlds an agent cannot tell apart must agree on
all atoms owned by that agent.  Construction fails with a diagnostic when
a supplied relation violates this.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Hashable

from .errors import EmptyModelError, LocalityError, ModelCapError, UnknownNameError

World = Hashable

DEFAULT_WORLD_CAP = 100_000


def world_cap() -> int:
    """Current product-size cap, read from EPIUPDATE_MAX_WORLDS."""
    raw = os.environ.get("EPIUPDATE_MAX_WORLDS")
    if not raw:
        return DEFAULT_WORLD_CAP
    return int(raw)


def ensure_capacity(n_worlds: int) -> None:
    cap = world_cap()
    if n_worlds > cap:
        raise ModelCapError(
            f"product would have {n_worlds} worlds, exceeding the cap of {cap} "
            f"(raise EPIUPDATE_MAX_WORLDS to override)"
        )


class Atom:
    """A propositional variable owned by a single agent, written ``base_owner``.

    Immutable; the hash is precomputed since atoms are hashed constantly
    in valuation sets.
    """

    __slots__ = ("base", "owner", "_hash")

    def __init__(self, base: str, owner: str):
        self.base = base
        self.owner = owner
        self._hash = hash((base, owner))

    def __eq__(self, other):
        return (self is other
                or (isinstance(other, Atom)
                    and self.base == other.base and self.owner == other.owner))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Atom({self.base!r}, {self.owner!r})"

    def __str__(self) -> str:
        return f"{self.base}_{self.owner}"


def atom_key(atom) -> str:
    """Canonical sort key for anything atom-like (base atoms, history variables)."""
    return str(atom)


class EpistemicModel:
    """Worlds, one partition per agent, and a valuation of owned atoms.

    ``relations`` maps each agent to an iterable of blocks (iterables of
    worlds); the blocks must partition the world set exactly.  ``valuation``
    maps worlds to collections of atom-like values (anything hashable with
    an ``owner`` attribute); missing worlds get the empty valuation.
    """

    __hash__ = object.__hash__

    def __init__(self, worlds, relations, valuation, agents=None, check_locality=True):
        ws = tuple(worlds)
        if len(set(ws)) != len(ws):
            raise ValueError("duplicate world identifiers")
        self.worlds = ws
        self._index = {w: i for i, w in enumerate(ws)}

        if agents is None:
            ags = tuple(sorted(relations))
        else:
            ags = tuple(sorted(agents))
            if set(relations) != set(ags):
                raise ValueError("relations must cover exactly the agent set")
        if not ags:
            raise ValueError("agent set must be nonempty")
        self.agents = ags

        self.relations = {
            a: tuple(sorted((frozenset(b) for b in relations[a]),
                            key=lambda blk: min(self._index[w] for w in blk)))
            for a in ags
        }
        self.valuation = {w: frozenset(valuation.get(w, ())) for w in ws}

        # per-instance caches; values are deterministic, so a racy double
        # computation is harmless
        self._group_cache: dict[frozenset, tuple] = {}
        self._block_maps: dict[str, dict] = {}
        self._pattern_cache: dict = {}
        self._action_cache: dict = {}
        self._locals_cache: dict = {}
        self._name_map = None

        self._validate_partitions()
        self._validate_owners()
        if check_locality:
            self._require_local()

    # -- validation ------------------------------------------------------

    def _validate_partitions(self):
        universe = set(self.worlds)
        for a, blocks in self.relations.items():
            seen = set()
            for blk in blocks:
                if not blk:
                    raise ValueError(f"empty block in relation of agent {a}")
                if blk & seen:
                    raise ValueError(f"overlapping blocks in relation of agent {a}")
                seen |= blk
            if seen != universe:
                raise ValueError(f"relation of agent {a} does not cover all worlds")

    def _validate_owners(self):
        ags = set(self.agents)
        for w, val in self.valuation.items():
            for p in val:
                if p.owner not in ags:
                    raise UnknownNameError(
                        f"atom {p} at world {world_name(w)} is owned by "
                        f"unknown agent {p.owner}"
                    )

    def _require_local(self):
        for a in self.agents:
            for blk in self.relations[a]:
                it = iter(blk)
                first = next(it)
                ref = self.locals_at(first).get(a, frozenset())
                for w in it:
                    if self.locals_at(w).get(a, frozenset()) != ref:
                        raise LocalityError(
                            f"worlds {world_name(first)} and {world_name(w)} are "
                            f"indistinguishable for agent {a} but disagree on "
                            f"{a}-owned atoms"
                        )

    # -- accessors -------------------------------------------------------

    def __len__(self):
        return len(self.worlds)

    def __repr__(self):
        return f"<EpistemicModel {len(self.worlds)} worlds, agents {','.join(self.agents)}>"

    @property
    def is_empty(self) -> bool:
        return not self.worlds

    def has_world(self, w) -> bool:
        return w in self._index

    def require_world(self, w):
        if self.is_empty:
            raise EmptyModelError("pointed query against an empty model")
        if w not in self._index:
            raise UnknownNameError(f"unknown world {world_name(w)}")

    def block_map(self, agent) -> dict:
        """world -> index of its block in ``relations[agent]``."""
        m = self._block_maps.get(agent)
        if m is None:
            m = {}
            for i, blk in enumerate(self.relations[agent]):
                for w in blk:
                    m[w] = i
            self._block_maps[agent] = m
        return m

    def block_of(self, agent, world) -> frozenset:
        return self.relations[agent][self.block_map(agent)[world]]

    def locals_at(self, world) -> dict:
        """The world's valuation grouped by owning agent (computed once)."""
        hit = self._locals_cache.get(world)
        if hit is None:
            grouped: dict[str, set] = {}
            for p in self.valuation[world]:
                grouped.setdefault(p.owner, set()).add(p)
            hit = {a: frozenset(s) for a, s in grouped.items()}
            self._locals_cache[world] = hit
        return hit

    def local_valuation(self, world, agent) -> frozenset:
        return self.locals_at(world).get(agent, frozenset())

    def world_named(self, name: str):
        if self._name_map is None:
            self._name_map = {world_name(w): w for w in self.worlds}
        try:
            return self._name_map[name]
        except KeyError:
            raise UnknownNameError(f"no world named {name!r}") from None


@dataclass(frozen=True)
class PointedModel:
    """A model with a distinguished world (the evaluation point)."""

    model: EpistemicModel
    point: World

    def __post_init__(self):
        self.model.require_world(self.point)


def world_name(w) -> str:
    """Render a (possibly product) world identifier as a dotted path."""
    if isinstance(w, tuple) and len(w) == 2:
        return f"{world_name(w[0])}.{_component_name(w[1])}"
    return _component_name(w)


def _component_name(x) -> str:
    # communication graphs and induced actions know how to render themselves
    name = getattr(x, "name", None)
    if isinstance(name, str):
        return name
    if isinstance(x, tuple) and len(x) == 2 and hasattr(x[0], "name"):
        graph, values = x
        vals = ",".join(sorted(str(p) for p in values))
        return f"({graph.name},{{{vals}}})"
    return str(x)


def is_local(model: EpistemicModel) -> bool:
    """True iff every agent's blocks are constant on that agent's own atoms."""
    empty = frozenset()
    for a in model.agents:
        for blk in model.relations[a]:
            vals = {model.locals_at(w).get(a, empty) for w in blk}
            if len(vals) > 1:
                return False
    return True


def is_interpreted_system(model: EpistemicModel) -> bool:
    """True iff each agent's partition is exactly the grouping by own-atom valuation.

    Locality gives one direction (indistinguishable worlds agree on own
    atoms); an interpreted system also satisfies the converse: equal
    own-atom valuations force indistinguishability.
    """
    empty = frozenset()
    for a in model.agents:
        grouped: dict[frozenset, set] = {}
        for w in model.worlds:
            grouped.setdefault(model.locals_at(w).get(a, empty), set()).add(w)
        induced = {frozenset(g) for g in grouped.values()}
        if induced != set(model.relations[a]):
            return False
    return True


def group_relation(model: EpistemicModel, group) -> tuple:
    """The partition for a nonempty agent group: the meet of the members' partitions."""
    b = frozenset(group)
    if not b:
        raise ValueError("agent group must be nonempty")
    unknown = b - set(model.agents)
    if unknown:
        raise UnknownNameError(f"unknown agents in group: {sorted(unknown)}")
    cached = model._group_cache.get(b)
    if cached is not None:
        return cached
    members = sorted(b)
    if len(members) == 1:
        result = model.relations[members[0]]
    else:
        maps = [model.block_map(a) for a in members]
        cells: dict[tuple, list] = {}
        for w in model.worlds:
            cells.setdefault(tuple(m[w] for m in maps), []).append(w)
        result = tuple(sorted((frozenset(c) for c in cells.values()),
                              key=lambda blk: min(model._index[w] for w in blk)))
    model._group_cache[b] = result
    return result


def full_interpreted_system(atoms, agents=()) -> EpistemicModel:
    """The interpreted system over all valuations of the given atoms.

    Worlds are all 2^n subsets of the atom set, named by bit strings in
    canonical atom order ("11" = both atoms true).  Two worlds are
    indistinguishable for an agent iff they agree on the agent's atoms.
    """
    atoms = sorted(set(atoms), key=atom_key)
    ags = sorted(set(agents) | {p.owner for p in atoms})
    if not ags:
        raise ValueError("no agents: pass agents= when the atom set is empty")
    n = len(atoms)
    ensure_capacity(2 ** n)

    worlds = []
    valuation = {}
    for bits in range(2 ** n):
        name = format(bits, f"0{n}b") if n else "w"
        worlds.append(name)
        valuation[name] = frozenset(atoms[i] for i in range(n) if name[i] == "1")

    relations = {}
    for a in ags:
        cells: dict[frozenset, list] = {}
        for w in worlds:
            local = frozenset(p for p in valuation[w] if p.owner == a)
            cells.setdefault(local, []).append(w)
        relations[a] = [frozenset(c) for c in cells.values()]
    return EpistemicModel(worlds, relations, valuation, agents=ags)
