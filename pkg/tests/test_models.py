import random
from itertools import combinations

import pytest

from epiupdate import (
    Atom, EpistemicModel, LocalityError, ModelCapError, PointedModel,
    UnknownNameError, full_interpreted_system, group_relation,
    is_interpreted_system, is_local, pattern_update, world_name,
)
from epiupdate.fixtures import byz_initial_model, byz_pattern, sq_model, P_A, P_B, Q_A

from genlib import random_local_model

R_B = Atom("r", "b")


def blocks_of(model, agent):
    return set(model.relations[agent])


class TestFullInterpretedSystem:
    def test_square(self):
        sq = sq_model()
        assert set(sq.worlds) == {"00", "01", "10", "11"}
        assert is_interpreted_system(sq)
        assert blocks_of(sq, "a") == {frozenset({"00", "01"}), frozenset({"10", "11"})}
        assert blocks_of(sq, "b") == {frozenset({"00", "10"}), frozenset({"01", "11"})}
        assert sq.valuation["10"] == frozenset({P_A})

    def test_empty_atom_set(self):
        m = full_interpreted_system([], agents=("a", "b"))
        assert len(m.worlds) == 1
        assert blocks_of(m, "a") == {frozenset(m.worlds)}
        assert blocks_of(m, "b") == {frozenset(m.worlds)}

    def test_no_agents_rejected(self):
        with pytest.raises(ValueError):
            full_interpreted_system([])

    def test_owner_projection_grouping(self):
        # oracle: enumerate the 8 subsets and group by each owner's projection
        atoms = [P_A, Q_A, R_B]
        m = full_interpreted_system(atoms)
        assert len(m.worlds) == 8

        def oracle_blocks(agent):
            groups = {}
            for w in m.worlds:
                proj = frozenset(p for p in m.valuation[w] if p.owner == agent)
                groups.setdefault(proj, set()).add(w)
            return {frozenset(g) for g in groups.values()}

        assert blocks_of(m, "a") == oracle_blocks("a")
        assert blocks_of(m, "b") == oracle_blocks("b")
        assert sorted(len(b) for b in m.relations["a"]) == [2, 2, 2, 2]
        assert sorted(len(b) for b in m.relations["b"]) == [4, 4]

    def test_counts_and_system_property(self):
        rng = random.Random(7)
        for _ in range(20):
            atoms = [Atom(f"x{i}", rng.choice("ab")) for i in range(rng.randint(0, 4))]
            m = full_interpreted_system(atoms, agents=("a", "b"))
            assert len(m.worlds) == 2 ** len(set(atoms))
            assert is_interpreted_system(m)


class TestLocality:
    def test_constructed_models_are_local(self):
        assert is_local(sq_model())
        assert is_local(byz_initial_model())

    def test_violation_detected(self):
        m = EpistemicModel(
            ["u", "v"], {"a": [["u", "v"]], "b": [["u", "v"]]},
            {"u": {P_A}, "v": set()}, check_locality=False)
        assert not is_local(m)

    def test_construction_rejects_with_diagnostic(self):
        with pytest.raises(LocalityError, match="agent a"):
            EpistemicModel(
                ["u", "v"], {"a": [["u", "v"]], "b": [["u"], ["v"]]},
                {"u": {P_A}, "v": set()})


class TestInterpretedSystem:
    def test_square_is_one(self):
        assert is_interpreted_system(sq_model())

    def test_byz_update_is_not_one(self):
        m = pattern_update(byz_initial_model(), byz_pattern())
        # oracle: b owns no atom, so grouping by b-local valuation is one
        # block, but b's partition has three
        b_blocks = m.relations["b"]
        assert len(b_blocks) == 3
        locals_seen = {frozenset(p for p in m.valuation[w] if p.owner == "b")
                       for w in m.worlds}
        assert locals_seen == {frozenset()}
        assert not is_interpreted_system(m)

    def test_single_world(self):
        m = EpistemicModel(["w"], {"a": [["w"]], "b": [["w"]]}, {"w": {P_A}})
        assert is_interpreted_system(m)


class TestGroupRelation:
    def intersection_oracle(self, model, group):
        # brute force: worlds related iff they share a block for every member
        pairs = {
            (u, v)
            for u in model.worlds for v in model.worlds
            if all(model.block_of(a, u) == model.block_of(a, v) for a in group)
        }
        blocks = []
        seen = set()
        for w in model.worlds:
            if w in seen:
                continue
            cell = frozenset(v for v in model.worlds if (w, v) in pairs)
            blocks.append(cell)
            seen |= cell
        return set(blocks)

    def test_square_full_group_is_identity(self):
        sq = sq_model()
        got = set(group_relation(sq, {"a", "b"}))
        assert got == self.intersection_oracle(sq, {"a", "b"})
        assert got == {frozenset({w}) for w in sq.worlds}

    def test_singleton_group_is_the_agent_partition(self):
        sq = sq_model()
        assert group_relation(sq, {"a"}) == sq.relations["a"]

    def test_byz_update_full_group(self):
        m = pattern_update(byz_initial_model(), byz_pattern())
        got = set(group_relation(m, {"a", "b"}))
        assert got == self.intersection_oracle(m, {"a", "b"})
        assert len(got) == 4

    def test_empty_group_rejected(self):
        with pytest.raises(ValueError):
            group_relation(sq_model(), set())

    def test_unknown_agent_rejected(self):
        with pytest.raises(UnknownNameError):
            group_relation(sq_model(), {"z"})

    def test_union_group_refines_parts(self):
        rng = random.Random(11)
        for _ in range(20):
            m = random_local_model(rng)
            agents = list(m.agents)
            for size in range(1, len(agents)):
                for part in combinations(agents, size):
                    whole = group_relation(m, agents)
                    coarse = group_relation(m, part)
                    coarse_ix = {w: i for i, blk in enumerate(coarse) for w in blk}
                    for blk in whole:
                        assert len({coarse_ix[w] for w in blk}) == 1


class TestModelBasics:
    def test_duplicate_worlds_rejected(self):
        with pytest.raises(ValueError):
            EpistemicModel(["w", "w"], {"a": [["w"]]}, {})

    def test_relations_must_partition(self):
        with pytest.raises(ValueError):
            EpistemicModel(["u", "v"], {"a": [["u"]]}, {})
        with pytest.raises(ValueError):
            EpistemicModel(["u", "v"], {"a": [["u", "v"], ["v"]]}, {})

    def test_unknown_atom_owner_rejected(self):
        with pytest.raises(UnknownNameError):
            EpistemicModel(["w"], {"a": [["w"]]}, {"w": {Atom("p", "z")}})

    def test_world_cap(self, monkeypatch):
        monkeypatch.setenv("EPIUPDATE_MAX_WORLDS", "10")
        with pytest.raises(ModelCapError):
            full_interpreted_system([P_A, P_B, Q_A, R_B])

    def test_pointed_model_validates_point(self):
        sq = sq_model()
        PointedModel(sq, "11")
        with pytest.raises(UnknownNameError):
            PointedModel(sq, "99")

    def test_world_names_dotted(self):
        m = pattern_update(byz_initial_model(), byz_pattern())
        names = {world_name(w) for w in m.worlds}
        assert names == {"w1.I", "w1.Rab", "w2.I", "w2.Rab"}
        assert m.world_named("w1.Rab") in m.worlds
        with pytest.raises(UnknownNameError):
            m.world_named("nope")
