"""Acceptance suite: one test per shipped criterion, each timed and reported.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Random families are seeded, so runs are reproducible.
"""
import random
import time

from epiupdate import (
    ActionUpdate, Atom, MultiPointedActionModel, Neg, PointedModel, Var, DKnow,
    action_update, announce, bisimilar, check_circular_chain, disj,
    find_equivalent_pattern, fresh_variable_counterexample, dual_knows,
    history_start, history_update, iff, induced_action_model,
    is_interpreted_system, isomorphic, iunf_translate, is_iunf,
    minimize, models_bisimilar, pattern_update, satisfies, valid_on,
    whether_announce, witness_round, knows,
)
from epiupdate.fixtures import (
    byz_initial_model, byz_pattern, immediate_snapshot, reveal_base_model,
    sq_model, P_A, P_B, Q_A,
)
from epiupdate.search import candidate_patterns

from genlib import (
    model_atoms, random_interpreted_system, random_local_model,
    random_pattern, random_pattern_formula, random_static_formula,
)

SEED = 20260808


def graph(name, pattern):
    return next(g for g in pattern.graphs if g.name == name)


def report(number, label, started, budget):
    elapsed = time.perf_counter() - started
    print(f"ACCEPTANCE {number:2d} PASS  {label}  ({elapsed:.2f}s < {budget}s)")
    assert elapsed < budget, f"criterion {number} exceeded its {budget}s budget"


def test_01_send_maybe_round_equals_induced_product():
    t0 = time.perf_counter()
    m = byz_initial_model()
    byz = byz_pattern()
    left = pattern_update(m, byz)
    right = action_update(m, induced_action_model(byz, [P_A]))

    assert len(left.worlds) == len(right.worlds) == 4
    assert isomorphic(left, right)

    i, rab = graph("I", byz), graph("Rab", byz)
    # the uncertainty edge for b survives only in the no-delivery column;
    # a's edges pair the two columns of each source world
    assert set(left.relations["b"]) == {
        frozenset({("w1", i), ("w2", i)}),
        frozenset({("w1", rab)}),
        frozenset({("w2", rab)}),
    }
    assert set(left.relations["a"]) == {
        frozenset({("w1", i), ("w1", rab)}),
        frozenset({("w2", i), ("w2", rab)}),
    }
    yes = frozenset({P_A})
    assert set(right.relations["b"]) == {
        frozenset({("w1", (i, yes)), ("w2", (i, frozenset()))}),
        frozenset({("w1", (rab, yes))}),
        frozenset({("w2", (rab, frozenset()))}),
    }
    report(1, "send-maybe round isomorphic to its induced action product", t0, 1)


def test_02_snapshot_growth_law_and_circularity():
    t0 = time.perf_counter()
    m = sq_model()
    isp = immediate_snapshot()
    for n in range(7):
        assert len(m.worlds) == 4 * 3 ** n
        assert check_circular_chain(m)
        if n < 6:
            m = pattern_update(m, isp)
    report(2, "|Sq after n snapshot rounds| = 4*3^n and stays a circular chain, n <= 6",
           t0, 30)


def test_03_second_round_refutation_with_distinguishing_formula():
    t0 = time.perf_counter()
    sq = sq_model()
    isp = immediate_snapshot()
    m1 = pattern_update(sq, isp)
    m2 = pattern_update(m1, isp)
    prod = action_update(m1, induced_action_model(isp, [P_A, P_B]))

    assert not models_bisimilar(m2, prod)

    u, rba = graph("U", isp), graph("Rba", isp)
    f = dual_knows("a", dual_knows("b", Neg(Var(P_A))))
    assert satisfies(m2, (("11", u), rba), f) is False
    assert satisfies(prod, (("11", u), (rba, frozenset({P_A, P_B}))), f) is True
    report(3, "two snapshot rounds differ from round-then-induced-product, "
              "witnessed by hK a hK b ~p_a", t0, 5)


def _sample_family(count):
    rng = random.Random(SEED)
    family = []
    for _ in range(count):
        m = random_interpreted_system(rng, max_agents=3, max_atoms_per_agent=2)
        p = random_pattern(rng, m.agents, max_graphs=8)
        family.append((m, p))
    return family


def test_04_pattern_rounds_match_induced_models_on_systems():
    t0 = time.perf_counter()
    family = _sample_family(200)
    for m, p in family:
        atoms = model_atoms(m)
        left = pattern_update(m, p)
        right = action_update(m, induced_action_model(p, atoms))
        assert models_bisimilar(left, right)
    report(4, "200 random interpreted systems: pattern round bisimilar to "
              "induced product", t0, 60)


def test_05_no_pattern_matches_announcements_and_size_bound():
    t0 = time.perf_counter()
    sq = sq_model()
    u1 = announce(disj(Var(P_A), Var(P_B)), sq.agents)
    target1 = ActionUpdate(MultiPointedActionModel(u1, frozenset(u1.actions)))
    assert find_equivalent_pattern([PointedModel(sq, "11")], target1) is None

    reveal = reveal_base_model()
    u2 = whether_announce(Var(P_A), reveal.agents)
    target2 = ActionUpdate(MultiPointedActionModel(u2, frozenset(u2.actions)))
    assert find_equivalent_pattern([PointedModel(reveal, "11")], target2) is None

    isp = immediate_snapshot()
    twice = pattern_update(pattern_update(sq, isp), isp)
    sizes = [len(pattern_update(sq, p).worlds)
             for p in candidate_patterns(sq.agents, None)]
    assert len(sizes) == 15
    assert max(sizes) == 16
    assert len(minimize(twice).worlds) == 36
    report(5, "all 15 two-agent patterns fail both announcement targets; "
              "max single-round size 16 < 36 minimal", t0, 30)


def test_06_fresh_variable_refutation():
    t0 = time.perf_counter()
    u = induced_action_model(byz_pattern(), [P_A])
    left, right = fresh_variable_counterexample(u, [P_A, Q_A])

    assert not models_bisimilar(left.model, right.model)
    # pattern side: b-edge only in the no-delivery column
    assert sorted(len(b) for b in left.model.relations["b"]) == [1, 1, 2]
    # action side: the never-firing components leave b-edges in both columns
    assert len(right.model.worlds) == 4
    assert sorted(len(b) for b in right.model.relations["b"]) == [2, 2]
    report(6, "fresh-variable base separates send-maybe from every "
              "fixed-vocabulary action model", t0, 1)


def test_07_history_rounds_close_systems_and_match_chains():
    from epiupdate.history import induced_round_product, realized_history_atoms
    t0 = time.perf_counter()
    family = _sample_family(200)
    for m, p in family:
        atoms = frozenset(model_atoms(m))
        h = history_start(m)
        chain = m
        for n in range(1, 4):
            h = history_update(h, p)
            assert is_interpreted_system(h.model)
            chain = induced_round_product(
                chain, p, atoms | realized_history_atoms(chain), m, n - 1)
            assert models_bisimilar(h.model, chain)
    report(7, "200 random systems, 3 rounds each: round semantics keeps "
              "interpreted systems and matches the induced-model chain", t0, 120)


def test_08_normal_form_translation_sound_and_structural():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 1)
    done = 0
    while done < 200:
        m = random_local_model(rng, max_agents=2, max_atoms_per_agent=2,
                               max_worlds=5)
        pats = [random_pattern(rng, m.agents, max_graphs=3) for _ in range(2)]
        f = random_pattern_formula(rng, model_atoms(m), m.agents, pats,
                                   dyn_depth=3, depth=2)
        t = iunf_translate(f)
        assert is_iunf(t)
        for w in m.worlds:
            assert satisfies(m, w, f) == satisfies(m, w, t)
        done += 1
    report(8, "200 random pattern-only formulas: normal form is equivalent "
              "at every world and structurally flat", t0, 60)


def test_09_induced_model_size_formula():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 2)
    pool = [P_A, P_B, Q_A, Atom("r", "b")]
    for _ in range(20):
        agents = ("a", "b", "c")[: rng.randint(2, 3)]
        p = random_pattern(rng, agents, max_graphs=8)
        atoms = [q for q in pool[: rng.randint(0, 4)] if q.owner in agents]
        u = induced_action_model(p, atoms)
        assert len(u.actions) == len(p.graphs) * 2 ** len(set(atoms))
    report(9, "20 random pattern/atom-set pairs: induced model has exactly "
              "|graphs| * 2^|atoms| actions", t0, 30)


def test_10_group_knowledge_validities_and_witness_round():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 3)
    formulas = []
    models = [random_local_model(rng) for _ in range(100)]
    for _ in range(20):
        sample = rng.choice(models)
        formulas.append((sample.agents,
                         random_static_formula(rng, model_atoms(sample),
                                               sample.agents, depth=2)))
    for m in models:
        for agents, f in formulas:
            if agents != m.agents:
                continue
            assert valid_on(m, iff(DKnow(frozenset(m.agents), f), f))

    # a single agent's knowledge does not collapse: find a refuting model
    found = None
    for m in models:
        for a in m.agents:
            for q in model_atoms(m):
                if q.owner != a and not valid_on(m, iff(knows(a, Var(q)), Var(q))):
                    found = (m, a, q)
                    break
            if found:
                break
        if found:
            break
    assert found is not None

    assert witness_round(induced_action_model(immediate_snapshot(),
                                              [P_A, P_B])) == 1
    report(10, "full-group knowledge collapses on 100 random models, a "
               "single agent's does not; snapshot witness round is 1", t0, 60)
