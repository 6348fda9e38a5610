"""Built-in agents, atoms, models and patterns used throughout the package.

Two agents a and b; Sq is the interpreted system where each knows only its
own bit; Byz is the send-maybe pattern of the Byzantine generals round
(a's message to b may be lost); IS is the two-agent immediate snapshot.
"""
from __future__ import annotations

from .actions import skip_model
from .comm import CommPattern, identity_graph, make_graph, universal_graph
from .models import Atom, EpistemicModel, full_interpreted_system

AGENTS_AB = ("a", "b")

P_A = Atom("p", "a")
P_B = Atom("p", "b")
Q_A = Atom("q", "a")


def sq_model() -> EpistemicModel:
    """Four-world square: a knows p_a, b knows p_b, nothing else."""
    return full_interpreted_system([P_A, P_B])


def byz_initial_model() -> EpistemicModel:
    """Two worlds differing on p_a; b cannot tell them apart."""
    return EpistemicModel(
        ["w1", "w2"],
        {"a": [["w1"], ["w2"]], "b": [["w1", "w2"]]},
        {"w1": {P_A}, "w2": set()},
        agents=AGENTS_AB,
    )


def byz_pattern(agents=AGENTS_AB) -> CommPattern:
    """Send-maybe: either nothing arrives or a's message reaches b."""
    return CommPattern(
        [identity_graph(agents), make_graph(agents, [("a", "b")])], name="Byz")


def immediate_snapshot(agents=AGENTS_AB) -> CommPattern:
    """Two-agent immediate snapshot: a first, b first, or simultaneous."""
    if len(agents) != 2:
        raise ValueError("the immediate snapshot fixture is for two agents")
    x, y = sorted(agents)
    return CommPattern(
        [make_graph(agents, [(x, y)]),
         make_graph(agents, [(y, x)]),
         universal_graph(agents)],
        name="IS")


def identity_pattern(agents=AGENTS_AB) -> CommPattern:
    return CommPattern([identity_graph(agents)], name="I")


def universal_pattern(agents=AGENTS_AB) -> CommPattern:
    return CommPattern([universal_graph(agents)], name="U")


def skip(agents=AGENTS_AB):
    return skip_model(agents)


def reveal_base_model() -> EpistemicModel:
    """a knows p_a and q_a; b knows neither."""
    return full_interpreted_system([P_A, Q_A], agents=AGENTS_AB)
