"""Shared test utilities: a generator of random valid subgraphs and small
oracles used across test modules."""

from __future__ import annotations

import random

from foonbridge.foon import (
    HAND_ACTORS,
    FunctionalUnit,
    HandAnnotation,
    MotionNode,
    ObjectNode,
    StateDescriptor,
    Subgraph,
)

LABEL_POOL = ("widget", "gear", "plate", "bolt", "clamp", "rail", "pin", "shim")
STATE_POOL = ("loose", "aligned", "inserted", "detached", "clean", "oiled")
MOTION_POOL = ("pick-and-place", "screw", "unscrew", "flip", "slide")


def random_subgraph(rng: random.Random, name: str | None = None, max_units: int = 5) -> Subgraph:
    """A random subgraph that always passes validation.

    Inputs are drawn from nodes already produced or from fresh initial
    nodes; outputs always carry never-seen identities, so the chaining
    rule holds by construction.
    """
    labels = rng.sample(LABEL_POOL, rng.randint(2, 5))
    used_identities: set = set()
    world: list[ObjectNode] = []

    def fresh_node(goal_allowed: bool = False) -> ObjectNode:
        for _ in range(100):
            label = rng.choice(labels)
            states = []
            for _ in range(rng.randint(0, 2)):
                related = rng.choice(labels) if rng.random() < 0.4 else None
                states.append(StateDescriptor(rng.choice(STATE_POOL), related))
            states.append(StateDescriptor(f"s{rng.randrange(10_000)}"))
            seen = set()
            states = tuple(s for s in states if not (s.key() in seen or seen.add(s.key())))
            node = ObjectNode(
                label, states, is_goal=goal_allowed and rng.random() < 0.15
            )
            if node.identity() not in used_identities:
                used_identities.add(node.identity())
                return node
        raise RuntimeError("could not build a fresh node")

    units = []
    for index in range(rng.randint(1, max_units)):
        inputs: list[ObjectNode] = []
        for _ in range(rng.randint(0, 2)):
            if world and rng.random() < 0.6:
                candidate = rng.choice(world)
                if candidate.identity() not in {n.identity() for n in inputs}:
                    inputs.append(candidate)
            else:
                inputs.append(fresh_node())
        outputs = [fresh_node(goal_allowed=True) for _ in range(rng.randint(0, 3))]
        if not inputs and not outputs:
            outputs.append(fresh_node())

        hands = []
        if inputs and rng.random() < 0.6:
            grasped = rng.choice(inputs).label if rng.random() < 0.7 else None
            hands.append(HandAnnotation(rng.choice(HAND_ACTORS), grasped))

        units.append(
            FunctionalUnit(
                inputs=tuple(inputs),
                outputs=tuple(outputs),
                motion=MotionNode(rng.choice(MOTION_POOL)),
                hands=tuple(hands),
                unit_index=index,
            )
        )
        world.extend(outputs)

    return Subgraph(name or f"random_{rng.randrange(10_000)}", tuple(units))


def replay_world(graph: Subgraph) -> set:
    """Independent fold of the unit chain: identities true after the run."""
    state = {node.identity() for node in graph.initial_nodes()}
    for unit in graph.units:
        state -= {node.identity() for node in unit.inputs}
        state |= {node.identity() for node in unit.outputs}
    return state


def lcs_length(a: list, b: list) -> int:
    """Longest common subsequence length, the in-order recovery count."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]
