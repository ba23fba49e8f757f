from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foonbridge.errors import FoonStructureError, FoonSyntaxError
from foonbridge.foon import (
    HandAnnotation,
    Subgraph,
    parse_foon,
    serialize_foon,
)
from foonbridge.kb import kb_text
from helpers import random_subgraph

MINIMAL = (
    "#FOONv1 demo\n"
    "O\tbracket\t0\n"
    "S\tloose\n"
    "O\tstrut profile\t0\n"
    "M\tpick-and-place\n"
    "O\tbracket\t0\n"
    "S\taligned\n"
    "S\ton\tstrut profile\n"
    "//\n"
)


def test_parse_minimal_document():
    graph = parse_foon(MINIMAL)
    assert graph.name == "demo"
    assert len(graph.units) == 1
    unit = graph.units[0]
    assert [n.label for n in unit.inputs] == ["bracket", "strut profile"]
    assert unit.motion.label == "pick-and-place"
    assert [n.label for n in unit.outputs] == ["bracket"]
    assert unit.outputs[0].states[1].related_object == "strut profile"
    distinct_nodes = {n.identity() for n in graph.iter_nodes()}
    assert len(distinct_nodes) == 3


def test_parse_kb_file_unit_and_motion_sequence():
    graph = parse_foon(kb_text("industrial_assembly"))
    assert len(graph.units) == 4
    assert list(graph.motion_labels()) == [
        "pick-and-place",
        "pick-and-place",
        "pick-and-place",
        "screw",
    ]
    assert [unit.unit_index for unit in graph.units] == [0, 1, 2, 3]
    # one hand record per unit in the shipped file
    assert all(len(unit.hands) == 1 for unit in graph.units)


def test_state_before_any_object_is_a_syntax_error():
    text = "#FOONv1 demo\nS\tloose\nO\tbracket\t0\nM\tmove\n//\n"
    with pytest.raises(FoonSyntaxError) as error:
        parse_foon(text)
    assert error.value.line == 2


def test_unknown_record_tag_is_an_error():
    with pytest.raises(FoonSyntaxError, match="unknown record tag"):
        parse_foon("#FOONv1 demo\nQ\tbracket\n//\n")


def test_missing_header_is_an_error():
    with pytest.raises(FoonSyntaxError, match="header"):
        parse_foon("O\tbracket\t0\nM\tmove\n//\n")


def test_missing_terminator_is_a_structure_error():
    with pytest.raises(FoonStructureError, match="terminator"):
        parse_foon("#FOONv1 demo\nO\tbracket\t0\nM\tmove\n")


def test_unit_without_motion_is_a_structure_error():
    with pytest.raises(FoonStructureError, match="motion"):
        parse_foon("#FOONv1 demo\nO\tbracket\t0\n//\n")


def test_second_motion_is_a_syntax_error():
    with pytest.raises(FoonSyntaxError, match="second motion"):
        parse_foon("#FOONv1 demo\nO\ta\t0\nM\tmove\nM\tmove\n//\n")


def test_hand_before_motion_is_a_syntax_error():
    with pytest.raises(FoonSyntaxError, match="hand record before motion"):
        parse_foon("#FOONv1 demo\nO\ta\t0\nH\tright-hand\nM\tmove\n//\n")


def test_hand_after_outputs_is_a_syntax_error():
    text = "#FOONv1 demo\nO\ta\t0\nM\tmove\nO\tb\t0\nH\tright-hand\n//\n"
    with pytest.raises(FoonSyntaxError, match="hand record after output"):
        parse_foon(text)


def test_bad_goal_flag_is_a_syntax_error():
    with pytest.raises(FoonSyntaxError, match="goal flag"):
        parse_foon("#FOONv1 demo\nO\ta\t2\nM\tmove\n//\n")


def test_comments_and_blank_lines_outside_units_are_ignored():
    text = "#FOONv1 demo\n# a comment\n\nO\ta\t0\nM\tmove\n//\n\n# trailing\n"
    assert len(parse_foon(text).units) == 1


def test_comment_inside_unit_is_an_error():
    with pytest.raises(FoonSyntaxError, match="comment inside"):
        parse_foon("#FOONv1 demo\nO\ta\t0\n# nope\nM\tmove\n//\n")


def test_serialize_empty_subgraph_is_header_only():
    assert serialize_foon(Subgraph("empty")) == "#FOONv1 empty\n"


def test_serialize_places_hand_records_between_motion_and_outputs():
    unit = parse_foon(MINIMAL).units[0]
    with_hands = Subgraph(
        "demo",
        (
            type(unit)(
                inputs=unit.inputs,
                outputs=unit.outputs,
                motion=unit.motion,
                hands=(HandAnnotation("right-hand", "bracket"),),
                unit_index=0,
            ),
        ),
    )
    lines = serialize_foon(with_hands).splitlines()
    h_index = lines.index("H\tright-hand\tbracket")
    m_index = next(i for i, line in enumerate(lines) if line.startswith("M\t"))
    first_output = next(
        i for i, line in enumerate(lines) if i > m_index and line.startswith("O\t")
    )
    assert m_index < h_index < first_output


def test_kb_files_roundtrip_to_identical_bytes():
    for name in ("industrial_assembly", "industrial_disassembly"):
        original = kb_text(name)
        assert serialize_foon(parse_foon(original)) == original


def test_roundtrip_structural_equality_seeded():
    for seed in range(200):
        graph = random_subgraph(random.Random(seed))
        assert parse_foon(serialize_foon(graph)) == graph


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_roundtrip_structural_equality_property(seed):
    graph = random_subgraph(random.Random(seed))
    assert parse_foon(serialize_foon(graph)) == graph


def test_serialize_is_byte_deterministic():
    graph = random_subgraph(random.Random(7))
    assert serialize_foon(graph) == serialize_foon(graph)
