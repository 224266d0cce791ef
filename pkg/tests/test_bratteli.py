import itertools

import pytest

from toepkit.bratteli import (
    Edge,
    OrderedBratteliDiagram,
    from_directive,
    fully_connected_window,
    has_equal_path_numbers,
    parse_diagram,
    properly_ordered_window,
    read_directive,
    resolve_path,
    serialize_diagram,
    successor_path,
    telescope,
)
from toepkit.sadic import contract, serialize_directive, structural_flags
from toepkit.constructions import (
    AutExampleParams,
    gen_cyclic_aut_example,
    gen_flip_example,
    p4,
)


def small_diagram():
    """Root, two middle vertices, one top vertex with a 4-edge fiber."""
    return OrderedBratteliDiagram(
        [("o",), ("a", "b"), ("t",)],
        [
            (Edge(0, 0, 0, "x"), Edge(0, 0, 1, "y"), Edge(0, 1, 0, "z")),
            (Edge(0, 0, 0), Edge(1, 0, 1), Edge(0, 0, 2), Edge(1, 0, 3)),
        ],
    )


def test_validation_rejects_empty_fibers():
    with pytest.raises(ValueError):
        OrderedBratteliDiagram(
            [("o",), ("a", "b")],
            [(Edge(0, 0, 0),)],  # vertex b has no incoming edge
        )
    with pytest.raises(ValueError):
        OrderedBratteliDiagram(
            [("o",), ("a",)],
            [(Edge(0, 0, 0), Edge(0, 0, 0))],  # duplicated order index
        )


def test_telescope_identity():
    b = from_directive(p4(), 3)
    t = telescope(b, [0, 1, 2, 3])
    assert t.vertex_levels == b.vertex_levels
    for lev_t, lev_b in zip(t.edge_levels, b.edge_levels):
        assert sorted((e.source, e.target, e.order) for e in lev_t) == \
            sorted((e.source, e.target, e.order) for e in lev_b)


def test_telescope_multiplies_fibers():
    b = from_directive(p4(), 3)
    t = telescope(b, [0, 1, 3])
    assert t.fiber_sizes(2) == [16, 16]
    assert has_equal_path_numbers(t, 1)


def test_telescope_order_matches_hand_enumeration():
    b = small_diagram()
    t = telescope(b, [0, 2])
    # paths to the top in from-the-top lexicographic order: the level-2
    # edge decides first, ties broken by the level-1 edge
    paths = []
    for e2 in sorted(b.edge_levels[1], key=lambda e: e.order):
        for e1 in sorted(b.edge_levels[0], key=lambda e: e.order):
            if e1.target == e2.source:
                paths.append((e1.order, e2.order))
    hand = {orders: rank for rank, orders in enumerate(
        sorted(paths, key=lambda p: tuple(reversed(p))))}
    got = {}
    for e in t.edge_levels[0]:
        assert e.target == 0
        got[e.order] = e.source
    assert len(got) == len(hand)
    # ranks are dense and fiber sizes match the path count
    assert sorted(got) == list(range(len(paths)))


def test_equal_path_numbers():
    assert has_equal_path_numbers(from_directive(p4(), 3), 0)
    assert has_equal_path_numbers(from_directive(p4(), 3), 1)
    uneven = OrderedBratteliDiagram(
        [("o",), ("a", "b")],
        [(Edge(0, 0, 0), Edge(0, 0, 1), Edge(0, 1, 0))],
    )
    assert not has_equal_path_numbers(uneven, 0)
    # preserved by telescoping
    b = from_directive(p4(), 4)
    t = telescope(b, [0, 2, 4])
    for n in range(t.depth):
        assert has_equal_path_numbers(t, n)


def test_from_directive_shape():
    b = from_directive(p4(), 3)
    assert [len(v) for v in b.vertex_levels] == [1, 2, 2, 2]
    assert b.fiber_sizes(1) == [1, 1]       # bottom images have length 1
    assert b.fiber_sizes(2) == [4, 4]
    assert b.rank_window() == 2
    assert fully_connected_window(b)
    assert properly_ordered_window(b)


def test_read_directive_roundtrip_p4():
    d = p4()
    b = from_directive(d, 3)
    back = read_directive(b)
    for n in range(1, 4):
        assert back.level_words(n) == d.level_words(n)
    assert serialize_directive(back) == serialize_directive(d, 3)


def test_roundtrip_flip_and_cyclic():
    for d, depth in ((gen_flip_example(2).directive, 3),
                     (gen_cyclic_aut_example(AutExampleParams(n=2, depth=2)).directive, 3)):
        back = read_directive(from_directive(d, depth))
        for n in range(1, depth + 1):
            assert back.level_words(n) == d.level_words(n)


def test_diagram_roundtrip_from_read():
    # diagram -> directive -> diagram preserves fibers and orders
    b = small_diagram()
    d = read_directive(b)
    b2 = from_directive(d, b.depth)
    for n in range(1, b.depth + 1):
        assert b.fiber_sizes(n) == b2.fiber_sizes(n)
        for v in range(len(b.vertex_levels[n])):
            assert [e.source for e in b.fiber(n, v)] == \
                [e.source for e in b2.fiber(n, v)]


def test_odometer_like_single_vertex_levels():
    b = OrderedBratteliDiagram(
        [("o",), ("v",), ("w",)],
        [(Edge(0, 0, 0, "x"), Edge(0, 0, 1, "y")),
         (Edge(0, 0, 0), Edge(0, 0, 1), Edge(0, 0, 2))],
    )
    d = read_directive(b)
    assert len(d.alphabet(1)) == 1 and len(d.alphabet(2)) == 1
    assert len(d.level_word(2, 0)) == 6


def test_equal_path_number_iff_constant_length_read():
    cases = [from_directive(p4(), 3),
             small_diagram(),
             from_directive(gen_flip_example(2).directive, 3)]
    for b in cases:
        d = read_directive(b)
        for n in range(b.depth):
            cl = structural_flags(d.morphism(n)).constant_length is not None
            assert cl == has_equal_path_numbers(b, n)


def test_telescope_matches_contract_path_counts():
    d = p4()
    cuts = [0, 2, 4]
    t = telescope(from_directive(d, 4), cuts)
    c = from_directive(contract(d, cuts), 2)
    for n in range(1, 3):
        assert t.fiber_sizes(n) == c.fiber_sizes(n)


def test_successor_enumerates_paths_in_order():
    b = small_diagram()
    # all paths to the top vertex, in from-the-top lexicographic order
    brute = []
    for e2 in b.edge_levels[1]:
        for e1 in b.edge_levels[0]:
            if e1.target == e2.source:
                brute.append((e1.order, e2.order))
    brute.sort(key=lambda p: tuple(reversed(p)))
    walk = []
    orders = [0, 0]
    while orders is not None:
        edges = resolve_path(b, 0, orders)
        walk.append(tuple(e.order for e in edges))
        orders = successor_path(b, 0, orders)
    assert walk == brute
    assert properly_ordered_window(b)


def test_diagram_serialization_roundtrip():
    b = from_directive(p4(), 3)
    text = serialize_diagram(b)
    b2 = parse_diagram(text)
    assert serialize_diagram(b2) == text
    with pytest.raises(ValueError):
        parse_diagram("vertices 0: o\nedge 1: o -> q @0\n")
    with pytest.raises(ValueError) as err:
        parse_diagram("vertices 0: o\nedge one: o -> q\n")
    assert "line 2" in str(err.value)
