import random
from fractions import Fraction

import pytest

from copekit.planar import convex_hull, nested_triangle, point_in_hull


def F(a, b=1):
    return Fraction(a, b)


SQUARE = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))]


def test_convex_hull_orders_ccw_and_drops_interior():
    pts = SQUARE + [(F(1, 2), F(1, 2)), (F(1, 2), F(0))]
    hull = convex_hull(pts)
    assert len(hull) == 4
    assert set(hull) == set(SQUARE)


def test_point_in_hull():
    hull = convex_hull(SQUARE)
    assert point_in_hull((F(1, 2), F(1, 2)), hull)
    assert point_in_hull((F(0), F(0)), hull)
    assert not point_in_hull((F(2), F(0)), hull)


def test_inner_triangle_returned_directly():
    inner = [(F(1, 4), F(1, 4)), (F(3, 4), F(1, 4)), (F(1, 2), F(3, 4))]
    tri = nested_triangle(inner, SQUARE)
    assert tri is not None
    assert set(tri) == set(inner)


def test_small_square_in_large_square_has_nested_triangle():
    inner = [
        (F(2, 5), F(2, 5)),
        (F(3, 5), F(2, 5)),
        (F(3, 5), F(3, 5)),
        (F(2, 5), F(3, 5)),
    ]
    tri = nested_triangle(inner, SQUARE)
    assert tri is not None
    _assert_nested(inner, SQUARE, tri)


def test_midpoint_square_admits_no_triangle():
    # The inner square on the edge midpoints fills half the outer square's
    # area; the largest triangle inside the square also has half the area,
    # so no triangle fits strictly between them.
    inner = [(F(1, 2), F(0)), (F(1), F(1, 2)), (F(1, 2), F(1)), (F(0), F(1, 2))]
    assert nested_triangle(inner, SQUARE) is None


def test_shrunk_midpoint_square_admits_triangle():
    # A concentric diamond shrunk by factor s nests inside a triangle iff
    # s <= 2/3 (see the threshold test below); 2/5 and 9/10 sit clearly on
    # either side.
    center = (F(1, 2), F(1, 2))
    diamond = [(F(1, 2), F(0)), (F(1), F(1, 2)), (F(1, 2), F(1)), (F(0), F(1, 2))]

    inner_small = [
        tuple(c + (p - c) * F(2, 5) for c, p in zip(center, pt)) for pt in diamond
    ]
    tri = nested_triangle(inner_small, SQUARE)
    assert tri is not None
    _assert_nested(inner_small, SQUARE, tri)

    inner_large = [
        tuple(c + (p - c) * F(9, 10) for c, p in zip(center, pt)) for pt in diamond
    ]
    assert nested_triangle(inner_large, SQUARE) is None


def test_diamond_family_critical_threshold():
    # For a concentric diamond shrunk by factor s inside the unit square,
    # a nested triangle exists iff s <= 2/3; the critical triangle is
    # ((2/3,0),(1,1),(0,2/3)) up to symmetry.  Exercises exact arithmetic
    # at the boundary of feasibility.
    center = (F(1, 2), F(1, 2))
    diamond = [(F(1, 2), F(0)), (F(1), F(1, 2)), (F(1, 2), F(1)), (F(0), F(1, 2))]

    def shrunk(factor):
        return [
            tuple(c + (p - c) * factor for c, p in zip(center, pt)) for pt in diamond
        ]

    at_threshold = shrunk(F(2, 3))
    tri = nested_triangle(at_threshold, SQUARE)
    assert tri is not None
    _assert_nested(at_threshold, SQUARE, tri)

    below = shrunk(F(2, 3) - F(1, 1000))
    tri = nested_triangle(below, SQUARE)
    assert tri is not None
    _assert_nested(below, SQUARE, tri)

    assert nested_triangle(shrunk(F(2, 3) + F(1, 1000)), SQUARE) is None


def test_outer_triangle_short_circuit():
    outer = [(F(0), F(0)), (F(4), F(0)), (F(0), F(4))]
    inner = [(F(1), F(1)), (F(2), F(1)), (F(1), F(2)), (F(3, 2), F(3, 2))]
    tri = nested_triangle(inner, outer)
    assert tri is not None
    _assert_nested(inner, outer, tri)


def test_degenerate_input_rejected():
    with pytest.raises(ValueError):
        nested_triangle([(F(0), F(0)), (F(1), F(1))], SQUARE)


def _assert_nested(inner, outer, tri):
    outer_hull = convex_hull(outer)
    tri_hull = convex_hull(list(tri))
    assert len(tri_hull) == 3
    for v in tri:
        assert point_in_hull(v, outer_hull)
    for p in inner:
        assert point_in_hull(p, tri_hull)


def test_random_returned_triangles_always_verify():
    rng = random.Random(31)
    found = 0
    for _ in range(120):
        outer_pts = [
            (Fraction(rng.randint(-8, 8), rng.randint(1, 3)),
             Fraction(rng.randint(-8, 8), rng.randint(1, 3)))
            for _ in range(rng.randint(3, 7))
        ]
        outer = convex_hull(outer_pts)
        if len(outer) < 3:
            continue
        # Inner points: convex combinations of outer points.
        inner = []
        for _ in range(rng.randint(3, 6)):
            weights = [rng.randint(0, 4) for _ in outer]
            total = sum(weights) or 1
            x = sum(w * p[0] for w, p in zip(weights, outer)) / total
            y = sum(w * p[1] for w, p in zip(weights, outer)) / total
            inner.append((x, y))
        if len(convex_hull(inner)) < 3:
            continue
        tri = nested_triangle(inner, outer)
        if tri is not None:
            _assert_nested(inner, outer, tri)
            found += 1
    assert found > 10  # the generator produces plenty of nestable instances
