"""Hypothesis property tests for the pure combinatorial layer."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from crosslap.core import BOTTOM, TOP, close, crossfaces, make_crossimplex, validate
from crosslap.homology import boundary_matrix

vertex_lists = st.lists(st.integers(0, 9), unique=True, max_size=4)


@st.composite
def oriented_crossimplices(draw):
    top = draw(vertex_lists)
    bottom = draw(vertex_lists)
    if not top and not bottom:
        top = [draw(st.integers(0, 9))]
    return top, bottom


@st.composite
def seeds(draw):
    return [
        make_crossimplex(*draw(oriented_crossimplices()))[0]
        for _ in range(draw(st.integers(1, 5)))
    ]


@given(oriented_crossimplices())
def test_canonicalization_is_idempotent_with_trivial_sign(tb):
    top, bottom = tb
    a, _ = make_crossimplex(top, bottom)
    again, sign = make_crossimplex(a.top, a.bottom)
    assert again == a and sign == 1


@given(oriented_crossimplices())
def test_swapping_two_vertices_flips_the_sign(tb):
    top, bottom = tb
    _, sign = make_crossimplex(top, bottom)
    if len(top) >= 2:
        swapped = [top[1], top[0]] + top[2:]
        assert make_crossimplex(swapped, bottom)[1] == -sign
    if len(bottom) >= 2:
        swapped = [bottom[1], bottom[0]] + bottom[2:]
        assert make_crossimplex(top, swapped)[1] == -sign


@given(oriented_crossimplices())
def test_face_counts_match_the_grade(tb):
    a, _ = make_crossimplex(*tb)
    k, l = a.grade
    faces = crossfaces(a)
    tops = sum(1 for f in faces if f[2] == TOP)
    bottoms = sum(1 for f in faces if f[2] == BOTTOM)
    if a.dim == 0:
        assert not faces
    else:
        assert tops == (k + 1 if k >= 0 else 0)
        assert bottoms == (l + 1 if l >= 0 else 0)


@settings(max_examples=50)
@given(seeds())
def test_closure_is_idempotent_and_valid(seed):
    x = close(seed)
    assert validate(x) == []
    assert close(list(x)).grades == x.grades


@settings(max_examples=30, deadline=None)
@given(seeds())
def test_boundaries_square_to_zero(seed):
    x = close(seed)
    for k, l in x.grades_present():
        if k >= 1:
            outer = boundary_matrix(x, (k, l), TOP).tocsr(np.int64)
            inner = boundary_matrix(x, (k - 1, l), TOP).tocsr(np.int64)
            assert (inner @ outer).nnz == 0
        if l >= 1:
            outer = boundary_matrix(x, (k, l), BOTTOM).tocsr(np.int64)
            inner = boundary_matrix(x, (k, l - 1), BOTTOM).tocsr(np.int64)
            assert (inner @ outer).nnz == 0
