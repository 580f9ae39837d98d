import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgweno.mesh import (
    DomainBox,
    GridFunction,
    GridSpec,
    LevelTuple,
    build_index_set,
    node_coordinate,
    restrict_function,
)


def test_domain_rejects_empty_extent():
    with pytest.raises(ValueError):
        DomainBox((0.0, 1.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        DomainBox((0.0,), (1.0,))


def test_level_tuple_rejects_negative():
    with pytest.raises(ValueError):
        LevelTuple((0, -1))


def test_grid_spec_sizes(square):
    spec = GridSpec(square, 10, (2, 1))
    assert spec.shape == (40, 20)
    assert spec.spacing == pytest.approx((0.1, 0.2))
    assert spec.root_spacing == pytest.approx((0.4, 0.4))
    assert spec.node_count() == 41 * 21


def test_grid_function_shape_checked(small_grid):
    with pytest.raises(ValueError):
        GridFunction(small_grid, np.zeros((10, 10)))


def test_index_set_2d_nl3():
    iset = build_index_set(2, 3)
    plus = {lv.levels for lv, c in iset if c == 1}
    minus = {lv.levels for lv, c in iset if c == -1}
    assert plus == {(0, 3), (1, 2), (2, 1), (3, 0)}
    assert minus == {(0, 2), (1, 1), (2, 0)}
    assert len(iset) == 7


def test_index_set_2d_nl1():
    iset = build_index_set(2, 1)
    assert [(lv.levels, c) for lv, c in iset] == [((0, 0), -1), ((0, 1), 1), ((1, 0), 1)]
    assert sum(c for _, c in iset) == 1


def test_index_set_3d_nl3():
    iset = build_index_set(3, 3)
    assert len(iset) == 19
    # brute-force enumeration of the three layers
    layers = {3: 1, 2: -2, 1: 1}
    expected = {
        t: layers[sum(t)]
        for t in itertools.product(range(4), repeat=3)
        if sum(t) in layers
    }
    assert {lv.levels: c for lv, c in iset} == expected
    assert sum(c for _, c in iset) == 1


def test_index_set_ordering_is_lexicographic():
    levels = [lv.levels for lv in build_index_set(3, 4).levels()]
    assert levels == sorted(levels)


@pytest.mark.parametrize("dim,nl", [(4, 2), (1, 2), (2, 0), (3, 1)])
def test_index_set_errors(dim, nl):
    with pytest.raises(ValueError):
        build_index_set(dim, nl)


@given(st.integers(min_value=2, max_value=9))
def test_index_set_cardinality(nl):
    assert len(build_index_set(2, nl)) == 2 * nl + 1
    iset3 = build_index_set(3, nl)
    assert len(iset3) == math.comb(nl + 2, 2) + math.comb(nl + 1, 2) + math.comb(nl, 2)
    assert sum(c for _, c in iset3) == 1
    assert sum(c for _, c in build_index_set(2, nl)) == 1


def test_node_coordinate_examples(square):
    spec = GridSpec(square, 10, (0, 0))
    assert node_coordinate(spec, (0, 0)) == (-2.0, -2.0)
    assert node_coordinate(spec, (5, 0)) == pytest.approx((0.0, -2.0), abs=1e-15)
    spec = GridSpec(DomainBox.cube(0.0, 2 * np.pi, 2), 20, (2, 0))
    assert node_coordinate(spec, (1, 0)) == pytest.approx((2 * np.pi / 80, 0.0), rel=1e-15)


def test_node_coordinate_out_of_range(square):
    spec = GridSpec(square, 10, (0, 0))
    with pytest.raises(IndexError):
        node_coordinate(spec, (10, 0))
    with pytest.raises(IndexError):
        node_coordinate(spec, (0,))


def test_restrict_examples(square):
    spec = GridSpec(square, 10, (0, 0))
    zero = restrict_function(lambda x, y: 0.0, spec)
    assert np.all(zero.values == 0.0)
    u = restrict_function(lambda x, y: np.sin(np.pi / 2 * (x + y)), spec)
    assert u.values[0, 0] == pytest.approx(0.0, abs=1e-15)
    spec = GridSpec(DomainBox.cube(0.0, 1.0, 2), 4, (1, 0))
    u = restrict_function(lambda x, y: x + 0 * y, spec)
    assert u.values[3, 0] == 3 / 8


@settings(max_examples=30)
@given(
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=3),
    st.data(),
)
def test_restrict_reproduces_function_at_nodes(l1, l2, data):
    spec = GridSpec(DomainBox.cube(-1.0, 3.0, 2), 4, (l1, l2))
    i = data.draw(st.integers(0, spec.shape[0] - 1))
    j = data.draw(st.integers(0, spec.shape[1] - 1))

    def f(x, y):
        return np.cos(x) * y**2

    u = restrict_function(f, spec)
    x, y = node_coordinate(spec, (i, j))
    assert u.values[i, j] == f(x, y)
