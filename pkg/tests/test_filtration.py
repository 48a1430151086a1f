import pytest

from gridfloer.braid import BraidWord, parse_braid
from gridfloer.complex import MINUS_FREE_ZEROED, differential, grid_complex, maslov
from gridfloer.errors import NoAxis, NotSmallConfiguration
from gridfloer.filtration import (
    axis_diagram,
    axis_grading,
    axis_levels,
    bottom_homology_report,
    bottom_states,
    filtration_level,
    filtration_violations,
    free_stabilize,
    maslov_bridge_check,
    psi_exactness,
    splitting_check,
    x4_state,
)
from gridfloer.grid import from_braid, unknot_grid
from gridfloer.homology import Window, gradings_in_window

SMALL = ["1:", "2: 1", "2: -1"]


@pytest.mark.parametrize("word", SMALL)
def test_filtration_monotone(word):
    H = axis_diagram(parse_braid(word))
    assert H.size <= 7
    assert filtration_violations(H) == 0
    assert filtration_violations(H, "minus") == 0


@pytest.mark.parametrize("word", SMALL)
def test_bottom_states_characterization(word):
    H = axis_diagram(parse_braid(word))
    ax = H.axis
    bottom = set(bottom_states(H))
    gc = grid_complex(H)
    lv = axis_levels(H)
    for i in range(gc.n_states):
        x = gc.state(i)
        in_12 = all(ax.region(c, x[c]) in (1, 2) for c in range(H.size))
        assert (x in bottom) == in_12 == (lv[i] == 0)
        if i % 11 == 0:
            assert axis_grading(H, x) == lv[i]
    assert x4_state(H) in bottom


def test_level_one_state_touches_r3():
    H = axis_diagram(BraidWord(1, ()))
    x = list(x4_state(H))
    m = H.axis.m
    # move one point of R1 up into R3 by swapping with a point of R2 above it
    c_in = next(c for c in range(1, m + 1))
    c_out = next(c for c in range(H.size) if not 1 <= c <= m)
    x[c_in], x[c_out] = x[c_out], x[c_in]
    assert axis_grading(H, tuple(x)) == 1
    assert {H.axis.region(c, x[c]) for c in range(H.size)} & {3, 4}


def test_filtration_levels_nested():
    H = axis_diagram(parse_braid("2: 1"))
    sizes = [len(filtration_level(H, j).states) for j in range(4)]
    assert sizes == sorted(sizes) and sizes[-1] == grid_complex(H).n_states


def test_no_axis():
    with pytest.raises(NoAxis):
        x4_state(unknot_grid())
    with pytest.raises(NoAxis):
        axis_grading(unknot_grid(), (1, 0))


@pytest.mark.parametrize("word,M", [("1:", -2), ("2: 1 1 1", 0)])
def test_x4(word, M):
    H = axis_diagram(parse_braid(word))
    x = x4_state(H)
    assert maslov(H, x) == M
    assert not differential(H, MINUS_FREE_ZEROED, x)


@pytest.mark.parametrize("word,top", [("1:", -2), ("2: 1", -2), ("2: -1", -4)])
def test_bottom_report(word, top):
    rep = bottom_homology_report(axis_diagram(parse_braid(word)))
    assert rep.top_rank == 1 and rep.top_M == top and rep.x4_generates
    assert set(rep.to_json()) >= {"top_M", "top_rank", "x4_generates", "sl"}


@pytest.mark.parametrize("word", ["1:", "2: 1 1 1", "2: -1 -1 -1"])
def test_maslov_bridge(word):
    assert maslov_bridge_check(parse_braid(word))


def test_splitting_on_free_stabilization():
    fs = free_stabilize(unknot_grid())
    res = splitting_check(fs, "w'")
    assert res.ok
    assert sum(h for h, _, _ in res.ranks.values()) == 4
    res = splitting_check(free_stabilize(from_braid(parse_braid("2: 1 1 1"))))
    assert res.ok


def test_splitting_preconditions():
    with pytest.raises(NotSmallConfiguration):
        splitting_check(axis_diagram(BraidWord(1, ())), 0)
    with pytest.raises(NotSmallConfiguration):
        splitting_check(free_stabilize(unknot_grid()), 3)
    with pytest.raises(NotSmallConfiguration):
        free_stabilize(axis_diagram(BraidWord(1, ())))


@pytest.mark.parametrize("word", ["1:", "2: 1"])
def test_psi_image_equals_kernel_on_axis_diagram(word):
    H = axis_diagram(parse_braid(word))
    gs = gradings_in_window(H, MINUS_FREE_ZEROED, Window(-2, 2, -4, 1))
    for w in sorted(H.free_w):
        for g, (h, out, into) in psi_exactness(H, w, gs).items():
            assert h == out + into, g
