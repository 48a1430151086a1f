import itertools
from fractions import Fraction

import pytest

from gridfloer.braid import parse_braid
from gridfloer.complex import (
    FLAVOR_NAMES,
    HAT,
    MINUS,
    MINUS_FREE_ZEROED,
    TILDE,
    ChainElement,
    Flavor,
    alexander,
    chain_gradings,
    differential,
    empty_rectangles,
    enumerate_states,
    format_chain,
    maslov,
    psi_w,
)
from gridfloer.errors import NotFreeBasepoint, SizeLimitExceeded, UnknownComponent
from gridfloer.grid import drop_axis_z, from_braid, stabilization_move, unknot_grid, with_axis
from gridfloer.invariants import theta_state


def small_grids():
    U = unknot_grid()
    T = from_braid(parse_braid("2: 1 1 1"))
    return {
        "unknot": U,
        "unknot3": stabilization_move(U, (0, 0), "NE"),
        "trefoil": T,
        "neg_stab": from_braid(parse_braid("2: -1")),
        "trefoil6": stabilization_move(T, (T.w_col[0], 0), "SW"),
        "H4_trivial": drop_axis_z(with_axis(parse_braid("1:"))),
        "axis_trivial": with_axis(parse_braid("1:")),
    }


@pytest.mark.parametrize("k,n", [(2, 2), (3, 6), (7, 5040)])
def test_enumerate_states(k, n):
    from gridfloer.grid import GridDiagram
    G = GridDiagram(k, tuple(range(k)), tuple((r + 1) % k for r in range(k)))
    states = list(enumerate_states(G))
    assert len(states) == n
    assert states == sorted(states)


def test_enumerate_states_cap():
    with pytest.raises(SizeLimitExceeded):
        enumerate_states(from_braid(parse_braid("2: 1 1 1")), cap=100)


def test_empty_rectangles_basic():
    G = unknot_grid()
    x, y = (0, 1), (1, 0)
    assert empty_rectangles(G, x, x) == []
    assert len(empty_rectangles(G, x, y)) == 2
    assert len(empty_rectangles(G, y, x)) == 2
    T = from_braid(parse_braid("2: 1 1 1"))
    assert empty_rectangles(T, (0, 1, 2, 3, 4), (1, 2, 0, 3, 4)) == []


@pytest.mark.parametrize("name", list(small_grids()))
def test_d_squared_zero_all_flavors(name):
    G = small_grids()[name]
    for fl in FLAVOR_NAMES:
        for x in enumerate_states(G):
            assert not differential(G, fl, differential(G, fl, x)), (name, fl, x)


@pytest.mark.parametrize("name", ["trefoil", "neg_stab", "trefoil6", "H4_trivial"])
def test_differential_gradings(name):
    G = small_grids()[name]
    for x in enumerate_states(G):
        m = maslov(G, x)
        a = tuple(int(2 * alexander(G, x, c)) for c in range(G.n_components))
        for e, y in differential(G, MINUS, x):
            assert chain_gradings(G, e, y) == (m - 1, a)


def test_relative_gradings_per_rectangle():
    G = from_braid(parse_braid("3: 1 1 1 2"))
    for x in itertools.islice(enumerate_states(G), 0, None, 37):
        for i, j in itertools.combinations(range(G.size), 2):
            y = list(x)
            y[i], y[j] = y[j], y[i]
            for r in empty_rectangles(G, x, tuple(y)):
                assert maslov(G, x) - maslov(G, r.target) == 1 - 2 * r.n_w
                assert alexander(G, x) - alexander(G, r.target) == r.n_z - r.n_w


def test_unknot_tilde_top_state_is_cycle():
    G = unknot_grid()
    top = max(enumerate_states(G), key=lambda x: maslov(G, x))
    assert not differential(G, TILDE, top)


@pytest.mark.parametrize("word,A,M", [("1:", 0, 0), ("2: 1 1 1", 1, 2), ("2: -1 -1 -1", -2, -4)])
def test_theta_gradings(word, A, M):
    G = from_braid(parse_braid(word))
    x = theta_state(G)
    assert (alexander(G, x), maslov(G, x)) == (A, M)
    assert not differential(G, MINUS, x)


def test_alexander_component_check():
    G = unknot_grid()
    with pytest.raises(UnknownComponent):
        alexander(G, (0, 1), 1)
    assert alexander(G, (1, 0), 0) == Fraction(0)
    assert alexander(G, (0, 1), 0) == Fraction(-1)


def test_hat_choice():
    G = with_axis(parse_braid("2: 1"))
    rows = Flavor(HAT).zeroed(G)
    assert sorted(G.component_of[r] for r in rows) == [0, 1]
    with pytest.raises(ValueError):
        Flavor(HAT, frozenset([rows and min(rows)])).zeroed(G)


def test_free_zeroed_avoids_free_basepoints():
    H = small_grids()["H4_trivial"]
    for x in enumerate_states(H):
        for e, _ in differential(H, MINUS_FREE_ZEROED, x):
            assert all(e[w] == 0 for w in H.free_w)


@pytest.mark.parametrize("word", ["1:", "2: 1"])
def test_psi_properties(word):
    H = drop_axis_z(with_axis(parse_braid(word)))
    w1, w2 = sorted(H.free_w)
    fl = MINUS_FREE_ZEROED
    for x in enumerate_states(H):
        m = maslov(H, x)
        a = alexander(H, x, 0)
        for w in (w1, w2):
            px = psi_w(H, w, x)
            assert psi_w(H, w, differential(H, fl, x)) == differential(H, fl, px)
            assert not psi_w(H, w, px)
            for e, y in px:
                mm, aa = chain_gradings(H, e, y)
                assert mm == m + 1 and Fraction(aa[0], 2) == a
        assert psi_w(H, w1, psi_w(H, w2, x)) == psi_w(H, w2, psi_w(H, w1, x))


def test_psi_requires_free():
    G = unknot_grid()
    with pytest.raises(NotFreeBasepoint):
        psi_w(G, 0, (0, 1))


def test_canonical_text():
    c = ChainElement([((1, 0, 2), (1, 0, 2)), ((0, 0, 0), (0, 1, 2))])
    assert format_chain(c) == "1·(0 1 2) + U_0U_2^2·(1 0 2)"
    assert format_chain(c + c) == "0"
