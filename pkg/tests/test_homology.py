import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gridfloer.braid import parse_braid
from gridfloer.complex import (
    HAT,
    MINUS,
    TILDE,
    ChainElement,
    Flavor,
    chain_gradings,
    differential,
    grid_complex,
    maslov,
)
from gridfloer.errors import InhomogeneousChain, SizeLimitExceeded, VariableZeroedInFlavor
from gridfloer.grid import from_braid, stabilization_move, unknot_grid
from gridfloer.homology import (
    Eliminator,
    gf2_rank,
    homology_ranks,
    in_u_image_on_homology,
    is_boundary,
    is_boundary_at_u_one,
    is_cycle,
    kernel_basis,
    parse_window,
    piece,
    u_multiply,
    u_power_in_image,
)
from gridfloer.invariants import theta_state

from conftest import KNOT_WORDS


def _ref_rank(rows, ncols):
    m = np.array([[(r >> j) & 1 for j in range(ncols)] for r in rows], dtype=np.uint8)
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i, col]), None)
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        for i in range(len(m)):
            if i != rank and m[i, col]:
                m[i] ^= m[rank]
        rank += 1
    return rank


@settings(max_examples=60)
@given(st.lists(st.integers(0, 2**12 - 1), max_size=14))
def test_gf2_rank_matches_reference(rows):
    assert gf2_rank(rows) == _ref_rank(rows, 12)
    ker = kernel_basis(rows)
    assert len(ker) == len(rows) - gf2_rank(rows)
    for combo in ker:
        acc = 0
        for i, r in enumerate(rows):
            if (combo >> i) & 1:
                acc ^= r
        assert acc == 0


def test_eliminator_witness():
    e = Eliminator(track=True)
    for r in (0b011, 0b110):
        e.add(r)
    rest, combo = e.reduce(0b101)
    assert rest == 0 and combo == 0b11


def test_unknot_tilde_ranks():
    t = homology_ranks(unknot_grid(), TILDE)
    assert t.poincare() == {(Fraction(0), 0): 1, (Fraction(-1), -1): 1}
    assert t.to_json() == {"flavor": "tilde", "ranks": [
        {"A": -1, "M": -1, "rank": 1}, {"A": 0, "M": 0, "rank": 1}]}


def test_stabilized_unknot_tilde_total():
    G = stabilization_move(unknot_grid(), (0, 0), "NE")
    assert homology_ranks(G, TILDE).total() == 4


def test_piece_examples():
    assert len(piece(unknot_grid(), TILDE, 0, 0)) == 1
    G = from_braid(parse_braid("2: 1 1 1"))
    top = int(grid_complex(G).maslov.max())
    assert len(piece(G, MINUS, top + 1, 0)) == 0
    x = theta_state(G)
    p = piece(G, MINUS, 2, 1)
    assert ((0,) * G.size, grid_complex(G).index(x)) in p.index


def test_boundary_maps_compose_to_zero():
    G = from_braid(parse_braid("2: -1"))
    for m in range(-3, 1):
        p = piece(G, MINUS, m, -1)
        down = piece(G, MINUS, m - 1, -1)
        for row in p.boundary_in():
            v = 0
            for i, r in enumerate(p.boundary_out()):
                if (row >> i) & 1:
                    v ^= r
            assert v == 0
        assert len(p.boundary_out()) == len(p) and all(r < (1 << len(down)) for r in p.boundary_out())


def _hat_grids():
    U = unknot_grid()
    T = from_braid(parse_braid("2: 1 1 1"))
    return [U, stabilization_move(U, (0, 0), "SW"), T, from_braid(parse_braid("2: -1")),
            stabilization_move(T, (T.z_col[0], 0), "NW")]


@pytest.mark.parametrize("idx", range(5))
def test_tilde_is_hat_times_v(idx):
    G = _hat_grids()[idx]
    tilde = homology_ranks(G, TILDE).poincare()
    hat = homology_ranks(G, HAT).poincare()
    k = G.size
    expect = {}
    for (a, m), r in hat.items():
        for j in range(k):
            key = (a - j, m - j)
            expect[key] = expect.get(key, 0) + comb(k - 1, j) * r
    assert tilde == expect


@pytest.mark.parametrize("idx", range(5))
def test_hat_symmetry(idx):
    hat = homology_ranks(_hat_grids()[idx], HAT).poincare()
    for (a, m), r in hat.items():
        assert hat.get((-a, m - 2 * a)) == r


def test_hat_choice_does_not_matter():
    G = from_braid(parse_braid("2: 1 1 1"))
    base = homology_ranks(G, HAT).poincare()
    for r in range(G.size):
        assert homology_ranks(G, Flavor(HAT, frozenset([r]))).poincare() == base


def test_trefoil_hat_matches_known_knot_homology():
    hat = homology_ranks(from_braid(parse_braid("2: 1 1 1")), HAT).poincare()
    # right-handed trefoil, in the grading where theta sits at (1, 2)
    assert hat == {(Fraction(1), 2): 1, (Fraction(0), 1): 1, (Fraction(-1), 0): 1}


def test_workers_agree():
    G = from_braid(parse_braid("2: -1"))
    assert homology_ranks(G, TILDE, workers=2).ranks == homology_ranks(G, TILDE).ranks


def test_window():
    G = from_braid(parse_braid("2: 1 1 1"))
    w = parse_window("0:1,-2:2")
    t = homology_ranks(G, MINUS, w)
    assert all(0 <= a <= 1 and -2 <= m <= 2 for a, m in t.ranks)
    with pytest.raises(ValueError):
        parse_window("1")


@pytest.mark.parametrize("word", KNOT_WORDS)
def test_theta_is_cycle_every_flavor(word):
    G = from_braid(parse_braid(word))
    x = theta_state(G)
    for fl in (TILDE, HAT, MINUS):
        assert is_cycle(G, fl, x)


def test_zero_is_boundary():
    r = is_boundary(unknot_grid(), MINUS, ChainElement())
    assert r.is_boundary and not r.witness


def test_trefoil_theta_hat_nonzero():
    G = from_braid(parse_braid("2: 1 1 1"))
    assert not is_boundary(G, HAT, theta_state(G)).is_boundary


def test_witness_is_checked():
    G = from_braid(parse_braid("2: -1"))
    x = theta_state(G)
    r = is_boundary(G, HAT, x)
    assert r.is_boundary
    assert differential(G, HAT, r.witness) == ChainElement.of_state(x)


def test_inhomogeneous():
    G = from_braid(parse_braid("2: 1 1 1"))
    c = ChainElement.of_state(theta_state(G)) + ChainElement.of_state(tuple(range(G.size)))
    with pytest.raises(InhomogeneousChain):
        is_boundary(G, MINUS, c)


def test_u_multiply():
    G = from_braid(parse_braid("2: 1 1 1"))
    x = theta_state(G)
    c = u_multiply(G, MINUS, x, 3)
    (e, y), = c
    m, a = chain_gradings(G, e, y)
    assert m == maslov(G, x) - 2 and a == (2 * 1 - 2,)
    with pytest.raises(VariableZeroedInFlavor):
        u_multiply(G, TILDE, x, 3)
    assert u_power_in_image(G, MINUS, ChainElement(), 0, 3)
    assert not u_power_in_image(G, MINUS, x, 0, 2)


def test_negative_stabilization_theta_in_u_image():
    G = from_braid(parse_braid("2: -1"))
    x = theta_state(G)
    w = min(Flavor(HAT).zeroed(G))
    y = in_u_image_on_homology(G, MINUS, x, w)
    assert y is not None
    diff = ChainElement.of_state(x) + u_multiply(G, MINUS, y, w)
    assert is_boundary(G, MINUS, diff).is_boundary
    assert is_boundary(G, HAT, x).is_boundary
    T = from_braid(parse_braid("2: 1 1 1"))
    assert in_u_image_on_homology(T, MINUS, theta_state(T), 0) is None


@pytest.mark.parametrize("word", KNOT_WORDS)
def test_u_one_certificate_is_sound(word):
    G = from_braid(parse_braid(word))
    x = theta_state(G)
    if is_boundary_at_u_one(G, MINUS, x) is False:
        assert not is_boundary(G, MINUS, x).is_boundary


def test_piece_cap(monkeypatch):
    monkeypatch.setenv("GRIDFLOER_MAX_PIECE", "3")
    G = from_braid(parse_braid("2: 1 1 1"))
    with pytest.raises(SizeLimitExceeded):
        homology_ranks(G, TILDE)


def test_random_cycles_are_cycles():
    rng = random.Random(5)
    G = from_braid(parse_braid("2: -1"))
    states = list(range(grid_complex(G).n_states))
    for _ in range(20):
        x = grid_complex(G).state(rng.choice(states))
        assert is_cycle(G, MINUS, differential(G, MINUS, x))
