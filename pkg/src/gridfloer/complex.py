"""Generators, empty rectangles, differentials and gradings of grid complexes.

Rectangle convention: a rectangle from ``x`` to ``y`` has its lower-left and
upper-right corners on ``x`` and the other two corners on ``y``; it is empty
when no point of ``x`` lies in its interior.  The differential counts empty
rectangles containing no ``z``; every ``w`` inside contributes its ``U_w``.

Absolute gradings use the planar point counts ``J(P, Q)`` over the fundamental
domain ``[0, k)^2``, with basepoints at cell centres:

    M(x)   = J(x, x) - 2 J(x, W) + J(W, W) + 1
    A_c(x) = J(x - (Z + W)/2, Z_c - W_c) - (n_c - 1)/2

where ``W`` is every ``w`` (free ones included), ``Z`` every ``z`` and
``n_c`` the number of ``w`` on component ``c``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from . import _accel
from .errors import NotFreeBasepoint, SizeLimitExceeded, UnknownComponent
from .grid import GridDiagram

GridState = Tuple[int, ...]  # x[col] = row
Monomial = Tuple[int, ...]  # exponent of U_w for the w in each row

DEFAULT_MAX_STATES = factorial(9)


def max_states() -> int:
    return int(os.environ.get("GRIDFLOER_MAX_STATES", DEFAULT_MAX_STATES))


# -- flavors ---------------------------------------------------------------

TILDE = "tilde"
HAT = "hat"
MINUS = "minus"
MINUS_FREE_ZEROED = "minus_free_zeroed"
FLAVOR_NAMES = (TILDE, HAT, MINUS, MINUS_FREE_ZEROED)


@dataclass(frozen=True)
class Flavor:
    """Which ``U_w`` are set to zero.

    ``hat_rows`` picks the zeroed ``w`` of each component for HAT; by default
    the lowest row of each component is used.
    """

    kind: str
    hat_rows: Optional[FrozenSet[int]] = None

    def __post_init__(self):
        if self.kind not in FLAVOR_NAMES:
            raise ValueError(f"unknown flavor {self.kind!r}")

    def zeroed(self, G: GridDiagram) -> FrozenSet[int]:
        if self.kind == TILDE:
            return frozenset(range(G.size))
        if self.kind == MINUS:
            return frozenset()
        if self.kind == MINUS_FREE_ZEROED:
            return G.free_w
        if self.hat_rows is not None:
            rows = frozenset(self.hat_rows)
            comps = [G.component_of[r] for r in rows]
            if None in comps or sorted(comps) != list(range(G.n_components)):
                raise ValueError("HAT needs exactly one linked w per component")
            return rows
        return frozenset(min(c) for c in G.components)

    def __str__(self):
        return self.kind


def flavor(name) -> Flavor:
    if isinstance(name, Flavor):
        return name
    return Flavor(str(name).lower())


def _mask(rows: Iterable[int]) -> int:
    m = 0
    for r in rows:
        m |= 1 << r
    return m


# -- chain elements --------------------------------------------------------


class ChainElement:
    """Finite GF(2) sum of ``U^e * x`` terms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[Monomial, GridState]] = ()):
        acc = set()
        for t in terms:
            acc ^= {(tuple(t[0]), tuple(t[1]))}
        self.terms = frozenset(acc)

    @classmethod
    def of_state(cls, x: GridState, k: Optional[int] = None) -> "ChainElement":
        k = len(x) if k is None else k
        return cls([((0,) * k, tuple(x))])

    def __add__(self, other: "ChainElement") -> "ChainElement":
        out = ChainElement()
        out.terms = self.terms ^ other.terms
        return out

    __xor__ = __add__

    def __eq__(self, other):
        return isinstance(other, ChainElement) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms))

    def __repr__(self):
        return f"ChainElement({format_chain(self)})"


def format_monomial(e: Monomial) -> str:
    parts = []
    for w, p in enumerate(e):
        if p == 1:
            parts.append(f"U_{w}")
        elif p > 1:
            parts.append(f"U_{w}^{p}")
    return "".join(parts) or "1"


def format_chain(c: ChainElement) -> str:
    """Canonical text form, e.g. ``U_0U_2^2·(1 0 2) + 1·(0 1 2)``."""
    if not c:
        return "0"
    return " + ".join(
        f"{format_monomial(e)}·({' '.join(map(str, x))})" for e, x in c
    )


# -- rectangles ------------------------------------------------------------


@dataclass(frozen=True)
class Rectangle:
    source: GridState
    target: GridState
    corner: Tuple[int, int]  # lower-left lattice point (col, row)
    width: int
    height: int
    w_rows: FrozenSet[int]
    z_rows: FrozenSet[int]

    @property
    def n_w(self) -> int:
        return len(self.w_rows)

    @property
    def n_z(self) -> int:
        return len(self.z_rows)


def _rect_contents(G: GridDiagram, c0, r0, width, height):
    k = G.size
    ws, zs = set(), set()
    for dr in range(height):
        r = (r0 + dr) % k
        if (G.w_col[r] - c0) % k < width:
            ws.add(r)
        zc = G.z_col[r]
        if zc is not None and (zc - c0) % k < width:
            zs.add(r)
    return frozenset(ws), frozenset(zs)


def empty_rectangles(G: GridDiagram, x: GridState, y: GridState) -> List[Rectangle]:
    """Empty rectangles from ``x`` to ``y`` (at most two)."""
    k = G.size
    diff = [c for c in range(k) if x[c] != y[c]]
    if len(diff) != 2:
        return []
    a, b = diff
    if x[a] != y[b] or x[b] != y[a]:
        return []
    out = []
    for i, j in ((a, b), (b, a)):
        width = (j - i) % k
        height = (x[j] - x[i]) % k
        if any(
            0 < (x[(i + d) % k] - x[i]) % k < height for d in range(1, width)
        ):
            continue
        ws, zs = _rect_contents(G, i, x[i], width, height)
        out.append(Rectangle(tuple(x), tuple(y), (i, x[i]), width, height, ws, zs))
    return out


# -- the per-grid cache ----------------------------------------------------


def _two_j_points(perms: np.ndarray, cells) -> np.ndarray:
    """``2 J(x, P)`` for every state, ``P`` a list of marker cells (col, row)."""
    N, k = perms.shape
    cols = np.arange(k)[None, :]
    out = np.zeros(N, dtype=np.int64)
    for c, r in cells:
        out += ((cols <= c) & (perms <= r)).sum(axis=1)
        out += ((cols > c) & (perms > r)).sum(axis=1)
    return out


def _two_j_cells(P, Q) -> int:
    tot = 0
    for c1, r1 in P:
        for c2, r2 in Q:
            if c1 < c2 and r1 < r2:
                tot += 1
            if c2 < c1 and r2 < r1:
                tot += 1
    return tot


class GridComplex:
    """All-state data for one grid: permutations, gradings, rectangle lists."""

    def __init__(self, G: GridDiagram):
        self.G = G
        self.k = G.size
        self.n_states = factorial(self.k)

    def check_size(self):
        if self.n_states > max_states():
            raise SizeLimitExceeded(
                f"{self.n_states} states exceed the cap of {max_states()}"
            )

    @cached_property
    def perms(self) -> np.ndarray:
        self.check_size()
        dtype = np.int8 if self.k < 127 else np.int16
        return np.array(list(itertools.permutations(range(self.k))), dtype=dtype)

    @cached_property
    def _w_cells(self):
        return [(c, r) for r, c in enumerate(self.G.w_col)]

    @cached_property
    def _z_cells(self):
        return [(c, r) for r, c in enumerate(self.G.z_col) if c is not None]

    @cached_property
    def maslov(self) -> np.ndarray:
        return self.maslov_of(self.perms)

    def maslov_of(self, perms: np.ndarray) -> np.ndarray:
        perms = np.asarray(perms)
        k = perms.shape[1]
        jxx = np.zeros(perms.shape[0], dtype=np.int64)
        for i in range(k):
            for j in range(i + 1, k):
                jxx += perms[:, i] < perms[:, j]
        jww = _two_j_cells(self._w_cells, self._w_cells) // 2
        return jxx - _two_j_points(perms, self._w_cells) + jww + 1

    @cached_property
    def alexander2(self) -> np.ndarray:
        """Twice the Alexander grading, shape (n_states, n_components)."""
        return self.alexander2_of(self.perms)

    def alexander2_of(self, perms: np.ndarray) -> np.ndarray:
        perms = np.asarray(perms)
        G = self.G
        cols = []
        allm = self._z_cells + self._w_cells
        for comp in G.components:
            zc = [(G.z_col[r], r) for r in comp]
            wc = [(G.w_col[r], r) for r in comp]
            v = _two_j_points(perms, zc) - _two_j_points(perms, wc)
            const = _two_j_cells(allm, zc) - _two_j_cells(allm, wc)
            # 2A = 2J(x, Z_c - W_c) - J(Z + W, Z_c - W_c) - (n_c - 1)
            if const % 2:
                raise ValueError("grid markers give a non-integral 2A")
            cols.append(v - const // 2 - (len(comp) - 1))
        if not cols:
            return np.zeros((perms.shape[0], 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def index(self, x: GridState) -> int:
        return int(_accel.lex_rank(list(x)))

    def state(self, idx: int) -> GridState:
        return tuple(int(v) for v in self.perms[idx])

    def rectangles(self, sources, forbid_w: int, forbid_z: Optional[int] = None):
        """Kernel call: arrays (src position, target rank, w mask)."""
        if forbid_z is None:
            forbid_z = _mask(r for r in range(self.k) if self.G.z_col[r] is not None)
        sources = np.asarray(sources)
        if sources.size == 0:
            return (np.zeros(0, np.int64),) * 2 + (np.zeros(0, np.uint64),)
        src, tgt, wm = _accel.rectangles(
            sources, self.G.w_col, self.G.z_col, forbid_w, forbid_z
        )
        return (
            np.asarray(src, dtype=np.int64),
            np.asarray(tgt, dtype=np.int64),
            np.asarray(wm, dtype=np.uint64),
        )


@lru_cache(maxsize=32)
def grid_complex(G: GridDiagram) -> GridComplex:
    return GridComplex(G)


# -- public operations -----------------------------------------------------


def enumerate_states(G: GridDiagram, cap: Optional[int] = None) -> Iterator[GridState]:
    """All k! states in lexicographic order."""
    cap = max_states() if cap is None else cap
    if factorial(G.size) > cap:
        raise SizeLimitExceeded(f"{factorial(G.size)} states exceed the cap of {cap}")
    return itertools.permutations(range(G.size))


def maslov(G: GridDiagram, x: GridState) -> int:
    gc = grid_complex(G)
    return int(gc.maslov_of(np.array([x]))[0])


def alexander(G: GridDiagram, x: GridState, component=None) -> Fraction:
    """Alexander grading of ``x`` for one component, or their sum if ``None``."""
    gc = grid_complex(G)
    a2 = gc.alexander2_of(np.array([x]))[0]
    if component is None:
        return Fraction(int(a2.sum()), 2)
    if not isinstance(component, int) or not 0 <= component < len(a2):
        raise UnknownComponent(f"no component {component!r}")
    return Fraction(int(a2[component]), 2)


def monomial_shift(G: GridDiagram, e: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """(Maslov drop, doubled Alexander drop per component) of ``U^e``."""
    dm = 2 * sum(e)
    da = [0] * G.n_components
    for r, p in enumerate(e):
        c = G.component_of[r]
        if p and c is not None:
            da[c] += 2 * p
    return dm, tuple(da)


def _apply(G, fl, chain, forbid_w, keep=None, drop_bit=None):
    gc = grid_complex(G)
    k = G.size
    by_state: Dict[GridState, List[Monomial]] = {}
    for e, x in chain:
        by_state.setdefault(x, []).append(e)
    states = list(by_state)
    if not states:
        return ChainElement()
    src, tgt, wm = gc.rectangles(np.array(states, dtype=np.int64), forbid_w)
    out = set()
    for s, t, m in zip(src.tolist(), tgt.tolist(), wm.tolist()):
        if keep is not None and not keep(m):
            continue
        if drop_bit is not None:
            m &= ~(1 << drop_bit)
        y = tuple(_accel.lex_unrank(t, k))
        for e in by_state[states[s]]:
            ne = tuple(e[r] + ((m >> r) & 1) for r in range(k))
            out ^= {(ne, y)}
    res = ChainElement()
    res.terms = frozenset(out)
    return res


def differential(G: GridDiagram, fl, x) -> ChainElement:
    """Boundary of a state or chain in the given flavor."""
    fl = flavor(fl)
    chain = x if isinstance(x, ChainElement) else ChainElement.of_state(x, G.size)
    return _apply(G, fl, chain, _mask(fl.zeroed(G)))


def psi_w(G: GridDiagram, w: int, x, fl=None) -> ChainElement:
    """Count rectangles through the free basepoint ``w`` exactly once.

    Other free basepoints must be avoided; only linked ``w`` contribute to
    the monomial.
    """
    if w not in G.free_w:
        raise NotFreeBasepoint(f"w in row {w} is not a free basepoint")
    fl = flavor(fl or MINUS_FREE_ZEROED)
    zeroed = set(fl.zeroed(G)) - {w}
    forbid = _mask(zeroed | (set(G.free_w) - {w}))
    chain = x if isinstance(x, ChainElement) else ChainElement.of_state(x, G.size)
    return _apply(G, fl, chain, forbid, keep=lambda m: (m >> w) & 1, drop_bit=w)


def chain_gradings(G: GridDiagram, e: Monomial, x: GridState):
    """(M, doubled Alexander tuple) of the term ``U^e x``."""
    gc = grid_complex(G)
    arr = np.array([x])
    m = int(gc.maslov_of(arr)[0])
    a2 = tuple(int(v) for v in gc.alexander2_of(arr)[0])
    dm, da = monomial_shift(G, e)
    return m - dm, tuple(a - d for a, d in zip(a2, da))
