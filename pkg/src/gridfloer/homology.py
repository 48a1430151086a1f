"""Homology of grid complexes one bigraded piece at a time, over GF(2).

A piece in grading ``(A, M)`` has basis the terms ``U^e x`` of that grading.
Every flavor is finite-dimensional per piece, so ranks come from Gaussian
elimination on the boundary maps into and out of the piece.  Vectors are
Python ints used as bitsets; a pivot table keyed on the top bit keeps the
elimination deterministic.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .complex import (
    ChainElement,
    Flavor,
    GridState,
    Monomial,
    _mask,
    chain_gradings,
    flavor,
    grid_complex,
)
from .errors import InhomogeneousChain, SizeLimitExceeded, VariableZeroedInFlavor
from .grid import GridDiagram

DEFAULT_MAX_PIECE = 10**7

Grading = Tuple[int, Tuple[int, ...]]  # (M, doubled Alexander per component)


def max_piece() -> int:
    return int(os.environ.get("GRIDFLOER_MAX_PIECE", DEFAULT_MAX_PIECE))


# -- GF(2) linear algebra --------------------------------------------------


class Eliminator:
    """Incremental row reduction over GF(2).

    With ``track=True`` each stored row remembers which inputs it is a sum of,
    so a reduced-to-zero vector yields its preimage.
    """

    def __init__(self, track: bool = False):
        self.pivots: Dict[int, Tuple[int, int]] = {}
        self.track = track
        self.n_added = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int, combo: int = 0) -> Tuple[int, int]:
        pivots = self.pivots
        while v:
            top = v.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            if self.track:
                combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        combo = (1 << self.n_added) if self.track else 0
        self.n_added += 1
        v, combo = self.reduce(v, combo)
        if not v:
            return False
        self.pivots[v.bit_length() - 1] = (v, combo)
        return True


def gf2_rank(rows: Iterable[int]) -> int:
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


def kernel_basis(rows: Sequence[int]) -> List[int]:
    """Basis of the kernel of ``v -> sum v_i rows[i]``, as bit vectors in ``v``."""
    e = Eliminator(track=True)
    out = []
    for i, r in enumerate(rows):
        combo = 1 << i
        v, combo = e.reduce(r, combo)
        e.n_added += 1
        if v:
            e.pivots[v.bit_length() - 1] = (v, combo)
        else:
            out.append(combo)
    return out


def map_rank_on_homology(images: Sequence[int], boundaries: Sequence[int]) -> int:
    """Rank of a map on homology.

    ``images`` are the images of a spanning set of source cycles and
    ``boundaries`` span the boundaries of the target.
    """
    e = Eliminator()
    for b in boundaries:
        e.add(b)
    base = e.rank
    for v in images:
        e.add(v)
    return e.rank - base


# -- pieces ----------------------------------------------------------------


def _compositions(total: int, slots: Sequence[int]):
    """All ways to distribute ``total`` among ``slots``; yields dicts."""
    if total == 0:
        yield {}
        return
    if not slots:
        return
    first, rest = slots[0], slots[1:]
    if not rest:
        yield {first: total}
        return
    for a in range(total, -1, -1):
        for tail in _compositions(total - a, rest):
            if a:
                d = dict(tail)
                d[first] = a
                yield d
            else:
                yield tail


@dataclass
class BigradedPiece:
    """Basis of one bigraded piece: ``basis[i] = (monomial, state rank)``."""

    G: GridDiagram
    flavor: Flavor
    grading: Grading
    basis: List[Tuple[Monomial, int]]
    index: Dict[Tuple[Monomial, int], int] = field(repr=False)

    @property
    def M(self) -> int:
        return self.grading[0]

    @property
    def A(self) -> Fraction:
        return Fraction(sum(self.grading[1]), 2)

    def __len__(self):
        return len(self.basis)

    def vector(self, chain: ChainElement) -> int:
        gc = grid_complex(self.G)
        v = 0
        for e, x in chain:
            i = self.index.get((e, gc.index(x)))
            if i is None:
                raise InhomogeneousChain(f"term {e}·{x} is not in grading {self.grading}")
            v ^= 1 << i
        return v

    def boundary_out(self) -> List[int]:
        """Rows of the boundary map into the piece one Maslov lower."""
        return boundary_rows(self, piece(self.G, self.flavor, None,
                                         grading=_shift(self.grading, -1)))

    def boundary_in(self) -> List[int]:
        """Rows of the boundary map from the piece one Maslov higher."""
        return boundary_rows(piece(self.G, self.flavor, None,
                                   grading=_shift(self.grading, 1)), self)

    def chain(self, v: int) -> ChainElement:
        gc = grid_complex(self.G)
        terms = []
        i = 0
        while v:
            if v & 1:
                e, s = self.basis[i]
                terms.append((e, gc.state(s)))
            v >>= 1
            i += 1
        return ChainElement(terms)


def _active(G: GridDiagram, fl: Flavor):
    zeroed = fl.zeroed(G)
    per_comp = [[r for r in comp if r not in zeroed] for comp in G.components]
    free = [r for r in sorted(G.free_w) if r not in zeroed]
    return per_comp, free


def normalize_grading(G: GridDiagram, M, A) -> Grading:
    """Accept ``A`` as a number (single component) or a per-component sequence."""
    if isinstance(A, (int, Fraction, float)):
        if G.n_components != 1:
            raise ValueError("give one Alexander value per component")
        A = (A,)
    a2 = tuple(int(Fraction(a) * 2) for a in A)
    if len(a2) != G.n_components:
        raise ValueError("give one Alexander value per component")
    return int(M), a2


def piece(G: GridDiagram, fl, M, A=None, grading: Optional[Grading] = None,
          states: Optional[np.ndarray] = None) -> BigradedPiece:
    """All terms ``U^e x`` of the flavor in the given grading.

    ``states`` optionally restricts to a boolean mask over state ranks, for
    subcomplexes spanned by a set of states.
    """
    fl = flavor(fl)
    if grading is None:
        grading = normalize_grading(G, M, A)
    m0, a0 = grading
    gc = grid_complex(G)
    per_comp, free = _active(G, fl)
    dm = gc.maslov - m0
    ok = (dm >= 0) & (dm % 2 == 0)
    da = gc.alexander2 - np.array(a0, dtype=np.int64)[None, :] if a0 else None
    if da is not None:
        ok &= ((da >= 0) & (da % 2 == 0)).all(axis=1)
    if states is not None:
        ok &= states
    d = dm // 2
    dc = da // 2 if da is not None else np.zeros((len(d), 0), dtype=np.int64)
    d_free = d - dc.sum(axis=1)
    ok &= d_free >= 0
    if not free:
        ok &= d_free == 0
    for c, active in enumerate(per_comp):
        if not active:
            ok &= dc[:, c] == 0
    cand = np.nonzero(ok)[0]
    k = G.size
    cap = max_piece()
    if len(cand) > cap:
        raise SizeLimitExceeded(f"piece {grading} exceeds {cap} generators")
    unit = (0,) * k
    flat = d[cand] == 0
    basis: List[Tuple[Monomial, int]] = [(unit, s) for s in cand[flat].tolist()]
    for s in cand[~flat].tolist():
        parts = [list(_compositions(int(n), per_comp[c])) for c, n in enumerate(dc[s])]
        parts.append(list(_compositions(int(d_free[s]), free)))
        for combo in itertools.product(*parts):
            e = [0] * k
            for dd in combo:
                for r, p in dd.items():
                    e[r] = p
            basis.append((tuple(e), s))
        if len(basis) > cap:
            raise SizeLimitExceeded(f"piece {grading} exceeds {cap} generators")
    index = {b: i for i, b in enumerate(basis)}
    return BigradedPiece(G, fl, grading, basis, index)


def boundary_rows(src: BigradedPiece, dst: BigradedPiece) -> List[int]:
    """Images of the basis of ``src`` as bit vectors over ``dst``."""
    G = src.G
    gc = grid_complex(G)
    if not src.basis:
        return []
    states = sorted({s for _, s in src.basis})
    pos = {s: i for i, s in enumerate(states)}
    s_arr, t_arr, m_arr = gc.rectangles(gc.perms[states].astype(np.int64),
                                        _mask(src.flavor.zeroed(G)))
    out_of: Dict[int, List[Tuple[int, int]]] = {i: [] for i in range(len(states))}
    for s, t, m in zip(s_arr.tolist(), t_arr.tolist(), m_arr.tolist()):
        out_of[s].append((t, m))
    k = G.size
    rows = []
    didx = dst.index
    for e, s in src.basis:
        v = 0
        for t, m in out_of[pos[s]]:
            ne = tuple(e[r] + ((m >> r) & 1) for r in range(k)) if m else e
            v ^= 1 << didx[(ne, t)]
        rows.append(v)
    return rows


def _shift(g: Grading, dm: int) -> Grading:
    return (g[0] + dm, g[1])


class PieceCache:
    def __init__(self, G: GridDiagram, fl, states: Optional[np.ndarray] = None):
        self.G = G
        self.fl = flavor(fl)
        self.states = states
        self.pieces: Dict[Grading, BigradedPiece] = {}
        self.out_rank: Dict[Grading, int] = {}

    def get(self, g: Grading) -> BigradedPiece:
        p = self.pieces.get(g)
        if p is None:
            p = self.pieces[g] = piece(self.G, self.fl, None, grading=g,
                                       states=self.states)
        return p

    def rank_out(self, g: Grading) -> int:
        r = self.out_rank.get(g)
        if r is None:
            src = self.get(g)
            r = gf2_rank(boundary_rows(src, self.get(_shift(g, -1)))) if len(src) else 0
            self.out_rank[g] = r
        return r

    def homology_rank(self, g: Grading) -> int:
        n = len(self.get(g))
        if not n:
            return 0
        return n - self.rank_out(g) - self.rank_out(_shift(g, 1))


# -- rank tables -----------------------------------------------------------


@dataclass
class RankTable:
    flavor: str
    ranks: Dict[Tuple[Fraction, int], int]

    def to_json(self) -> dict:
        out = []
        for (a, m), r in sorted(self.ranks.items()):
            if r:
                out.append({"A": _num(a), "M": m, "rank": r})
        return {"flavor": self.flavor, "ranks": out}

    def total(self) -> int:
        return sum(self.ranks.values())

    def poincare(self) -> Dict[Tuple[Fraction, int], int]:
        return {g: r for g, r in self.ranks.items() if r}


def _num(a: Fraction):
    return int(a) if a.denominator == 1 else float(a)


@dataclass(frozen=True)
class Window:
    A_min: Fraction
    A_max: Fraction
    M_min: int
    M_max: int

    def contains(self, A, M) -> bool:
        return self.A_min <= A <= self.A_max and self.M_min <= M <= self.M_max


def parse_window(text: str) -> Window:
    """``A_min:A_max,M_min:M_max``."""
    try:
        a, m = text.split(",")
        a0, a1 = (Fraction(v) for v in a.split(":"))
        m0, m1 = (int(v) for v in m.split(":"))
    except ValueError as exc:
        raise ValueError(f"bad window {text!r}; expected A_min:A_max,M_min:M_max") from exc
    return Window(a0, a1, m0, m1)


def default_window(G: GridDiagram) -> Window:
    gc = grid_complex(G)
    a = gc.alexander2.sum(axis=1)
    return Window(Fraction(int(a.min()), 2), Fraction(int(a.max()), 2),
                  int(gc.maslov.min()), int(gc.maslov.max()))


def gradings_in_window(G: GridDiagram, fl, window: Window) -> List[Grading]:
    fl = flavor(fl)
    gc = grid_complex(G)
    per_comp, free = _active(G, fl)
    base = {(int(m), tuple(int(v) for v in a))
            for m, a in zip(gc.maslov.tolist(), gc.alexander2.tolist())}
    out = set()
    nc = G.n_components
    for m, a2 in base:
        dmax = (m - window.M_min) // 2
        for d in range(0, max(dmax, -1) + 1):
            for split in _splits(d, nc + 1):
                dc, df = split[:nc], split[nc]
                if df and not free:
                    continue
                if any(n and not per_comp[c] for c, n in enumerate(dc)):
                    continue
                na = tuple(v - 2 * n for v, n in zip(a2, dc))
                if window.contains(Fraction(sum(na), 2), m - 2 * d):
                    out.add((m - 2 * d, na))
    return sorted(out)


def _splits(total, parts):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _splits(total - a, parts - 1):
            yield (a,) + rest


def _ranks_worker(args):
    G, fl, gs = args
    cache = PieceCache(G, fl)
    return [(g, cache.homology_rank(g)) for g in gs]


def homology_ranks(G: GridDiagram, fl, window: Optional[Window] = None,
                   workers: int = 1) -> RankTable:
    """Ranks of homology per ``(A, M)``, Alexander summed over components."""
    fl = flavor(fl)
    if window is None:
        window = default_window(G)
    gs = gradings_in_window(G, fl, window)
    if workers > 1 and len(gs) > 1:
        chunks = [gs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            results = [r for part in ex.map(_ranks_worker, [(G, fl, c) for c in chunks])
                       for r in part]
    else:
        results = _ranks_worker((G, fl, gs))
    ranks: Dict[Tuple[Fraction, int], int] = {}
    for (m, a2), r in results:
        key = (Fraction(sum(a2), 2), m)
        ranks[key] = ranks.get(key, 0) + r
    return RankTable(fl.kind, ranks)


# -- cycles and boundaries -------------------------------------------------


def grading_of(G: GridDiagram, c: ChainElement) -> Grading:
    gs = {chain_gradings(G, e, x) for e, x in c}
    if len(gs) != 1:
        raise InhomogeneousChain("chain is zero or not homogeneous")
    return gs.pop()


def _check_flavor(G: GridDiagram, fl: Flavor, c: ChainElement):
    zeroed = fl.zeroed(G)
    for e, _ in c:
        for r, p in enumerate(e):
            if p and r in zeroed:
                raise VariableZeroedInFlavor(f"U_{r} is zero in {fl.kind}")


def is_cycle(G: GridDiagram, fl, c) -> bool:
    from .complex import differential

    fl = flavor(fl)
    c = c if isinstance(c, ChainElement) else ChainElement.of_state(c, G.size)
    _check_flavor(G, fl, c)
    return not differential(G, fl, c)


@dataclass
class BoundaryResult:
    is_boundary: bool
    witness: Optional[ChainElement]
    source_dim: int


def is_boundary(G: GridDiagram, fl, c) -> BoundaryResult:
    """Decide whether ``c`` is a boundary; if so return ``eta`` with ``d eta = c``."""
    fl = flavor(fl)
    c = c if isinstance(c, ChainElement) else ChainElement.of_state(c, G.size)
    if not c:
        return BoundaryResult(True, ChainElement(), 0)
    _check_flavor(G, fl, c)
    g = grading_of(G, c)
    dst = piece(G, fl, None, grading=g)
    src = piece(G, fl, None, grading=_shift(g, 1))
    target = dst.vector(c)
    elim = Eliminator(track=True)
    for row in boundary_rows(src, dst):
        elim.add(row)
    rest, combo = elim.reduce(target)
    if rest:
        return BoundaryResult(False, None, len(src))
    witness = src.chain(combo)
    return BoundaryResult(True, witness, len(src))


def u_multiply(G: GridDiagram, fl, c, w: int, power: int = 1) -> ChainElement:
    fl = flavor(fl)
    if w in fl.zeroed(G):
        raise VariableZeroedInFlavor(f"U_{w} is zero in {fl.kind}")
    c = c if isinstance(c, ChainElement) else ChainElement.of_state(c, G.size)
    return ChainElement(
        (tuple(p + (power if r == w else 0) for r, p in enumerate(e)), x) for e, x in c
    )


def u_power_in_image(G: GridDiagram, fl, c, w: int, p: int) -> bool:
    """Whether ``U_w^p c`` is a boundary."""
    if p < 0:
        raise ValueError("power must be non-negative")
    c = c if isinstance(c, ChainElement) else ChainElement.of_state(c, G.size)
    if not c:
        return True
    return is_boundary(G, fl, u_multiply(G, fl, c, w, p) if p else c).is_boundary


# -- specialization U_w = 1 ----------------------------------------------


def is_boundary_at_u_one(G: GridDiagram, fl, x: GridState) -> Optional[bool]:
    """Test a state in the complex with every surviving ``U_w`` set to 1.

    Setting the variables to one is a chain map, so a state that is not a
    boundary there is not a boundary in the flavor either.  The quotient is
    graded by ``M - 2 A`` when every surviving variable is linked; returns
    ``None`` when a free variable survives.
    """
    fl = flavor(fl)
    per_comp, free = _active(G, fl)
    if free:
        return None
    gc = grid_complex(G)
    delta = gc.maslov - gc.alexander2.sum(axis=1)
    d0 = int(delta[gc.index(x)])
    src_states = np.nonzero(delta == d0 + 1)[0]
    dst_states = np.nonzero(delta == d0)[0]
    didx = {int(s): i for i, s in enumerate(dst_states.tolist())}
    s_arr, t_arr, _ = gc.rectangles(gc.perms[src_states].astype(np.int64),
                                    _mask(fl.zeroed(G)))
    rows = [0] * len(src_states)
    for s, t in zip(s_arr.tolist(), t_arr.tolist()):
        rows[s] ^= 1 << didx[t]
    elim = Eliminator()
    for r in rows:
        elim.add(r)
    rest, _ = elim.reduce(1 << didx[gc.index(x)])
    return not rest


def in_u_image_on_homology(G: GridDiagram, fl, c, w: int) -> Optional[ChainElement]:
    """Find ``y`` with ``c = U_w y`` modulo boundaries, or return ``None``.

    Such a class dies in any quotient that sets ``U_w = 0``.
    """
    fl = flavor(fl)
    if w in fl.zeroed(G):
        raise VariableZeroedInFlavor(f"U_{w} is zero in {fl.kind}")
    c = c if isinstance(c, ChainElement) else ChainElement.of_state(c, G.size)
    g = grading_of(G, c)
    dst = piece(G, fl, None, grading=g)
    comp = G.component_of[w]
    a_up = tuple(a + (2 if i == comp else 0) for i, a in enumerate(g[1]))
    pre = piece(G, fl, None, grading=(g[0] + 2, a_up))
    e = Eliminator(track=True)
    for row in boundary_rows(piece(G, fl, None, grading=_shift(g, 1)), dst):
        e.add(row)
    n_bdry = e.n_added
    for mono, s in pre.basis:
        shifted = tuple(p + (1 if r == w else 0) for r, p in enumerate(mono))
        e.add(1 << dst.index[(shifted, s)])
    rest, combo = e.reduce(dst.vector(c))
    if rest:
        return None
    return pre.chain(combo >> n_bdry)
