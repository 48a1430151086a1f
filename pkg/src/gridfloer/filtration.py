"""The filtration of a braid-axis diagram by winding around the axis.

The axis diagram carries the knot ``K`` and the reversed braid axis.  After
its ``z`` basepoints are dropped (``drop_axis_z``) the axis contributes only
two free ``w``.  The axis winds once around the lattice points of the square
``1..m`` x ``1..m`` (region R1) and not at all elsewhere, so the filtration
level of a state is ``m`` minus its number of points in R1.  Level 0, the
bottom, consists of the states lying entirely in R1 and R2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .braid import BraidWord, self_linking
from .complex import (
    MINUS_FREE_ZEROED,
    TILDE,
    ChainElement,
    GridState,
    chain_gradings,
    differential,
    flavor,
    grid_complex,
    maslov,
    psi_w,
)
from .errors import NoAxis, NotSmallConfiguration
from .grid import GridDiagram, drop_axis_z, from_braid, winding_table, with_axis
from .homology import (
    Eliminator,
    PieceCache,
    boundary_rows,
    gf2_rank,
    kernel_basis,
    map_rank_on_homology,
    _shift,
)
from .invariants import theta_state


def _require_axis(H: GridDiagram):
    if H.axis is None:
        raise NoAxis("diagram has no axis layout")


def axis_diagram(b: BraidWord) -> GridDiagram:
    """The diagram with the axis ``z`` removed, ready for the filtration."""
    return drop_axis_z(with_axis(b))


def axis_levels(H: GridDiagram) -> np.ndarray:
    """Filtration level of every state (lexicographic order)."""
    _require_axis(H)
    gc = grid_complex(H)
    wt = winding_table(H, "axis")
    k = H.size
    wind = np.array([[wt[i, j] for j in range(k)] for i in range(k)], dtype=np.int64)
    raw = -wind[np.arange(k)[None, :], gc.perms.astype(np.int64)].sum(axis=1)
    return raw - raw.min()


def axis_grading(H: GridDiagram, x: GridState) -> int:
    """Negated winding of the axis around ``x``, relative to its minimum."""
    _require_axis(H)
    wt = winding_table(H, "axis")
    k = H.size
    raw = -sum(wt[i, x[i]] for i in range(k))
    # the axis winds once around R1, so the minimum fills R1 with m points
    return raw + H.axis.m


def bottom_mask(H: GridDiagram) -> np.ndarray:
    return axis_levels(H) == 0


def bottom_states(H: GridDiagram) -> List[GridState]:
    """States with every point in R1 or R2."""
    gc = grid_complex(H)
    return [gc.state(i) for i in np.nonzero(bottom_mask(H))[0].tolist()]


@dataclass
class FiltrationLevel:
    level: int
    states: List[GridState]


def filtration_level(H: GridDiagram, j: int) -> FiltrationLevel:
    """States of level at most ``j``; they span a subcomplex."""
    gc = grid_complex(H)
    idx = np.nonzero(axis_levels(H) <= j)[0].tolist()
    return FiltrationLevel(j, [gc.state(i) for i in idx])


def x4_state(H: GridDiagram) -> GridState:
    """Upper-right corners of the knot ``z`` cells and the free ``w`` cells."""
    _require_axis(H)
    k = H.size
    x = [0] * k
    for r in range(k):
        c = H.z_col[r] if H.z_col[r] is not None else H.w_col[r]
        x[(c + 1) % k] = (r + 1) % k
    return tuple(x)


@dataclass
class BottomReport:
    sl: Optional[int]
    rank_by_M: Dict[int, int]
    top_M: Optional[int]
    top_rank: int
    x4_M: int
    x4_is_cycle: bool
    x4_generates: bool

    @property
    def ok(self) -> bool:
        return self.top_rank == 1 and self.x4_generates

    def to_json(self) -> dict:
        return {
            "sl": self.sl,
            "top_M": self.top_M,
            "top_rank": self.top_rank,
            "x4_M": self.x4_M,
            "x4_generates": self.x4_generates,
            "rank_by_M": {str(m): r for m, r in sorted(self.rank_by_M.items(), reverse=True)},
        }


def _bottom_gradings(H: GridDiagram, mask: np.ndarray, M: int):
    """Gradings of the bottom subcomplex at Maslov ``M``."""
    gc = grid_complex(H)
    fl = flavor(MINUS_FREE_ZEROED)
    zeroed = fl.zeroed(H)
    comp_active = [any(r not in zeroed for r in comp) for comp in H.components]
    out = set()
    for s in np.nonzero(mask)[0].tolist():
        m = int(gc.maslov[s])
        if m < M or (m - M) % 2:
            continue
        d = (m - M) // 2
        a2 = tuple(int(v) for v in gc.alexander2[s])
        # a single knot component: every U lowers its A by one
        if d and not comp_active[0]:
            continue
        out.add((M, (a2[0] - 2 * d,) + a2[1:]))
    return sorted(out)


def bottom_homology_report(H: GridDiagram, sl: Optional[int] = None,
                           depth: int = 2) -> BottomReport:
    """Homology of the bottom level (free ``U`` set to zero) near its top Maslov grading.

    ``depth`` extra Maslov gradings below the top nonzero one are tabulated.
    """
    _require_axis(H)
    if H.n_components != 1:
        raise NoAxis("expected the knot alone after dropping the axis z")
    mask = bottom_mask(H)
    gc = grid_complex(H)
    cache = PieceCache(H, MINUS_FREE_ZEROED, states=mask)
    max_m = int(gc.maslov[mask].max())
    rank_by_M: Dict[int, int] = {}
    top = None
    M = max_m
    while top is None or M >= top - depth:
        r = sum(cache.homology_rank(g) for g in _bottom_gradings(H, mask, M))
        rank_by_M[M] = r
        if top is None and r:
            top = M
        M -= 1
        if top is None and M < max_m - 4 * H.size:
            break
    x4 = x4_state(H)
    x4_M = maslov(H, x4)
    x4c = not differential(H, MINUS_FREE_ZEROED, x4)
    gen = False
    if top is not None and x4c and x4_M == top and mask[gc.index(x4)]:
        g = chain_gradings(H, (0,) * H.size, x4)
        dst = cache.get(g)
        src = cache.get(_shift(g, 1))
        e = Eliminator()
        for row in boundary_rows(src, dst):
            e.add(row)
        rest, _ = e.reduce(dst.vector(ChainElement.of_state(x4, H.size)))
        gen = bool(rest)
    return BottomReport(sl, rank_by_M, top, rank_by_M.get(top, 0) if top is not None else 0,
                        x4_M, x4c, gen)


def maslov_bridge_check(b: BraidWord) -> bool:
    """M(x4) on the axis diagram equals M(theta) on the braid grid minus two."""
    H = axis_diagram(b)
    G = from_braid(b)
    return maslov(H, x4_state(H)) == maslov(G, theta_state(G)) - 2


def filtration_violations(H: GridDiagram, fl=MINUS_FREE_ZEROED) -> int:
    """Number of differential terms that raise the filtration level.

    A surviving free ``U_w`` lowers the level by one, like ``U`` of a linked
    component lowers that component's Alexander grading.
    """
    gc = grid_complex(H)
    lv = axis_levels(H)
    src, tgt, wm = gc.rectangles(gc.perms.astype(np.int64),
                                 sum(1 << r for r in flavor(fl).zeroed(H)))
    free = np.zeros(len(wm), dtype=np.int64)
    for r in H.free_w:
        free += ((wm >> np.uint64(r)) & np.uint64(1)).astype(np.int64)
    return int((lv[tgt] - free > lv[src]).sum())


# -- free index-0/3 stabilization ------------------------------------------


@dataclass
class FreeStabilization:
    """A grid complex with one extra free basepoint ``w'`` added far away.

    The new circles meet in two points ``x'`` and ``y'`` bounding two bigons
    from ``x'`` to ``y'``; one contains ``w'`` and the other covers the rest
    of the diagram, ``z`` basepoints included, so it never counts.  With ``U_{w'} = 0`` the complex is two copies of the grid complex:
    ``x + x'`` one Maslov lower than ``x``, and ``x + y'`` at the grading of
    ``x``.  ``psi`` counts the ``w'`` bigon, taking ``x + x'`` to ``x + y'``.
    """

    G: GridDiagram
    flavor: str = TILDE
    w_prime: str = "w'"

    def generators(self, g) -> List[Tuple[str, int]]:
        """Basis at grading ``g`` as (tag, index in the underlying piece)."""
        c = self.cache
        return ([("x'", i) for i in range(len(c.get(_shift(g, 1))))]
                + [("y'", i) for i in range(len(c.get(g)))])

    @property
    def cache(self) -> PieceCache:
        if not hasattr(self, "_cache"):
            self._cache = PieceCache(self.G, self.flavor)
        return self._cache

    def boundary(self, g) -> List[int]:
        """Rows of the boundary from grading ``g`` to ``g - 1``."""
        c = self.cache
        up, here, down = c.get(_shift(g, 1)), c.get(g), c.get(_shift(g, -1))
        off_dst = len(here)  # x' block of the target has the size of piece g
        rows = [r for r in boundary_rows(up, here)]
        rows += [r << off_dst for r in boundary_rows(here, down)]
        return rows

    def psi(self, g) -> List[int]:
        """Rows of ``psi`` from grading ``g`` to ``g + 1``."""
        c = self.cache
        n_src_x = len(c.get(_shift(g, 1)))
        n_src_y = len(c.get(g))
        n_dst_x = len(c.get(_shift(g, 2)))
        # x'-part at g (piece g+1) -> y'-part at g+1 (piece g+1)
        return [1 << (n_dst_x + i) for i in range(n_src_x)] + [0] * n_src_y

    def include(self, g, v: int) -> int:
        """``i``: the grid piece at ``g`` into the ``x'`` block at ``g - 1``."""
        return v

    def project(self, g, v: int) -> int:
        """``j``: the ``x'`` block at ``g`` onto the grid piece at ``g + 1``."""
        return v & ((1 << len(self.cache.get(_shift(g, 1)))) - 1)


def free_stabilize(G: GridDiagram, fl=TILDE) -> FreeStabilization:
    if G.free_w:
        raise NotSmallConfiguration("free stabilization expects a grid without free basepoints")
    return FreeStabilization(G, flavor(fl).kind)


@dataclass
class SplittingResult:
    psi_squared_zero: bool
    chain_map: bool
    split_ranks: bool
    j_i_identity: bool
    ranks: Dict[Tuple[Fraction, int], Tuple[int, int, int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.psi_squared_zero and self.chain_map and self.split_ranks and self.j_i_identity


def _compose(rows_a: List[int], rows_b: List[int]) -> List[int]:
    """Rows of ``b . a`` for row-vector matrices."""
    out = []
    for r in rows_a:
        v = 0
        i = 0
        while r:
            if r & 1:
                v ^= rows_b[i]
            r >>= 1
            i += 1
        out.append(v)
    return out


def splitting_check(FS, w=None) -> SplittingResult:
    """Splitting of the stabilized homology into ``coker psi`` and ``ker psi``.

    Checked at every grading of the underlying grid complex: ``psi`` is a chain
    map with ``psi^2 = 0``, homology ranks satisfy
    ``rank ker psi_* + rank coker psi_* = rank``, and ``j . i`` is the identity
    on a basis of cycles.
    """
    if not isinstance(FS, FreeStabilization):
        raise NotSmallConfiguration("expected a free stabilization of a plain grid")
    if w is not None and w != FS.w_prime:
        raise NotSmallConfiguration(f"{w!r} is not the stabilization basepoint")
    G = FS.G
    gc = grid_complex(G)
    base = {(int(m), tuple(int(v) for v in a))
            for m, a in zip(gc.maslov.tolist(), gc.alexander2.tolist())}
    gradings = sorted({_shift(g, d) for g in base for d in (-1, 0)})
    res = SplittingResult(True, True, True, True)
    hom: Dict = {}
    psi_rank: Dict = {}
    for g in gradings:
        d_out = FS.boundary(g)
        d_in = FS.boundary(_shift(g, 1))
        cyc = kernel_basis(d_out)
        hom[g] = len(cyc) - gf2_rank(d_in)
        p = FS.psi(g)
        # psi d = d psi, both from g to g (+1 then -1)
        lhs = _compose(d_out, FS.psi(_shift(g, -1))) if d_out else []
        rhs = _compose(p, FS.boundary(_shift(g, 1))) if p else []
        if lhs != rhs:
            res.chain_map = False
        if any(_compose(p, FS.psi(_shift(g, 1)))):
            res.psi_squared_zero = False
        images = [_compose([c], p)[0] for c in cyc]
        psi_rank[g] = map_rank_on_homology(images, d_in_rows(FS, g, 1))
        # j . i on cycles of the grid piece at g + 1
        up = FS.cache.get(_shift(g, 1))
        gcyc = kernel_basis(boundary_rows(up, FS.cache.get(g)))
        if any(FS.project(g, FS.include(_shift(g, 1), v)) != v for v in gcyc):
            res.j_i_identity = False
    for g in gradings:
        ker = hom[g] - psi_rank[g]
        coker = hom[g] - psi_rank.get(_shift(g, -1), 0)
        res.ranks[(Fraction(sum(g[1]), 2), g[0])] = (hom[g], ker, coker)
    for g in gradings:
        # ker lives in the y' block (grid piece g), coker in the x' block (g + 1)
        h, ker, coker = res.ranks[(Fraction(sum(g[1]), 2), g[0])]
        here = FS.cache.homology_rank(g)
        up = FS.cache.homology_rank(_shift(g, 1))
        if h != up + here or ker != here or coker != up:
            res.split_ranks = False
    return res


def d_in_rows(FS: FreeStabilization, g, up: int) -> List[int]:
    """Boundaries landing in grading ``g + up``."""
    return FS.boundary(_shift(g, up + 1))


def psi_exactness(H: GridDiagram, w: int, gradings) -> Dict:
    """Per grading of ``H``: (rank H, rank psi_* out, rank psi_* in).

    When homology splits as ``coker psi (+) ker psi``, image equals kernel, so
    ``rank in + rank out = rank H`` at every grading.
    """
    cache = PieceCache(H, MINUS_FREE_ZEROED)
    out = {}
    for g in gradings:
        out[g] = (cache.homology_rank(g), _psi_rank(H, cache, w, g),
                  _psi_rank(H, cache, w, _shift(g, -1)))
    return out


def _psi_rank(H, cache: PieceCache, w: int, g) -> int:
    src, dst = cache.get(g), cache.get(_shift(g, 1))
    if not len(src) or not len(dst):
        return 0
    cyc = kernel_basis(boundary_rows(src, cache.get(_shift(g, -1))))
    images = [dst.vector(psi_w(H, w, src.chain(c), MINUS_FREE_ZEROED)) for c in cyc]
    return map_rank_on_homology(images, boundary_rows(cache.get(_shift(g, 2)), dst))


def axis_report(b: BraidWord) -> dict:
    """Bottom-level report and Maslov bridge for a braid, as plain data."""
    rep = bottom_homology_report(axis_diagram(b), self_linking(b))
    out = rep.to_json()
    out["bridge"] = maslov_bridge_check(b)
    out["ok"] = rep.ok and out["bridge"] and rep.x4_M == rep.sl - 1
    return out
