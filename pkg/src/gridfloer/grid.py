"""Toroidal grid diagrams with optional free basepoints.

Coordinates: column ``c`` runs left to right, row ``r`` bottom to top, both
``0..k-1``.  Cell ``(c, r)`` is the unit square ``[c, c+1] x [r, r+1]``;
lattice point ``(i, j)`` is its lower-left corner.  Every row carries exactly
one ``w``; ``w_col[r]`` is its column.  ``z_col[r]`` is the column of the ``z``
in row ``r`` or ``None`` when the ``w`` of that row is free.  Basepoints are
named by their row, so "w-basepoint r" means the ``w`` in row ``r``.

Link orientation: vertical segments run from ``z`` to ``w``, horizontal
segments from ``w`` to ``z``; horizontal strands cross over vertical ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .braid import BraidWord
from .errors import (
    BadAxisLayout,
    BothInOneCell,
    DuplicateBasepointInColumn,
    DuplicateBasepointInRow,
    IllegalCommutation,
    InvalidGrid,
    NoAxis,
    OccupiedCell,
    ParseError,
    UnknownComponent,
    ZWithoutW,
)


@dataclass(frozen=True)
class AxisMeta:
    """Layout record for a braid-axis diagram.

    The axis component has ``w`` at cells ``(0, 0)`` and ``(m, m)`` and ``z`` at
    ``(m, 0)`` and ``(0, m)``.  Lattice points with both coordinates in
    ``1..m`` form the region bounded by the axis.
    """

    m: int
    strands: int
    z_dropped: bool = False

    def region(self, i: int, j: int) -> int:
        """Region index 1..4 of lattice point (i, j)."""
        a = 1 <= i <= self.m
        b = 1 <= j <= self.m
        if a and b:
            return 1
        if not a and not b:
            return 2
        if a:
            return 3  # above the bounded square
        return 4  # to its right


@dataclass(frozen=True)
class GridDiagram:
    size: int
    w_col: Tuple[int, ...]
    z_col: Tuple[Optional[int], ...]
    axis: Optional[AxisMeta] = None

    def __post_init__(self):
        object.__setattr__(self, "w_col", tuple(int(c) for c in self.w_col))
        object.__setattr__(
            self, "z_col", tuple(None if c is None else int(c) for c in self.z_col)
        )

    # -- derived structure -------------------------------------------------

    @cached_property
    def free_w(self) -> FrozenSet[int]:
        return frozenset(r for r in range(self.size) if self.z_col[r] is None)

    @cached_property
    def w_row_of_col(self) -> Tuple[int, ...]:
        out = [0] * self.size
        for r, c in enumerate(self.w_col):
            out[c] = r
        return tuple(out)

    @cached_property
    def z_row_of_col(self) -> Tuple[Optional[int], ...]:
        out: List[Optional[int]] = [None] * self.size
        for r, c in enumerate(self.z_col):
            if c is not None:
                out[c] = r
        return tuple(out)

    @cached_property
    def components(self) -> Tuple[Tuple[int, ...], ...]:
        """Link components as tuples of w-rows in traversal order."""
        seen = set()
        comps = []
        for start in range(self.size):
            if start in seen or self.z_col[start] is None:
                continue
            rows = []
            r = start
            while r not in seen:
                seen.add(r)
                rows.append(r)
                c = self.z_col[r]
                r = self.w_row_of_col[c]
            comps.append(tuple(rows))
        return tuple(comps)

    @cached_property
    def component_of(self) -> Tuple[Optional[int], ...]:
        out: List[Optional[int]] = [None] * self.size
        for idx, rows in enumerate(self.components):
            for r in rows:
                out[r] = idx
        return tuple(out)

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def axis_component(self) -> Optional[int]:
        if self.axis is None or self.axis.z_dropped:
            return None
        return self.component_of[0]

    def marker_at(self, col: int, row: int) -> Optional[str]:
        if self.w_col[row] == col:
            return "w"
        if self.z_col[row] == col:
            return "z"
        return None

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [
            str(self.size),
            " ".join(str(c) for c in self.w_col),
            " ".join("-" if c is None else str(c) for c in self.z_col),
        ]
        if self.axis is not None:
            extra = " dropped" if self.axis.z_dropped else ""
            lines.append(f"axis {self.axis.m} {self.axis.strands}{extra}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        axis = None
        if self.axis is not None:
            axis = {
                "m": self.axis.m,
                "strands": self.axis.strands,
                "z_dropped": self.axis.z_dropped,
            }
        return {
            "size": self.size,
            "w": list(self.w_col),
            "z": list(self.z_col),
            "axis": axis,
        }


def grid_from_text(text: str) -> GridDiagram:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ParseError("grid file needs at least three lines")
    try:
        k = int(lines[0])
        w = [int(t) for t in lines[1].split()]
        z = [None if t == "-" else int(t) for t in lines[2].split()]
        axis = None
        if len(lines) > 3:
            parts = lines[3].split()
            if parts[0] != "axis":
                raise ParseError(f"unexpected fourth line {lines[3]!r}")
            axis = AxisMeta(int(parts[1]), int(parts[2]), "dropped" in parts[3:])
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed grid file: {exc}") from exc
    if len(w) != k or len(z) != k:
        raise ParseError("row count does not match grid size")
    return GridDiagram(k, tuple(w), tuple(z), axis)


def grid_from_json(data) -> GridDiagram:
    if isinstance(data, str):
        data = json.loads(data)
    axis = data.get("axis")
    meta = None
    if axis:
        meta = AxisMeta(axis["m"], axis["strands"], axis.get("z_dropped", False))
    return GridDiagram(data["size"], tuple(data["w"]), tuple(data["z"]), meta)


def load_grid(path) -> GridDiagram:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return grid_from_json(text)
    return grid_from_text(text)


def grid_from_cells(size: int, w_cells, z_cells, axis: Optional[AxisMeta] = None) -> GridDiagram:
    """Build a grid from marker cells ``(col, row)``, checking rows first."""
    w_col: List[Optional[int]] = [None] * size
    z_col: List[Optional[int]] = [None] * size
    for cells, out in ((w_cells, w_col), (z_cells, z_col)):
        for c, r in cells:
            if not (0 <= r < size and 0 <= c < size):
                raise InvalidGrid(f"cell {(c, r)} outside a {size}x{size} grid")
            if out[r] is not None:
                raise DuplicateBasepointInRow(r)
            out[r] = c
    if None in w_col:
        raise InvalidGrid(f"row {w_col.index(None)} has no w")
    G = GridDiagram(size, tuple(w_col), tuple(z_col), axis)
    validate(G)
    return G


# -- validation ------------------------------------------------------------


def validate(G: GridDiagram) -> None:
    """Raise an ``InvalidGrid`` subclass naming the first broken invariant."""
    k = G.size
    if k < 2:
        raise InvalidGrid(f"grid size must be >= 2, got {k}")
    if len(G.w_col) != k or len(G.z_col) != k:
        raise InvalidGrid("marker arrays must have one entry per row")
    seen: Dict[int, int] = {}
    for r, c in enumerate(G.w_col):
        if not 0 <= c < k:
            raise InvalidGrid(f"w column {c} out of range in row {r}")
        if c in seen:
            raise DuplicateBasepointInColumn(c)
        seen[c] = r
    zseen: Dict[int, int] = {}
    for r, c in enumerate(G.z_col):
        if c is None:
            continue
        if not 0 <= c < k:
            raise InvalidGrid(f"z column {c} out of range in row {r}")
        if c in zseen:
            raise DuplicateBasepointInColumn(c)
        zseen[c] = r
        if G.w_col[r] == c:
            raise BothInOneCell(r)
    free_cols = {G.w_col[r] for r in G.free_w}
    for c in range(k):
        if (c not in zseen) != (c in free_cols):
            raise ZWithoutW(c)
    if G.axis is not None:
        _validate_axis(G)


def _validate_axis(G: GridDiagram) -> None:
    ax = G.axis
    k, m = G.size, ax.m
    if not 2 <= m <= k - 2:
        raise BadAxisLayout(f"axis index m={m} out of range")
    if G.w_col[0] != 0:
        raise BadAxisLayout("w1 must sit in cell (0, 0)")
    if G.w_col[m] != m:
        raise BadAxisLayout(f"w2 must sit in cell ({m}, {m})")
    if ax.z_dropped:
        if G.z_col[0] is not None or G.z_col[m] is not None:
            raise BadAxisLayout("axis z basepoints should be removed")
    else:
        if G.z_col[0] != m or G.z_col[m] != 0:
            raise BadAxisLayout("axis z basepoints misplaced")
    for c, r in knot_crossings(G):
        inside = 1 <= c <= m - 1 and 1 <= r <= m - 1
        diag = c >= m + 1 and r >= m + 1
        if not (inside or diag):
            raise BadAxisLayout(f"crossing at cell ({c}, {r}) outside R1 and R2")


def _segments(G: GridDiagram, rows: Sequence[int]):
    """Horizontal (row, c0, c1) and vertical (col, r0, r1) planar spans."""
    hor, ver = [], []
    for r in rows:
        zc, wc = G.z_col[r], G.w_col[r]
        hor.append((r, min(wc, zc), max(wc, zc)))
        wr = G.w_row_of_col[zc]
        ver.append((zc, min(r, wr), max(r, wr)))
    return hor, ver


def knot_crossings(G: GridDiagram, component=None) -> List[Tuple[int, int]]:
    """Cells of planar self-crossings among non-axis components (or one component)."""
    if component is not None:
        rows = list(G.components[component])
    else:
        rows = [
            r
            for r in range(G.size)
            if G.z_col[r] is not None
            and not (G.axis is not None and r in (0, G.axis.m))
        ]
    hor, ver = _segments(G, rows)
    out = []
    for r, c0, c1 in hor:
        for c, r0, r1 in ver:
            if c0 < c < c1 and r0 < r < r1:
                out.append((c, r))
    return sorted(out)


# -- compilers -------------------------------------------------------------


class _ColumnOrder:
    """Left-to-right ordering of abstract column ids with cheap insertion."""

    def __init__(self, ids):
        self.ids = list(ids)
        self.next_id = max(self.ids, default=-1) + 1

    def _new(self):
        self.next_id += 1
        return self.next_id - 1

    def insert_right_of(self, cid):
        new = self._new()
        self.ids.insert(self.ids.index(cid) + 1, new)
        return new

    def insert_left_of(self, cid):
        new = self._new()
        self.ids.insert(self.ids.index(cid), new)
        return new

    def append(self):
        new = self._new()
        self.ids.append(new)
        return new

    def index(self, cid):
        return self.ids.index(cid)


def _letter_jogs(order: _ColumnOrder, cur: List[int], letters, jogs) -> None:
    """One horizontal jog per letter, crossing exactly the neighbouring strand.

    A positive letter moves the left strand rightward over its neighbour, a
    negative letter moves the right strand leftward over its neighbour.
    """
    for e in letters:
        i = abs(e) - 1
        if e > 0:
            new = order.insert_right_of(cur[i + 1])
            jogs.append((cur[i], new))
            cur[i], cur[i + 1] = cur[i + 1], new
        else:
            new = order.insert_left_of(cur[i])
            jogs.append((cur[i + 1], new))
            cur[i], cur[i + 1] = new, cur[i]


def _grid_from_jogs(order: _ColumnOrder, jogs, axis=None) -> GridDiagram:
    pos = {cid: idx for idx, cid in enumerate(order.ids)}
    w = tuple(pos[src] for src, _ in jogs)
    z = tuple(pos[dst] for _, dst in jogs)
    return GridDiagram(len(jogs), w, z, axis)


def from_braid(b: BraidWord) -> GridDiagram:
    """Grid whose transverse link is the closure of ``b``.

    Rows are read as horizontal jogs of upward-moving strands, with vertical
    segments that run downward in the plane understood to wrap around the
    torus.  Letters come first, then non-crossing jogs that push strands to
    the right of their starting columns, then jogs returning every strand to
    its starting column.  Grid size is ``strands + letters + pushes`` with
    ``pushes <= strands``.
    """
    n = b.strands
    order = _ColumnOrder(range(n))
    start = list(range(n))
    cur = list(start)
    jogs: List[Tuple[int, int]] = []
    _letter_jogs(order, cur, b.letters, jogs)
    for p in range(n - 1, -1, -1):
        if order.index(cur[p]) > order.index(start[p]):
            continue
        if p == n - 1:
            new = order.append()
        else:
            new = order.insert_left_of(cur[p + 1])
        jogs.append((cur[p], new))
        cur[p] = new
    for p in range(n):
        jogs.append((cur[p], start[p]))
    return _grid_from_jogs(order, jogs)


def knot_part_of_axis_grid(b: BraidWord) -> GridDiagram:
    """The braid grid used inside ``with_axis``, before the axis is inserted.

    Rows ``0..n-1`` return strands into columns ``0..n-1`` along the
    diagonal, rows ``n..2n-1`` move them out one by one to the far right
    (undoing the half twist introduced by the nested returns), and the
    letter jogs follow.  Size ``2n + letters``.
    """
    n = b.strands
    order = _ColumnOrder(range(n))
    start = list(range(n))
    jogs: List[Tuple[int, int]] = [None] * n  # returns, filled at the end
    cur = list(start)
    for p in range(n - 1, -1, -1):
        new = order.append()
        jogs.append((start[p], new))
        cur[p] = new
    cur = sorted(cur, key=order.index)
    _letter_jogs(order, cur, b.letters, jogs)
    for i in range(n):
        jogs[i] = (cur[n - 1 - i], start[i])
    return _grid_from_jogs(order, jogs)


def with_axis(b: BraidWord) -> GridDiagram:
    """Grid for the closure of ``b`` together with its reversed braid axis.

    The axis occupies rows/columns ``0`` and ``m = strands + 1``; the braid
    strands enter the square it bounds through rows ``1..n`` and leave it
    through columns ``1..n``.
    """
    K = knot_part_of_axis_grid(b)
    n = b.strands
    k = K.size + 2
    m = n + 1

    def shift(i):
        return i + 1 if i < n else i + 2

    w = [0] * k
    z: List[Optional[int]] = [None] * k
    for r in range(K.size):
        w[shift(r)] = shift(K.w_col[r])
        z[shift(r)] = shift(K.z_col[r])
    w[0], z[0] = 0, m
    w[m], z[m] = m, 0
    G = GridDiagram(k, tuple(w), tuple(z), AxisMeta(m, n))
    validate(G)
    return G


def drop_axis_z(G: GridDiagram) -> GridDiagram:
    """Remove the axis z basepoints, leaving its two w basepoints free."""
    if G.axis is None or G.axis.z_dropped:
        raise NoAxis("diagram has no axis z basepoints to drop")
    m = G.axis.m
    z = list(G.z_col)
    z[0] = None
    z[m] = None
    ax = AxisMeta(m, G.axis.strands, True)
    return GridDiagram(G.size, G.w_col, tuple(z), ax)


def remove_axis(G: GridDiagram) -> GridDiagram:
    """Delete the axis rows and columns, leaving a plain grid for the knot."""
    if G.axis is None:
        raise NoAxis("diagram has no axis")
    m = G.axis.m
    keep = [i for i in range(G.size) if i not in (0, m)]
    newidx = {old: new for new, old in enumerate(keep)}
    w = tuple(newidx[G.w_col[r]] for r in keep)
    z = tuple(newidx[G.z_col[r]] for r in keep)
    return GridDiagram(len(keep), w, z)


def axis_polygon_rows(G: GridDiagram) -> List[Tuple[int, int, int]]:
    """Axis as (row, w column, z column) triples, also after its z's were dropped."""
    if G.axis is None:
        raise NoAxis("diagram has no axis")
    m = G.axis.m
    return [(0, 0, m), (m, m, 0)]


# -- winding numbers -------------------------------------------------------


@dataclass(frozen=True)
class WindingTable:
    size: int
    values: Tuple[Tuple[int, ...], ...]  # values[i][j] at lattice point (i, j)

    def __getitem__(self, ij):
        i, j = ij
        return self.values[i % self.size][j % self.size]


def _winding_from_segments(k, hsegs) -> WindingTable:
    """Winding numbers of a closed grid polygon given its (row, w col, z col) list.

    Uses a rightward horizontal ray from each lattice point; the polygon's
    vertical edges are recovered from consecutive rows.
    """
    # column -> (z row, w row) for the vertical edges of this polygon
    z_row = {zc: r for r, _, zc in hsegs}
    w_row = {wc: r for r, wc, _ in hsegs}
    table = [[0] * k for _ in range(k)]
    for c, zr in z_row.items():
        wr = w_row[c]
        lo, hi = min(zr, wr), max(zr, wr)
        sign = 1 if wr > zr else -1  # upward edge counts +1
        for j in range(lo + 1, hi + 1):
            for i in range(0, c + 1):
                table[i][j] += sign
    return WindingTable(k, tuple(tuple(col) for col in table))


def winding_table(G: GridDiagram, component) -> WindingTable:
    """Winding numbers of one component about every lattice point.

    ``component`` is a component index, or ``"axis"`` for the braid axis
    (available also after ``drop_axis_z``).
    """
    if component == "axis":
        return _winding_from_segments(G.size, axis_polygon_rows(G))
    if not isinstance(component, int) or not 0 <= component < G.n_components:
        raise UnknownComponent(f"no component {component!r}")
    rows = G.components[component]
    return _winding_from_segments(
        G.size, [(r, G.w_col[r], G.z_col[r]) for r in rows]
    )


# -- grid moves ------------------------------------------------------------


def _interleaved(a, b):
    (a0, a1), (b0, b1) = sorted(a), sorted(b)
    return (a0 < b0 < a1 < b1) or (b0 < a0 < b1 < a1)


def commutation_move(G: GridDiagram, kind: str, index: int) -> GridDiagram:
    """Swap columns (``kind="column"``) or rows ``index`` and ``index+1``.

    Legal when the two marker spans are disjoint or nested.
    """
    k = G.size
    if not 0 <= index < k - 1:
        raise IllegalCommutation(f"index {index} out of range")
    if G.free_w:
        raise IllegalCommutation("commutation is only defined without free basepoints")
    a, b = index, index + 1
    if kind == "column":
        span_a = (G.w_row_of_col[a], G.z_row_of_col[a])
        span_b = (G.w_row_of_col[b], G.z_row_of_col[b])
        if _interleaved(span_a, span_b):
            raise IllegalCommutation(f"columns {a} and {b} interleave")
        swap = {a: b, b: a}
        w = tuple(swap.get(c, c) for c in G.w_col)
        z = tuple(swap.get(c, c) for c in G.z_col)
        return GridDiagram(k, w, z)
    if kind == "row":
        span_a = (G.w_col[a], G.z_col[a])
        span_b = (G.w_col[b], G.z_col[b])
        if _interleaved(span_a, span_b):
            raise IllegalCommutation(f"rows {a} and {b} interleave")
        w = list(G.w_col)
        z = list(G.z_col)
        w[a], w[b] = w[b], w[a]
        z[a], z[b] = z[b], z[a]
        return GridDiagram(k, tuple(w), tuple(z))
    raise ValueError(f"kind must be 'row' or 'column', got {kind!r}")


_CORNERS = {"SW": (0, 0), "SE": (1, 0), "NW": (0, 1), "NE": (1, 1)}


def stabilization_move(G: GridDiagram, cell: Tuple[int, int], corner: str) -> GridDiagram:
    """Split the marker at ``cell = (col, row)`` into a 2x2 block.

    The block keeps ``corner`` empty, puts a marker of the other kind in the
    opposite corner and two copies of the original kind in the remaining
    corners.  Markers outside the block stay in whichever of the split
    rows/columns still needs one.
    """
    if corner not in _CORNERS:
        raise ValueError(f"corner must be one of {sorted(_CORNERS)}")
    if G.axis is not None or G.free_w:
        raise OccupiedCell("stabilization is only defined on plain grids")
    c0, r0 = cell
    kind = G.marker_at(c0, r0)
    if kind is None:
        raise OccupiedCell(f"cell {cell} holds no basepoint to stabilize")
    k = G.size
    other = "z" if kind == "w" else "w"
    ec, er = _CORNERS[corner]
    oc, orr = 1 - ec, 1 - er
    block = {}
    for dc in (0, 1):
        for dr in (0, 1):
            if (dc, dr) == (ec, er):
                continue
            block[(dc, dr)] = other if (dc, dr) == (oc, orr) else kind

    def col_shift(c):
        return c + 1 if c > c0 else c

    def row_shift(r):
        return r + 1 if r > r0 else r

    w: List[Optional[int]] = [None] * (k + 1)
    z: List[Optional[int]] = [None] * (k + 1)
    for (dc, dr), mk in block.items():
        target = w if mk == "w" else z
        target[r0 + dr] = c0 + dc
    for r in range(k):
        if r == r0:
            continue
        w[row_shift(r)] = col_shift(G.w_col[r])
        z[row_shift(r)] = col_shift(G.z_col[r])
    # the other-kind marker outside the block in the original row
    out_row_col = G.z_col[r0] if kind == "w" else G.w_col[r0]
    free_row = next(
        r0 + dr for dr in (0, 1)
        if not any(mk == other and d[1] == dr for d, mk in block.items())
    )
    (w if other == "w" else z)[free_row] = col_shift(out_row_col)
    # the other-kind marker outside the block in the original column
    out_col_row = G.z_row_of_col[c0] if kind == "w" else G.w_row_of_col[c0]
    free_col = next(
        c0 + dc for dc in (0, 1)
        if not any(mk == other and d[0] == dc for d, mk in block.items())
    )
    (w if other == "w" else z)[row_shift(out_col_row)] = free_col
    out = GridDiagram(k + 1, tuple(w), tuple(z))
    validate(out)
    return out


def cyclic_shift_move(G: GridDiagram, kind: str, steps: int = 1) -> GridDiagram:
    """Translate the torus: move the last ``steps`` rows (or columns) to the front."""
    if G.axis is not None:
        raise IllegalCommutation("axis layouts are pinned to rows and columns 0 and m")
    k = G.size
    if kind == "row":
        w = tuple(G.w_col[(r - steps) % k] for r in range(k))
        z = tuple(G.z_col[(r - steps) % k] for r in range(k))
    elif kind == "column":
        w = tuple((c + steps) % k for c in G.w_col)
        z = tuple(None if c is None else (c + steps) % k for c in G.z_col)
    else:
        raise ValueError(f"kind must be 'row' or 'column', got {kind!r}")
    return GridDiagram(k, w, z)


def legal_commutations(G: GridDiagram) -> List[Tuple[str, int]]:
    out = []
    for kind in ("column", "row"):
        for i in range(G.size - 1):
            try:
                commutation_move(G, kind, i)
            except IllegalCommutation:
                continue
            out.append((kind, i))
    return out


def unknot_grid() -> GridDiagram:
    """The 2x2 grid: w at (0,0) and (1,1), z at (1,0) and (0,1)."""
    return GridDiagram(2, (0, 1), (1, 0))
