"""The distinguished cycle theta of a braid grid and its vanishing behaviour."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .braid import (
    BraidWord,
    format_braid,
    markov_stabilize,
    reverse_orientation,
    self_linking,
)
from .complex import HAT, MINUS, TILDE, GridState, alexander, maslov
from .errors import HasFreeBasepoints
from .grid import GridDiagram, from_braid
from .homology import is_boundary, is_boundary_at_u_one, is_cycle


def theta_state(G: GridDiagram) -> GridState:
    """Upper-right corners of the cells holding a ``z``."""
    if G.free_w:
        raise HasFreeBasepoints(f"rows {sorted(G.free_w)} hold free basepoints")
    k = G.size
    x = [0] * k
    for r, c in enumerate(G.z_col):
        x[(c + 1) % k] = (r + 1) % k
    return tuple(x)


@dataclass
class ThetaReport:
    braid: str
    grid_size: int
    sl: int
    A: Fraction
    M: int
    is_cycle: Dict[str, bool]
    hat_vanishes: bool
    tilde_vanishes: bool
    minus_nonzero: bool
    # "u_one" when certified in the U_w = 1 quotient, "exact" otherwise
    minus_certificate: str
    seconds: float = field(default=0.0, compare=False)

    @property
    def identities_hold(self) -> bool:
        return self.M == self.sl + 1 and self.A == Fraction(self.sl + 1, 2)

    def to_json(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["A"] = int(self.A) if self.A.denominator == 1 else float(self.A)
        if not timing:
            d.pop("seconds")
        return d


def minus_class_nonzero(G: GridDiagram, x: GridState):
    """(nonzero, certificate) for a state in the MINUS flavor."""
    if is_boundary_at_u_one(G, MINUS, x) is False:
        return True, "u_one"
    return not is_boundary(G, MINUS, x).is_boundary, "exact"


def theta_report(b: BraidWord, G: Optional[GridDiagram] = None) -> ThetaReport:
    t0 = time.perf_counter()
    sl = self_linking(b)
    G = from_braid(b) if G is None else G
    x = theta_state(G)
    cycles = {f: is_cycle(G, f, x) for f in (TILDE, HAT, MINUS)}
    hat = is_boundary(G, HAT, x).is_boundary
    tilde = is_boundary(G, TILDE, x).is_boundary
    nonzero, cert = minus_class_nonzero(G, x)
    return ThetaReport(
        braid=format_braid(b),
        grid_size=G.size,
        sl=sl,
        A=alexander(G, x, 0),
        M=maslov(G, x),
        is_cycle=cycles,
        hat_vanishes=hat,
        tilde_vanishes=tilde,
        minus_nonzero=nonzero,
        minus_certificate=cert,
        seconds=round(time.perf_counter() - t0, 4),
    )


def lambda_minus_report(b: BraidWord) -> ThetaReport:
    """The other Legendrian invariant, read off the orientation-reversed braid."""
    return theta_report(reverse_orientation(b))


@dataclass
class StabilizationRecord:
    base: ThetaReport
    positive: ThetaReport
    negative: ThetaReport

    @property
    def positive_preserves(self) -> bool:
        b, p = self.base, self.positive
        return (b.sl, b.A, b.M, b.hat_vanishes) == (p.sl, p.A, p.M, p.hat_vanishes)

    @property
    def negative_vanishes(self) -> bool:
        return self.negative.sl == self.base.sl - 2 and self.negative.hat_vanishes

    @property
    def ok(self) -> bool:
        return self.positive_preserves and self.negative_vanishes

    def to_json(self, timing: bool = True) -> dict:
        return {
            "base": self.base.to_json(timing),
            "positive": self.positive.to_json(timing),
            "negative": self.negative.to_json(timing),
            "positive_preserves": self.positive_preserves,
            "negative_vanishes": self.negative_vanishes,
        }


def stabilization_experiment(b: BraidWord) -> StabilizationRecord:
    return StabilizationRecord(
        theta_report(b),
        theta_report(markov_stabilize(b, 1)),
        theta_report(markov_stabilize(b, -1)),
    )
