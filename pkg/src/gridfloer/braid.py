"""Braid words, Markov stabilization and classical transverse bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import InvalidBraid, MultiComponentClosure, ParseError


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators; letter ``e`` stands for sigma_|e|^sign(e)."""

    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(e) for e in self.letters))
        if self.strands < 1:
            raise InvalidBraid(f"strand count must be >= 1, got {self.strands}")
        for e in self.letters:
            if e == 0 or abs(e) > self.strands - 1:
                raise InvalidBraid(
                    f"letter {e} out of range for {self.strands} strands"
                )

    def __str__(self):
        return format_braid(self)

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        return parse_braid(text)


def parse_braid(text: str) -> BraidWord:
    """Parse ``"n: e1 e2 ..."``, e.g. ``"2: 1 1 1"`` or ``"1:"``."""
    if ":" not in text:
        raise ParseError(f"missing ':' in braid word {text!r}")
    head, _, tail = text.partition(":")
    try:
        n = int(head.strip())
        letters = tuple(int(tok) for tok in tail.split())
    except ValueError as exc:
        raise ParseError(f"malformed braid word {text!r}") from exc
    try:
        return BraidWord(n, letters)
    except InvalidBraid as exc:
        raise ParseError(str(exc)) from exc


def format_braid(b: BraidWord) -> str:
    if not b.letters:
        return f"{b.strands}:"
    return f"{b.strands}: " + " ".join(str(e) for e in b.letters)


def writhe(b: BraidWord) -> int:
    return sum(1 if e > 0 else -1 for e in b.letters)


def closure_permutation(b: BraidWord) -> Tuple[int, ...]:
    """Permutation of {1..n} (as a tuple, entry p-1 is the image of p).

    Strand starting at position p ends at position perm[p-1] after reading
    the word left to right.
    """
    pos = list(range(1, b.strands + 1))  # pos[s] = current position of strand s
    where = list(range(b.strands))  # where[position-1] = strand index
    for e in b.letters:
        i = abs(e) - 1
        a, c = where[i], where[i + 1]
        where[i], where[i + 1] = c, a
        pos[a], pos[c] = i + 2, i + 1
    return tuple(pos)


def component_count(b: BraidWord) -> int:
    perm = closure_permutation(b)
    seen = [False] * b.strands
    cycles = 0
    for start in range(b.strands):
        if seen[start]:
            continue
        cycles += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = perm[p] - 1
    return cycles


def is_knot(b: BraidWord) -> bool:
    return component_count(b) == 1


def self_linking(b: BraidWord) -> int:
    """Bennequin's formula sl = writhe - strands, for knot closures only."""
    c = component_count(b)
    if c != 1:
        raise MultiComponentClosure(c)
    return writhe(b) - b.strands


def markov_stabilize(b: BraidWord, sign: int) -> BraidWord:
    """Append sigma_n^{sign} on a new strand; sign=+1 preserves the transverse type."""
    if sign not in (1, -1):
        raise InvalidBraid(f"stabilization sign must be +1 or -1, got {sign}")
    n = b.strands
    return BraidWord(n + 1, b.letters + (sign * n,))


def reverse_orientation(b: BraidWord) -> BraidWord:
    """Braid whose closure is the closure of ``b`` with reversed orientation."""
    return BraidWord(b.strands, tuple(reversed(b.letters)))
