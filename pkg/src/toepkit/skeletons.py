"""Periodic-part machinery: skeletons of windows, hole bookkeeping,
refining period towers, single-hole towers and their two-block
presentation.

Skeleton entries are three-valued: a letter index, HOLE (certified
non-periodic via an in-window letter conflict), or UNKNOWN (not decided at
this depth).  Tower patterns are two-valued (letter or HOLE).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .words import Alphabet, Word
from .sadic import DirectiveSequence, ExplicitCerts, Morphism, PointWindow

HOLE = -1
UNKNOWN = -2


def entry_char(alphabet: Alphabet, e: int) -> str:
    if e == HOLE:
        return "_"
    if e == UNKNOWN:
        return "?"
    return alphabet.names[e]


@dataclass(frozen=True)
class SkeletonWindow:
    """Periodic pattern of one period extracted from a finite window.

    entries[r] describes every position ≡ r (mod period); phase records the
    shift applied relative to the base point (0 when taken directly)."""

    alphabet: Alphabet
    period: int
    entries: tuple[int, ...]
    phase: int = 0
    hole_witnesses: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.period != len(self.entries):
            raise ValueError("pattern length must equal the period")

    def value_at(self, i: int) -> int:
        return self.entries[i % self.period]

    def shifted(self, k: int) -> "SkeletonWindow":
        p = self.period
        rotated = tuple(self.entries[(r + k) % p] for r in range(p))
        wit = {(r - k) % p: v for r, v in self.hole_witnesses.items()}
        return SkeletonWindow(self.alphabet, p, rotated,
                              (self.phase + k) % p, wit)

    @property
    def fully_determined(self) -> bool:
        return UNKNOWN not in self.entries

    @property
    def hole_residues(self) -> tuple[int, ...]:
        return tuple(r for r, e in enumerate(self.entries) if e == HOLE)

    def display(self) -> str:
        return "".join(entry_char(self.alphabet, e) for e in self.entries) \
            if self.alphabet.compact else \
            " ".join(entry_char(self.alphabet, e) for e in self.entries)


def skeleton_of_window(x: PointWindow, p: int) -> SkeletonWindow:
    """Skeleton of the window at period p: a residue gets a letter when some
    position of the class carries a period certificate, a HOLE when two
    in-window positions of the class disagree, UNKNOWN otherwise."""
    if p < 1:
        raise ValueError("period must be >= 1")
    if len(x) < 3 * p:
        raise ValueError("window too narrow: need at least 3 periods")
    entries = []
    witnesses = {}
    for r in range(p):
        first = x.start + ((r - x.start) % p)  # least in-window position ≡ r
        positions = range(first, x.end, p)
        conflict = x.refutation(first, p)
        if conflict is not None:
            entries.append(HOLE)
            witnesses[r] = conflict
            continue
        if any(x.confirmed(i, p) for i in positions):
            entries.append(x.letter(first))
        else:
            entries.append(UNKNOWN)
    return SkeletonWindow(x.alphabet, p, tuple(entries), 0, witnesses)


def is_essential(s: SkeletonWindow) -> bool:
    """No proper divisor of the period leaves the pattern rotation-invariant."""
    p = s.period
    for q in range(1, p):
        if p % q:
            continue
        if all(s.entries[(r + q) % p] == s.entries[r] for r in range(p)):
            return False
    return True


def holes(s: SkeletonWindow, interval: tuple[int, int]) -> list[int]:
    """Certified hole positions inside [lo, hi)."""
    lo, hi = interval
    return [i for i in range(lo, hi) if s.value_at(i) == HOLE]


def unknown_positions(s: SkeletonWindow, interval: tuple[int, int]) -> list[int]:
    lo, hi = interval
    return [i for i in range(lo, hi) if s.value_at(i) == UNKNOWN]


# --------------------------------------------------------------------------
# towers


class SkeletonTower:
    """Strictly refining tower of periodic patterns: each period divides the
    next, and deeper patterns only fill earlier holes."""

    def __init__(self, alphabet: Alphabet, periods: Sequence[int],
                 patterns: Sequence[Sequence[int]]):
        periods = tuple(periods)
        patterns = tuple(tuple(p) for p in patterns)
        if len(periods) != len(patterns) or not periods:
            raise ValueError("need one pattern per period")
        for p, pat in zip(periods, patterns):
            if len(pat) != p:
                raise ValueError("pattern length differs from its period")
            for e in pat:
                if e != HOLE and not 0 <= e < len(alphabet):
                    raise ValueError("bad pattern entry %r" % (e,))
        for (p, pat), (q, qat) in zip(zip(periods, patterns),
                                      list(zip(periods, patterns))[1:]):
            if q <= p or q % p:
                raise ValueError("periods must strictly increase and divide")
            for r in range(q):
                below = pat[r % p]
                if below != HOLE and qat[r] != below:
                    raise ValueError("refinement broken at residue %d" % r)
        self.alphabet = alphabet
        self.periods = periods
        self.patterns = patterns

    @property
    def depth(self) -> int:
        return len(self.periods)

    def level(self, n: int) -> SkeletonWindow:
        return SkeletonWindow(self.alphabet, self.periods[n], self.patterns[n])

    def eval(self, i: int) -> Optional[int]:
        """Letter at position i from the shallowest defining level, or None
        if still a hole at the deepest level."""
        for p, pat in zip(self.periods, self.patterns):
            v = pat[i % p]
            if v != HOLE:
                return v
        return None

    def defining_level(self, i: int) -> Optional[int]:
        for n, (p, pat) in enumerate(zip(self.periods, self.patterns)):
            if pat[i % p] != HOLE:
                return n
        return None

    def hole_positions(self, n: int, interval: tuple[int, int]) -> list[int]:
        lo, hi = interval
        p, pat = self.periods[n], self.patterns[n]
        return [i for i in range(lo, hi) if pat[i % p] == HOLE]

    def hole_density(self, n: int) -> float:
        p, pat = self.periods[n], self.patterns[n]
        return sum(1 for e in pat if e == HOLE) / p

    def is_single_hole(self) -> bool:
        return all(sum(1 for e in pat if e == HOLE) == 1
                   for pat in self.patterns)

    def point_window(self, span: tuple[int, int]) -> PointWindow:
        """Window of the generated point over [lo, hi); every position must
        be defined at the deepest level.  Certificates record the defining
        periods."""
        lo, hi = span
        letters = []
        certs = {}
        for i in range(lo, hi):
            v = self.eval(i)
            if v is None:
                raise ValueError("position %d is a hole at every level" % i)
            letters.append(v)
            certs[i] = {self.periods[self.defining_level(i)]}
        return PointWindow(self.alphabet, lo, bytes(letters),
                           ExplicitCerts(certs))


def tower_eval(t: SkeletonTower, i: int) -> Optional[int]:
    return t.eval(i)


def parse_pattern(alphabet: Alphabet, text: str) -> list[int]:
    """Pattern text: letter names with `_` for holes (space separated, or
    one char per symbol for compact alphabets)."""
    items = text.split() if (" " in text.strip() or not alphabet.compact) \
        else list(text.strip())
    return [HOLE if it == "_" else alphabet.index(it) for it in items]


def pattern_text(alphabet: Alphabet, pattern: Sequence[int]) -> str:
    sep = "" if alphabet.compact else " "
    return sep.join(entry_char(alphabet, e) for e in pattern)


def single_hole_tower(alphabet: Alphabet, periods: Sequence[int],
                      base: Sequence[int],
                      fills: Sequence[Sequence[int]]) -> SkeletonTower:
    """Build a tower with exactly one hole per period.

    `base` is the first pattern (one HOLE).  fills[k] has length
    periods[k+1]/periods[k] with exactly one HOLE: entry j gives the letter
    inserted at the k-th-level hole offset by j periods, the HOLE marking
    the surviving hole.
    """
    periods = list(periods)
    if len(fills) != len(periods) - 1:
        raise ValueError("need one fill word per refinement step")
    pat = list(base)
    if sum(1 for e in pat if e == HOLE) != 1:
        raise ValueError("base pattern must have exactly one hole")
    patterns = [tuple(pat)]
    for k, fill in enumerate(fills):
        p, q = periods[k], periods[k + 1]
        if q % p or q // p < 2:
            raise ValueError("periods must refine with ratio >= 2")
        ratio = q // p
        fill = list(fill)
        if len(fill) != ratio:
            raise ValueError("fill %d must have length %d" % (k, ratio))
        if sum(1 for e in fill if e == HOLE) != 1:
            raise ValueError("fill %d must have exactly one hole" % k)
        h = patterns[-1].index(HOLE)
        nxt = []
        for r in range(q):
            below = patterns[-1][r % p]
            if below != HOLE:
                nxt.append(below)
            else:
                nxt.append(fill[(r - h) // p])
        patterns.append(tuple(nxt))
    return SkeletonTower(alphabet, periods, patterns)


def filling(t: SkeletonTower, n: int, m: int) -> Word:
    """Letters the tower inserts at the level-n holes strictly between two
    consecutive level-m holes (length periods[m]/periods[n] - 1)."""
    if not t.is_single_hole():
        raise ValueError("fillings are defined for single-hole towers")
    if not 0 <= n < m < t.depth:
        raise ValueError("need tower levels n < m")
    pn, pm = t.periods[n], t.periods[m]
    hn = t.patterns[n].index(HOLE)
    hm = t.patterns[m].index(HOLE)
    if (hm - hn) % pn:
        raise ValueError("hole chain misaligned")
    letters = []
    for j in range(1, pm // pn):
        v = t.patterns[m][(hm + j * pn) % pm]
        if v == HOLE:
            raise ValueError("unexpected hole inside a filling")
        letters.append(v)
    return Word(t.alphabet, bytes(letters))


def single_hole_to_rank2(t: SkeletonTower) -> DirectiveSequence:
    """Two-letter tower presentation of a binary single-hole system: level
    words are the two blocks the point shows on each period grid."""
    if not t.is_single_hole():
        raise ValueError("need a single-hole tower")
    if len(t.alphabet) != 2:
        raise ValueError("two-block presentation needs a binary alphabet")
    used = set()
    for pat in t.patterns:
        used.update(e for e in pat if e != HOLE)
    if len(used) < 2:
        raise ValueError("only one letter occurs: the point is periodic")
    syms = Alphabet("12")
    p0 = t.periods[0]
    images0 = []
    for c in range(2):
        images0.append(Word(t.alphabet, bytes(
            c if e == HOLE else e for e in t.patterns[0])))
    levels = [Morphism(syms, t.alphabet, tuple(images0))]
    for k in range(1, t.depth):
        p_lo, p_hi = t.periods[k - 1], t.periods[k]
        h = t.patterns[k - 1].index(HOLE)
        imgs = []
        for c in range(2):
            letters = []
            for j in range(p_hi // p_lo):
                v = t.patterns[k][j * p_lo + h]
                letters.append(c if v == HOLE else v)
            imgs.append(syms.word(letters))
        levels.append(Morphism(syms, syms, tuple(imgs)))
    return DirectiveSequence(levels)


# --------------------------------------------------------------------------
# tower text format


def serialize_tower(t: SkeletonTower) -> str:
    lines = ["alphabet: %s" % " ".join(t.alphabet.names)]
    for n in range(t.depth):
        lines.append("period %d: %d" % (n, t.periods[n]))
        lines.append("pattern %d: %s" % (n, pattern_text(t.alphabet,
                                                         t.patterns[n])))
    return "\n".join(lines) + "\n"


def parse_tower(text: str) -> SkeletonTower:
    alphabet = None
    periods: dict[int, int] = {}
    patterns: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, rest = line.split(":", 1)
            fields = head.split()
            if fields[0] == "alphabet":
                alphabet = Alphabet(rest.split())
            elif fields[0] == "period":
                periods[int(fields[1])] = int(rest)
            elif fields[0] == "pattern":
                if alphabet is None:
                    raise ValueError("alphabet line must come first")
                patterns[int(fields[1])] = parse_pattern(alphabet, rest)
            else:
                raise ValueError("unknown directive %r" % fields[0])
        except (IndexError, ValueError) as exc:
            raise ValueError("line %d: %s" % (lineno, exc)) from None
    if alphabet is None or not periods:
        raise ValueError("missing alphabet or periods")
    depth = max(periods) + 1
    if sorted(periods) != list(range(depth)) or sorted(patterns) != list(range(depth)):
        raise ValueError("period/pattern levels must be 0..%d" % (depth - 1))
    return SkeletonTower(alphabet, [periods[n] for n in range(depth)],
                         [patterns[n] for n in range(depth)])
