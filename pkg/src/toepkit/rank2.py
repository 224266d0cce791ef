"""Strong two-block cuts, cut coincidence, the block-permutation
equivalences on skeleton classes, and the finite-depth conjugacy tests.

Every test here is tri-state: `witnessed` and `refuted` verdicts carry
certificates, and refutations are only issued on conjugacy-invariant
mismatches computed from window-complete data, never on bare search
exhaustion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .words import Word, common_prefix_length, common_suffix_length, is_uniquely_built, occurrences
from .sadic import (
    DirectiveSequence,
    Morphism,
    PointWindow,
    canonical_window,
    language,
    language_is_exact,
    scale_divisors,
)
from .skeletons import HOLE, UNKNOWN, SkeletonWindow, skeleton_of_window
from .verdicts import Verdict, refuted, unknown, witnessed


@dataclass(frozen=True)
class Cut:
    """Phase t for period p at which the window decomposes into exactly two
    distinct blocks."""

    period: int
    offset: int
    blocks: frozenset[Word]
    window_certified: bool = True  # observed blocks only; more could exist
                                   # beyond the window


def grid_blocks(x: PointWindow, p: int, offset: int) -> list[Word]:
    """Full blocks x[t+kp, t+(k+1)p) inside the window, in order."""
    first = x.start + ((offset - x.start) % p)
    out = []
    s = first
    while s + p <= x.end:
        out.append(x.word(s, s + p))
        s += p
    return out


def find_strong_rank2_cuts(x: PointWindow, p: int) -> list[Cut]:
    """All phases with exactly two observed blocks."""
    if len(x) < 4 * p:
        raise ValueError("window too narrow: need at least 4 periods")
    out = []
    for t in range(p):
        seen = frozenset(grid_blocks(x, p, t))
        if len(seen) == 2:
            out.append(Cut(p, t, seen))
    return out


def cuts_coincide(x: PointWindow, c1: Cut, c2: Cut) -> Verdict:
    """Whether the phase mismatch of two nested cuts sits inside the
    confirmed periodic part: witnessed with the covering interval, or
    unknown (never refuted; the periodic part is one-sided)."""
    p, t = c1.period, c1.offset
    q, s = c2.period, c2.offset
    if q % p:
        raise ValueError("periods do not divide")
    k = (s - t) // p
    left = (t + k * p, s)
    right = (s, t + (k + 1) * p)
    for interval in (left, right):
        if x.interval_confirmed(interval[0], interval[1], q):
            return witnessed({"interval": interval, "period": q})
    return unknown(detail="no interval certificate at period %d" % q)


def letterwise_dichotomy_holds(x: PointWindow, c1: Cut, c2: Cut) -> bool:
    """Window-level check of the coincidence dichotomy: one of the two
    offset intervals shows no letter conflict at the coarser cut's period."""
    p, t = c1.period, c1.offset
    q, s = c2.period, c2.offset
    k = (s - t) // p
    for lo, hi in ((t + k * p, s), (s, t + (k + 1) * p)):
        if all(x.refutation(i, q) is None for i in range(lo, hi)):
            return True
    return False


# --------------------------------------------------------------------------
# skeleton classes


class PartClass:
    """One skeleton class: the common skeleton, the grid phase of its
    members relative to the sampled point, and (lazily) the member blocks
    read off the sample window along that grid.

    `complete` may be passed as a zero-argument callable; it is consulted
    only when a verdict depends on the observed data being exhaustive."""

    def __init__(self, skeleton: SkeletonWindow, phase: int,
                 window: PointWindow, complete):
        self.skeleton = skeleton
        self.phase = phase % skeleton.period
        self.window = window
        self._complete = complete
        self._blocks: Optional[tuple[Word, ...]] = None

    @property
    def complete(self) -> bool:
        if callable(self._complete):
            self._complete = self._complete()
        return self._complete

    @property
    def blocks(self) -> tuple[Word, ...]:
        if self._blocks is None:
            self._blocks = tuple(grid_blocks(self.window,
                                             self.skeleton.period, self.phase))
        return self._blocks

    @property
    def block_set(self) -> frozenset[Word]:
        return frozenset(self.blocks)

    @property
    def length(self) -> int:
        """Defined run from position 0 to the first hole of the skeleton."""
        if self.skeleton.value_at(0) in (HOLE, UNKNOWN):
            raise ValueError("class not aligned on a letter at 0")
        i = 0
        while self.skeleton.value_at(i) not in (HOLE, UNKNOWN):
            i += 1
        return i

    def shifted(self, r: int) -> "PartClass":
        return PartClass(self.skeleton.shifted(r), self.phase + r,
                         self.window, self.complete)


def _window_block_complete(d: DirectiveSequence, p: int, depth: int) -> bool:
    """The sampled level word carries every 2p-word of the (exact)
    depth-limited language, so observed block data is complete."""
    if not language_is_exact(d, 2 * p, depth):
        return False
    host = d.level_word(depth, 0).data
    return all(host.find(w.data) >= 0 for w in language(d, 2 * p, depth))


def parts(d: DirectiveSequence, p: int, depth: int) -> list[PartClass]:
    """The p skeleton classes of the generated system (deduplicated)."""
    x = canonical_window(d, depth)
    if len(x) < 4 * p:
        raise ValueError("level words at depth %d too short for period %d"
                         % (depth, p))
    base = skeleton_of_window(x, p)
    if not base.fully_determined:
        raise ValueError("certificates too shallow: skeleton undecided at"
                         " period %d, depth %d" % (p, depth))
    memo = {}

    def complete():
        if "v" not in memo:
            memo["v"] = _window_block_complete(d, p, depth)
        return memo["v"]

    out = []
    seen = set()
    for k in range(p):
        skel = base.shifted(k)
        if skel.entries in seen:
            continue
        seen.add(skel.entries)
        out.append(PartClass(skel, k, x, complete))
    return out


def _starred_classes(d: DirectiveSequence, p: int, depth: int
                     ) -> list[PartClass]:
    classes = parts(d, p, depth)
    starred = [c for c in classes
               if c.skeleton.value_at(-1) == HOLE
               and c.skeleton.value_at(0) not in (HOLE, UNKNOWN)]
    if not starred:
        raise ValueError("no aligned class at period %d: certificates too"
                         " shallow or period degenerate" % p)
    return starred


def chi_with_run(d: DirectiveSequence, p: int, depth: int
                 ) -> tuple[list[PartClass], int]:
    """The recentered maximal classes together with the maximal defined
    run length they realize."""
    starred = _starred_classes(d, p, depth)
    top = max(c.length for c in starred)
    keep = [c for c in starred if c.length == top]
    return [c.shifted(top // 2) for c in keep], top


def chi(d: DirectiveSequence, p: int, depth: int) -> list[PartClass]:
    """Classes with a hole at -1 and a letter at 0, restricted to maximal
    defined run length and recentered by half of it."""
    return chi_with_run(d, p, depth)[0]


def run_length(d: DirectiveSequence, p: int, depth: int) -> int:
    """The maximal defined run over the aligned classes (the quantity whose
    drift under conjugacy is bounded by twice the code width)."""
    return max(c.length for c in _starred_classes(d, p, depth))


# --------------------------------------------------------------------------
# block permutations


@dataclass(frozen=True)
class BlockPermutation:
    """Partial bijection on the observed period-p blocks."""

    period: int
    pairs: tuple[tuple[Word, Word], ...]

    def __post_init__(self):
        src = [a for a, _ in self.pairs]
        dst = [b for _, b in self.pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise ValueError("mapping is not a bijection on its domain")
        for a, b in self.pairs:
            if len(a) != self.period or len(b) != self.period:
                raise ValueError("blocks must have the period as length")

    @property
    def mapping(self) -> dict[Word, Word]:
        return dict(self.pairs)

    def inverse(self) -> "BlockPermutation":
        return BlockPermutation(self.period,
                                tuple((b, a) for a, b in self.pairs))

    def apply_to_word(self, w: Word) -> Word:
        if len(w) % self.period:
            raise ValueError("word length not a multiple of the period")
        m = {a.data: b.data for a, b in self.pairs}
        out = bytearray()
        for i in range(0, len(w), self.period):
            piece = w.data[i:i + self.period]
            if piece not in m:
                raise ValueError("mapping undefined on an occurring block")
            out.extend(m[piece])
        return Word(w.alphabet, bytes(out))


def random_block_permutation(rng, blocks: Sequence[Word], p: int
                             ) -> BlockPermutation:
    """A random permutation of the observed block set (extendable by the
    identity off its domain)."""
    blocks = sorted(set(blocks))
    images = blocks[:]
    rng.shuffle(images)
    return BlockPermutation(p, tuple(zip(blocks, images)))


def _sequence_bijections(bw: Sequence[Word], bz: Sequence[Word],
                         min_overlap: int):
    """All (bijection, shift) pairs turning one observed sequence into the
    other on an overlap of at least min_overlap blocks."""
    n, m = len(bw), len(bz)
    for j in range(-(m - min_overlap), n - min_overlap + 1):
        lo = max(0, -j)
        hi = min(n, m - j)
        if hi - lo < min_overlap:
            continue
        mapping: dict[Word, Word] = {}
        ok = True
        for i in range(lo, hi):
            a, b = bw[i], bz[i + j]
            if mapping.get(a, b) != b:
                ok = False
                break
            mapping[a] = b
        if not ok:
            continue
        if len(set(mapping.values())) != len(mapping):
            continue
        yield mapping, j


def _sequence_bijection(bw: Sequence[Word], bz: Sequence[Word],
                        min_overlap: int) -> Optional[tuple[dict, int]]:
    for got in _sequence_bijections(bw, bz, min_overlap):
        return got
    return None


def ep_equivalent(w: PartClass, z: PartClass, p: int) -> Verdict:
    """Blockwise-permutation equivalence of two skeleton classes at the
    same period, from their observed block sequences."""
    if w.skeleton.period != p or z.skeleton.period != p:
        raise ValueError("classes not at period %d" % p)
    if not w.blocks or not z.blocks:
        return unknown(detail="no observed blocks")
    min_overlap = max(4, min(len(w.blocks), len(z.blocks)) // 2)
    found = _sequence_bijection(w.blocks, z.blocks, min_overlap)
    if found is not None:
        mapping, shift = found
        covers = (set(mapping) == set(w.block_set)
                  and set(mapping.values()) == set(z.block_set))
        if covers:
            phi = BlockPermutation(p, tuple(sorted(mapping.items())))
            return witnessed({"phi": phi, "shift": shift})
        if not (w.complete and z.complete):
            return unknown(detail="bijection found but block data incomplete")
    if w.complete and z.complete:
        if len(w.block_set) != len(z.block_set):
            return refuted({"reason": "block-language sizes differ",
                            "sizes": (len(w.block_set), len(z.block_set)),
                            "hole_residues": (w.skeleton.hole_residues,
                                              z.skeleton.hole_residues)})
        return refuted({"reason": "no block bijection matches the sequences",
                        "hole_residues": (w.skeleton.hole_residues,
                                          z.skeleton.hole_residues)})
    return unknown(detail="block data incomplete at this depth")


def ep_fin_equivalent(cx: Sequence[PartClass], cy: Sequence[PartClass],
                      p: int) -> Verdict:
    """Equality of the two class collections up to blockwise permutation:
    every class on either side must match one on the other."""
    if len(cx) != len(cy):
        if all(c.complete for c in list(cx) + list(cy)):
            return refuted({"reason": "class counts differ",
                            "counts": (len(cx), len(cy))})
        return unknown(detail="class counts differ on incomplete data")
    matches = []
    any_unknown = False
    for a in cx:
        row = [ep_equivalent(a, b, p) for b in cy]
        if any(v.is_witnessed for v in row):
            matches.append(next(v for v in row if v.is_witnessed))
        elif all(v.is_refuted for v in row):
            return refuted({"reason": "a class matches nothing opposite",
                            "class_holes": a.skeleton.hole_residues})
        else:
            any_unknown = True
    for b in cy:
        row = [ep_equivalent(a, b, p) for a in cx]
        if all(v.is_refuted for v in row):
            return refuted({"reason": "a class matches nothing opposite",
                            "class_holes": b.skeleton.hole_residues})
        if not any(v.is_witnessed for v in row):
            any_unknown = True
    if any_unknown:
        return unknown(detail="some class pairs undecided")
    return witnessed({"matches": [m.certificate for m in matches]})


# --------------------------------------------------------------------------
# conjugacy


def _prime_support(n: int) -> set[int]:
    out = set()
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 1
    if n > 1:
        out.add(n)
    return out


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _divisors_of(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def recode_directive(d: DirectiveSequence, phi: BlockPermutation,
                     level: int) -> DirectiveSequence:
    """The system generated by recoding the level-`level` words blockwise:
    new bottom morphism applies the block permutation, upper levels are
    unchanged."""
    words = d.level_words(level)
    for w in words:
        if len(w) % phi.period:
            raise ValueError("level-word length not divisible by the period")
    bottom = Morphism(d.alphabet(level), d.alphabet(0),
                      tuple(phi.apply_to_word(w) for w in words))
    rest = [d.morphism(n) for n in range(level, d.listed_depth)]
    tail = None
    if d.has_tail:
        offset = level - 1

        def tail(k, _d=d, _off=offset):
            return _d.morphism(k + _off)

    return DirectiveSequence([bottom] + rest, tail_rule=tail)


def conjugacy_test(dx: DirectiveSequence, dy: DirectiveSequence,
                   depth: int, max_p: Optional[int] = None) -> Verdict:
    """Search for a period and a block permutation carrying one generated
    point onto a point of the other system.

    Witnessed certificates carry (p, permutation, alignment); refuted only
    on scale incompatibility (a prime dividing one depth-limited scale and
    not the other).  Otherwise unknown at this depth.
    """
    sx = scale_divisors(dx, depth)
    sy = scale_divisors(dy, depth)
    lx, ly = _lcm(sx), _lcm(sy)
    px, py = _prime_support(lx), _prime_support(ly)
    if px - py or py - px:
        return refuted({"reason": "scale supports differ at depth %d" % depth,
                        "primes": (sorted(px), sorted(py)),
                        "divisors": (sx, sy)}, depth=depth)
    if max_p is None:
        max_p = _lcm([v for v in sx[:3]]) or 1
    candidates = [p for p in _divisors_of(math.gcd(lx, ly)) if p <= max_p]
    wx = canonical_window(dx, depth)
    wy = canonical_window(dy, depth)
    for p in candidates:
        got = _match_at_period(wx, wy, p)
        if got is not None:
            phi, phase, shift = got
            return witnessed({"p": p, "phi": phi, "phase": phase,
                              "shift": shift}, depth=depth)
    return unknown(depth=depth,
                   detail="no block permutation found for p <= %d" % max_p)


_MATCH_BLOCK_CAP = 256


def _central_blocks(w: PointWindow, p: int, phase: int, cap: int) -> list[Word]:
    blocks = grid_blocks(w, p, phase)
    if len(blocks) > cap:
        lo = (len(blocks) - cap) // 2
        blocks = blocks[lo:lo + cap]
    return blocks


def _match_at_period(wx: PointWindow, wy: PointWindow, p: int):
    bx = _central_blocks(wx, p, 0, _MATCH_BLOCK_CAP)
    if len(bx) < 8:
        return None
    min_overlap = max(4, len(bx) // 2)
    for phase in range(p):
        by = _central_blocks(wy, p, phase, 2 * _MATCH_BLOCK_CAP)
        if len(by) < 4:
            continue
        found = _sequence_bijection(bx, by, min_overlap)
        if found is None:
            continue
        mapping, shift = found
        if set(mapping) != set(bx):
            continue
        phi = BlockPermutation(p, tuple(sorted(mapping.items())))
        return phi, phase, shift
    return None


def reverify_conjugacy(dx: DirectiveSequence, dy: DirectiveSequence,
                       p: int, phi: BlockPermutation, depth: int) -> bool:
    """Re-check a recovered witness on wider windows: the recoded window
    must occur blockwise inside the other system's sampled point."""
    wx = canonical_window(dx, depth)
    wy = canonical_window(dy, depth)
    bx = _central_blocks(wx, p, 0, 2 * _MATCH_BLOCK_CAP)
    try:
        image = [phi.mapping[b] for b in bx]
    except KeyError:
        return False
    min_overlap = max(4, len(bx) // 2)
    for phase in range(p):
        by = _central_blocks(wy, p, phase, 4 * _MATCH_BLOCK_CAP)
        ov = min(min_overlap, max(4, len(by) // 2))
        for mapping, _ in _sequence_bijections(image, by, ov):
            if all(a == b for a, b in mapping.items()):
                return True
    return False


def _capped_depth(d: DirectiveSequence, depth: int) -> int:
    return depth if d.has_tail else min(depth, d.listed_depth)


def _chi_sample_depth(d: DirectiveSequence, divisors: list[int], p: int,
                      depth: int) -> Optional[int]:
    """Deep enough that the sample window holds at least 8 period-p blocks,
    within the available depth; None when no such depth exists."""
    n = divisors.index(p)
    for sample in range(n + 3, depth + 1):
        if d.level_lengths(sample)[0] >= 8 * p:
            return sample
    return None


def chi_conjugacy_criterion(dx: DirectiveSequence, dy: DirectiveSequence,
                            depth: int,
                            code_width_bound: Optional[int] = None) -> Verdict:
    """Compare the recentered maximal skeleton classes under blockwise
    permutation at every period the two depth-limited scales share and the
    windows can support.

    A conjugacy of code width c moves the maximal defined run by less than
    2c; a run drift of at least twice the width bound therefore refutes
    conjugacy by any code up to that width (the certificate names the
    bound).  Default bound per period: max(3, p // 4).
    """
    depth_x = _capped_depth(dx, depth)
    depth_y = _capped_depth(dy, depth)
    sx = scale_divisors(dx, depth_x)
    sy = scale_divisors(dy, depth_y)
    shared = sorted(p for p in set(sx) & set(sy) if p > 1)
    per_level = []
    for p in shared:
        nx = _chi_sample_depth(dx, sx, p, depth_x)
        ny = _chi_sample_depth(dy, sy, p, depth_y)
        if nx is None or ny is None:
            continue  # window cannot support this period at this depth
        try:
            cx = chi(dx, p, nx)
            cy = chi(dy, p, ny)
            lx = run_length(dx, p, nx)
            ly = run_length(dy, p, ny)
        except ValueError as exc:
            per_level.append((p, unknown(detail=str(exc))))
            continue
        bound = code_width_bound if code_width_bound is not None \
            else max(3, p // 4)
        if abs(lx - ly) >= 2 * bound:
            return refuted({"failing_period": p,
                            "reason": "run-length drift %d refutes every"
                                      " conjugacy of code width < %d"
                                      % (abs(lx - ly), bound),
                            "run_lengths": (lx, ly),
                            "width_bound": bound}, depth=depth)
        per_level.append((p, ep_fin_equivalent(cx, cy, p)))
    if not per_level:
        return unknown(depth=depth, detail="no shared checkable periods")
    if any(v.is_refuted for _, v in per_level):
        p, v = next(t for t in per_level if t[1].is_refuted)
        return refuted({"failing_period": p, "inner": v.certificate},
                       depth=depth)
    if all(v.is_witnessed for _, v in per_level):
        return witnessed({"periods": [p for p, _ in per_level]}, depth=depth)
    return unknown(depth=depth, detail="some levels undecided: %s"
                   % [(p, v.status) for p, v in per_level])


# --------------------------------------------------------------------------
# strong rank-2 witness


@dataclass(frozen=True)
class StrongRank2Witness:
    q: int
    r: int
    u: Word
    v: Word


def strong_rank2_witness(d: DirectiveSequence, p: int, m: int, depth: int,
                         q_bound: Optional[int] = None,
                         r_factor: int = 4,
                         q_values: Optional[Sequence[int]] = None
                         ) -> Optional[StrongRank2Witness]:
    """A cut period q (multiple of p), radius r > q and a two-block code
    {u, v} with common affixes longer than m such that every word of the
    depth-limited language at lengths 2r and 4r is uniquely built.

    Candidate periods are the depth-limited scale divisors (or q_values).
    Absence means only that nothing was found within the search bounds.
    """
    x = canonical_window(d, depth)
    divs = scale_divisors(d, depth)
    max_len = max(d.level_lengths(depth))
    candidates = q_values if q_values is not None else \
        sorted({v for v in divs if v % p == 0})
    for q in candidates:
        if q_bound is not None and q > q_bound:
            continue
        if 4 * q > len(x):
            continue
        try:
            cuts = find_strong_rank2_cuts(x, q)
        except ValueError:
            continue
        for cut in cuts:
            u, v = sorted(cut.blocks)
            if common_prefix_length(u, v) <= m:
                continue
            if common_suffix_length(u, v) <= m:
                continue
            code = {u, v}
            for r in range(q + 1, r_factor * q + 1):
                if 4 * r > max_len:
                    break
                ok = True
                for ell in (2 * r, 4 * r):
                    for w in language(d, ell, depth):
                        if not is_uniquely_built(w, code):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    return StrongRank2Witness(q, r, u, v)
    return None
